"""Planar realizations: points in the plane whose collinear triples are exactly
the triples inside hyperedges.

Each hyperedge gives linear conditions on heights y_i over fixed abscissae
x_i.  Pinning the heights of one hyperedge to zero removes the trivial
solutions, so a realization exists over x exactly when a square minor is
singular.  One abscissa is left free and solved for; the heights are then a
kernel vector.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import mpmath

from .core import valences, validate
from .errors import InputError, PreconditionError, RealizationFailed
from .poly import interpolate


@dataclass(frozen=True)
class RealizeConfig:
    precision_bits: int = 256
    tol_col: float = 1e-9
    tol_gen: float = 1e-6
    max_retries: int = 20
    coordinate_range: int = 50


@dataclass
class PlanarRealization:
    points: list
    projection_center: tuple
    projected: list
    precision_bits: int
    seed: int
    exact: bool = False
    attempts: int = 1

    def to_json(self, digits=30):
        fmt = lambda v: mpmath.nstr(v, digits)
        return {
            "points": [[fmt(c) for c in p] for p in self.points],
            "projection_center": list(self.projection_center),
            "projected": [fmt(v) for v in self.projected],
            "precision_bits": self.precision_bits,
            "seed": self.seed,
            "exact": self.exact,
            "attempts": self.attempts,
        }


@dataclass
class VerificationReport:
    ok: bool
    worst_collinear: object
    weakest_general: object
    closest_pair: object
    failures: list = field(default_factory=list)

    def to_json(self):
        return {
            "ok": self.ok,
            "worst_collinear": float(self.worst_collinear),
            "weakest_general": float(self.weakest_general),
            "closest_pair": float(self.closest_pair),
            "failures": [{"kind": k, "labels": list(w)} for k, w in self.failures],
        }


def collinearity_rows(h):
    """One row per consecutive triple (e0, e1, ej) of each hyperedge, with the edge index."""
    rows = []
    for alpha, e in enumerate(h.edges):
        for j in range(2, len(e)):
            rows.append((alpha, (e[0], e[1], e[j])))
    return rows


def _row_values(triple, x):
    i, j, k = triple
    return {i: x[j] - x[k], j: x[k] - x[i], k: x[i] - x[j]}


def _reduced_system(h, alpha, x):
    """Square system on heights outside hyperedge alpha (heights on it set to 0)."""
    pinned = set(h.edges[alpha])
    cols = [v for v in h.ground if v not in pinned]
    mat = []
    for beta, t in collinearity_rows(h):
        if beta == alpha:
            continue
        vals = _row_values(t, x)
        mat.append([vals.get(v, 0) for v in cols])
    return mat, cols


def _det_fraction(mat):
    m = [list(r) for r in mat]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def _kernel_fraction(mat):
    """Basis of the right kernel, exact."""
    m = [list(r) for r in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def _kernel_mp(mat):
    A = mpmath.matrix(mat)
    U, S, V = mpmath.svd_r(A)
    k = min(A.rows, A.cols) - 1
    return [V[k, j] for j in range(A.cols)], S


def _pick_vertex(h):
    val = valences(h)
    twos = [v for v in h.ground if val[v] == 2]
    return max(twos) if twos else max(h.ground, key=lambda v: (-val[v], v))


def _solve_free(h, alpha, v, x, bits):
    """Roots in x_v of the reduced determinant, as (value, exact?) pairs."""
    degree = sum(1 for t in collinearity_rows(h) if v in t[1] and t[0] != alpha)
    samples = []
    used = set(x.values())
    s = 0
    while len(samples) < degree + 1:
        s += 1
        if s in used:
            continue
        xx = dict(x)
        xx[v] = Fraction(s)
        mat, _ = _reduced_system(h, alpha, xx)
        samples.append((Fraction(s), _det_fraction(mat)))
    coeffs = interpolate([a for a, _ in samples], [b for _, b in samples])
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    if len(coeffs) == 2:
        return [(-coeffs[0] / coeffs[1], True)]
    with mpmath.workprec(bits):
        roots = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)],
                                 maxsteps=200, extraprec=bits)
        eps = mpmath.mpf(2) ** (-bits // 2)
        real = sorted(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < eps)
        top = max(x.values())
        top = mpmath.mpf(top.numerator) / top.denominator
        above = [r for r in real if r > top]
        ordered = above + [r for r in real if r <= top]
    return [(r, False) for r in ordered]


def _attempt(h, seed, cfg, v):
    rng = random.Random(seed)
    alpha = min(a for a, e in enumerate(h.edges) if v in e)
    labels = [u for u in h.ground if u != v]
    pool = rng.sample(range(-cfg.coordinate_range, cfg.coordinate_range + 1), len(labels))
    x = {u: Fraction(p, 1) + Fraction(rng.randint(1, 997), 1009) for u, p in zip(labels, pool)}
    for root, exact in _solve_free(h, alpha, v, x, cfg.precision_bits):
        if exact and root in x.values():
            continue
        xx = dict(x)
        xx[v] = root
        if exact:
            mat, cols = _reduced_system(h, alpha, xx)
            ker = _kernel_fraction(mat)
            if len(ker) != 1:
                continue
            y = dict(zip(cols, ker[0]))
        else:
            with mpmath.workprec(cfg.precision_bits):
                xm = {u: (mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else c)
                      for u, c in xx.items()}
                mat, cols = _reduced_system(h, alpha, xm)
                vec, S = _kernel_mp(mat)
                if len(S) > 1 and S[len(S) - 2] < mpmath.mpf(10) ** -6:
                    continue
                y = dict(zip(cols, vec))
        for u in h.edges[alpha]:
            y[u] = 0
        yield xx, y, exact


def _to_points(xx, y, h, bits):
    with mpmath.workprec(bits):
        conv = lambda c: mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else mpmath.mpf(c)
        xs = [conv(xx[u]) for u in h.ground]
        ys = [conv(y[u]) for u in h.ground]
        span = max(abs(t) for t in xs)
        ymax = max(abs(t) for t in ys)
        if ymax == 0:
            return None
        ys = [t * span / ymax for t in ys]
        return [(a, b, mpmath.mpf(1)) for a, b in zip(xs, ys)]


def realize(h, seed=0, config=None, free_vertex=None, **overrides):
    """Find and verify a realization; `free_vertex` overrides the solved-for label."""
    cfg = config or RealizeConfig()
    if overrides:
        cfg = RealizeConfig(**{**cfg.__dict__, **overrides})
    if not validate(h).irreducible:
        raise PreconditionError("planar realizations are constructed for irreducible hypertrees")
    v = _pick_vertex(h) if free_vertex is None else free_vertex
    if v not in h.ground:
        raise InputError(f"label {v} outside 1..{h.n}")
    last = None
    for attempt in range(cfg.max_retries):
        s = seed * 1000003 + attempt
        for xx, y, exact in _attempt(h, s, cfg, v):
            pts = _to_points(xx, y, h, cfg.precision_bits)
            if pts is None:
                continue
            R = PlanarRealization(pts, (0, 1, 0), [p[0] for p in pts], cfg.precision_bits,
                                  seed, exact, attempt + 1)
            rep = verify_realization(h, R, cfg.tol_col, cfg.tol_gen)
            if rep.ok:
                return R
            last = rep
    detail = last.to_json() if last else "no usable root"
    raise RealizationFailed(f"no verified realization after {cfg.max_retries} attempts: {detail}")


def _unit(p):
    norm = mpmath.sqrt(sum(c * c for c in p))
    return [c / norm for c in p]


def _det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _cross_norm(a, b):
    c = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
    return mpmath.sqrt(sum(t * t for t in c))


def verify_realization(h, R, tol_col=1e-9, tol_gen=1e-6):
    if len(R.points) != h.n:
        raise InputError("realization has the wrong number of points")
    with mpmath.workprec(R.precision_bits):
        pts = [_unit([mpmath.mpf(c) for c in p]) for p in R.points]
        inside = set()
        for e in h.edges:
            inside.update(combinations(e, 3))
        failures = []
        worst = mpmath.mpf(0)
        weakest = mpmath.inf
        closest = mpmath.inf
        for i, j in combinations(range(h.n), 2):
            d = _cross_norm(pts[i], pts[j])
            closest = min(closest, d)
            if d <= tol_gen:
                failures.append(("coincident", (i + 1, j + 1)))
        for t in combinations(range(1, h.n + 1), 3):
            d = abs(_det3(*(pts[v - 1] for v in t)))
            if t in inside:
                worst = max(worst, d)
                if d >= tol_col:
                    failures.append(("not_collinear", t))
            else:
                weakest = min(weakest, d)
                if d <= tol_gen:
                    failures.append(("extra_collinear", t))
    return VerificationReport(not failures, worst, weakest, closest, failures)


def projective_image(R, seed=0):
    """The same configuration after a random invertible projective map."""
    rng = random.Random(seed)
    with mpmath.workprec(R.precision_bits):
        while True:
            M = mpmath.matrix([[mpmath.mpf(rng.randint(-9, 9)) for _ in range(3)] for _ in range(3)])
            if abs(mpmath.det(M)) > 1:
                break
        pts = []
        for p in R.points:
            v = M * mpmath.matrix([mpmath.mpf(c) for c in p])
            pts.append((v[0], v[1], v[2]))
        center = M * mpmath.matrix([mpmath.mpf(c) for c in R.projection_center])
        return PlanarRealization(pts, (center[0], center[1], center[2]), [], R.precision_bits,
                                 R.seed, False, R.attempts)


def equation_residual(h, R, equation=None):
    """|F(x)| / max monomial magnitude at the projected coordinates."""
    from .divisor import hypertree_equation

    F = equation if equation is not None else hypertree_equation(h)
    with mpmath.workprec(R.precision_bits):
        vals = [mpmath.mpf(v) for v in R.projected]
        total = mpmath.mpf(0)
        scale = mpmath.mpf(0)
        for exps, c in F.items():
            t = mpmath.mpf(c)
            for a, e in zip(vals, exps):
                if e:
                    t *= a ** e
            total += t
            scale = max(scale, abs(t))
        return abs(total) / scale
