"""Classes of divisors pulled back along maps that glue pairs of markings.

A divisor on the moduli space is recovered from the multiplicities of its
affine equation along all diagonals of the configuration space.  Writing
D_I for the exceptional divisor over the diagonal where the coordinates in I
agree, the equation F gives the class -sum n_I D_I.  The pair relations
sum_{I containing i,j} D_I = 0 eliminate every D_ij, after which the
coefficients of the sets avoiding the marking read off the Kapranov class.
The full pulled-back class is recomputed from the answer and compared with
the table as a consistency check.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .divisor import EXACT, KapranovClass
from .errors import BudgetExceeded, ConversionError, InputError, InternalError
from .poly import Context, Poly, derivative, determinant, diagonal_multiplicity, divide_exact

PRIME = 2147483647

WEIERSTRASS_VARS = ("x1", "y1", "x2", "y2", "x3", "y3", "t")
TRANSVERSAL_VARS = ("x1", "x2", "x3", "x4", "x5", "y1", "y2", "y3", "y4", "y5")


# -- the three equations -----------------------------------------------------

def _canonical_curve(ctx, t):
    """g_i(t) = prod over the other pairs of (t - x_k)(t - y_k)."""
    tv = ctx.var(t)
    gs = []
    for i in range(1, 4):
        g = ctx.one()
        for k in range(1, 4):
            if k != i:
                g = g * (tv - ctx.var(f"x{k}")) * (tv - ctx.var(f"y{k}"))
        gs.append(g)
    return gs


def weierstrass_polynomial():
    """Wronskian of the canonical differentials at t on the three-nodal curve."""
    ctx = Context(WEIERSTRASS_VARS)
    g = _canonical_curve(ctx, "t")
    d1 = [derivative(q, "t") for q in g]
    d2 = [derivative(q, "t") for q in d1]
    return determinant([g, d1, d2])


def _s_coefficients(p, s):
    """Coefficients of powers of s, each re-expressed without s."""
    names = tuple(v for v in p.ctx.names if v != s)
    small = Context(names)
    idx = p.ctx.index(s)
    out = {}
    for exps, c in p.items():
        e = exps[idx]
        rest = exps[:idx] + exps[idx + 1:]
        out.setdefault(e, {})
        k = small.pack(rest)
        out[e][k] = out[e].get(k, 0) + c
    return {e: Poly(small, {k: c for k, c in d.items() if c}) for e, d in out.items()}


def bitangent_polynomial():
    """Discriminant in s of the residual intersection of the tangent line at t."""
    ctx = Context(WEIERSTRASS_VARS + ("s",))
    gt = _canonical_curve(ctx, "t")
    gs = _canonical_curve(ctx, "s")
    dt = [derivative(q, "t") for q in gt]
    det = determinant([gt, gs, dt])
    square = (ctx.var("s") - ctx.var("t")) ** 2
    try:
        m = divide_exact(det, square)
    except InputError:
        raise InternalError("tangent determinant is not divisible by (s - t)^2") from None
    coeffs = _s_coefficients(m, "s")
    if max(coeffs) != 2:
        raise InternalError(f"residual intersection has degree {max(coeffs)} in s, expected 2")
    small = next(iter(coeffs.values())).ctx
    A = coeffs.get(2, small.zero())
    B = coeffs.get(1, small.zero())
    C = coeffs.get(0, small.zero())
    return B * B - 4 * A * C


def chord_pairing(ctx, i, j):
    """4x4 Vandermonde of x_i, y_i, x_j, y_j with the two chord factors removed."""
    pts = [ctx.var(f"x{i}"), ctx.var(f"y{i}"), ctx.var(f"x{j}"), ctx.var(f"y{j}")]
    rows = [[ctx.one()] * 4, pts, [p * p for p in pts], [p * p * p for p in pts]]
    van = determinant(rows)
    chords = (pts[1] - pts[0]) * (pts[3] - pts[2])
    try:
        return divide_exact(van, chords)
    except InputError:
        raise InternalError(f"Vandermonde for chords {i}, {j} is not divisible by the chord factors") from None


def transversal_matrix(ctx=None):
    ctx = ctx or Context(TRANSVERSAL_VARS)
    rows = [[ctx.zero()] * 5 for _ in range(5)]
    for i, j in combinations(range(1, 6), 2):
        q = chord_pairing(ctx, i, j)
        rows[i - 1][j - 1] = q
        rows[j - 1][i - 1] = q
    return rows


def transversal_polynomial(budget=None):
    """Common-transversal condition for the five chords x_i y_i of the twisted cubic."""
    return determinant(transversal_matrix(), budget=budget)


# -- multiplicities along diagonals ------------------------------------------

@dataclass
class MultiplicityTable:
    n: int
    entries: dict = field(default_factory=dict)

    def __getitem__(self, labels):
        return self.entries[tuple(sorted(labels))]

    def to_json(self):
        return {
            "n": self.n,
            "entries": {",".join(map(str, k)): v
                        for k, v in sorted(self.entries.items(), key=lambda t: (len(t[0]), t[0]))},
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(obj["n"], {tuple(int(t) for t in k.split(",")): v for k, v in obj["entries"].items()})


class _ModEvaluator:
    """Vectorised evaluation of a polynomial modulo PRIME."""

    def __init__(self, F):
        items = list(F.items())
        self.nvars = len(F.ctx)
        self.exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), self.nvars)
        self.coef = np.array([c % PRIME for _, c in items], dtype=np.int64)
        self.maxdeg = int(self.exps.max()) if len(items) else 0
        self.used = [v for v in range(self.nvars) if self.exps[:, v].any()]

    def __call__(self, point):
        acc = self.coef.copy()
        for v in self.used:
            x = int(point[v]) % PRIME
            table = np.empty(self.maxdeg + 1, dtype=np.int64)
            table[0] = 1
            for e in range(1, self.maxdeg + 1):
                table[e] = table[e - 1] * x % PRIME
            acc = acc * table[self.exps[:, v]] % PRIME
        return int(acc.sum() % PRIME)


class DeterminantEvaluator:
    """Evaluate det(rows) modulo PRIME without expanding it."""

    def __init__(self, rows):
        self.rows = rows
        self.nvars = len(rows[0][0].ctx)
        self.entries = [[[(e, c % PRIME) for e, c in q.items()] for q in r] for r in rows]

    def _entry(self, terms, point):
        total = 0
        for exps, c in terms:
            t = c
            for x, e in zip(point, exps):
                if e:
                    t = t * pow(x, e, PRIME) % PRIME
            total += t
        return total % PRIME

    def __call__(self, point):
        m = [[self._entry(t, point) for t in r] for r in self.entries]
        n = len(m)
        det = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det = det * m[c][c] % PRIME
            inv = pow(m[c][c], PRIME - 2, PRIME)
            for r in range(c + 1, n):
                f = m[r][c] * inv % PRIME
                if f:
                    m[r] = [(a - f * b) % PRIME for a, b in zip(m[r], m[c])]
        return det % PRIME


def _lowest_order(values, p=PRIME):
    """Lowest nonzero coefficient index of the polynomial through (k, values[k])."""
    n = len(values)
    # Newton divided differences at nodes 0..n-1, then expand to monomial form.
    coef = list(values)
    for j in range(1, n):
        inv = pow(j, p - 2, p)
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * inv % p
    poly = [0] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - i) + coef[i]
        new = [0] * n
        for k in range(n - 1):
            new[k + 1] = poly[k]
        for k in range(n):
            new[k] = (new[k] - i * poly[k]) % p
        new[0] = (new[0] + coef[i]) % p
        poly = new
    for k, c in enumerate(poly):
        if c:
            return k
    return None


def _fast_multiplicity(ev, subset, degree, rng, trials):
    best = None
    for _ in range(trials):
        base = [rng.randrange(1, PRIME) for _ in range(ev.nvars)]
        c = rng.randrange(1, PRIME)
        for v in subset:
            base[v] = c
        w = [rng.randrange(1, PRIME) for _ in range(ev.nvars)]
        vals = []
        for k in range(degree + 1):
            vals.append(ev([(b + k * d) % PRIME for b, d in zip(base, w)]))
        order = _lowest_order(vals)
        if order is None:
            raise InputError("polynomial vanishes identically on a random line")
        best = order if best is None else min(best, order)
    return best


def multiplicity_table(F, method="fast", seed=0, trials=2, budget=None, evaluator=None):
    """Multiplicity of F along every diagonal of its variable context.

    Labels are positions in the context, starting at 1.  The fast method
    reads the vanishing order of F restricted to random lines through random
    points of each diagonal, working modulo a large prime; the exact method
    substitutes symbolically.  A cheaper `evaluator` for F (mod the prime)
    may be supplied; it is first compared with F at random points.
    """
    if not F.terms:
        raise InputError("the zero polynomial has no multiplicity table")
    n = len(F.ctx)
    if budget is not None and len(F) > budget:
        raise BudgetExceeded(f"polynomial has {len(F)} terms, over the budget {budget}")
    names = F.ctx.names
    support = set(F.ctx.index(v) for v in F.support())
    degree = F.total_degree()
    rng = random.Random(seed)
    if method not in ("fast", "exact"):
        raise InputError(f"unknown method {method!r}")
    ev = None
    if method == "fast":
        ev = _ModEvaluator(F)
        if evaluator is not None:
            for _ in range(3):
                pt = [rng.randrange(PRIME) for _ in range(n)]
                if evaluator(pt) != ev(pt):
                    raise InternalError("supplied evaluator disagrees with the polynomial")
            ev = evaluator
    cache = {}
    table = MultiplicityTable(n)
    for r in range(2, n + 1):
        for sub in combinations(range(n), r):
            core = tuple(v for v in sub if v in support)
            if len(core) < 2:
                value = 0
            elif core in cache:
                value = cache[core]
            else:
                if method == "fast":
                    value = _fast_multiplicity(ev, core, degree, rng, trials)
                else:
                    value = diagonal_multiplicity(F, [names[v] for v in core])
                cache[core] = value
            table.entries[tuple(v + 1 for v in sub)] = value
    return table


# -- converting between the table and the Kapranov class ----------------------

def _reduce_pairs(coeffs, n):
    """Eliminate every D_ij with the relations sum_{I containing i,j} D_I = 0."""
    out = dict(coeffs)
    everything = range(1, n + 1)
    for pair in combinations(everything, 2):
        c = out.pop(pair, 0)
        if not c:
            continue
        rest = [v for v in everything if v not in pair]
        for r in range(1, len(rest) + 1):
            for extra in combinations(rest, r):
                key = tuple(sorted(pair + extra))
                out[key] = out.get(key, 0) - c
    return {k: v for k, v in out.items() if v}


def _delta_pullback(I, n):
    """The boundary divisor delta_I pulls back to D_I + D_{complement}."""
    I = tuple(sorted(I))
    comp = tuple(v for v in range(1, n + 1) if v not in I)
    return {I: 1, comp: 1}


def kapranov_to_fm(cls):
    """Pull back an all-exact Kapranov class, reduced to the sets of size >= 3."""
    n, p = cls.n, cls.marking
    others = [v for v in range(1, n + 1) if v != p]
    acc = {}

    def add(terms, c):
        for k, v in terms.items():
            acc[k] = acc.get(k, 0) + c * v

    # H = delta_{ij} + sum of E_J over J avoiding i, j
    i, j = others[0], others[1]
    add(_delta_pullback((i, j), n), cls.d)
    rest = [v for v in others if v not in (i, j)]
    for r in range(1, n - 3):
        for J in combinations(rest, r):
            add(_delta_pullback(J + (p,), n), cls.d)
    for J, e in cls.m.items():
        if e.kind != EXACT:
            raise InputError(f"entry {J} is not exact")
        if e.value:
            add(_delta_pullback(J + (p,), n), -e.value)
    return _reduce_pairs(acc, n)


def table_to_fm(table):
    return _reduce_pairs({k: -v for k, v in table.entries.items() if v}, table.n)


def fm_to_kapranov(table, marking=None):
    n = table.n
    p = n if marking is None else marking
    if not 1 <= p <= n:
        raise InputError(f"marking {p} outside 1..{n}")
    missing = [k for r in range(2, n + 1) for k in combinations(range(1, n + 1), r) if k not in table.entries]
    if missing:
        raise InputError(f"table lacks the diagonal {missing[0]}")
    others = tuple(v for v in range(1, n + 1) if v != p)

    def reduced(I):
        return table.entries[I] - sum(table.entries[q] for q in combinations(I, 2))

    cls = KapranovClass(n, p, reduced(others))
    for r in range(1, n - 3):
        for J in combinations(others, r):
            I = tuple(v for v in others if v not in J)
            cls.set(J, EXACT, reduced(I))
    expected = kapranov_to_fm(cls)
    actual = table_to_fm(table)
    for key in sorted(set(expected) | set(actual), key=lambda k: (len(k), k)):
        if expected.get(key, 0) != actual.get(key, 0):
            raise ConversionError(
                f"table is not a pulled-back class: coefficient of D_{key} is "
                f"{actual.get(key, 0)}, the class predicts {expected.get(key, 0)}")
    return cls


# -- printed classes ---------------------------------------------------------------

def class_from_rule(n, marking, d, rule):
    """All-exact class whose entry at J is rule(J)."""
    cls = KapranovClass(n, marking, d)
    others = [v for v in range(1, n + 1) if v != marking]
    for r in range(1, n - 3):
        for J in combinations(others, r):
            cls.set(J, EXACT, rule(J))
    return cls


def weierstrass_class():
    pairs = [{1, 2}, {3, 4}, {5, 6}]
    return class_from_rule(7, 7, 3, lambda J: 1 if len(J) == 1 or set(J) in pairs else 0)


def bitangent_class():
    def rule(J):
        if len(J) == 1:
            return 4
        if len(J) == 2:
            return 2
        return 2 if set(J) in ({1, 2, 3}, {4, 5, 6}) else 0
    return class_from_rule(7, 7, 8, rule)


def pair_type(J, pairs):
    """(number of whole pairs inside J, number of labels of J whose partner is outside)."""
    s = set(J)
    full = sum(1 for a, b in pairs if a in s and b in s)
    return full, len(s) - 2 * full


TRANSVERSAL_PAIRS = tuple((i, i + 5) for i in range(1, 6))

TRANSVERSAL_COEFFICIENTS = {
    (0, 1): 16, (0, 2): 12, (1, 0): 12, (0, 3): 9, (1, 1): 8, (0, 4): 7,
    (1, 2): 5, (2, 0): 6, (0, 5): 6, (1, 3): 3, (2, 1): 3, (1, 4): 3,
    (2, 2): 1, (3, 0): 2, (2, 3): 1,
}


def transversal_class():
    return class_from_rule(11, 11, 20, lambda J: TRANSVERSAL_COEFFICIENTS.get(pair_type(J, TRANSVERSAL_PAIRS), 0))


def hyperplane_sum_bound(J, pairs=TRANSVERSAL_PAIRS):
    """Coefficient of E_J in the sum of the hyperplanes through all points but
    two x's or two y's."""
    xs = [a for a, _ in pairs]
    ys = [b for _, b in pairs]
    s = set(J)
    return sum(1 for group in (xs, ys) for q in combinations(group, 2) if not s & set(q))


def extend_table(table):
    """Add a label on which the equation does not depend."""
    n = table.n + 1
    new = MultiplicityTable(n)
    for r in range(2, n + 1):
        for sub in combinations(range(1, n + 1), r):
            core = tuple(v for v in sub if v != n)
            new.entries[sub] = table.entries[core] if len(core) >= 2 else 0
    return new


EXAMPLES = {
    "weierstrass": (weierstrass_polynomial, weierstrass_class),
    "bitangent": (bitangent_polynomial, bitangent_class),
    "trigonal": (transversal_polynomial, transversal_class),
}


def run_example(name, method="fast", seed=0, budget=None):
    """Polynomial, multiplicity table and Kapranov class for a named example."""
    if name not in EXAMPLES:
        raise InputError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}")
    if name == "trigonal":
        F = transversal_polynomial(budget=budget)
        table = multiplicity_table(F, method, seed, budget=budget,
                                   evaluator=DeterminantEvaluator(transversal_matrix()))
        table = extend_table(table)
        return F, table, fm_to_kapranov(table, 11)
    F = EXAMPLES[name][0]()
    table = multiplicity_table(F, method, seed, budget=budget)
    return F, table, fm_to_kapranov(table, 7)
