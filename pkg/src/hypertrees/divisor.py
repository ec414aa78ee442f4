"""Determinantal equations and Kapranov classes of hypertree divisors."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .constructions import assemble_triangulation, directed_edges, oriented_faces
from .core import capacity, contract, is_generic, valences, validate, wheels
from .errors import InputError, InternalError, PreconditionError
from .poly import Context, canonicalize, determinant

EXACT = "exact"
LOWER = "lower_bound"
UNKNOWN = "unknown"


def variables(n, prefix="x"):
    return Context([f"{prefix}{i}" for i in range(1, n + 1)])


def _require_triples(h):
    bad = [e for e in h.edges if len(e) != 3]
    if bad:
        raise PreconditionError(f"hyperedge {bad[0]} is not a triple")


def matrix_A(h, ctx=None):
    """(n-2) x n matrix of linear forms, one row per triple.

    Row {i<j<k} has x_j - x_k, x_k - x_i, x_i - x_j in columns i, j, k.
    """
    _require_triples(h)
    ctx = ctx or variables(h.n)
    if len(ctx) < h.n:
        raise InputError("context has fewer variables than labels")
    x = ctx.vars()
    zero = ctx.zero()
    rows = []
    for i, j, k in h.edges:
        row = [zero] * h.n
        row[i - 1] = x[j - 1] - x[k - 1]
        row[j - 1] = x[k - 1] - x[i - 1]
        row[k - 1] = x[i - 1] - x[j - 1]
        rows.append(row)
    return rows


def minor(rows, drop_rows, drop_cols):
    drop_rows, drop_cols = set(drop_rows), set(drop_cols)
    return [[e for c, e in enumerate(r) if c not in drop_cols]
            for i, r in enumerate(rows) if i not in drop_rows]


def a_minor(h, alpha, ctx=None, budget=None):
    """Determinant of A with row alpha and that row's three columns removed."""
    rows = matrix_A(h, ctx)
    if not 0 <= alpha < len(rows):
        raise InputError(f"row index {alpha} out of range")
    cols = [v - 1 for v in h.edges[alpha]]
    sub = minor(rows, [alpha], cols)
    if not sub:
        return rows[0][0].ctx.one()
    return determinant(sub, budget=budget)


def hypertree_equation(h, alpha=0, ctx=None, budget=None):
    _require_triples(h)
    if not validate(h).irreducible:
        raise PreconditionError("the divisor equation needs an irreducible hypertree")
    det = a_minor(h, alpha, ctx, budget)
    if not det.terms:
        raise PreconditionError(f"minor at row {alpha} vanishes identically")
    return canonicalize(det)


def all_equations(h, ctx=None, budget=None):
    """Canonical minors for every admissible row choice."""
    _require_triples(h)
    return [canonicalize(a_minor(h, a, ctx, budget)) for a in range(len(h.edges))]


# -- the slope matrix of a spherical hypertree --------------------------------

@dataclass(frozen=True)
class FaceMatrix:
    rows: list
    row_faces: tuple
    col_faces: tuple


def matrix_B(tri, color="black", ctx=None):
    """Rows are faces of the other colour, columns faces of `color`.

    Entry x_i - x_j where the faces share the edge {i, j}, directed as in the
    column face under a fixed orientation of the sphere.  The white version
    is the negated transpose of the black one.
    """
    if color not in ("black", "white"):
        raise InputError(f"unknown colour {color!r}")
    ctx = ctx or variables(tri.n)
    x = ctx.vars()
    orient = oriented_faces(tri)
    black, white = list(tri.black), list(tri.white)
    rows = []
    for w in white:
        row = []
        for b in black:
            shared = set(w) & set(b)
            if len(shared) == 2:
                i, j = [(u, v) for u, v in directed_edges(orient[b]) if {u, v} == shared][0]
                row.append(x[i - 1] - x[j - 1])
            else:
                row.append(ctx.zero())
        rows.append(row)
    if color == "black":
        return FaceMatrix(rows, tuple(white), tuple(black))
    flipped = [[-rows[r][c] for r in range(len(white))] for c in range(len(black))]
    return FaceMatrix(flipped, tuple(black), tuple(white))


def b_minor(fm, row=0, col=0, budget=None):
    return determinant(minor(fm.rows, [row], [col]), budget=budget)


# -- Kapranov classes ------------------------------------------------------------

@dataclass(frozen=True)
class Entry:
    kind: str
    value: int | None = None

    def to_json(self):
        return {self.kind: self.value} if self.kind != UNKNOWN else {UNKNOWN: None}


def _key(labels):
    return tuple(sorted(labels))


def _key_text(key):
    return ",".join(map(str, key))


@dataclass
class KapranovClass:
    """d*H - sum m_J E_J relative to a marking; J avoids the marking."""

    n: int
    marking: int
    d: int
    m: dict = field(default_factory=dict)

    def exact(self, labels):
        e = self.m.get(_key(labels))
        if e is None:
            return 0
        if e.kind != EXACT:
            raise KeyError(f"entry {labels} is not exact")
        return e.value

    def entry(self, labels):
        return self.m.get(_key(labels), Entry(EXACT, 0))

    def set(self, labels, kind, value=None):
        key = _key(labels)
        if self.marking in key or not 1 <= len(key) <= self.n - 4:
            raise InputError(f"subset {key} is not an exceptional index")
        self.m[key] = Entry(kind, value)

    def nonzero(self):
        return {k: e.value for k, e in self.m.items() if e.kind == EXACT and e.value}

    def to_json(self):
        return {
            "n": self.n,
            "marking": self.marking,
            "d": self.d,
            "m": {_key_text(k): e.to_json() for k, e in sorted(self.m.items(), key=lambda t: (len(t[0]), t[0]))},
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        c = cls(obj["n"], obj["marking"], obj["d"])
        for k, v in obj["m"].items():
            (kind, value), = v.items()
            c.set([int(t) for t in k.split(",")], kind, value)
        return c

    def to_text(self):
        parts = [f"{self.d}H"]
        for k, v in sorted(self.nonzero().items(), key=lambda t: (len(t[0]), t[0])):
            coeff = "" if abs(v) == 1 else str(abs(v))
            parts.append(f"{'-' if v > 0 else '+'} {coeff}E_{''.join(map(str, k)) if max(k) < 10 else _key_text(k)}")
        return " ".join(parts)


def lower_bound(h, subset, full_val=None):
    """|I| - 1 + #{edges inside the complement} - cap(h with the complement collapsed)."""
    I = frozenset(subset)
    comp = frozenset(h.ground) - I
    inside = sum(1 for e in h.edges if set(e) <= comp)
    return len(I) - 1 + inside - capacity(contract(h, I))


def class_coefficients(h):
    """Class of the pulled-back hypertree divisor on the space with n+1 markings.

    The extra marking n+1 is the Kapranov marking.  Entries fixed by closed
    formulas are exact; everything else carries its lower bound.
    """
    rep = validate(h)
    if not rep.irreducible:
        raise PreconditionError("class formulas need an irreducible hypertree")
    n, d = h.n, h.d
    ground = frozenset(h.ground)
    val = valences(h)
    exact = {}

    def put(labels, value):
        key = _key(labels)
        if not 1 <= len(key) <= n - 3:
            return
        if key in exact and exact[key] != value:
            raise InternalError(f"closed formulas disagree at {key}: {exact[key]} vs {value}")
        exact[key] = value

    for i in h.ground:
        put([i], d - val[i])
    for e in h.edges:
        es = frozenset(e)
        put(ground - es, 1)
        put(es, d + len(e) - sum(val[v] for v in e))
        for r in range(1, len(e)):
            for sub in combinations(e, r):
                put(ground - set(sub), 0)
                put(sub, d + r - 1 - sum(val[v] for v in sub))
    if all(len(e) == 3 for e in h.edges):
        edges = set(h.edges)
        wh = set(wheels(h))
        for t in combinations(h.ground, 3):
            if t in edges or t in wh:
                continue
            keep = ground - set(t)
            if capacity(contract(h, keep)) == n - 4:
                put(keep, lower_bound(h, keep))

    out = KapranovClass(n + 1, n + 1, d - 1)
    for r in range(1, n - 2):
        for sub in combinations(h.ground, r):
            bound = lower_bound(h, sub)
            if sub in exact:
                if exact[sub] < bound:
                    raise InternalError(f"exact entry {sub} = {exact[sub]} is below its bound {bound}")
                out.set(sub, EXACT, exact[sub])
            else:
                out.set(sub, LOWER, bound)
    return out


# -- comparing divisors ------------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    verdict: str
    equations_match: bool | None = None

    def to_json(self):
        return {"verdict": self.verdict, "equations_match": self.equations_match}


def same_divisor(h1, h2, equation_limit=8):
    """Decide whether two labeled hypertrees define the same divisor.

    The combinatorial verdict follows the triangulation criterion for generic
    hypertrees; for small triples-only inputs the canonical equations are
    compared as an independent check.
    """
    if h1.n != h2.n:
        raise InputError("hypertrees live on different ground sets")
    for h in (h1, h2):
        if not validate(h).irreducible:
            raise PreconditionError("both hypertrees must be irreducible")
    triples = all(len(e) == 3 for e in h1.edges + h2.edges)
    if set(h1.edges) == set(h2.edges):
        verdict = "equal_identical"
    elif triples and assemble_triangulation(h1, h2) is not None:
        verdict = "equal_spherical"
    elif triples and is_generic(h1) and is_generic(h2):
        verdict = "distinct"
    else:
        verdict = "undecided"
    match = None
    if triples and h1.n <= equation_limit:
        match = hypertree_equation(h1) == hypertree_equation(h2)
        if verdict == "distinct" and match:
            raise InternalError("generic hypertrees judged distinct share an equation")
        if verdict.startswith("equal") and not match:
            raise InternalError("equal divisors with different equations")
    return Comparison(verdict, match)

