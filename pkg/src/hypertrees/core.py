"""Hypertrees, their axioms, capacity, and the stable curve built from them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .errors import InputError, PreconditionError

# Label used for the point that replaces a contracted block of labels.
CONTRACTED = 0


def _mask(labels):
    m = 0
    for v in labels:
        m |= 1 << v
    return m


def _labels(mask):
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


@dataclass(frozen=True)
class Hypertree:
    n: int
    edges: tuple

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 4:
            raise InputError(f"ground set size must be an integer >= 4, got {n!r}")
        if not self.edges:
            raise InputError("hypertree needs at least one hyperedge")
        norm = []
        for e in self.edges:
            s = sorted(set(int(v) for v in e))
            if len(s) != len(e):
                raise InputError(f"repeated label in hyperedge {list(e)}")
            if len(s) < 3:
                raise InputError(f"hyperedge {s} has fewer than 3 labels")
            if s[0] < 1 or s[-1] > n:
                raise InputError(f"hyperedge {s} has labels outside 1..{n}")
            norm.append(tuple(s))
        norm.sort()
        sets = [frozenset(e) for e in norm]
        for a, b in combinations(range(len(sets)), 2):
            if sets[a] <= sets[b] or sets[b] <= sets[a]:
                raise InputError(f"hyperedge {norm[a]} and {norm[b]} are nested or equal")
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def d(self):
        return len(self.edges)

    @property
    def ground(self):
        return tuple(range(1, self.n + 1))

    def masks(self):
        return [_mask(e) for e in self.edges]

    def relabel(self, perm):
        """Apply a relabeling given as a dict (or 1-indexed sequence) old -> new."""
        if not isinstance(perm, dict):
            perm = {i + 1: v for i, v in enumerate(perm)}
        return Hypertree(self.n, tuple(tuple(perm[v] for v in e) for e in self.edges))

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            n = obj["n"]
            edges = obj["edges"]
        except (KeyError, TypeError):
            raise InputError("hypertree JSON needs keys 'n' and 'edges'") from None
        if not isinstance(n, int) or not isinstance(edges, list):
            raise InputError("hypertree JSON has wrong field types")
        return cls(n, tuple(tuple(e) for e in edges))

    def as_collection(self):
        return SubsetCollection(frozenset(self.ground), tuple(frozenset(e) for e in self.edges))


@dataclass(frozen=True)
class ValidationReport:
    has_min_size: bool
    covers_twice: bool
    normalization: bool
    convexity: bool
    irreducible: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def witness(self):
        for name in ("covers_twice", "normalization", "convexity", "irreducible"):
            if name in self.witnesses:
                return self.witnesses[name]
        return None

    def to_json(self):
        return {
            "has_min_size": self.has_min_size,
            "covers_twice": self.covers_twice,
            "normalization": self.normalization,
            "convexity": self.convexity,
            "irreducible": self.irreducible,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def valences(h):
    v = {i: 0 for i in h.ground}
    for e in h.edges:
        for i in e:
            v[i] += 1
    return v


def validate(h):
    """Check the hypertree axioms; witnesses are 1-based edge indices or labels."""
    witnesses = {}
    val = valences(h)
    low = tuple(i for i in h.ground if val[i] < 2)
    if low:
        witnesses["covers_twice"] = low
    weights = [len(e) - 2 for e in h.edges]
    if sum(weights) != h.n - 2:
        witnesses["normalization"] = tuple(range(1, h.d + 1))
    masks = h.masks()
    d = h.d
    convex_w = None
    strict_w = None
    for size in range(1, d + 1):
        for S in combinations(range(d), size):
            u = 0
            w = 0
            for j in S:
                u |= masks[j]
                w += weights[j]
            slack = bin(u).count("1") - 2 - w
            if slack < 0 and convex_w is None:
                convex_w = tuple(j + 1 for j in S)
            if slack <= 0 and 1 < size < d and strict_w is None:
                strict_w = tuple(j + 1 for j in S)
        if convex_w is not None and strict_w is not None:
            break
    convexity = convex_w is None
    if convex_w is not None:
        witnesses["convexity"] = convex_w
    covers = not low
    normal = "normalization" not in witnesses
    irreducible = covers and normal and convexity and strict_w is None
    if not irreducible:
        if strict_w is not None:
            witnesses["irreducible"] = strict_w
        else:
            witnesses["irreducible"] = witnesses.get("convexity") or witnesses.get(
                "normalization") or witnesses.get("covers_twice")
    return ValidationReport(True, covers, normal, convexity, irreducible, witnesses)


def is_hypertree(h):
    r = validate(h)
    return r.covers_twice and r.normalization and r.convexity


# -- subset collections and capacity ---------------------------------------

@dataclass(frozen=True)
class SubsetCollection:
    ground: frozenset
    parts: tuple

    def __post_init__(self):
        parts = []
        for p in self.parts:
            p = frozenset(p)
            if len(p) < 3:
                raise InputError(f"part {sorted(p)} has fewer than 3 labels")
            if not p <= self.ground:
                raise InputError(f"part {sorted(p)} is not inside the ground set")
            parts.append(p)
        parts.sort(key=lambda s: sorted(s))
        object.__setattr__(self, "ground", frozenset(self.ground))
        object.__setattr__(self, "parts", tuple(parts))

    def sorted_parts(self):
        return [sorted(p) for p in self.parts]


def _maximal(parts):
    uniq = set(parts)
    return [p for p in uniq if not any(p < q for q in uniq)]


def _extends_independent(family, new):
    """Can `new` join an independent family without breaking the convexity bound?

    The bound |union S| - 2 >= sum (|A| - 2) for every S containing `new` is a
    Hall condition: `new` claims all of its labels and every other member A
    must claim |A| - 2 further distinct labels of its own.
    """
    slots = []
    for a in family:
        free = a & ~new
        need = bin(a).count("1") - 2
        if bin(free).count("1") < need:
            return False
        slots.extend([free] * need)
    owner = {}

    def augment(i, seen):
        free = slots[i]
        v = 0
        while free:
            if free & 1 and v not in seen:
                seen.add(v)
                if v not in owner or augment(owner[v], seen):
                    owner[v] = i
                    return True
            free >>= 1
            v += 1
        return False

    for i in range(len(slots)):
        if not augment(i, set()):
            return False
    return True


def is_convex_family(masks):
    """Check the convexity bound for a family given as bitmasks."""
    fam = []
    for m in masks:
        if not _extends_independent(fam, m):
            return False
        fam.append(m)
    return True


def capacity(coll):
    """Largest total weight of a sub-collection obeying the convexity bound."""
    parts = _maximal(coll.parts)
    if not parts:
        return 0
    cands = set()
    for p in parts:
        labels = sorted(p)
        for r in range(3, len(labels) + 1):
            for sub in combinations(labels, r):
                cands.add(_mask(sub))
    cands = sorted(cands, key=lambda m: (-bin(m).count("1"), m))
    weights = [bin(m).count("1") - 2 for m in cands]
    union = 0
    for m in cands:
        union |= m
    upper = bin(union).count("1") - 2
    suffix = [0] * (len(cands) + 1)
    for i in range(len(cands) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]

    # Greedy start; exact when all candidates are triples (a matroid).
    family = []
    best = 0
    for m, w in zip(cands, weights):
        if _extends_independent(family, m):
            family.append(m)
            best += w
    if best == upper or all(w == 1 for w in weights):
        return best

    state = {"best": best}

    class Done(Exception):
        pass

    def search(i, fam, total):
        if total > state["best"]:
            state["best"] = total
            if total == upper:
                raise Done
        if i == len(cands) or total + min(suffix[i], upper - total) <= state["best"]:
            return
        m = cands[i]
        if _extends_independent(fam, m):
            fam.append(m)
            search(i + 1, fam, total + weights[i])
            fam.pop()
        search(i + 1, fam, total)

    try:
        search(0, [], 0)
    except Done:
        pass
    return state["best"]


def contract(h, keep):
    """Replace every label outside `keep` by the single label CONTRACTED."""
    keep = frozenset(keep)
    if not keep:
        raise InputError("contraction needs a nonempty kept set")
    _check_labels(h, keep)
    parts = set()
    collapsed = keep != frozenset(h.ground)
    for e in h.edges:
        image = frozenset(v if v in keep else CONTRACTED for v in e)
        if len(image) >= 3:
            parts.add(image)
    ground = keep | {CONTRACTED} if collapsed else keep
    return SubsetCollection(ground, tuple(parts))


def restrict(h, removed):
    """Intersect every hyperedge with the complement of `removed`."""
    removed = frozenset(removed)
    _check_labels(h, removed)
    rest = frozenset(h.ground) - removed
    parts = [frozenset(e) & rest for e in h.edges]
    return SubsetCollection(rest, tuple(p for p in parts if len(p) >= 3))


def restricted_capacity(h, removed):
    removed = frozenset(removed)
    _check_labels(h, removed)
    total = 0
    for e in h.edges:
        k = len(set(e) - removed)
        if k >= 3:
            total += k - 2
    return total


def _check_labels(h, labels):
    bad = [v for v in labels if not 1 <= v <= h.n]
    if bad:
        raise InputError(f"labels {bad} are outside 1..{h.n}")


def _pairs_covered(h):
    covered = set()
    for e in h.edges:
        covered.update(combinations(e, 2))
    return covered


def wheels(h):
    covered = _pairs_covered(h)
    inside = set()
    for e in h.edges:
        inside.update(combinations(e, 3))
    out = set()
    for t in combinations(h.ground, 3):
        if t in inside:
            continue
        i, j, k = t
        if (i, j) in covered and (j, k) in covered and (i, k) in covered:
            out.add(t)
    return out


def is_generic(h):
    if any(len(e) != 3 for e in h.edges):
        raise PreconditionError("genericity is defined for hypertrees of triples only")
    if not validate(h).irreducible:
        raise PreconditionError("genericity needs an irreducible hypertree")
    return not nongeneric_triples(h)


def nongeneric_triples(h):
    """Triples that are neither edges nor wheels and break the genericity count."""
    edges = set(h.edges)
    wh = wheels(h)
    bad = []
    for t in combinations(h.ground, 3):
        if t in edges or t in wh:
            continue
        keep = frozenset(h.ground) - set(t)
        if capacity(contract(h, keep)) != h.n - 4:
            bad.append(t)
    return bad


def is_boundary_contracted(h, subset):
    subset = frozenset(subset)
    _check_labels(h, subset)
    if not 1 <= len(subset) <= h.n - 2:
        raise InputError("boundary divisor needs 1 <= |I| <= n-2")
    comp = frozenset(h.ground) - subset
    if len(comp) == 2:
        return False
    return not any(comp <= set(e) for e in h.edges)


def boundary_capacity_identity(h, subset):
    """True when n - 3 = cap(contracted) + cap(restricted), i.e. not contracted."""
    subset = frozenset(subset)
    return h.n - 3 == capacity(contract(h, subset)) + capacity(restrict(h, subset))


# -- stable curve ------------------------------------------------------------

@dataclass(frozen=True)
class Component:
    kind: str  # "black" or "white"
    label: tuple  # hyperedge, or (vertex,)
    degree: int  # degree of the dualizing sheaf


@dataclass(frozen=True)
class StableCurveGraph:
    components: tuple
    nodes: tuple  # (component index, component index, vertex label)

    @property
    def black(self):
        return [i for i, c in enumerate(self.components) if c.kind == "black"]

    @property
    def white(self):
        return [i for i, c in enumerate(self.components) if c.kind == "white"]

    def canonical_multidegree(self):
        return {i: 1 if c.kind == "black" else 0 for i, c in enumerate(self.components)}

    def is_connected(self):
        adj = {i: set() for i in range(len(self.components))}
        for a, b, _ in self.nodes:
            adj[a].add(b)
            adj[b].add(a)
        seen = {0}
        stack = [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(self.components)


def stable_model(h):
    val = valences(h)
    low = [i for i in h.ground if val[i] < 2]
    if low:
        raise PreconditionError(f"labels {low} lie in fewer than two hyperedges")
    comps = [Component("black", e, len(e) - 2) for e in h.edges]
    nodes = []
    for i in h.ground:
        holders = [a for a, e in enumerate(h.edges) if i in e]
        if val[i] == 2:
            nodes.append((holders[0], holders[1], i))
        else:
            w = len(comps)
            comps.append(Component("white", (i,), val[i] - 2))
            nodes.extend((a, w, i) for a in holders)
    return StableCurveGraph(tuple(comps), tuple(nodes))


def gieseker_violation(g, multidegree=None):
    """First subcurve breaking the basic inequality, or None.

    For a subcurve Y with multidegree b(Y), dualizing degree m(Y) and #Y
    crossing nodes the inequality is |M b(Y) - B m(Y)| < (M / 2) #Y, where M
    and B are the totals over the whole curve.  Swapping Y with its
    complement flips the sign inside the absolute value, so only subcurves
    avoiding component 0 are scanned.
    """
    if multidegree is None:
        multidegree = g.canonical_multidegree()
    k = len(g.components)
    if set(multidegree) != set(range(k)):
        raise InputError("multidegree must be given on every component")
    nblack = len(g.black)
    if nblack <= 2:
        raise PreconditionError("curve with at most two black components is degenerate")
    deg = [c.degree for c in g.components]
    b = [multidegree[i] for i in range(k)]
    M = sum(deg)
    B = sum(b)
    node_masks = [(1 << a) | (1 << c) for a, c, _ in g.nodes]
    for y in range(2, 1 << k, 2):
        mb = 0
        md = 0
        t = y
        i = 0
        while t:
            if t & 1:
                mb += b[i]
                md += deg[i]
            t >>= 1
            i += 1
        cross = sum(1 for nm in node_masks if bin(nm & y).count("1") == 1)
        if 2 * abs(M * mb - B * md) >= M * cross:
            return tuple(i for i in range(k) if y >> i & 1)
    return None


def gieseker_stable(g, multidegree=None):
    return gieseker_violation(g, multidegree) is None
