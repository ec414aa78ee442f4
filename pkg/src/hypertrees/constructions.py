"""Bicolored sphere triangulations and constructions of new hypertrees."""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass

from .core import Hypertree, valences, validate
from .errors import InputError, PreconditionError


@dataclass(frozen=True)
class BicoloredTriangulation:
    n: int
    black: tuple
    white: tuple

    def __post_init__(self):
        for name in ("black", "white"):
            faces = []
            for t in getattr(self, name):
                t = tuple(sorted(int(v) for v in t))
                if len(t) != 3 or len(set(t)) != 3:
                    raise InputError(f"face {t} is not a triangle")
                if t[0] < 1 or t[-1] > self.n:
                    raise InputError(f"face {t} has labels outside 1..{self.n}")
                faces.append(t)
            object.__setattr__(self, name, tuple(sorted(faces)))

    def faces(self):
        return [(t, "black") for t in self.black] + [(t, "white") for t in self.white]

    def to_json(self):
        return {"n": self.n, "black": [list(t) for t in self.black],
                "white": [list(t) for t in self.white]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls(obj["n"], tuple(map(tuple, obj["black"])), tuple(map(tuple, obj["white"])))
        except (KeyError, TypeError):
            raise InputError("triangulation JSON needs keys 'n', 'black', 'white'") from None


@dataclass(frozen=True)
class TriangulationReport:
    valid: bool
    failure: str | None = None
    witness: tuple | None = None

    def to_json(self):
        return {"valid": self.valid, "failure": self.failure,
                "witness": list(self.witness) if self.witness else None}


def _edges(t):
    a, b, c = t
    return [(a, b), (a, c), (b, c)]


def _link_is_cycle(v, faces):
    """The faces around v form one closed cycle of alternating colours."""
    around = [(t, col) for t, col in faces if v in t]
    if not around:
        return False
    adj = defaultdict(list)
    for idx, (t, _) in enumerate(around):
        a, b = [u for u in t if u != v]
        adj[a].append(idx)
        adj[b].append(idx)
    if any(len(fs) != 2 for fs in adj.values()):
        return False
    # walk the link
    start = 0
    seen = {start}
    t, _ = around[start]
    prev_vertex = [u for u in t if u != v][0]
    cur = start
    while True:
        t, col = around[cur]
        nxt_vertex = [u for u in t if u != v and u != prev_vertex][0]
        a, b = adj[nxt_vertex]
        nxt = b if a == cur else a
        if around[nxt][1] == col:
            return False
        if nxt == start:
            break
        if nxt in seen:
            return False
        seen.add(nxt)
        prev_vertex = nxt_vertex
        cur = nxt
    return len(seen) == len(around)


def validate_triangulation(tri):
    n = tri.n
    faces = tri.faces()
    if len(set(t for t, _ in faces)) != len(faces):
        dup = [t for t, c in Counter(t for t, _ in faces).items() if c > 1][0]
        return TriangulationReport(False, "duplicate face", dup)
    by_edge = defaultdict(list)
    for t, col in faces:
        for e in _edges(t):
            by_edge[e].append(col)
    for e, cols in sorted(by_edge.items()):
        if sorted(cols) != ["black", "white"]:
            return TriangulationReport(False, "evenness", e)
    used = {v for t, _ in faces for v in t}
    for v in range(1, n + 1):
        if v not in used:
            return TriangulationReport(False, "unused vertex", (v,))
        if not _link_is_cycle(v, faces):
            return TriangulationReport(False, "vertex link", (v,))
    e = len(by_edge)
    if n - e + len(faces) != 2:
        return TriangulationReport(False, "euler characteristic", (n - e + len(faces),))
    if len(tri.black) != n - 2 or len(tri.white) != n - 2:
        return TriangulationReport(False, "face count", (len(tri.black), len(tri.white)))
    return TriangulationReport(True)


def _require_valid(tri):
    rep = validate_triangulation(tri)
    if not rep.valid:
        raise PreconditionError(f"invalid triangulation: {rep.failure} at {rep.witness}")


def black_white_hypertrees(tri):
    _require_valid(tri)
    return Hypertree(tri.n, tri.black), Hypertree(tri.n, tri.white)


def octahedron():
    """Poles 1, 2 and equator 3, 5, 4, 6; opposite pairs (12)(34)(56)."""
    black = [(1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
    white = [(1, 3, 6), (1, 4, 5), (2, 3, 5), (2, 4, 6)]
    return BicoloredTriangulation(6, tuple(black), tuple(white))


def _bipyramid(k):
    n = 2 * k + 2
    eq = list(range(3, n + 1))
    black, white = [], []
    for i in range(2 * k):
        a, b = eq[i], eq[(i + 1) % (2 * k)]
        top, bottom = (1, a, b), (2, a, b)
        if i % 2 == 0:
            black.append(top)
            white.append(bottom)
        else:
            white.append(top)
            black.append(bottom)
    return BicoloredTriangulation(n, tuple(black), tuple(white))


def bipyramid(k):
    """Poles 1, 2 over the equator 3..2k+2; the face {1,3,4} is black."""
    if not isinstance(k, int) or k < 3:
        raise InputError("bipyramid needs k >= 3")
    return _bipyramid(k)


def quadruple(tri):
    """Subdivide every face into four using one new vertex per edge."""
    _require_valid(tri)
    edges = sorted({e for t, _ in tri.faces() for e in _edges(t)})
    mid = {e: tri.n + 1 + i for i, e in enumerate(edges)}
    out = {"black": [], "white": []}
    other = {"black": "white", "white": "black"}
    for (a, b, c), col in tri.faces():
        ab, ac, bc = mid[(a, b)], mid[(a, c)], mid[(b, c)]
        out[col] += [(a, ab, ac), (b, ab, bc), (c, ac, bc)]
        out[other[col]].append((ab, ac, bc))
    return BicoloredTriangulation(tri.n + len(edges), tuple(out["black"]), tuple(out["white"]))


def connected_sum(t1, face1, t2, face2):
    """Glue t1 minus a white face to t2 minus a black face.

    The vertices of face2 are identified with those of face1 in sorted order;
    the remaining vertices of t2 are renumbered after those of t1.
    """
    _require_valid(t1)
    _require_valid(t2)
    face1, face2 = tuple(sorted(face1)), tuple(sorted(face2))
    if face1 not in t1.white or face2 not in t2.black:
        raise InputError("connected sum cuts a white face of the first and a black face of the second")
    relabel = dict(zip(face2, face1))
    nxt = t1.n + 1
    for v in range(1, t2.n + 1):
        if v not in relabel:
            relabel[v] = nxt
            nxt += 1
    black = list(t1.black) + [tuple(relabel[v] for v in t) for t in t2.black if t != face2]
    white = [t for t in t1.white if t != face1] + [tuple(relabel[v] for v in t) for t in t2.white]
    return BicoloredTriangulation(nxt - 1, tuple(black), tuple(white))


def region_boundaries(tri, chosen):
    """Boundary edge counts of the components of the complement of some black faces.

    Faces outside `chosen` are joined when they share an edge.
    """
    chosen = set(tuple(sorted(t)) for t in chosen)
    rest = [t for t, _ in tri.faces() if t not in chosen]
    index = {t: i for i, t in enumerate(rest)}
    parent = list(range(len(rest)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner = defaultdict(list)
    for t, _ in tri.faces():
        for e in _edges(t):
            owner[e].append(t)
    for e, ts in owner.items():
        if all(t in index for t in ts):
            a, b = (index[t] for t in ts)
            parent[find(a)] = find(b)
    counts = Counter()
    for e, ts in owner.items():
        inside = [t for t in ts if t in index]
        if len(inside) == 1:
            counts[find(index[inside[0]])] += 1
    return [counts[r] for r in sorted({find(i) for i in range(len(rest))})]


def fibonacci_extend(h, vertex, a, role=None):
    """Add the label n+1 next to a valence-2 vertex.

    `vertex` lies in exactly two triples.  The one containing `role`
    (default: the later of the two) has `vertex` replaced by n+1, and the
    triple {a, vertex, n+1} is added.  The label a must avoid both triples.
    """
    if any(len(e) != 3 for e in h.edges):
        raise PreconditionError("the extension is defined for hypertrees of triples")
    for lab in (vertex, a) + (() if role is None else (role,)):
        if not 1 <= lab <= h.n:
            raise InputError(f"label {lab} outside 1..{h.n}")
    holders = [e for e in h.edges if vertex in e]
    if len(holders) != 2:
        raise PreconditionError(f"vertex {vertex} has valence {len(holders)}, not 2")
    if not validate(h).irreducible:
        raise PreconditionError("the extension needs an irreducible hypertree")
    if role is None:
        t2 = holders[1]
    else:
        second = [e for e in holders if role in e and role != vertex]
        if len(second) != 1:
            raise PreconditionError(f"label {role} does not single out one triple through {vertex}")
        t2 = second[0]
    t1 = holders[0] if holders[1] == t2 else holders[1]
    if a in t1 or a in t2:
        raise PreconditionError(f"label {a} lies in a triple through {vertex}")
    new = h.n + 1
    edges = [e for e in h.edges if e != t2]
    edges.append(tuple(new if u == vertex else u for u in t2))
    edges.append((a, vertex, new))
    return Hypertree(new, tuple(edges))


def fibonacci_choices(h):
    """All (vertex, a, role) inputs accepted by fibonacci_extend."""
    out = []
    val = valences(h)
    for v in h.ground:
        if val[v] != 2:
            continue
        holders = [e for e in h.edges if v in e]
        for t2 in holders:
            t1 = holders[0] if holders[1] == t2 else holders[1]
            role = min(u for u in t2 if u not in t1)
            for a in h.ground:
                if a not in t1 and a not in t2:
                    out.append((v, a, role))
    return out


def assemble_triangulation(black, white):
    if black.n != white.n:
        raise InputError("hypertrees live on different ground sets")
    if any(len(e) != 3 for e in black.edges + white.edges):
        return None
    tri = BicoloredTriangulation(black.n, black.edges, white.edges)
    if not validate_triangulation(tri).valid:
        return None
    return tri


# -- orientation ---------------------------------------------------------------

def oriented_faces(tri):
    """Cyclic vertex orders for every face, consistent over the sphere.

    Adjacent faces traverse their shared edge in opposite directions.  The
    first black face keeps its ascending order.
    """
    _require_valid(tri)
    faces = list(tri.black) + list(tri.white)
    by_edge = defaultdict(list)
    for i, t in enumerate(faces):
        for e in _edges(t):
            by_edge[e].append(i)
    orient = {0: faces[0]}
    stack = [0]
    while stack:
        i = stack.pop()
        a, b, c = orient[i]
        for u, v in ((a, b), (b, c), (c, a)):
            for j in by_edge[tuple(sorted((u, v)))]:
                if j == i:
                    continue
                w = [x for x in faces[j] if x not in (u, v)][0]
                want = (v, u, w)
                if j in orient:
                    if not _same_cycle(orient[j], want):
                        raise PreconditionError("triangulation is not orientable")
                else:
                    orient[j] = want
                    stack.append(j)
    return {faces[i]: orient[i] for i in orient}


def _same_cycle(p, q):
    return q in (p, (p[1], p[2], p[0]), (p[2], p[0], p[1]))


def directed_edges(cycle):
    a, b, c = cycle
    return [(a, b), (b, c), (c, a)]
