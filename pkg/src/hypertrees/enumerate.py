"""Canonical labelings and orderly generation of irreducible hypertrees.

The canonical form of a hypertree is the relabeling whose edge list, sorted
by a fixed edge order, is lexicographically smallest.  It is found by a
backtrack that keeps an ordered partition of the ground set: labels are
handed out cell by cell, each emitted edge takes the lowest labels still
available in every cell it meets, and cells are split accordingly.  Since a
prefix of a minimal edge list is itself minimal, generating edge lists in
increasing order and keeping only minimal ones visits every isomorphism
class exactly once.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass
from itertools import combinations

from .core import Hypertree, validate
from .errors import InputError


def edge_key(order):
    if order == "lex":
        return lambda e: (len(e), tuple(e))
    if order == "colex":
        return lambda e: (len(e), tuple(reversed(e)))
    raise InputError(f"unknown edge order {order!r}")


@dataclass(frozen=True)
class CanonicalHypertree:
    hypertree: Hypertree
    automorphism_order: int
    certificate: bytes

    @property
    def short_hash(self):
        return hashlib.sha256(self.certificate).hexdigest()[:12]

    def to_json(self):
        return {
            "n": self.hypertree.n,
            "edges": [list(e) for e in self.hypertree.edges],
            "automorphism_order": self.automorphism_order,
            "certificate": self.certificate.decode(),
        }


def certificate(n, edges):
    return (f"{n}:" + ";".join(",".join(map(str, e)) for e in edges)).encode()


def _image(edge, cells, starts):
    labels = []
    for c, s in zip(cells, starts):
        k = len(edge & c)
        if k:
            labels.extend(range(s, s + k))
    return tuple(labels)


def _split(edge, cells):
    out = []
    for c in cells:
        a = c & edge
        if a and a != c:
            out.append(a)
            out.append(c - edge)
        else:
            out.append(c)
    return tuple(out)


def _starts(cells):
    starts = []
    s = 1
    for c in cells:
        starts.append(s)
        s += len(c)
    return starts


def minimal_image(n, edges, order="lex", target=None):
    """Smallest sorted relabeled edge list, with the leaf partitions reaching it.

    With `target` given, stop early and return None as soon as some
    relabeling beats the target list; this is the canonicity test used during
    generation.
    """
    key = edge_key(order)
    sets = [frozenset(e) for e in edges]
    states = {((frozenset(range(1, n + 1)),), frozenset(range(len(sets))))}
    out = []
    for t in range(len(sets)):
        best = None
        children = []
        for cells, rest in states:
            starts = _starts(cells)
            for j in rest:
                img = _image(sets[j], cells, starts)
                k = key(img)
                if best is None or k < best:
                    best = k
                    children = [(cells, rest, j)]
                elif k == best:
                    children.append((cells, rest, j))
        img = best[1] if order == "lex" else tuple(reversed(best[1]))
        if target is not None:
            tk = key(target[t])
            if best < tk:
                return None
        out.append(img)
        states = {(_split(sets[j], cells), rest - {j}) for cells, rest, j in children}
    return out, [cells for cells, _ in states]


def canonical_form(h, order="lex"):
    edges, leaves = minimal_image(h.n, h.edges, order)
    atoms = leaves[0]
    aut = len(leaves)
    for c in atoms:
        aut *= math.factorial(len(c))
    canon = Hypertree(h.n, tuple(edges))
    return CanonicalHypertree(canon, aut, certificate(h.n, canon.edges))


def canonical_relabeling(h, order="lex"):
    """A permutation (dict old -> new) carrying h onto its canonical form."""
    _, leaves = minimal_image(h.n, h.edges, order)
    perm = {}
    label = 1
    for c in leaves[0]:
        for v in sorted(c):
            perm[v] = label
            label += 1
    return perm


def is_isomorphic(h1, h2):
    if h1.n != h2.n:
        raise InputError(f"hypertrees live on different ground sets ({h1.n} vs {h2.n})")
    return canonical_form(h1).certificate == canonical_form(h2).certificate


def is_minimal(n, edges, order="lex"):
    key = edge_key(order)
    ordered = sorted(edges, key=key)
    return minimal_image(n, ordered, order, target=ordered) is not None


# -- orderly generation ------------------------------------------------------

def _candidates(n, order):
    key = edge_key(order)
    out = []
    for size in range(3, n + 1):
        out.extend(combinations(range(1, n + 1), size))
    out.sort(key=key)
    return out


class _Search:
    def __init__(self, n, order):
        self.n = n
        self.order = order
        self.cands = _candidates(n, order)
        self.masks = [sum(1 << v for v in e) for e in self.cands]
        self.sizes = [len(e) for e in self.cands]
        # remaining[i][v]: candidates of the same size after index i that contain v
        self.remaining = []
        counts = {}
        for i in range(len(self.cands) - 1, -1, -1):
            s = self.sizes[i]
            row = counts.setdefault(s, [0] * (n + 1))
            self.remaining.append((s, tuple(row)))
            for v in self.cands[i]:
                row[v] += 1
        self.remaining.reverse()
        self.found = []
        self.nodes = 0

    def feasible(self, idx, val, k, rest):
        n = self.n
        s = self.sizes[idx]
        w = s - 2
        more = rest // w if w else 0
        deficit = sum(max(0, 2 - val[v]) for v in range(1, n + 1))
        if deficit > rest + 2 * more:
            return False
        excess = sum(max(0, val[v] - 2) for v in range(1, n + 1))
        if excess > 2 * (k + more) - n - 2:
            return False
        if rest < s - 1:
            _, row = self.remaining[idx]
            for v in range(1, n + 1):
                if val[v] < 2 and row[v] < 2 - val[v]:
                    return False
        return True

    def run(self, prefix=None):
        n = self.n
        val = [0] * (n + 1)
        if prefix is None:
            for i, e in enumerate(self.cands):
                if e == tuple(range(1, len(e) + 1)):
                    self._grow([i], val, [], n - 2)
        else:
            self._grow_from(prefix)
        return self.found

    def _grow_from(self, prefix):
        n = self.n
        val = [0] * (n + 1)
        chosen = []
        subsets = []
        rest = n - 2
        for i in prefix:
            ok, subsets = self._accept(i, subsets, rest, len(chosen))
            if not ok:
                return
            rest -= self.sizes[i] - 2
            chosen.append(i)
        for i in chosen:
            for v in self.cands[i]:
                val[v] += 1
        self._descend(chosen, val, subsets, rest)

    def _grow(self, chosen, val, subsets, rest):
        i = chosen[-1]
        ok, subsets = self._accept(i, subsets, rest, len(chosen) - 1)
        if not ok:
            return
        rest -= self.sizes[i] - 2
        for v in self.cands[i]:
            val[v] += 1
        self._descend(chosen, val, subsets, rest)
        for v in self.cands[i]:
            val[v] -= 1

    def _accept(self, i, subsets, rest, k):
        """Strict convexity for every old sub-family joined with candidate i.

        Entries of `subsets` are (union mask, |union| - weight, family size).
        Only the family of all k old edges plus the final edge may be tight.
        """
        m = self.masks[i]
        last = rest == self.sizes[i] - 2
        new = []
        for u, slack, size in subsets:
            meet = (u & m).bit_count()
            allowed = slack if (last and size == k) else slack - 1
            if meet > allowed:
                return False, subsets
            new.append((u | m, slack + 2 - meet, size + 1))
        return True, subsets + [(m, 2, 1)] + new

    def _descend(self, chosen, val, subsets, rest):
        self.nodes += 1
        n = self.n
        if rest == 0:
            if all(val[v] >= 2 for v in range(1, n + 1)):
                h = Hypertree(n, tuple(self.cands[j] for j in chosen))
                if validate(h).irreducible:
                    self.found.append(h)
            return
        last = chosen[-1]
        k = len(chosen)
        for j in range(last + 1, len(self.cands)):
            w = self.sizes[j] - 2
            if w > rest:
                break
            mj = self.masks[j]
            if any((self.masks[c] & mj).bit_count() > 1 for c in chosen):
                continue
            for v in self.cands[j]:
                val[v] += 1
            ok = self.feasible(j, val, k + 1, rest - w)
            for v in self.cands[j]:
                val[v] -= 1
            if not ok:
                continue
            edges = [self.cands[c] for c in chosen] + [self.cands[j]]
            if not is_minimal(n, edges, self.order):
                continue
            chosen.append(j)
            self._grow(chosen, val, subsets, rest)
            chosen.pop()


def enumerate_irreducible(n, order="lex", allow_large=False):
    """All irreducible hypertrees on n labels up to relabeling."""
    if not isinstance(n, int) or n < 4:
        raise InputError("enumeration needs n >= 4")
    if n > 12 or (n > 10 and not allow_large):
        raise InputError(f"n={n} is beyond the enumeration limit (pass allow_large for n <= 12)")
    found = _Search(n, order).run()
    out = [canonical_form(h) for h in found]
    out.sort(key=lambda c: c.certificate)
    return out


def write_catalog(classes, root):
    """One JSON file per class plus an index, under root/n<k>/."""
    by_n = {}
    for c in classes:
        by_n.setdefault(c.hypertree.n, []).append(c)
    written = []
    for n, group in sorted(by_n.items()):
        folder = os.path.join(root, f"n{n}")
        os.makedirs(folder, exist_ok=True)
        index = []
        for c in group:
            name = f"{c.short_hash}.json"
            with open(os.path.join(folder, name), "w") as fh:
                json.dump(c.to_json(), fh, indent=1)
            index.append({"file": name, "automorphism_order": c.automorphism_order,
                          "edge_sizes": sorted(len(e) for e in c.hypertree.edges)})
            written.append(os.path.join(folder, name))
        with open(os.path.join(folder, "index.json"), "w") as fh:
            json.dump({"n": n, "count": len(group), "classes": index}, fh, indent=1)
    return written
