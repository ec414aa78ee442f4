import json
import math
import os
import random

import pytest

from hypertrees.core import Hypertree, validate
from hypertrees.enumerate import (
    canonical_form,
    canonical_relabeling,
    enumerate_irreducible,
    is_isomorphic,
    write_catalog,
)
from hypertrees.errors import InputError
from oracles import N7_EDGES, automorphism_count, brute_irreducible
from conftest import catalog

# frozen from the exhaustive 7! scan in oracles.automorphism_count
N7_AUTOMORPHISMS = 12


def shuffled(h, rng):
    perm = list(h.ground)
    rng.shuffle(perm)
    return h.relabel(perm)


def test_canonical_form_invariant_under_relabeling(n7):
    rng = random.Random(0)
    ref = canonical_form(n7)
    for _ in range(100):
        assert canonical_form(shuffled(n7, rng)).certificate == ref.certificate


def test_canonical_form_idempotent():
    for n in range(6, 10):
        for h in catalog(n):
            c = canonical_form(h)
            assert c.hypertree == h
            assert canonical_form(c.hypertree).certificate == c.certificate


def test_canonical_relabeling_reaches_form(n7):
    rng = random.Random(5)
    h = shuffled(n7, rng)
    assert h.relabel(canonical_relabeling(h)) == canonical_form(h).hypertree


def test_automorphism_order_n7(n7):
    assert automorphism_count(7, N7_EDGES) == N7_AUTOMORPHISMS
    assert canonical_form(n7).automorphism_order == N7_AUTOMORPHISMS


def test_automorphism_orders_match_brute_force():
    for n in (6, 7, 8):
        for h in catalog(n):
            assert canonical_form(h).automorphism_order == automorphism_count(n, h.edges)


def test_octahedron_colours_isomorphic(octa_bw):
    black, white = octa_bw
    assert canonical_form(black).certificate == canonical_form(white).certificate
    assert is_isomorphic(black, white)


def test_is_isomorphic_errors_and_negatives(n7, octa_bw):
    with pytest.raises(InputError):
        is_isomorphic(n7, octa_bw[0])
    cat = catalog(9)
    for i in range(len(cat)):
        for j in range(i + 1, len(cat)):
            assert not is_isomorphic(cat[i], cat[j])


def test_small_counts(n7):
    assert enumerate_irreducible(5) == []
    assert len(enumerate_irreducible(6)) == 1
    (only,) = enumerate_irreducible(7)
    assert only.certificate == canonical_form(n7).certificate
    # derived goldens, confirmed by the brute-force orbit count for n <= 7
    assert len(enumerate_irreducible(8)) == 3
    assert len(enumerate_irreducible(9)) == 11


def test_emitted_classes_are_irreducible():
    for n in range(6, 10):
        for h in catalog(n):
            assert validate(h).irreducible


def test_order_independence():
    for n in (8, 9):
        lex = {c.certificate for c in enumerate_irreducible(n, order="lex")}
        colex = {canonical_form(c.hypertree).certificate for c in enumerate_irreducible(n, order="colex")}
        assert lex == colex


def test_brute_force_orbits_match():
    for n in (6, 7):
        reps, sizes = brute_irreducible(n)
        got = {c.certificate for c in enumerate_irreducible(n)}
        assert {canonical_form(Hypertree(n, r)).certificate for r in reps} == got
        for r, s in zip(reps, sizes):
            assert s * automorphism_count(n, r) == math.factorial(n)


@pytest.mark.parametrize("n", [3, 13])
def test_limits(n):
    with pytest.raises(InputError):
        enumerate_irreducible(n)


def test_large_needs_flag():
    with pytest.raises(InputError):
        enumerate_irreducible(11)


def test_write_catalog(tmp_path):
    classes = enumerate_irreducible(8)
    written = write_catalog(classes, str(tmp_path))
    assert len(written) == 3
    index = json.loads((tmp_path / "n8" / "index.json").read_text())
    assert index["count"] == 3
    for path in written:
        obj = json.loads(open(path).read())
        assert validate(Hypertree.from_json(obj)).irreducible
        assert os.path.basename(path).endswith(".json")
