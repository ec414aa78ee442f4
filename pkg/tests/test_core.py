import random
from itertools import combinations

import pytest

from hypertrees.core import (
    CONTRACTED,
    Component,
    StableCurveGraph,
    Hypertree,
    SubsetCollection,
    boundary_capacity_identity,
    capacity,
    contract,
    gieseker_stable,
    gieseker_violation,
    is_boundary_contracted,
    is_generic,
    restrict,
    restricted_capacity,
    stable_model,
    validate,
    valences,
    wheels,
)
from hypertrees.errors import InputError, PreconditionError
from oracles import N7_EDGES, brute_capacity, brute_flags, gieseker_brute
from conftest import catalog_upto

P = CONTRACTED


def test_n7_all_flags(n7):
    rep = validate(n7)
    assert rep.covers_twice and rep.normalization and rep.convexity and rep.irreducible
    assert rep.witnesses == {}


def test_single_cover_detected():
    rep = validate(Hypertree(4, ((1, 2, 3), (1, 2, 4))))
    assert not rep.covers_twice
    assert rep.witnesses["covers_twice"] == (3, 4)
    assert not rep.irreducible


def test_two_disjoint_octahedra(octa_bw):
    black = octa_bw[0]
    edges = black.edges + tuple(tuple(v + 6 for v in e) for e in black.edges)
    h = Hypertree(12, edges)
    rep = validate(h)
    assert brute_flags(12, edges) == (rep.covers_twice, rep.normalization, rep.convexity, rep.irreducible)
    # total weight 8 instead of 10, and one block alone is tight
    assert not rep.normalization
    assert not rep.irreducible
    assert rep.convexity


@pytest.mark.parametrize("edges", [((1, 2),), ((1, 2, 2),), ((1, 2, 9),), ((1, 2, 3), (1, 2, 3, 4))])
def test_malformed_rejected(edges):
    with pytest.raises(InputError):
        Hypertree(7, edges)


def test_small_n_rejected():
    with pytest.raises(InputError):
        Hypertree(3, ((1, 2, 3),))


def test_json_roundtrip_normalizes(n7):
    h = Hypertree.from_json('{"n": 7, "edges": [[2,4,6],[7,2,1],[3,4,7],[5,6,7],[1,3,5]]}')
    assert h == n7
    assert Hypertree.from_json(n7.to_json()) == n7
    with pytest.raises(InputError):
        Hypertree.from_json({"n": 7})


def test_valences(n7, octa_bw):
    v = valences(n7)
    assert v[7] == 3 and all(v[i] == 2 for i in range(1, 7))
    assert set(valences(octa_bw[0]).values()) == {2}


def test_valence_identities():
    for h in catalog_upto(9):
        v = valences(h)
        assert sum(v.values()) == 2 * h.d + h.n - 2
        assert sum(x - 1 for x in v.values()) == 2 * h.d - 2


def test_capacity_examples(n7):
    assert capacity(SubsetCollection(frozenset(range(1, 5)), ())) == 0
    c = contract(n7, {4, 5, 6, 7})
    assert set(c.parts) == {frozenset({7, P, 4}), frozenset({7, 5, 6}), frozenset({P, 4, 6})}
    assert c.ground == frozenset({P, 4, 5, 6, 7})
    assert capacity(c) == 3 == brute_capacity(c.parts)


def test_capacity_of_hypertree_is_n_minus_2():
    for h in catalog_upto(9):
        assert capacity(h.as_collection()) == h.n - 2


def test_contract_whole_ground_is_identity(n7):
    c = contract(n7, n7.ground)
    assert c == n7.as_collection()


def test_contract_octahedron_poles(octa_bw):
    c = contract(octa_bw[0], {3, 4, 5, 6})
    assert set(c.parts) == {frozenset(s) for s in ({P, 3, 5}, {P, 4, 6}, {P, 3, 6}, {P, 4, 5})}


def test_restrict_examples(n7):
    assert restrict(n7, ()) == n7.as_collection()
    assert restricted_capacity(n7, ()) == 5
    r = restrict(n7, {1, 2})
    assert set(r.parts) == {frozenset({3, 4, 7}), frozenset({5, 6, 7})}
    assert capacity(r) == 2 == restricted_capacity(n7, {1, 2})
    assert restrict(n7, n7.ground).parts == ()
    assert restricted_capacity(n7, n7.ground) == 0


def test_restricted_capacity_formula_exhaustive():
    for h in catalog_upto(7):
        for r in range(0, h.n + 1):
            for I in combinations(h.ground, r):
                assert restricted_capacity(h, I) == capacity(restrict(h, I))


def test_restricted_capacity_formula_random_large():
    rng = random.Random(3)
    for h in catalog_upto(9):
        for _ in range(20):
            I = rng.sample(h.ground, rng.randint(0, h.n))
            assert restricted_capacity(h, I) == capacity(restrict(h, I))


def test_contracted_capacity_against_brute_force():
    for h in catalog_upto(8):
        for r in range(1, h.n - 2):
            for keep in combinations(h.ground, r):
                c = contract(h, keep)
                if len(c.ground) <= 6:
                    assert capacity(c) == brute_capacity(c.parts), (h, keep)


def test_wheels(n7, octa_bw):
    assert (1, 3, 7) in wheels(n7)
    black, white = octa_bw
    assert wheels(black) == set(white.edges)
    assert wheels(white) == set(black.edges)


def test_genericity(n7, octa_bw, bip8):
    assert is_generic(octa_bw[0])
    assert is_generic(n7)
    assert not is_generic(bip8)


def test_genericity_preconditions():
    with pytest.raises(PreconditionError):
        is_generic(Hypertree(6, ((1, 2, 3, 4), (3, 4, 5, 6))))
    with pytest.raises(PreconditionError):
        is_generic(Hypertree(5, ((1, 2, 3), (3, 4, 5), (1, 2, 5))))


def test_boundary_examples(n7):
    for I in combinations(n7.ground, 5):
        assert not is_boundary_contracted(n7, I)
    for e in n7.edges:
        assert not is_boundary_contracted(n7, set(n7.ground) - set(e))
    assert is_boundary_contracted(n7, {4, 5, 6, 7})
    assert not boundary_capacity_identity(n7, {4, 5, 6, 7})


def test_boundary_criterion_matches_capacity():
    for h in catalog_upto(8):
        for r in range(1, h.n - 1):
            for I in combinations(h.ground, r):
                assert is_boundary_contracted(h, I) == (not boundary_capacity_identity(h, I)), (h, I)


def test_stable_model_shapes(n7, octa_bw):
    g = stable_model(octa_bw[0])
    assert len(g.black) == 4 and not g.white and len(g.nodes) == 6
    g = stable_model(n7)
    assert len(g.black) == 5 and len(g.white) == 1
    kinds = [(g.components[a].kind, g.components[b].kind) for a, b, _ in g.nodes]
    assert kinds.count(("black", "black")) == 6
    assert kinds.count(("black", "white")) == 3


def test_stable_model_degree_and_connected():
    for h in catalog_upto(9):
        g = stable_model(h)
        assert sum(c.degree for c in g.components) == 2 * h.d - 4
        assert g.is_connected()


def test_gieseker_matches_brute(n7, octa_bw):
    for h in [n7, octa_bw[0]] + catalog_upto(8):
        g = stable_model(h)
        md = g.canonical_multidegree()
        brute = gieseker_brute(g.components, g.nodes, [c.degree for c in g.components], md, h.d)
        assert brute is None
        assert gieseker_stable(g)


def test_gieseker_detects_bad_multidegree(n7):
    g = stable_model(n7)
    md = {i: 0 for i in range(len(g.components))}
    md[0] = n7.d
    bad = gieseker_violation(g, md)
    assert bad is not None
    assert gieseker_brute(g.components, g.nodes, [c.degree for c in g.components], md, n7.d) is not None


def test_gieseker_degenerate():
    g = StableCurveGraph((Component("black", (1, 2, 3), 1), Component("black", (2, 3, 4), 1)),
                         ((0, 1, 2), (0, 1, 3)))
    with pytest.raises(PreconditionError):
        gieseker_violation(g)
    with pytest.raises(InputError):
        gieseker_violation(stable_model(Hypertree(7, N7_EDGES)), {0: 1})
