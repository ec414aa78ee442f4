import random
from itertools import combinations

import mpmath
import pytest

from hypertrees.core import Hypertree
from hypertrees.errors import InputError, PreconditionError
from hypertrees.realize import (
    PlanarRealization,
    RealizeConfig,
    equation_residual,
    projective_image,
    realize,
    verify_realization,
)
from conftest import catalog, catalog_upto


def reprojected(R, seed):
    """Project the configuration from a fresh centre, as x = X/Z after a projective change."""
    img = projective_image(R, seed)
    with mpmath.workprec(R.precision_bits):
        xs = [p[0] / p[2] for p in img.points]
    return PlanarRealization(img.points, (0, 1, 0), xs, R.precision_bits, R.seed)


def test_n7_seed1(n7):
    R = realize(n7, seed=1)
    rep = verify_realization(n7, R, 1e-9, 1e-6)
    assert rep.ok and rep.failures == []
    assert rep.worst_collinear < 1e-30
    assert equation_residual(n7, R) < 1e-8


def test_octahedron_complete_quadrilateral(octa_bw):
    black, _ = octa_bw
    R = realize(black, seed=0)
    rep = verify_realization(black, R)
    assert rep.ok
    # exactly four lines with three points each, as for the complete quadrilateral
    with mpmath.workprec(R.precision_bits):
        pts = [[mpmath.mpf(c) for c in p] for p in R.points]
        pts = [[c / mpmath.norm(p) for c in p] for p in pts]
        lines = []
        for t in combinations(range(6), 3):
            a, b, c = (pts[i] for i in t)
            det = (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                   + a[2] * (b[0] * c[1] - b[1] * c[0]))
            if abs(det) < 1e-20:
                lines.append(tuple(i + 1 for i in t))
    assert sorted(lines) == sorted(black.edges)


def test_reducible_rejected():
    with pytest.raises(PreconditionError):
        realize(Hypertree(5, ((1, 2, 3), (3, 4, 5), (1, 2, 5))))


def test_deterministic(n7):
    a = realize(n7, seed=3).to_json()
    b = realize(n7, seed=3).to_json()
    assert a == b


def test_free_vertex_override(n7):
    R = realize(n7, seed=0, free_vertex=7)
    assert verify_realization(n7, R).ok
    with pytest.raises(InputError):
        realize(n7, free_vertex=9)


def test_random_points_fail(n7):
    rng = random.Random(0)
    pts = [(rng.random(), rng.random(), 1.0) for _ in range(7)]
    R = PlanarRealization(pts, (0, 1, 0), [p[0] for p in pts], 128, 0)
    rep = verify_realization(n7, R)
    assert not rep.ok
    assert any(kind == "not_collinear" for kind, _ in rep.failures)


def test_perturbation_reports_witness(n7):
    R = realize(n7, seed=2)
    pts = [list(p) for p in R.points]
    with mpmath.workprec(R.precision_bits):
        pts[0][1] += mpmath.mpf("1e-3") * (1 + abs(pts[0][1]))
    bad = PlanarRealization([tuple(p) for p in pts], R.projection_center, R.projected, R.precision_bits, R.seed)
    rep = verify_realization(n7, bad)
    assert not rep.ok
    flagged = {w for kind, w in rep.failures if kind == "not_collinear"}
    assert flagged == {e for e in n7.edges if 1 in e}


def test_wrong_size_rejected(n7, octa_bw):
    R = realize(octa_bw[0])
    with pytest.raises(InputError):
        verify_realization(n7, R)


def test_catalog_n9_triples():
    for h in catalog_upto(9, triples_only=True):
        R = realize(h, seed=0)
        assert R.attempts <= 20
        assert verify_realization(h, R, 1e-9, 1e-6).ok
        assert equation_residual(h, R) < 1e-8


def test_general_hyperedges_best_effort():
    for n in (8, 9):
        for h in catalog(n):
            if all(len(e) == 3 for e in h.edges):
                continue
            R = realize(h, seed=0)
            assert verify_realization(h, R).ok


def test_projection_from_fresh_centre():
    for h in catalog_upto(8, triples_only=True):
        R = realize(h, seed=0)
        for s in range(3):
            moved = reprojected(R, s)
            assert verify_realization(h, moved).ok
            assert equation_residual(h, moved) < 1e-8


def test_config_overrides(n7):
    R = realize(n7, seed=0, precision_bits=128)
    assert R.precision_bits == 128
    assert RealizeConfig().max_retries == 20
