import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hypertrees.constructions import black_white_hypertrees, bipyramid, octahedron  # noqa: E402
from hypertrees.core import Hypertree  # noqa: E402
from hypertrees.enumerate import enumerate_irreducible  # noqa: E402
from oracles import N7_EDGES  # noqa: E402


@functools.lru_cache(maxsize=None)
def catalog(n):
    return tuple(c.hypertree for c in enumerate_irreducible(n))


def catalog_upto(top, triples_only=False):
    out = []
    for n in range(6, top + 1):
        for h in catalog(n):
            if not triples_only or all(len(e) == 3 for e in h.edges):
                out.append(h)
    return out


@pytest.fixture
def n7():
    return Hypertree(7, N7_EDGES)


@pytest.fixture
def octa():
    return octahedron()


@pytest.fixture
def octa_bw():
    return black_white_hypertrees(octahedron())


@pytest.fixture
def bip8():
    return black_white_hypertrees(bipyramid(3))[0]



@functools.lru_cache(maxsize=None)
def pullback_run(name, method="fast"):
    from hypertrees.pullback import run_example
    return run_example(name, method=method)
