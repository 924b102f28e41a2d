from __future__ import annotations

import random

import pytest

from ..config import settings
from ..errors import SizeGuardError
from ..families import banana, k4, lemon, path, square, triangle, triangle_double_edge
from ..graph import MultiGraph
from ..poly import IntPoly
from ..reduction import Irreducible, clear_cache, motivic_rules, reduce_class, tutte_rules
from ..tutte import tutte

T = IntPoly.T()

SERIES_PARALLEL = [triangle(), square(), banana(2), banana(4), lemon(2), lemon(3), triangle_double_edge()]


def test_motivic_rules_on_small_graphs():
    value, trace = reduce_class(triangle(), motivic_rules())
    assert value == T * (T + 1) ** 2
    assert trace
    assert reduce_class(path(3), motivic_rules())[0] == (T + 1) ** 3
    loops = MultiGraph(("a",), (("a", "a"), ("a", "a")))
    assert reduce_class(loops, motivic_rules())[0] == T * T


@pytest.mark.parametrize("g", SERIES_PARALLEL)
def test_tutte_rules_match_deletion_contraction(g):
    assert reduce_class(g, tutte_rules())[0] == tutte(g).value


def test_cut_vertex_factorizes():
    g = MultiGraph.from_edges([(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
    value, trace = reduce_class(g, motivic_rules())
    assert value == (T * (T + 1) ** 2) ** 2
    assert "cut-vertex" in trace


@pytest.mark.parametrize("seed", range(5))
def test_rule_order_does_not_change_the_value(seed):
    rng = random.Random(seed)
    for g in SERIES_PARALLEL:
        assert reduce_class(g, motivic_rules(), rng)[0] == reduce_class(g, motivic_rules())[0]


def test_k4_is_irreducible():
    with pytest.raises(Irreducible) as info:
        reduce_class(k4(), motivic_rules())
    assert info.value.residue.n_edges == 6


def test_reduction_guard(monkeypatch):
    clear_cache()
    monkeypatch.setattr(settings, "max_rule_edges", 3)
    with pytest.raises(SizeGuardError):
        reduce_class(banana(4), motivic_rules())
