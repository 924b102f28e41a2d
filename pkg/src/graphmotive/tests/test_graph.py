from __future__ import annotations

import random

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from .. import graph
from ..config import settings
from ..errors import GraphError, SizeGuardError
from ..families import banana, bouquet, k4, path, random_multigraph, square, triangle, triangle_double_edge
from ..graph import (
    EdgeKind,
    MultiGraph,
    canonical_key,
    classify_edge,
    components,
    disjoint_union,
    graph_from_key,
    is_1pi,
    isomorphic,
    minor_map,
    one_point_join,
    stats,
)


def test_stats_of_triangle():
    st_ = stats(triangle())
    assert (st_.n_vertices, st_.n_edges, st_.b0, st_.b1) == (3, 3, 1, 1)
    assert not st_.is_forest
    assert stats(path(3)).is_forest


def test_classify_edges():
    g = MultiGraph.from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "d")])
    assert classify_edge(g, 1) is EdgeKind.REGULAR
    assert classify_edge(g, 4) is EdgeKind.BRIDGE
    assert classify_edge(g, 5) is EdgeKind.LOOP
    with pytest.raises(GraphError):
        classify_edge(g, 6)


def test_delete_and_contract():
    t = triangle()
    assert isomorphic(t.contract(1), banana(2))
    assert isomorphic(t.delete(1), path(2))
    g = MultiGraph.from_edges([("a", "a"), ("a", "b")])
    assert g.contract(1) == g.delete(1)
    assert minor_map(t, 2) == {1: 1, 3: 2}


def test_multiply_edge_keeps_position():
    g = triangle().multiply_edge(2, 3)
    assert g.n_edges == 5
    assert g.edges[1:4] == (("1", "3"),) * 3
    assert triangle().multiply_edge(1, 0) == triangle().delete(1)


def test_quotient_and_subgraph():
    b3 = banana(3)
    assert isomorphic(b3.quotient([1, 2]), bouquet(1))
    assert isomorphic(b3.subgraph([1, 3]), banana(2))
    q = square().quotient([1])
    assert isomorphic(q, triangle())


def test_components_keep_isolated_vertices():
    g = MultiGraph(("a", "b", "c"), (("a", "b"),))
    parts = components(g)
    assert len(parts) == 2
    assert [p.n_edges for p in parts] == [1, 0]


def test_is_1pi():
    assert is_1pi(triangle())
    assert is_1pi(bouquet(2))
    assert not is_1pi(path(2))
    assert not is_1pi(banana(1))
    assert not is_1pi(disjoint_union(triangle(), triangle()))


def test_unions():
    u = disjoint_union(triangle(), banana(2))
    assert (u.n_vertices, u.n_edges, stats(u).b0) == (5, 5, 2)
    j = one_point_join(triangle(), "1", banana(2), "0")
    assert (j.n_vertices, j.n_edges, stats(j).b1) == (4, 5, 2)
    with pytest.raises(GraphError):
        one_point_join(triangle(), "9", banana(2), "0")


def test_bad_graphs():
    with pytest.raises(GraphError):
        MultiGraph(("a", "a"), ())
    with pytest.raises(GraphError):
        MultiGraph(("a",), (("a", "b"),))


def test_canonical_key_distinguishes():
    assert canonical_key(square()) != canonical_key(triangle_double_edge())
    assert canonical_key(k4()) == canonical_key(graph_from_key(canonical_key(k4())))
    assert isomorphic(graph_from_key(canonical_key(triangle_double_edge())), triangle_double_edge())


def _shuffled_copy(g: MultiGraph, rng: random.Random) -> MultiGraph:
    names = {v: f"v{i}" for i, v in enumerate(rng.sample(list(g.vertices), len(g.vertices)))}
    verts = list(names.values())
    rng.shuffle(verts)
    edges = [(names[a], names[b]) if rng.random() < 0.5 else (names[b], names[a]) for a, b in g.edges]
    rng.shuffle(edges)
    return MultiGraph(tuple(verts), tuple(edges))


@hsettings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_canonical_key_is_relabeling_invariant(seed):
    rng = random.Random(seed)
    g = random_multigraph(rng, max_edges=7, max_vertices=5)
    assert canonical_key(_shuffled_copy(g, rng)) == canonical_key(g)


def test_canonical_key_guard(monkeypatch):
    canonical_key.cache_clear()
    monkeypatch.setattr(settings, "max_rule_edges", 3)
    with pytest.raises(SizeGuardError):
        canonical_key(banana(4))
    canonical_key.cache_clear()


def test_multiplying_a_copy_again_adds_multiplicities():
    g = triangle()
    twice = g.multiply_edge(2, 3).multiply_edge(2, 2)
    assert isomorphic(twice, g.multiply_edge(2, 4))
    assert isomorphic(g.multiply_edge(3, 1), g)


def test_stats_after_minor_operations():
    g = triangle_double_edge()
    b1 = stats(g).b1
    assert stats(g.delete(1)).b1 == b1 - 1
    assert stats(g.contract(3)).b1 == b1
    p = path(2)
    assert stats(p.delete(1)).b1 == 0


def test_free_delete_and_contract_return_the_renumbering():
    g = triangle_double_edge()
    d, dmap = graph.delete(g, 2)
    assert dmap == {1: 1, 3: 2, 4: 3}
    for old, new in dmap.items():
        assert d.edges[new - 1] == g.edges[old - 1]
    c, cmap = graph.contract(g, 3)
    assert cmap == minor_map(g, 3)
    assert c.n_edges == len(cmap) == 3
    with pytest.raises(GraphError):
        graph.delete(g, 9)
