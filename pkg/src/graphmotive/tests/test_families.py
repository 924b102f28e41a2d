from __future__ import annotations

import pytest

from ..errors import GraphError
from ..families import (
    banana,
    bouquet,
    chain,
    cycle,
    doubled_triangle,
    family_graph,
    from_spec,
    lemon,
    lemonade,
    loop,
    triangle,
    triangle_double_edge,
)
from ..graph import isomorphic, stats


def test_small_families():
    assert isomorphic(cycle(3), triangle())
    assert isomorphic(cycle(1), loop())
    assert isomorphic(lemon(1), triangle())
    assert stats(bouquet(3)).b1 == 3
    assert doubled_triangle().n_edges == 6
    assert triangle_double_edge().n_edges == 4


@pytest.mark.parametrize("sides", [[3], [3, 4], [3] * 7 + [10], [3, 4, 5, 3, 4, 3, 5, 4]])
def test_chain_sizes(sides):
    g = chain(sides)
    st_ = stats(g)
    assert g.n_edges == 1 + sum(r - 1 for r in sides)
    assert st_.b1 == len(sides)
    assert st_.b0 == 1


def test_chain_rejects_digons():
    with pytest.raises(GraphError):
        chain([3, 2])


def test_lemonade_grows_lemons():
    for m in range(4):
        assert isomorphic(lemonade(banana(1), 1, m), lemon(m))
    assert lemonade(triangle(), 2, 2).n_edges == 7
    with pytest.raises(GraphError):
        lemonade(loop(), 1, 1)


def test_family_graph_and_specs():
    assert isomorphic(family_graph("banana", m=4), banana(4))
    assert isomorphic(family_graph("lemonade", m=1, base=banana(1), edge_id=1), triangle())
    with pytest.raises(GraphError):
        family_graph("banana")
    with pytest.raises(GraphError):
        family_graph("chain")
    with pytest.raises(GraphError):
        family_graph("petersen")
    assert from_spec("chain:3,4").n_edges == 6
    assert isomorphic(from_spec("triangle"), triangle())
    for bad in ("lemonade:1", "banana:x", "banana:1,2", "nope"):
        with pytest.raises(GraphError):
            from_spec(bad)
