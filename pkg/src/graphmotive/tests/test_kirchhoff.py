from __future__ import annotations

import pytest

from ..config import settings
from ..errors import SizeGuardError
from ..families import banana, bouquet, k4, path, triangle, triangle_double_edge
from ..graph import EdgeKind, MultiGraph
from ..kirchhoff import (
    check_minor_identities,
    deletion_contraction_split,
    matrix_tree_count,
    psi,
    spanning_forests,
)
from ..poly import EdgePoly


def test_psi_small_graphs():
    assert psi(triangle()).psi.render() == "t1 + t2 + t3"
    assert psi(banana(2)).psi.render() == "t1 + t2"
    assert psi(path(3)).psi == EdgePoly.one(3)
    assert psi(bouquet(2)).psi.render() == "t1*t2"
    assert psi(bouquet(2)).loop_number == 2


def test_forest_count_matches_matrix_tree():
    assert matrix_tree_count(k4()) == 16
    assert len(spanning_forests(k4())) == 16
    g = MultiGraph(("a", "b", "c", "d"), (("a", "b"), ("a", "b"), ("c", "d")))
    assert matrix_tree_count(g) == 2
    assert psi(g).psi.render() == "t1 + t2"


def test_psi_is_homogeneous_of_loop_degree():
    assert psi(k4()).psi.degrees() == {3}
    assert psi(triangle_double_edge()).psi.degrees() == {2}


def test_deletion_contraction_split():
    split = deletion_contraction_split(triangle(), 1)
    assert split.kind is EdgeKind.REGULAR
    assert split.F == EdgePoly.one(3)
    assert split.G.render() == "t2 + t3"
    bridge = deletion_contraction_split(path(2), 1)
    assert bridge.f_zero and not bridge.g_zero
    loop_split = deletion_contraction_split(bouquet(1), 1)
    assert loop_split.g_zero and not loop_split.f_zero


@pytest.mark.parametrize("g", [triangle(), triangle_double_edge(), k4(), path(2), bouquet(2)])
def test_minor_identities(g):
    for e in g.edge_ids:
        report = check_minor_identities(g, e)
        assert report and all(report.values())


def test_psi_guard(monkeypatch):
    psi.cache_clear()
    monkeypatch.setattr(settings, "max_edges", 3)
    with pytest.raises(SizeGuardError):
        psi(banana(4))
    psi.cache_clear()
