from __future__ import annotations

import random

import pytest
import sympy

from ..config import settings
from ..errors import GraphError, SizeGuardError
from ..families import banana, bouquet, k4, loop, path, random_multigraph, square, triangle
from ..poly import BiPoly, IntPoly
from ..series import SeriesKind
from ..tutte import (
    chromatic,
    clear_cache,
    jones_substitution,
    proper_colorings,
    tg_invariant,
    tutte,
    tutte_multiedge,
    tutte_multiedge_series,
    tutte_states,
)

x, y = BiPoly.x(), BiPoly.y()


def test_small_tutte_polynomials():
    assert tutte(triangle()).render() == "x^2 + x + y"
    assert tutte(banana(3)).value == x + y + y**2
    assert tutte(loop()).value == y
    assert tutte(path(2)).value == x**2
    assert tutte(k4())(1, 1) == 16


def test_deletion_contraction_agrees_with_states(corpus):
    for g in corpus.values():
        assert tutte(g) == tutte_states(g)


def test_random_graphs_agree_with_states():
    rng = random.Random(settings.seed)
    for _ in range(40):
        g = random_multigraph(rng, max_edges=6, max_vertices=4)
        assert tutte(g) == tutte_states(g)


def test_chromatic_counts_colorings():
    lam = IntPoly.T()
    assert chromatic(triangle()) == lam * (lam - 1) * (lam - 2)
    for g in (triangle(), square(), k4(), banana(2)):
        p = chromatic(g)
        for colors in range(5):
            assert p(colors) == proper_colorings(g, colors)
    assert chromatic(loop()).is_zero()


def test_tg_invariant_specializations():
    xs, ys = sympy.symbols("x y")
    assert sympy.expand(tg_invariant(triangle(), 1, 1, 1, xs, ys) - tutte(triangle()).value.to_sympy()) == 0
    # в точке (1, 1) это число остовных деревьев
    assert tg_invariant(k4(), 1, 1, 1, 1, 1) == 16
    with pytest.raises(GraphError):
        tg_invariant(triangle(), 0, 1, 1, 1, 1)


@pytest.mark.parametrize("g,e", [(triangle(), 1), (path(2), 1), (bouquet(2), 1), (k4(), 3)])
def test_multiedge_closed_form(g, e):
    for m in range(5):
        assert tutte_multiedge(g, e, m).value == tutte(g.multiply_edge(e, m)).value


@pytest.mark.parametrize("kind", list(SeriesKind))
def test_multiedge_series(kind):
    for g, e in ((triangle(), 2), (path(3), 2), (bouquet(1), 1)):
        s = tutte_multiedge_series(g, e, kind, 5)
        assert s.order == 5
        assert s.term(4) == tutte(g.multiply_edge(e, 4)).value


def test_multiedge_rejects_negative():
    with pytest.raises(GraphError):
        tutte_multiedge(triangle(), 1, -1)


def test_jones_of_single_loop():
    t = sympy.Symbol("t")
    value = jones_substitution(tutte(loop()), 0, 0, 0)
    assert sympy.simplify(value + 1 / t) == 0


def test_tutte_guard(monkeypatch):
    clear_cache()
    monkeypatch.setattr(settings, "max_edges", 3)
    with pytest.raises(SizeGuardError):
        tutte(banana(4))
