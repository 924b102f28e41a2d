from __future__ import annotations

import pytest

from ..errors import BudgetExceededError, GraphError
from ..families import banana, k4, lemon, path, square, triangle, triangle_double_edge
from ..graph import MultiGraph
from ..kirchhoff import psi
from ..motivic import MotivicClass, Provenance, banana_class
from ..poly import EdgePoly, IntPoly
from ..pointcount import (
    choose_split,
    class_report,
    count_common_zeros,
    count_complement,
    interpolate_class,
    verify_class,
    verify_delcon,
)

T = IntPoly.T()


def test_triangle_counts():
    p = psi(triangle()).psi
    assert count_complement(p, 2).complement_count == 4
    r = count_complement(p, 3)
    assert r.complement_count == 18
    assert r.zero_count == 27 - 18
    assert r.to_json()["n"] == 3


def test_chunking_and_threads_do_not_change_counts():
    p = psi(k4()).psi
    serial = count_complement(p, 5, threads=1).complement_count
    assert count_complement(p, 5, threads=4, chunk_size=7).complement_count == serial


def test_constant_polynomials():
    assert count_complement(EdgePoly.one(3), 3).complement_count == 27
    assert count_complement(EdgePoly.zero(2), 3).complement_count == 0
    assert count_complement(psi(path(2)).psi, 5).complement_count == 25


def test_common_zeros():
    assert count_common_zeros([psi(banana(2)).psi], 3) == 3
    p = psi(triangle()).psi
    assert count_common_zeros([p, p.partial_derivative(1)], 5) == 0
    with pytest.raises(ValueError):
        count_common_zeros([], 3)


def test_prime_and_budget_checks():
    p = psi(triangle()).psi
    with pytest.raises(ValueError):
        count_complement(p, 4)
    with pytest.raises(BudgetExceededError):
        count_complement(psi(k4()).psi, 5, budget=10)


def test_choose_split_prefers_last_on_ties():
    assert choose_split(psi(triangle()).psi) == 3


def test_interpolation_recovers_triangle():
    cand = interpolate_class(triangle(), [2, 3, 5, 7], 11)
    assert cand.exact_fit
    assert cand.poly == T * (T + 1) ** 2
    assert cand.counts[11] == 10 * 11**2
    assert cand.to_json()["factored"] == "T*(T+1)^2"


def test_interpolation_argument_checks():
    with pytest.raises(ValueError):
        interpolate_class(triangle(), [2, 3, 5], 7)
    with pytest.raises(ValueError):
        interpolate_class(triangle(), [2, 3, 5, 7], 7)


@pytest.mark.parametrize("m", range(1, 5))
def test_banana_class_matches_counts(m):
    rows = class_report(banana_class(m), banana(m), [2, 3, 5, 7])
    assert all(r["ok"] for r in rows.values())


def test_verify_class():
    c = MotivicClass(T * (T + 1) ** 2, Provenance.RULE_DERIVED)
    assert verify_class(c, triangle(), [2, 3, 5])
    wrong = MotivicClass(T**3, Provenance.RULE_DERIVED)
    assert not verify_class(wrong, triangle(), [2, 3])
    with pytest.raises(GraphError):
        verify_class(MotivicClass(None, Provenance.UNKNOWN), triangle(), [2])


def test_delcon_identity():
    report = verify_delcon(triangle(), 1, [2, 3, 5])
    assert report.ok
    row = report.rows[0]
    assert (row.q, row.complement, row.intersection_zeros, row.deletion_complement) == (2, 4, 0, 4)
    for g in (square(), triangle_double_edge()):
        assert verify_delcon(g, 1, [2, 3]).ok
    with pytest.raises(GraphError):
        verify_delcon(path(2), 1, [2])


@pytest.mark.parametrize("g", [k4(), lemon(2), banana(3)], ids=["k4", "lemon2", "banana3"])
def test_counts_do_not_depend_on_edge_order(g, rng):
    edges = list(g.edges)
    rng.shuffle(edges)
    shuffled = MultiGraph(g.vertices, tuple(edges))
    for q in (2, 3, 5):
        assert (
            count_complement(psi(shuffled).psi, q).complement_count
            == count_complement(psi(g).psi, q).complement_count
        )
