from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import Any, Sequence

from .errors import CheckFailed, GraphError
from .graph import EdgeKind, MultiGraph, classify_edge, stats
from .poly import IntPoly
from .reduction import Irreducible, motivic_rules, reduce_class
from .series import SeriesKind, SeriesTrunc, series_solve_order2

log = logging.getLogger("graphmotive.motivic")

T = IntPoly.T()
L = IntPoly.L()


class Provenance(str, Enum):
    RULE_DERIVED = "rule-derived"
    INTERPOLATED = "interpolated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class MotivicClass:
    """Класс дополнения аффинной гиперповерхности графа в Z[T], T = L - 1."""

    value: IntPoly | None
    provenance: Provenance
    rule_trace: tuple[str, ...] = ()
    residue: MultiGraph | None = None

    @property
    def known(self) -> bool:
        return self.value is not None and self.provenance is not Provenance.UNKNOWN

    def to_json(self) -> dict[str, Any]:
        return {
            "value": self.value.render() if self.value is not None else None,
            "factored": self.value.render_factored() if self.value is not None else None,
            "provenance": self.provenance.value,
            "rule_trace": list(self.rule_trace),
            "residue_edges": [list(p) for p in self.residue.edges] if self.residue else None,
        }


def motivic_class(g: MultiGraph, rng: random.Random | None = None) -> MotivicClass:
    try:
        value, trace = reduce_class(g, motivic_rules(), rng)
    except Irreducible as exc:
        log.info("[CLASS] edges=%s irreducible residue=%s edges", g.n_edges, exc.residue.n_edges)
        return MotivicClass(None, Provenance.UNKNOWN, (), exc.residue)
    if not stats(g).is_forest and not T.divides(value):
        raise CheckFailed(f"class {value.render()} of a non-forest is not divisible by T")
    return MotivicClass(value, Provenance.RULE_DERIVED, tuple(trace))


# --- умножение ребра ---


def multiplied_edge_coefficients(m: int) -> tuple[IntPoly, IntPoly, IntPoly]:
    """
    f_m = (T^m - (-1)^m)/(T+1), g_m = (T^m + (-1)^m T)/(T+1), h_m = m T^{m-1} - f_m.
    """
    if m < 0:
        raise GraphError(f"edge multiplicity must be non-negative, got {m}")
    sign = -1 if m % 2 else 1
    f = (T**m - sign).exact_div(L)
    g = (T**m + sign * T).exact_div(L)
    h = (m * T ** (m - 1) if m else IntPoly.zero()) - f
    return f, g, h


@dataclass(frozen=True)
class MultiEdgeBase:
    graph: IntPoly
    deleted: IntPoly
    contracted: IntPoly


def _require_kind(g: MultiGraph, e: int, wanted: EdgeKind) -> None:
    kind = classify_edge(g, e)
    if kind is not wanted:
        raise GraphError(f"edge {e} is a {kind.value} edge, expected {wanted.value}")


def multiedge_base(g: MultiGraph, e: int) -> MultiEdgeBase | None:
    """Классы U(G), U(G\\e), U(G/e) по правилам; None, если хотя бы один неизвестен."""
    parts = [motivic_class(h) for h in (g, g.delete(e), g.contract(e))]
    if not all(p.known for p in parts):
        return None
    return MultiEdgeBase(*(p.value for p in parts))


def multiplied_edge_class(g: MultiGraph, e: int, m: int, base: MultiEdgeBase | None = None) -> MotivicClass:
    _require_kind(g, e, EdgeKind.REGULAR)
    base = base or multiedge_base(g, e)
    if base is None:
        return MotivicClass(None, Provenance.UNKNOWN)
    f, gm, h = multiplied_edge_coefficients(m)
    value = f * base.graph + gm * base.deleted + h * base.contracted
    return MotivicClass(value, Provenance.RULE_DERIVED, (f"multiplied-edge:{m}",))


def banana_class(m: int) -> IntPoly:
    if m < 0:
        raise GraphError(f"banana needs m >= 0, got {m}")
    if m == 0:
        return IntPoly.one()
    f, g, _ = multiplied_edge_coefficients(m)
    value = T * f + m * T ** (m - 1)
    if value != L * (f + g.derivative()):
        raise CheckFailed(f"banana({m}): closed form and derivative form disagree")
    return value


def multiplied_edge_series(
    g: MultiGraph,
    e: int,
    order: int,
    edge_kind: EdgeKind | None = None,
    kind: SeriesKind = SeriesKind.EXPONENTIAL,
    base: MultiEdgeBase | None = None,
) -> SeriesTrunc:
    """
    Последовательность U(G_{me}), m = 0..order. Петля: T^m U(G\\e); мост: banana_class(m) U(G\\e);
    обычное ребро: f_m U(G) + g_m U(G\\e) + h_m U(G/e).
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    actual = classify_edge(g, e)
    if edge_kind is not None and EdgeKind(edge_kind) is not actual:
        raise GraphError(f"edge {e} is a {actual.value} edge, not {EdgeKind(edge_kind).value}")

    if actual is EdgeKind.REGULAR:
        base = base or multiedge_base(g, e)
        if base is None:
            raise GraphError("base classes are not rule-derived; supply them explicitly")
        terms = [multiplied_edge_class(g, e, m, base).value for m in range(order + 1)]
        return SeriesTrunc(kind, tuple(terms))

    deleted = base.deleted if base else motivic_class(g.delete(e)).value
    if deleted is None:
        raise GraphError("class of G\\e is not rule-derived")
    if actual is EdgeKind.LOOP:
        return SeriesTrunc.geometric(T, kind, order).scale(deleted)
    return SeriesTrunc(kind, tuple(banana_class(m) * deleted for m in range(order + 1)))


def multiedge_generating_series(order: int) -> tuple[SeriesTrunc, SeriesTrunc, SeriesTrunc]:
    """
    Экспоненциальные ряды F = (e^{Ts} - e^{-s})/(T+1), G = (e^{Ts} + T e^{-s})/(T+1), H = s e^{Ts} - F.
    """
    kind = SeriesKind.EXPONENTIAL
    eT = SeriesTrunc.geometric(T, kind, order)
    em = SeriesTrunc.geometric(IntPoly.const(-1), kind, order)
    F = (eT - em).exact_div(L)
    G = (eT + em.scale(T)).exact_div(L)
    H = eT.shift_s() - F
    for m in range(order + 1):
        if (F.term(m), G.term(m), H.term(m)) != multiplied_edge_coefficients(m):
            raise CheckFailed(f"generating series disagree with closed coefficients at m={m}")
    return F, G, H


def algebraic_multiedge_series(
    edge_kind: EdgeKind,
    base: MultiEdgeBase,
    order: int,
) -> SeriesTrunc:
    """
    Обычные производящие функции как рациональные выражения от s:
      обычное ребро: (s U + (1+s-Ts) U\\e + (T+1) s^2/(1-Ts) U/e) / ((1+s)(1-Ts))
      мост:          (1 + s(1-Ts) + s(1+s)/(1-Ts)) U\\e / ((1+s)(1-Ts))
      петля:         U\\e / (1-Ts)
    """
    kind = SeriesKind.ORDINARY
    one, zero = IntPoly.one(), IntPoly.zero()
    geo = SeriesTrunc.geometric(T, kind, order)
    if EdgeKind(edge_kind) is EdgeKind.LOOP:
        return geo.scale(base.deleted)

    denom = SeriesTrunc.polynomial_in_s([one, 1 - T, -T], kind, order).inverse()
    if EdgeKind(edge_kind) is EdgeKind.BRIDGE:
        num = (
            SeriesTrunc.polynomial_in_s([one, one, -T], kind, order)
            + SeriesTrunc.polynomial_in_s([zero, one, one], kind, order) * geo
        )
        return (denom * num).scale(base.deleted)

    num = (
        SeriesTrunc.polynomial_in_s([zero, base.graph], kind, order)
        + SeriesTrunc.polynomial_in_s([base.deleted, (1 - T) * base.deleted], kind, order)
        + SeriesTrunc.polynomial_in_s([zero, zero, L * base.contracted], kind, order) * geo
    )
    return denom * num


# --- семейства ---


def lemon_class(m: int) -> IntPoly:
    if m < 0:
        raise GraphError(f"lemon needs m >= 0, got {m}")
    if m == 0:
        return L
    seq = series_solve_order2(T * L, T * L * L, L, T * L * L, m)
    value = seq.term(m)
    if value != lemon_closed_form(m):
        raise CheckFailed(f"lemon({m}): recursion and closed form disagree")
    return value


def lemon_closed_form(m: int) -> IntPoly:
    """(T+1)^{m+1} * sum_i C(m-i, i) T^{m-i}."""
    k = sum((comb(m - i, i) * T ** (m - i) for i in range(m // 2 + 1)), IntPoly.zero())
    return L ** (m + 1) * k


def polygon_chain_class(sides: Sequence[int]) -> IntPoly:
    if not sides:
        raise GraphError("polygon chain needs at least one polygon")
    for r in sides:
        if r < 3:
            raise GraphError(f"polygon needs at least 3 sides, got {r}")
    return L ** (sum(sides) - 3 * len(sides)) * lemon_class(len(sides))


def lemonade_coefficients(order: int) -> tuple[list[IntPoly], list[IntPoly], list[IntPoly]]:
    """Коэффициенты при U(G), U(G\\e), U(G/e) для лимона, выращенного из ребра e."""
    f2, g2 = T * L, T * L * L
    order = max(order, 1)
    f = series_solve_order2(f2, g2, IntPoly.one(), T * T - 1, order)
    g = series_solve_order2(f2, g2, IntPoly.zero(), T * L, order)
    h = series_solve_order2(f2, g2, IntPoly.zero(), L * L, order)
    return list(f), list(g), list(h)


def lemonade_series(g: MultiGraph, e: int, order: int, base: MultiEdgeBase | None = None) -> SeriesTrunc:
    _require_kind(g, e, EdgeKind.REGULAR)
    if order < 0:
        raise ValueError("order must be non-negative")
    base = base or multiedge_base(g, e)
    if base is None:
        raise GraphError("base classes are not rule-derived; supply them explicitly")
    f, gc, h = lemonade_coefficients(order)
    terms = [
        f[m] * base.graph + gc[m] * base.deleted + h[m] * base.contracted
        for m in range(order + 1)
    ]
    return SeriesTrunc(SeriesKind.ORDINARY, tuple(terms))


# --- эйлерова характеристика ---


def euler_value(value: IntPoly, point: int = 0) -> int:
    return value.exact_div(T)(point)


def euler_char(c: MotivicClass, is_forest: bool, point: int = 0) -> int:
    """
    chi(P^{n-1} \\ X) = (U/T) при T = 0. point=1 даёт значение U/T при T = 1.
    """
    if is_forest:
        raise GraphError("euler characteristic is defined for non-forests only")
    if c.value is None:
        raise GraphError("class is unknown")
    return euler_value(c.value, point)


def euler_multiedge_series(g: MultiGraph, e: int, order: int, base: MultiEdgeBase | None = None) -> SeriesTrunc:
    """
    (1 - e^{-s}) chi(G) + chi(G\\e) + (s - 1 + e^{-s}) chi(G/e); член m равен chi(G_{me}).
    """
    _require_kind(g, e, EdgeKind.REGULAR)
    if stats(g.delete(e)).is_forest:
        raise GraphError(f"G\\e is a forest for edge {e}")
    base = base or multiedge_base(g, e)
    if base is None:
        raise GraphError("base classes are not rule-derived; supply them explicitly")
    chi_g, chi_d, chi_c = (euler_value(v) for v in (base.graph, base.deleted, base.contracted))

    kind = SeriesKind.EXPONENTIAL
    one = SeriesTrunc.constant(1, kind, order)
    em = SeriesTrunc.geometric(-1, kind, order)
    s = SeriesTrunc.polynomial_in_s([0, 1], kind, order)
    series = (one - em).scale(chi_g) + one.scale(chi_d) + (s - one + em).scale(chi_c)

    for m in range(order + 1):
        direct = euler_value(multiplied_edge_class(g, e, m, base).value)
        if series.term(m) != direct:
            raise CheckFailed(f"euler series term {m}: {series.term(m)} != {direct}")
    return series


def lemonade_euler_series(g: MultiGraph, e: int, order: int, base: MultiEdgeBase | None = None) -> SeriesTrunc:
    """chi лимонада: (1 - s) chi(G) + s chi(G/e), члены с m > 1 равны нулю. Нужно, чтобы G\\e не был лесом."""
    _require_kind(g, e, EdgeKind.REGULAR)
    if stats(g.delete(e)).is_forest:
        raise GraphError(f"G\\e is a forest for edge {e}")
    base = base or multiedge_base(g, e)
    if base is None:
        raise GraphError("base classes are not rule-derived; supply them explicitly")
    terms = tuple(euler_value(v) for v in lemonade_series(g, e, order, base))

    chi_g, chi_c = euler_value(base.graph), euler_value(base.contracted)
    closed = [chi_g, chi_c - chi_g] + [0] * order
    for m, value in enumerate(terms):
        if value != closed[m]:
            raise CheckFailed(f"lemonade euler term {m}: {value} != {closed[m]}")
    return SeriesTrunc(SeriesKind.ORDINARY, terms)
