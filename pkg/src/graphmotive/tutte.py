from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Any

import sympy
from networkx.utils import UnionFind

from .config import settings
from .errors import CheckFailed, GraphError, InexactDivisionError, SizeGuardError
from .graph import CanonicalKey, EdgeKind, MultiGraph, canonical_key, classify_edge, stats
from .poly import BiPoly, IntPoly
from .series import SeriesKind, SeriesTrunc

log = logging.getLogger("graphmotive.tutte")

_MEMO: dict[CanonicalKey, BiPoly] = {}
_LOCK = threading.Lock()


@dataclass(frozen=True)
class TuttePoly:
    value: BiPoly

    def __call__(self, x: Any, y: Any) -> Any:
        return self.value(x, y)

    def render(self) -> str:
        return self.value.render()

    def to_json(self) -> dict[str, Any]:
        return self.value.to_json()


def clear_cache() -> None:
    with _LOCK:
        _MEMO.clear()


def _guard(g: MultiGraph, limit: int, what: str) -> None:
    if g.n_edges > limit:
        raise SizeGuardError(f"{what}: {g.n_edges} edges exceed the guard {limit}")


def _tutte(g: MultiGraph) -> BiPoly:
    if g.n_edges == 0:
        return BiPoly.one()
    key = canonical_key(g)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit

    e = 1
    kind = classify_edge(g, e)
    if kind is EdgeKind.LOOP:
        value = BiPoly.y() * _tutte(g.delete(e))
    elif kind is EdgeKind.BRIDGE:
        value = BiPoly.x() * _tutte(g.contract(e))
    else:
        value = _tutte(g.delete(e)) + _tutte(g.contract(e))

    with _LOCK:
        return _MEMO.setdefault(key, value)


def tutte(g: MultiGraph) -> TuttePoly:
    _guard(g, settings.max_edges, "tutte")
    return TuttePoly(_tutte(g))


def tutte_states(g: MultiGraph) -> TuttePoly:
    """Сумма по всем подмножествам рёбер: (x-1)^{b0(S)-b0(G)} (y-1)^{b1(S)}."""
    _guard(g, settings.states_max_edges, "tutte_states")
    b0_full = stats(g).b0
    counts: dict[tuple[int, int], int] = {}
    for size in range(g.n_edges + 1):
        for subset in itertools.combinations(g.edges, size):
            uf = UnionFind(g.vertices)
            for a, b in subset:
                uf.union(a, b)
            b0 = len({uf[v] for v in g.vertices})
            key = (b0 - b0_full, size - g.n_vertices + b0)
            counts[key] = counts.get(key, 0) + 1

    xm1 = BiPoly.x() - 1
    ym1 = BiPoly.y() - 1
    total = BiPoly.zero()
    for (i, j), c in counts.items():
        total = total + c * (xm1**i) * (ym1**j)
    return TuttePoly(total)


def tg_invariant(g: MultiGraph, alpha: Any, beta: Any, gamma: Any, x: Any, y: Any) -> Any:
    """
    Инвариант Тата-Гротендика: gamma^{b0} alpha^{V-b0} beta^{b1} T(gamma*x/alpha, y/beta).
    Аргументы могут быть числами или выражениями sympy; знаменатель после сокращения
    не должен зависеть от переменных.
    """
    alpha, beta, gamma, x, y = (sympy.sympify(v) for v in (alpha, beta, gamma, x, y))
    if alpha == 0 or beta == 0:
        raise GraphError("tg_invariant needs nonzero alpha and beta")
    st = stats(g)
    t = tutte(g).value
    expr = (
        gamma**st.b0
        * alpha ** (g.n_vertices - st.b0)
        * beta**st.b1
        * t.to_sympy(gamma * x / alpha, y / beta)
    )
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    if den.free_symbols:
        raise InexactDivisionError(f"specialization does not clear to a polynomial: denominator {den}")
    return sympy.expand(num / den)


def chromatic(g: MultiGraph) -> IntPoly:
    """Хроматический многочлен от lambda (переменная хранится как T)."""
    st = stats(g)
    t = tutte(g).value
    sign = -1 if (g.n_vertices - st.b0) % 2 else 1
    lam = IntPoly.T()
    return sign * (lam**st.b0) * t.substitute(1 - lam, IntPoly.zero())


def proper_colorings(g: MultiGraph, colors: int) -> int:
    index = {v: i for i, v in enumerate(g.vertices)}
    pairs = [(index[a], index[b]) for a, b in g.edges]
    return sum(
        all(c[a] != c[b] for a, b in pairs)
        for c in itertools.product(range(colors), repeat=g.n_vertices)
    )


def _repunit(y: BiPoly, m: int) -> BiPoly:
    return sum((y**k for k in range(m)), BiPoly.zero())


def tutte_multiedge(g: MultiGraph, e: int, m: int) -> TuttePoly:
    if m < 0:
        raise GraphError(f"edge multiplicity must be non-negative, got {m}")
    kind = classify_edge(g, e)
    deleted = tutte(g.delete(e)).value
    y = BiPoly.y()
    if kind is EdgeKind.LOOP:
        return TuttePoly(y**m * deleted)
    if kind is EdgeKind.BRIDGE:
        if m == 0:
            return TuttePoly(deleted)
        return TuttePoly((BiPoly.x() + _repunit(y, m) - 1) * deleted)
    contracted = tutte(g.contract(e)).value
    return TuttePoly(deleted + _repunit(y, m) * contracted)


def _ratio_series(kind: SeriesKind, order: int) -> SeriesTrunc:
    # (e^{(y-1)s} - 1)/(y-1) и s/(1-ys): члены 0, 1, 1+y, 1+y+y^2, ...
    y = BiPoly.y()
    one = SeriesTrunc.geometric(BiPoly.one(), kind, order)
    if kind is SeriesKind.EXPONENTIAL:
        shifted = SeriesTrunc.geometric(y - 1, kind, order)
        shifted = shifted - SeriesTrunc.constant(BiPoly.one(), kind, order)
        inner = SeriesTrunc(kind, (BiPoly.zero(),) + shifted.coefficients[1:]).exact_div(y - 1)
    else:
        inner = SeriesTrunc.geometric(y, kind, order).shift_s()
    return one * inner


def tutte_multiedge_series(g: MultiGraph, e: int, kind: SeriesKind, order: int) -> SeriesTrunc:
    """
    Производящий ряд T(G_{me}) по m; член m совпадает с tutte_multiedge(g, e, m).
    Форма ряда выбирается по типу ребра (обычное, мост, петля).
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    kind = SeriesKind(kind)
    edge_kind = classify_edge(g, e)
    deleted = tutte(g.delete(e)).value
    x, y = BiPoly.x(), BiPoly.y()
    one = SeriesTrunc.geometric(BiPoly.one(), kind, order)

    if edge_kind is EdgeKind.LOOP:
        series = SeriesTrunc.geometric(y, kind, order).scale(deleted)
    elif edge_kind is EdgeKind.BRIDGE:
        body = _ratio_series(kind, order) + one.scale(x - 1)
        series = (body + SeriesTrunc.constant(2 - x, kind, order)).scale(deleted)
    else:
        contracted = tutte(g.contract(e)).value
        series = one.scale(deleted) + _ratio_series(kind, order).scale(contracted)

    for m, term in enumerate(series):
        if term != tutte_multiedge(g, e, m).value:
            raise CheckFailed(f"tutte series term {m} disagrees with the closed formula")
    log.debug("[TUTTE] series kind=%s edge=%s order=%s", kind.value, edge_kind.value, order)
    return series


def jones_substitution(t: TuttePoly, writhe: int, v_plus: int, v_minus: int) -> Any:
    """
    (-1)^w t^{(V- - V+ + 3w)/4} T(-t, -1/t). Writhe и числа вершин шахматной раскраски
    задаёт вызывающий.
    """
    ts = sympy.Symbol("t")
    expr = (
        sympy.Integer(-1) ** writhe
        * ts ** sympy.Rational(v_minus - v_plus + 3 * writhe, 4)
        * t.value.to_sympy(-ts, -1 / ts)
    )
    return sympy.expand(sympy.simplify(expr))
