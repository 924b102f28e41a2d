from __future__ import annotations

import logging
import random
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable

import networkx as nx

from .config import settings
from .errors import SizeGuardError
from .graph import CanonicalKey, EdgeKind, MultiGraph, canonical_key, classify_edge, components
from .poly import BiPoly, IntPoly
from .universal import Rep3, RepKind, instantiate

log = logging.getLogger("graphmotive.reduction")


@dataclass(frozen=True)
class ReductionRules:
    """
    Правила редукции для мультипликативного инварианта с удвоением ребра по представлению rep:
      петля:       U = Z * U(G\\e)
      мост:        U = bridge * U(G\\e)
      цепочка:     U = series[0] * U(G/e1) + series[1] * U(G\\{e1,e2})   (вершина степени 2)
      параллельные: U = f2 U(G\\e') + g2 U(G\\e'\\e) + h2 U((G\\e')/e),
                    либо bridge_pair * U(G\\{e,e'}), если e - мост в G\\e'.
    """

    name: str
    rep: Rep3
    bridge: Any
    series: tuple[Any, Any]
    bridge_pair: Any

    @property
    def one(self) -> Any:
        return self.rep.one


def motivic_rules() -> ReductionRules:
    T = IntPoly.T()
    return ReductionRules("motivic", instantiate(RepKind.MOTIVIC), T + 1, (T + 1, IntPoly.zero()), T * (T + 1))


def tutte_rules() -> ReductionRules:
    x, y = BiPoly.x(), BiPoly.y()
    return ReductionRules("tutte", instantiate(RepKind.TUTTE), x, (BiPoly.one(), x), x + y)


class Irreducible(Exception):
    """Остаток, к которому не применимо ни одно правило."""

    def __init__(self, residue: MultiGraph):
        super().__init__(f"no reduction rule applies ({residue.n_edges} edges left)")
        self.residue = residue


_SHARED: dict[str, dict[CanonicalKey, Any]] = {}
_LOCK = threading.Lock()


def clear_cache() -> None:
    with _LOCK:
        _SHARED.clear()


def _strip_isolated(g: MultiGraph) -> MultiGraph:
    touched = {x for p in g.edges for x in p}
    return MultiGraph(tuple(v for v in g.vertices if v in touched), g.edges)


@dataclass
class ReductionEngine:
    """
    Применяет правила до неподвижной точки. Без rng порядок правил фиксирован и
    используется общий кэш по canonical_key; с rng порядок правил и рёбер перемешивается,
    а кэш свой (для проверки независимости от порядка).
    """

    rules: ReductionRules
    rng: random.Random | None = None
    trace: list[str] = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)

    def __post_init__(self) -> None:
        if self.rng is None:
            with _LOCK:
                self.memo = _SHARED.setdefault(self.rules.name, {})
        else:
            self.memo = {}

    def _apply(self, name: str, value: Any) -> Any:
        self.trace.append(name)
        self.stats[name] += 1
        return value

    def _order(self, items: list) -> list:
        if self.rng is not None:
            items = list(items)
            self.rng.shuffle(items)
        return items

    # --- правила; каждое возвращает None, если не применимо ---

    def _components(self, g: MultiGraph) -> Any:
        parts = [c for c in components(g) if c.n_edges]
        if len(parts) < 2:
            return None
        value = self.rules.one
        for part in self._order(parts):
            value = value * self.reduce(part)
        return self._apply("components", value)

    def _loop(self, g: MultiGraph) -> Any:
        for e in self._order(list(g.edge_ids)):
            u, v = g.endpoints(e)
            if u == v:
                return self._apply("loop", self.rules.rep.Z * self.reduce(g.delete(e)))
        return None

    def _bridge(self, g: MultiGraph) -> Any:
        for e in self._order(list(g.edge_ids)):
            if classify_edge(g, e) is EdgeKind.BRIDGE:
                return self._apply("bridge", self.rules.bridge * self.reduce(g.delete(e)))
        return None

    def _cut_vertex(self, g: MultiGraph) -> Any:
        simple = nx.Graph()
        simple.add_nodes_from(g.vertices)
        simple.add_edges_from((a, b) for a, b in g.edges if a != b)
        owner: dict[frozenset, int] = {}
        for i, block in enumerate(nx.biconnected_component_edges(simple)):
            for a, b in block:
                owner[frozenset((a, b))] = i
        grouped: dict[Any, list[int]] = {}
        for e in g.edge_ids:
            key = frozenset(g.endpoints(e))
            # петля - отдельный блок в своей вершине
            grouped.setdefault(owner.get(key, ("loop", e)), []).append(e)
        if len(grouped) < 2:
            return None
        value = self.rules.one
        for ids in self._order(list(grouped.values())):
            value = value * self.reduce(g.subgraph(ids))
        return self._apply("cut-vertex", value)

    def _series(self, g: MultiGraph) -> Any:
        for v in self._order(list(g.vertices)):
            inc = g.incident(v)
            if len(inc) != 2 or g.degree(v) != 2:
                continue
            e1, e2 = inc
            # мосты разбирает правило моста
            if classify_edge(g, e1) is EdgeKind.BRIDGE:
                continue
            a, b = self.rules.series
            value = a * self.reduce(g.contract(e1))
            if b:
                value = value + b * self.reduce(g.delete(e2).delete(e1))
            return self._apply("series", value)
        return None

    def _parallel(self, g: MultiGraph) -> Any:
        seen: dict[frozenset, int] = {}
        for e in self._order(list(g.edge_ids)):
            key = frozenset(g.endpoints(e))
            if len(key) == 1:
                continue
            if key not in seen:
                seen[key] = e
                continue
            e2 = e
            e1 = seen[key]
            rest = g.delete(e2)
            e1r = e1 if e1 < e2 else e1 - 1
            if classify_edge(rest, e1r) is EdgeKind.BRIDGE:
                return self._apply("parallel", self.rules.bridge_pair * self.reduce(rest.delete(e1r)))
            rep = self.rules.rep
            value = (
                rep.f2 * self.reduce(rest)
                + rep.g2 * self.reduce(rest.delete(e1r))
                + rep.h2 * self.reduce(rest.contract(e1r))
            )
            return self._apply("parallel", value)
        return None

    def _rules(self) -> list[Callable[[MultiGraph], Any]]:
        rules = [self._loop, self._bridge, self._cut_vertex, self._series, self._parallel]
        return self._order(rules)

    def reduce(self, g: MultiGraph) -> Any:
        if g.n_edges > settings.max_rule_edges:
            raise SizeGuardError(
                f"reduction: {g.n_edges} edges exceed the guard {settings.max_rule_edges}"
            )
        if g.n_edges == 0:
            return self.rules.one
        g = _strip_isolated(g)
        key = canonical_key(g)
        hit = self.memo.get(key)
        if hit is not None:
            if isinstance(hit, Irreducible):
                raise hit
            self.stats["memo"] += 1
            return hit

        try:
            value = self._components(g)
            if value is None:
                for rule in self._rules():
                    value = rule(g)
                    if value is not None:
                        break
            if value is None:
                raise Irreducible(g)
        except Irreducible as exc:
            with _LOCK:
                self.memo.setdefault(key, exc)
            raise

        with _LOCK:
            return self.memo.setdefault(key, value)


def reduce_class(g: MultiGraph, rules: ReductionRules, rng: random.Random | None = None) -> tuple[Any, list[str]]:
    """Значение инварианта по правилам и список применённых правил; Irreducible, если правила кончились."""
    engine = ReductionEngine(rules, rng)
    value = engine.reduce(g)
    log.debug("[REDUCE] rules=%s edges=%s stats=%s", rules.name, g.n_edges, dict(engine.stats))
    return value, engine.trace
