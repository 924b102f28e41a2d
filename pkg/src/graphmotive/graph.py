from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping

import networkx as nx
from networkx.utils import UnionFind

from .config import settings
from .errors import GraphError, SizeGuardError


class EdgeKind(str, Enum):
    BRIDGE = "bridge"
    LOOP = "loop"
    REGULAR = "regular"


@dataclass(frozen=True)
class GraphStats:
    n_vertices: int
    n_edges: int
    b0: int
    b1: int

    @property
    def loop_number(self) -> int:
        return self.b1

    @property
    def is_forest(self) -> bool:
        return self.b1 == 0


@dataclass(frozen=True)
class MultiGraph:
    """
    Мультиграф с кратными рёбрами и петлями.
    Ребро с номером i (1..n): edges[i-1]; порядок рёбер задаёт порядок переменных t_1..t_n.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise GraphError(f"duplicate vertex ids in {verts}")
        known = set(verts)
        edges = tuple((str(u), str(v)) for u, v in self.edges)
        for u, v in edges:
            if u not in known or v not in known:
                raise GraphError(f"edge ({u}, {v}) references a missing vertex")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(
        cls, edges: Iterable[tuple[object, object]], vertices: Iterable[object] = ()
    ) -> MultiGraph:
        order: dict[str, None] = {str(v): None for v in vertices}
        pairs = []
        for u, v in edges:
            u, v = str(u), str(v)
            order.setdefault(u, None)
            order.setdefault(v, None)
            pairs.append((u, v))
        return cls(tuple(order), tuple(pairs))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def edge_ids(self) -> range:
        return range(1, len(self.edges) + 1)

    def endpoints(self, e: int) -> tuple[str, str]:
        if not 1 <= e <= len(self.edges):
            raise GraphError(f"unknown edge id {e} (graph has {len(self.edges)} edges)")
        return self.edges[e - 1]

    def incident(self, v: str) -> list[int]:
        return [i for i, (a, b) in enumerate(self.edges, start=1) if v in (a, b)]

    def degree(self, v: str) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def delete(self, e: int) -> MultiGraph:
        # номера рёбер после e сдвигаются на 1, карта: minor_map / graph.delete
        self.endpoints(e)
        return MultiGraph(self.vertices, self.edges[: e - 1] + self.edges[e:])

    def contract(self, e: int) -> MultiGraph:
        u, v = self.endpoints(e)
        if u == v:
            # стягивание петли = удаление
            return self.delete(e)
        keep, gone = (u, v) if self.vertices.index(u) < self.vertices.index(v) else (v, u)
        rest = self.edges[: e - 1] + self.edges[e:]
        edges = tuple((keep if a == gone else a, keep if b == gone else b) for a, b in rest)
        return MultiGraph(tuple(x for x in self.vertices if x != gone), edges)

    def multiply_edge(self, e: int, m: int) -> MultiGraph:
        pair = self.endpoints(e)
        if m < 0:
            raise GraphError(f"edge multiplicity must be non-negative, got {m}")
        return MultiGraph(self.vertices, self.edges[: e - 1] + (pair,) * m + self.edges[e:])

    def subgraph(self, edge_ids: Iterable[int]) -> MultiGraph:
        chosen = sorted(set(edge_ids))
        pairs = [self.endpoints(e) for e in chosen]
        used = {x for p in pairs for x in p}
        return MultiGraph(tuple(v for v in self.vertices if v in used), tuple(pairs))

    def quotient(self, edge_ids: Iterable[int]) -> MultiGraph:
        """Каждая компонента связности набора рёбер стягивается в одну вершину."""
        chosen = set(edge_ids)
        uf = UnionFind(self.vertices)
        for e in chosen:
            uf.union(*self.endpoints(e))
        rep: dict[str, str] = {}
        for v in self.vertices:
            rep.setdefault(uf[v], v)
        name = {v: rep[uf[v]] for v in self.vertices}
        verts = tuple(v for v in self.vertices if name[v] == v)
        edges = tuple(
            (name[a], name[b]) for i, (a, b) in enumerate(self.edges, start=1) if i not in chosen
        )
        return MultiGraph(verts, edges)

    def relabel(self, mapping: Mapping[str, str], order: Iterable[str] | None = None) -> MultiGraph:
        verts = tuple(mapping[v] for v in self.vertices) if order is None else tuple(order)
        return MultiGraph(verts, tuple((mapping[a], mapping[b]) for a, b in self.edges))

    def to_networkx(self) -> nx.MultiGraph:
        G = nx.MultiGraph()
        G.add_nodes_from(self.vertices)
        for i, (a, b) in enumerate(self.edges, start=1):
            G.add_edge(a, b, key=i)
        return G


def minor_map(g: MultiGraph, e: int) -> dict[int, int]:
    """Перенумерация рёбер после delete/contract ребра e (порядок сохраняется)."""
    g.endpoints(e)
    return {old: (old if old < e else old - 1) for old in g.edge_ids if old != e}


def delete(g: MultiGraph, e: int) -> tuple[MultiGraph, dict[int, int]]:
    """Удаление ребра вместе с перенумерацией оставшихся рёбер (см. minor_map)."""
    return g.delete(e), minor_map(g, e)


def contract(g: MultiGraph, e: int) -> tuple[MultiGraph, dict[int, int]]:
    """Стягивание ребра вместе с перенумерацией оставшихся рёбер (см. minor_map)."""
    return g.contract(e), minor_map(g, e)


def multiply_edge(g: MultiGraph, e: int, m: int) -> MultiGraph:
    return g.multiply_edge(e, m)


def _union_find(vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> UnionFind:
    uf = UnionFind(vertices)
    for a, b in edges:
        uf.union(a, b)
    return uf


def stats(g: MultiGraph) -> GraphStats:
    uf = _union_find(g.vertices, g.edges)
    b0 = len({uf[v] for v in g.vertices})
    return GraphStats(g.n_vertices, g.n_edges, b0, g.n_edges - g.n_vertices + b0)


def classify_edge(g: MultiGraph, e: int) -> EdgeKind:
    u, v = g.endpoints(e)
    if u == v:
        return EdgeKind.LOOP
    uf = _union_find(g.vertices, (p for i, p in enumerate(g.edges, start=1) if i != e))
    return EdgeKind.REGULAR if uf[u] == uf[v] else EdgeKind.BRIDGE


def is_1pi(g: MultiGraph) -> bool:
    if stats(g).b0 != 1:
        return False
    return all(classify_edge(g, e) is not EdgeKind.BRIDGE for e in g.edge_ids)


def components(g: MultiGraph) -> list[MultiGraph]:
    out = []
    for comp in nx.connected_components(g.to_networkx()):
        verts = tuple(v for v in g.vertices if v in comp)
        edges = tuple((a, b) for a, b in g.edges if a in comp)
        out.append(MultiGraph(verts, edges))
    out.sort(key=lambda c: g.vertices.index(c.vertices[0]))
    return out


def disjoint_union(g1: MultiGraph, g2: MultiGraph) -> MultiGraph:
    m1 = {v: f"a.{v}" for v in g1.vertices}
    m2 = {v: f"b.{v}" for v in g2.vertices}
    return MultiGraph(
        tuple(m1[v] for v in g1.vertices) + tuple(m2[v] for v in g2.vertices),
        tuple((m1[a], m1[b]) for a, b in g1.edges) + tuple((m2[a], m2[b]) for a, b in g2.edges),
    )


def one_point_join(g1: MultiGraph, v1: str, g2: MultiGraph, v2: str) -> MultiGraph:
    if v1 not in g1.vertices or v2 not in g2.vertices:
        raise GraphError("join vertex is missing")
    u = disjoint_union(g1, g2)
    a, b = f"a.{v1}", f"b.{v2}"
    return MultiGraph(
        tuple(v for v in u.vertices if v != b),
        tuple((a if x == b else x, a if y == b else y) for x, y in u.edges),
    )


# --- канонические ключи ---

CanonicalKey = tuple[int, int, tuple[tuple[int, int], ...]]


def _rank(signatures: list) -> list[int]:
    index = {s: i for i, s in enumerate(sorted(set(signatures)))}
    return [index[s] for s in signatures]


class _Labeler:
    """Индивидуализация-уточнение по раскраскам; минимум сертификата по всем листьям."""

    def __init__(self, n: int, adj: list[dict[int, int]], pairs: list[tuple[int, int]]):
        self.n = n
        self.adj = adj
        self.pairs = pairs
        self.leaves = 0

    def refine(self, colors: list[int]) -> list[int]:
        while True:
            sigs = [
                (colors[i], tuple(sorted((colors[j], k) for j, k in self.adj[i].items())))
                for i in range(self.n)
            ]
            new = _rank(sigs)
            if len(set(new)) == len(set(colors)):
                return new
            colors = new

    def certificate(self, colors: list[int]) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(tuple(sorted((colors[a], colors[b]))) for a, b in self.pairs))

    def search(self, colors: list[int]) -> tuple[tuple[int, int], ...]:
        colors = self.refine(colors)
        cells: dict[int, list[int]] = {}
        for i, c in enumerate(colors):
            cells.setdefault(c, []).append(i)
        open_cells = [(len(vs), c) for c, vs in cells.items() if len(vs) > 1]
        if not open_cells:
            self.leaves += 1
            if self.leaves > settings.max_labelings:
                raise SizeGuardError(
                    f"canonical labeling exceeded {settings.max_labelings} leaves"
                )
            return self.certificate(colors)
        _, target = min(open_cells)
        best = None
        for v in cells[target]:
            split = _rank([(c, 0 if i == v else 1) for i, c in enumerate(colors)])
            cert = self.search(split)
            if best is None or cert < best:
                best = cert
        return best


@lru_cache(maxsize=65536)
def canonical_key(g: MultiGraph) -> CanonicalKey:
    if g.n_edges > settings.max_rule_edges:
        raise SizeGuardError(
            f"canonical_key: {g.n_edges} edges exceed the guard {settings.max_rule_edges}"
        )
    touched = {x for p in g.edges for x in p}
    active = [v for v in g.vertices if v in touched]
    isolated = g.n_vertices - len(active)
    index = {v: i for i, v in enumerate(active)}
    n = len(active)
    adj: list[dict[int, int]] = [{} for _ in range(n)]
    loops = [0] * n
    pairs = []
    for a, b in g.edges:
        i, j = index[a], index[b]
        pairs.append((i, j))
        if i == j:
            loops[i] += 1
        else:
            adj[i][j] = adj[i].get(j, 0) + 1
            adj[j][i] = adj[j].get(i, 0) + 1
    start = _rank([(loops[i], sum(adj[i].values())) for i in range(n)])
    cert = _Labeler(n, adj, pairs).search(start) if n else ()
    return isolated, n, cert


def graph_from_key(key: CanonicalKey) -> MultiGraph:
    isolated, n, cert = key
    verts = tuple(str(i) for i in range(n)) + tuple(f"i{k}" for k in range(isolated))
    return MultiGraph(verts, tuple((str(a), str(b)) for a, b in cert))


def render_key(key: CanonicalKey) -> str:
    isolated, _, cert = key
    body = ",".join(f"{a}-{b}" for a, b in cert)
    return f"[{body}]" if not isolated else f"[{body}|+{isolated}]"


def isomorphic(g1: MultiGraph, g2: MultiGraph) -> bool:
    return canonical_key(g1) == canonical_key(g2)
