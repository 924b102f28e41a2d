from __future__ import annotations

import random
from typing import Sequence

from .errors import GraphError
from .graph import EdgeKind, MultiGraph, classify_edge


def banana(m: int) -> MultiGraph:
    if m < 0:
        raise GraphError(f"banana needs m >= 0, got {m}")
    return MultiGraph(("0", "1"), (("0", "1"),) * m)


def cycle(n: int) -> MultiGraph:
    if n < 1:
        raise GraphError(f"cycle needs n >= 1, got {n}")
    if n == 1:
        return loop()
    verts = tuple(str(i) for i in range(n))
    return MultiGraph(verts, tuple((verts[i], verts[(i + 1) % n]) for i in range(n)))


def path(n: int) -> MultiGraph:
    if n < 0:
        raise GraphError(f"path needs n >= 0, got {n}")
    verts = tuple(str(i) for i in range(n + 1))
    return MultiGraph(verts, tuple((verts[i], verts[i + 1]) for i in range(n)))


def bouquet(k: int) -> MultiGraph:
    if k < 0:
        raise GraphError(f"bouquet needs k >= 0, got {k}")
    return MultiGraph(("0",), (("0", "0"),) * k)


def loop() -> MultiGraph:
    return bouquet(1)


def edge() -> MultiGraph:
    return banana(1)


def triangle() -> MultiGraph:
    return MultiGraph(("1", "2", "3"), (("1", "2"), ("1", "3"), ("2", "3")))


def square() -> MultiGraph:
    return cycle(4)


def k4() -> MultiGraph:
    verts = ("0", "1", "2", "3")
    return MultiGraph(verts, tuple((a, b) for i, a in enumerate(verts) for b in verts[i + 1 :]))


def doubled_triangle() -> MultiGraph:
    """Треугольник, у которого удвоено каждое ребро (6 рёбер)."""
    t = triangle()
    return MultiGraph(t.vertices, tuple(p for p in t.edges for _ in range(2)))


def triangle_double_edge() -> MultiGraph:
    """Треугольник с одним удвоенным ребром (4 ребра)."""
    return triangle().multiply_edge(1, 2)


def chain(sides: Sequence[int]) -> MultiGraph:
    """
    Цепочка многоугольников: каждый следующий приклеивается по одному ребру к предыдущему.
    Общие рёбра сходятся в вершине "0", так что треугольники дают веер (лимон).
    """
    for r in sides:
        if r < 3:
            raise GraphError(f"polygon needs at least 3 sides, got {r}")
    hub, last = "0", "1"
    verts = [hub, last]
    edges = [(hub, last)]
    for r in sides:
        prev = last
        for _ in range(r - 2):
            w = str(len(verts))
            verts.append(w)
            edges.append((prev, w))
            prev = w
        edges.append((prev, hub))
        last = prev
    return MultiGraph(tuple(verts), tuple(edges))


def lemon(m: int) -> MultiGraph:
    if m < 0:
        raise GraphError(f"lemon needs m >= 0, got {m}")
    return chain([3] * m)


def lemonade(g: MultiGraph, e: int, m: int) -> MultiGraph:
    """
    Лимон из m треугольников, выращенный из ребра e графа g:
    на каждом шаге активное ребро удваивается, а копия подразбивается новой вершиной.
    """
    if m < 0:
        raise GraphError(f"lemonade needs m >= 0, got {m}")
    if classify_edge(g, e) is EdgeKind.LOOP:
        raise GraphError(f"lemonade cannot grow from loop edge {e}")
    hub, other = g.endpoints(e)
    verts = list(g.vertices)
    edges = list(g.edges)
    for k in range(m):
        w = f"L{k}"
        while w in verts:
            w += "'"
        verts.append(w)
        edges.append((other, w))
        edges.append((w, hub))
        other = w
    return MultiGraph(tuple(verts), tuple(edges))


FAMILIES = ("banana", "lemon", "chain", "lemonade", "cycle", "path", "bouquet")

NAMED = {
    "triangle": triangle,
    "square": square,
    "k4": k4,
    "loop": loop,
    "edge": edge,
    "doubled-triangle": doubled_triangle,
    "triangle-double-edge": triangle_double_edge,
}


def family_graph(kind: str, *, m: int | None = None, sides: Sequence[int] | None = None,
                 base: MultiGraph | None = None, edge_id: int | None = None) -> MultiGraph:
    if kind == "banana":
        return banana(_need(m, "m"))
    if kind == "lemon":
        return lemon(_need(m, "m"))
    if kind == "chain":
        if not sides:
            raise GraphError("chain needs a non-empty list of polygon sizes")
        return chain(sides)
    if kind == "lemonade":
        if base is None or edge_id is None:
            raise GraphError("lemonade needs a base graph and an edge id")
        return lemonade(base, edge_id, _need(m, "m"))
    if kind == "cycle":
        return cycle(_need(m, "m"))
    if kind == "path":
        return path(_need(m, "m"))
    if kind == "bouquet":
        return bouquet(_need(m, "m"))
    if kind in NAMED:
        return NAMED[kind]()
    raise GraphError(f"unknown family {kind!r}")


def _need(value: int | None, name: str) -> int:
    if value is None:
        raise GraphError(f"parameter {name} is required")
    return value


def from_spec(spec: str) -> MultiGraph:
    """Короткая запись семейства: 'triangle', 'banana:3', 'chain:3,4,3', 'lemon:2'."""
    name, _, arg = spec.strip().partition(":")
    name = name.lower()
    if name in NAMED and not arg:
        return NAMED[name]()
    if name not in FAMILIES or name == "lemonade":
        raise GraphError(f"unknown graph family {spec!r}")
    try:
        values = [int(x) for x in arg.split(",") if x.strip()]
    except ValueError as exc:
        raise GraphError(f"bad family parameters in {spec!r}") from exc
    if name == "chain":
        return chain(values)
    if len(values) != 1:
        raise GraphError(f"family {name!r} takes exactly one integer parameter")
    return family_graph(name, m=values[0])


def random_multigraph(rng: random.Random, max_edges: int = 6, max_vertices: int = 4) -> MultiGraph:
    """Случайный мультиграф с петлями и кратными рёбрами (для проверок оракулами)."""
    n = rng.randint(1, max_vertices)
    verts = tuple(str(i) for i in range(n))
    edges = tuple(
        (rng.choice(verts), rng.choice(verts)) for _ in range(rng.randint(0, max_edges))
    )
    return MultiGraph(verts, edges)
