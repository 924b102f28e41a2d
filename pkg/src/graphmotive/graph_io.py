from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from .errors import GraphError, GraphFormatError
from .families import from_spec
from .graph import MultiGraph


def parse_text(text: str) -> MultiGraph:
    """
    Одна строка = одно ребро "u v" (петля "u u"), строка из одного токена = изолированная вершина.
    Строки, начинающиеся с '#', и пустые строки пропускаются. Номера рёбер идут в порядке файла.
    """
    verts: dict[str, None] = {}
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) == 1:
            verts.setdefault(tokens[0], None)
        elif len(tokens) == 2:
            u, v = tokens
            verts.setdefault(u, None)
            verts.setdefault(v, None)
            edges.append((u, v))
        else:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {line!r}")
    return MultiGraph(tuple(verts), tuple(edges))


def parse_json(text: str | dict[str, Any]) -> MultiGraph:
    try:
        data = json.loads(text) if isinstance(text, str) else text
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"bad graph json: {exc}") from exc
    if not isinstance(data, dict) or "edges" not in data:
        raise GraphFormatError("graph json needs an 'edges' list")
    try:
        edges = [(str(u), str(v)) for u, v in data["edges"]]
    except (TypeError, ValueError) as exc:
        raise GraphFormatError("each edge must be a pair [u, v]") from exc
    try:
        return MultiGraph.from_edges(edges, [str(v) for v in data.get("vertices") or []])
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from exc


def parse_graph(text: str) -> MultiGraph:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_json(stripped)
    return parse_text(text)


def format_text(g: MultiGraph) -> str:
    lines = [f"{u} {v}" for u, v in g.edges]
    touched = {x for p in g.edges for x in p}
    lines.extend(v for v in g.vertices if v not in touched)
    return "\n".join(lines) + "\n"


def graph_to_json(g: MultiGraph) -> dict[str, Any]:
    return {"vertices": list(g.vertices), "edges": [[u, v] for u, v in g.edges]}


def format_json(g: MultiGraph) -> str:
    return json.dumps(graph_to_json(g), ensure_ascii=False)


def load_graph(source: str) -> MultiGraph:
    """Граф из файла, из stdin ("-") или из короткой записи семейства ("banana:3")."""
    if source == "-":
        return parse_graph(sys.stdin.read())
    p = Path(source)
    if p.is_file():
        return parse_graph(p.read_text(encoding="utf-8"))
    try:
        return from_spec(source)
    except GraphError as exc:
        raise GraphFormatError(f"{source!r} is neither a graph file nor a family spec") from exc
