from __future__ import annotations

import io

import pytest

from ..errors import GraphFormatError
from ..families import banana
from ..graph import MultiGraph, isomorphic
from ..graph_io import format_json, format_text, load_graph, parse_graph, parse_json, parse_text


def test_parse_text_with_comments_loops_and_isolated():
    g = parse_text("# комментарий\na b\n\nb b\nc\n")
    assert g.vertices == ("a", "b", "c")
    assert g.edges == (("a", "b"), ("b", "b"))


def test_parse_text_rejects_long_lines():
    with pytest.raises(GraphFormatError):
        parse_text("a b c\n")


def test_text_format_keeps_edge_order():
    g = MultiGraph(("x", "y", "z"), (("y", "x"), ("x", "y")))
    again = parse_text(format_text(g))
    assert again.edges == g.edges
    assert set(again.vertices) == set(g.vertices)


def test_parse_json_and_dispatch():
    g = parse_graph('{"vertices": ["0", "1", "2"], "edges": [[0, 1], [1, 0]]}')
    assert g.n_edges == 2 and g.n_vertices == 3
    assert parse_json(format_json(g)) == g
    with pytest.raises(GraphFormatError):
        parse_json("{broken")
    with pytest.raises(GraphFormatError):
        parse_json('{"vertices": []}')
    with pytest.raises(GraphFormatError):
        parse_json('{"edges": [[1, 2, 3]]}')
    with pytest.raises(GraphFormatError):
        parse_json("[[0, 1]]")


def test_load_graph_sources(tmp_path, monkeypatch):
    f = tmp_path / "g.txt"
    f.write_text("0 1\n1 0\n", encoding="utf-8")
    assert isomorphic(load_graph(str(f)), banana(2))
    assert isomorphic(load_graph("banana:3"), banana(3))
    monkeypatch.setattr("sys.stdin", io.StringIO("0 1\n"))
    assert load_graph("-").n_edges == 1
    with pytest.raises(GraphFormatError):
        load_graph("no-such-family")
