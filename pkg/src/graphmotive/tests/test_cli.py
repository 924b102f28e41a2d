from __future__ import annotations

import io
import json

import pytest

from ..config import settings
from ..families import lemon
from ..graph import isomorphic
from ..graph_io import parse_text
from ..main import EXIT_CHECK, EXIT_GUARD, EXIT_OK, EXIT_USAGE, run
from ..motivic import banana_class, lemon_class
from ..poly import IntPoly


def _out(capsys) -> str:
    return capsys.readouterr().out.strip()


def test_psi_and_tutte(capsys):
    assert run(["psi", "triangle"]) == EXIT_OK
    assert _out(capsys) == "t1 + t2 + t3"
    assert run(["psi", "triangle-double-edge", "-e", "1"]) == EXIT_OK
    capsys.readouterr()
    assert run(["tutte", "triangle"]) == EXIT_OK
    assert _out(capsys) == "x^2 + x + y"
    assert run(["tutte-states", "triangle"]) == EXIT_OK
    assert _out(capsys) == "x^2 + x + y"


def test_json_flag_works_before_and_after_the_command(capsys):
    assert run(["--json", "tutte", "triangle"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["text"] == "x^2 + x + y"
    assert run(["tutte", "triangle", "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["text"] == "x^2 + x + y"


def test_graph_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("0 1\n1 0\n"))
    assert run(["tutte"]) == EXIT_OK
    assert _out(capsys) == "x + y"


def test_chromatic_uses_lambda(capsys):
    assert run(["chromatic", "triangle"]) == EXIT_OK
    assert _out(capsys).startswith("λ^3")


def test_classes(capsys):
    assert run(["class", "lemon:2", "--factored"]) == EXIT_OK
    assert _out(capsys) == "T*(T+1)^4"
    assert run(["class", "k4"]) == EXIT_OK
    assert _out(capsys).startswith("unknown")
    assert run(["class-medge", "triangle", "-e", "1", "-m", "2"]) == EXIT_OK
    capsys.readouterr()
    assert run(["class-medge", "triangle", "-e", "1", "--order", "3", "--algebraic"]) == EXIT_OK
    assert "m=3:" in _out(capsys)


def test_point_counts(capsys):
    assert run(["count", "triangle", "--primes", "2,3"]) == EXIT_OK
    out = _out(capsys)
    assert "q=2 complement=4" in out
    assert "q=3 complement=18" in out
    assert run(["interpolate", "triangle", "--factored"]) == EXIT_OK
    assert _out(capsys).splitlines()[0] == "T*(T+1)^2"
    assert run(["verify-delcon", "triangle", "-e", "1"]) == EXIT_OK
    capsys.readouterr()


def test_check_failures_exit_with_one(capsys):
    assert run(["verify-class", "triangle", "--value", "T^3", "--primes", "2,3"]) == EXIT_CHECK
    assert run(["verify-class", "triangle", "--primes", "2,3"]) == EXIT_OK
    capsys.readouterr()


def test_usage_errors_exit_with_two(capsys):
    assert run(["bogus"]) == EXIT_USAGE
    assert run(["psi", "no-such-family"]) == EXIT_USAGE
    assert run(["count", "triangle", "--primes", "4"]) == EXIT_USAGE
    assert run(["universal", "--divisibility", "1,2,3"]) == EXIT_USAGE
    assert run(["verify-delcon", "path:2", "-e", "1"]) == EXIT_USAGE
    capsys.readouterr()


def test_guard_exits_with_three(capsys, monkeypatch):
    monkeypatch.setattr(settings, "budget", settings.budget)
    assert run(["--budget", "10", "count", "k4", "--primes", "5"]) == EXIT_GUARD
    capsys.readouterr()


def test_generators_and_universal(capsys):
    assert run(["gen", "banana", "-m", "2"]) == EXIT_OK
    assert capsys.readouterr().out == "0 1\n0 1\n"
    assert run(["universal", "--order", "4", "--sample", "T=2", "--divisibility", "2,3"]) == EXIT_OK
    assert _out(capsys).endswith("ok=True")
    assert run(["universal", "--kind", "tutte", "--order", "4", "--sample", "y=2"]) == EXIT_OK
    capsys.readouterr()
    assert run(["csm-predict", "--doubled-triangle"]) == EXIT_OK
    capsys.readouterr()


def test_euler_commands(capsys):
    assert run(["euler", "triangle"]) == EXIT_OK
    assert _out(capsys) == "1"
    assert run(["euler-series", "triangle-double-edge", "-e", "1", "--order", "3"]) == EXIT_OK
    assert "m=3:" in _out(capsys)


def test_hopf_commands(capsys):
    assert run(["coproduct", "banana:3"]) == EXIT_OK
    assert "3*banana:2 ⊗ loop" in _out(capsys)
    assert run(["antipode", "banana:2"]) == EXIT_OK
    assert _out(capsys) == "-banana:2"
    assert run(["renorm", "banana:3"]) == EXIT_OK
    assert "U_+" in _out(capsys)
    assert run(["coproduct", "path:2"]) == EXIT_USAGE
    capsys.readouterr()


def test_key_and_corpus(capsys):
    assert run(["key", "triangle"]) == EXIT_OK
    assert _out(capsys).startswith("[")
    assert run(["corpus", "--check", "lemon", "--no-db"]) == EXIT_OK
    out = _out(capsys)
    assert "lemon" in out and "FAIL" not in out


def test_gen_output_reparses_to_the_same_graph(capsys, monkeypatch):
    assert run(["gen", "lemon", "-m", "3"]) == EXIT_OK
    text = capsys.readouterr().out
    assert isomorphic(parse_text(text), lemon(3))
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    assert run(["class"]) == EXIT_OK
    assert _out(capsys) == lemon_class(3).render()


def test_json_and_text_agree(capsys):
    assert run(["class", "banana:4"]) == EXIT_OK
    text = _out(capsys)
    assert run(["--json", "class", "banana:4"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert IntPoly.parse(payload["value"]) == IntPoly.parse(text) == banana_class(4)


def test_corpus_reports_ledger_rows(capsys, tmp_path):
    db_file = tmp_path / "runs.db"
    assert run(["corpus", "--check", "csm", "--db", str(db_file)]) == EXIT_OK
    out = _out(capsys)
    assert f"ledger: 1 checks in {db_file}" in out
