from __future__ import annotations

import pytest

from .. import corpus, db
from ..errors import GraphError


@pytest.mark.parametrize("name", ["lemon", "polygon-chain", "csm", "universal", "hopf"])
def test_fast_checks_pass(name):
    result = corpus.run_check(name, 1)
    assert result.passed, result.detail


def test_unknown_check():
    with pytest.raises(GraphError):
        corpus.run_check("nope", 1)


def test_crashing_check_is_recorded(monkeypatch):
    def boom(rng):
        raise RuntimeError("boom")

    monkeypatch.setitem(corpus.CHECKS, "lemon", boom)
    result = corpus.run_check("lemon", 1)
    assert not result.passed
    assert "RuntimeError" in result.detail["error"]


def test_run_corpus_writes_ledger(ledger_path):
    con = db.connect(ledger_path)
    report = corpus.run_corpus(["lemon", "csm"], seed=3, con=con)
    assert report.ok
    assert report.to_json()["seed"] == 3
    rows = db.run_checks(con, report.run_id)
    assert [r["name"] for r in rows] == ["lemon", "csm"]
    run = con.execute("SELECT status, seed FROM corpus_runs WHERE run_id = ?;", (report.run_id,)).fetchone()
    assert (run["status"], run["seed"]) == ("ok", 3)
    con.close()


def test_corpus_graphs_are_named(corpus):
    assert {"triangle", "k4", "banana:5", "lemon:3"} <= set(corpus)


def test_report_reads_checks_back_from_ledger(ledger_path):
    con = db.connect(ledger_path)
    report = corpus.run_corpus(["csm", "lemon", "csm"], seed=5, con=con)
    con.close()
    assert report.stored == ["csm", "lemon"]
    assert [r.name for r in report.results] == ["csm", "lemon"]
    assert report.ok and report.to_json()["stored"] == ["csm", "lemon"]


def test_report_without_ledger_has_no_stored_names():
    report = corpus.run_corpus(["csm"], seed=5)
    assert report.stored is None
    assert report.ok
