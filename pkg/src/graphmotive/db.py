from __future__ import annotations

import json
import sqlite3
from pathlib import Path
from typing import Any

from .config import settings


def _ensure_parent_dir(db_path: str) -> None:
    p = Path(db_path)
    if p.parent and str(p.parent) not in (".", ""):
        p.parent.mkdir(parents=True, exist_ok=True)


def get_db_path() -> str:
    db_path = settings.db_path
    _ensure_parent_dir(db_path)
    return db_path


def connect(db_path: str | None = None) -> sqlite3.Connection:
    if db_path is None:
        db_path = get_db_path()
    else:
        _ensure_parent_dir(db_path)
    con = sqlite3.connect(db_path)
    con.row_factory = sqlite3.Row
    con.execute("PRAGMA foreign_keys = ON;")
    con.execute("PRAGMA journal_mode = WAL;")
    con.execute("PRAGMA synchronous = NORMAL;")
    return con


def init_db(con: sqlite3.Connection) -> None:
    con.execute(
        """
        CREATE TABLE IF NOT EXISTS corpus_runs (
            run_id TEXT PRIMARY KEY,
            started_at TEXT NOT NULL DEFAULT (datetime('now')),
            finished_at TEXT,
            status TEXT,                  -- running / ok / failed
            seed INTEGER,
            note TEXT
        );
        """
    )

    con.execute(
        """
        CREATE TABLE IF NOT EXISTS corpus_checks (
            run_id TEXT NOT NULL,
            name TEXT NOT NULL,
            passed INTEGER NOT NULL,
            elapsed_sec REAL,
            detail TEXT,                  -- json

            PRIMARY KEY(run_id, name),
            FOREIGN KEY(run_id) REFERENCES corpus_runs(run_id) ON DELETE CASCADE
        );
        """
    )

    con.commit()


def start_run(con: sqlite3.Connection, run_id: str, seed: int, note: str | None = None) -> None:
    con.execute(
        "INSERT INTO corpus_runs(run_id, status, seed, note) VALUES (?, 'running', ?, ?);",
        (run_id, seed, note),
    )
    con.commit()


def record_check(
    con: sqlite3.Connection,
    run_id: str,
    name: str,
    passed: bool,
    elapsed_sec: float,
    detail: dict[str, Any] | None = None,
) -> None:
    con.execute(
        """
        INSERT INTO corpus_checks(run_id, name, passed, elapsed_sec, detail)
        VALUES (?, ?, ?, ?, ?)
        ON CONFLICT(run_id, name) DO UPDATE SET
            passed = excluded.passed,
            elapsed_sec = excluded.elapsed_sec,
            detail = excluded.detail;
        """,
        (run_id, name, int(passed), elapsed_sec, json.dumps(detail or {}, ensure_ascii=False)),
    )
    con.commit()


def finish_run(con: sqlite3.Connection, run_id: str, status: str, note: str | None = None) -> None:
    con.execute(
        """
        UPDATE corpus_runs
        SET finished_at = datetime('now'), status = ?, note = COALESCE(?, note)
        WHERE run_id = ?;
        """,
        (status, note, run_id),
    )
    con.commit()


def run_checks(con: sqlite3.Connection, run_id: str) -> list[sqlite3.Row]:
    cur = con.execute(
        "SELECT name, passed, elapsed_sec, detail FROM corpus_checks WHERE run_id = ? ORDER BY rowid;",
        (run_id,),
    )
    return cur.fetchall()
