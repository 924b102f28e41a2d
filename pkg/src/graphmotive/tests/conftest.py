from __future__ import annotations

import random

import pytest

from ..config import settings
from ..corpus import corpus_graphs
from ..reduction import clear_cache as clear_reduction_cache


@pytest.fixture(scope="session", autouse=True)
def _isolated_settings(tmp_path_factory):
    mp = pytest.MonkeyPatch()
    mp.setattr(settings, "log_to_file", False)
    mp.setattr(settings, "db_path", str(tmp_path_factory.mktemp("db") / "graphmotive.db"))
    mp.setattr(settings, "threads", 2)
    yield
    mp.undo()


@pytest.fixture(autouse=True)
def _fresh_reduction_cache():
    clear_reduction_cache()
    yield


@pytest.fixture
def rng() -> random.Random:
    return random.Random(settings.seed)


@pytest.fixture(scope="session")
def corpus():
    return corpus_graphs()


@pytest.fixture
def ledger_path(tmp_path) -> str:
    return str(tmp_path / "ledger" / "corpus.db")
