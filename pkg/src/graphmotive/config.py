from __future__ import annotations

from pydantic import BaseModel
from dotenv import load_dotenv
import os

load_dotenv()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in {
        "1",
        "true",
        "yes",
        "y",
        "on",
    }


class Settings(BaseModel):
    budget: int = int(os.getenv("GRAPHMOTIVE_BUDGET", "1000000000"))

    max_edges: int = int(os.getenv("GRAPHMOTIVE_MAX_EDGES", "16"))
    max_rule_edges: int = int(os.getenv("GRAPHMOTIVE_MAX_RULE_EDGES", "40"))
    max_labelings: int = int(os.getenv("GRAPHMOTIVE_MAX_LABELINGS", "200000"))
    states_max_edges: int = int(os.getenv("GRAPHMOTIVE_STATES_MAX_EDGES", "20"))
    hopf_max_edges: int = int(os.getenv("GRAPHMOTIVE_HOPF_MAX_EDGES", "8"))

    threads: int = int(os.getenv("GRAPHMOTIVE_THREADS", str(os.cpu_count() or 1)))
    chunk_size: int = int(os.getenv("GRAPHMOTIVE_CHUNK", "262144"))
    seed: int = int(os.getenv("GRAPHMOTIVE_SEED", "20240601"))

    db_path: str = os.getenv("GRAPHMOTIVE_DB_PATH", "./data/graphmotive.db").strip()
    log_path: str = os.getenv("GRAPHMOTIVE_LOG_PATH", "data/graphmotive.log").strip()
    log_to_file: bool = _flag("GRAPHMOTIVE_LOG_FILE", "true")

    def validate_required(self) -> None:
        bad = []
        if self.budget <= 0:
            bad.append("GRAPHMOTIVE_BUDGET (> 0)")
        if self.max_edges <= 0:
            bad.append("GRAPHMOTIVE_MAX_EDGES (> 0)")
        if self.max_rule_edges < self.max_edges:
            bad.append("GRAPHMOTIVE_MAX_RULE_EDGES (>= GRAPHMOTIVE_MAX_EDGES)")
        if self.max_labelings <= 0:
            bad.append("GRAPHMOTIVE_MAX_LABELINGS (> 0)")
        if self.threads <= 0:
            bad.append("GRAPHMOTIVE_THREADS (> 0)")
        if self.chunk_size <= 0:
            bad.append("GRAPHMOTIVE_CHUNK (> 0)")
        if bad:
            raise RuntimeError(f"Некорректные переменные окружения: {', '.join(bad)}")


settings = Settings()
settings.validate_required()
