from __future__ import annotations

import logging
import random
import sqlite3
import time
import uuid
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import db
from .config import settings
from .errors import GraphError
from .families import banana, chain, edge, k4, lemon, random_multigraph, square, triangle, triangle_double_edge
from .graph import EdgeKind, MultiGraph, classify_edge, is_1pi, stats
from .hopf import birkhoff, counit_check, is_coassociative, rota_baxter_identity, toy_character
from .motivic import (
    T,
    Provenance,
    banana_class,
    euler_char,
    euler_multiedge_series,
    lemon_class,
    lemonade_euler_series,
    motivic_class,
    multiedge_base,
    multiplied_edge_coefficients,
    multiplied_edge_series,
    polygon_chain_class,
)
from .poly import LaurentPoly
from .pointcount import class_report, interpolate_class, verify_class, verify_delcon
from .tutte import chromatic, proper_colorings, tutte, tutte_multiedge, tutte_states
from .universal import (
    RepKind,
    coefficients,
    coefficient_sequences,
    csm_doubled_triangle,
    csm_series_check,
    divisibility_check,
    identity,
    instantiate,
    lambda_roots_numeric,
    load_csm_fixture,
    mat_mul,
    matrix_power,
    matrix_shape,
)

log = logging.getLogger("graphmotive.corpus")

L = T + 1
LEMON8 = T**4 * L**10 * (T**3 + 6 * T**2 + 9 * T + 1)
CHAIN31 = T**4 * L**17 * (T**3 + 6 * T**2 + 9 * T + 1)
CHAIN_COMPOSITIONS = ([3] * 7 + [10], [4] * 7 + [3], [3, 4, 5, 3, 4, 3, 5, 4])


def corpus_graphs() -> dict[str, MultiGraph]:
    graphs = {"triangle": triangle(), "square": square()}
    for m in range(2, 6):
        graphs[f"banana:{m}"] = banana(m)
    for m in range(1, 4):
        graphs[f"lemon:{m}"] = lemon(m)
    graphs["triangle-double-edge"] = triangle_double_edge()
    graphs["k4"] = k4()
    return graphs


@dataclass
class CheckResult:
    name: str
    passed: bool
    elapsed_sec: float
    detail: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "elapsed_sec": round(self.elapsed_sec, 3),
            "detail": self.detail,
        }


# --- проверки; каждая возвращает detail с ключом "passed" ---


def check_lemon(rng: random.Random) -> dict[str, Any]:
    # lemon_class сам сверяет рекурсию с замкнутой формой
    values = [lemon_class(m) for m in range(13)]
    ok8 = values[8] == LEMON8
    return {"passed": ok8, "lemon_8": values[8].render_factored(), "checked_up_to": 12}


def check_polygon_chain(rng: random.Random) -> dict[str, Any]:
    bad = []
    for sides in CHAIN_COMPOSITIONS:
        if polygon_chain_class(sides) != CHAIN31:
            bad.append(sides)
    lemon_graph = motivic_class(chain([3] * 8))
    triangles_ok = lemon_graph.known and lemon_graph.value == polygon_chain_class([3] * 8)
    return {"passed": not bad and triangles_ok, "bad_compositions": bad, "all_triangles_ok": triangles_ok}


def check_banana(rng: random.Random) -> dict[str, Any]:
    rep = instantiate(RepKind.MOTIVIC)
    f, g, h = coefficient_sequences(rep, 6)
    b2, single, loop_class = banana_class(2), banana_class(1), T
    bridge_series = multiplied_edge_series(edge(), 1, 6, EdgeKind.BRIDGE)
    bad: list[str] = []
    for m in range(1, 7):
        value = banana_class(m)
        if bridge_series.term(m) != value:
            bad.append(f"bridge-series:{m}")
        k = m - 1
        if f[k] * b2 + g[k] * single + h[k] * loop_class != value:
            bad.append(f"universal:{m}")
        rule = motivic_class(banana(m))
        if rule.value != value:
            bad.append(f"rules:{m}")
    counts: dict[str, bool] = {}
    for m in range(1, 6):
        rows = class_report(banana_class(m), banana(m), [2, 3, 5, 7, 11, 13])
        counts[str(m)] = all(r["ok"] for r in rows.values())
    return {"passed": not bad and all(counts.values()), "bad": bad, "point_counts": counts}


def check_delcon(rng: random.Random) -> dict[str, Any]:
    failed: list[str] = []
    checked = 0
    for name, g in corpus_graphs().items():
        if g.n_edges > 7:
            continue
        for e in g.edge_ids:
            if classify_edge(g, e) is not EdgeKind.REGULAR:
                continue
            checked += 1
            if not verify_delcon(g, e, [2, 3, 5]).ok:
                failed.append(f"{name}/e{e}")
    return {"passed": not failed and checked > 0, "checked_edges": checked, "failed": failed}


def check_master(rng: random.Random) -> dict[str, Any]:
    verified, skipped, failed = [], [], []
    for name, g in corpus_graphs().items():
        c = motivic_class(g)
        if c.provenance is not Provenance.RULE_DERIVED:
            skipped.append(name)
            continue
        (verified if verify_class(c, g, [2, 3, 5, 7]) else failed).append(name)
    return {"passed": not failed, "verified": verified, "skipped": skipped, "failed": failed}


def check_tutte(rng: random.Random) -> dict[str, Any]:
    bad: list[str] = []
    graphs = list(corpus_graphs().items())
    graphs += [(f"random:{i}", random_multigraph(rng)) for i in range(200)]
    for name, g in graphs:
        if tutte(g).value != tutte_states(g).value:
            bad.append(f"states:{name}")

    for name in ("triangle", "square", "banana:2", "lemon:2", "triangle-double-edge"):
        g = corpus_graphs()[name]
        for e in g.edge_ids:
            for m in range(6):
                if tutte_multiedge(g, e, m).value != tutte(g.multiply_edge(e, m)).value:
                    bad.append(f"multiedge:{name}/e{e}/m{m}")

    triangle_ok = tutte(triangle()).render() == "x^2 + x + y"
    for name, g in graphs:
        if g.n_vertices > 6:
            continue
        poly = chromatic(g)
        for lam in range(6):
            if poly(lam) != proper_colorings(g, lam):
                bad.append(f"chromatic:{name}/{lam}")
    return {"passed": not bad and triangle_ok, "bad": bad[:20], "triangle_ok": triangle_ok}


def _euler_edge(g: MultiGraph) -> int | None:
    for e in g.edge_ids:
        if classify_edge(g, e) is EdgeKind.REGULAR and not stats(g.delete(e)).is_forest:
            return e
    return None


def check_euler(rng: random.Random) -> dict[str, Any]:
    bad: list[str] = []
    checked = []
    for name, g in corpus_graphs().items():
        e = _euler_edge(g)
        if e is None or multiedge_base(g, e) is None:
            continue
        series = euler_multiedge_series(g, e, 5)
        for m in range(6):
            direct = motivic_class(g.multiply_edge(e, m))
            if series.term(m) != euler_char(direct, False):
                bad.append(f"{name}/e{e}/m{m}")
        checked.append(name)
    lemonade = lemonade_euler_series(triangle_double_edge(), 1, 6)
    vanish = all(v == 0 for v in list(lemonade)[2:])
    return {
        "passed": not bad and vanish and bool(checked),
        "checked": checked,
        "bad": bad,
        "lemonade_terms": list(lemonade),
    }


def _samples(kind: RepKind) -> dict[str, int]:
    return {"y": 2} if kind is RepKind.TUTTE else {"T": 2}


def check_universal(rng: random.Random) -> dict[str, Any]:
    bad: list[str] = []
    for kind in (RepKind.MOTIVIC, RepKind.TUTTE, RepKind.CSM):
        rep = instantiate(kind)
        if matrix_power(rep, 0) != identity(rep) or matrix_power(rep, 1) != rep.A1:
            bad.append(f"seed:{kind.value}")
        for m in range(11):
            if matrix_power(rep, m) != matrix_shape(rep, m):
                bad.append(f"shape:{kind.value}/{m}")
        for m in range(6):
            for k in range(6):
                if mat_mul(matrix_power(rep, m), matrix_power(rep, k)) != matrix_power(rep, m + k):
                    bad.append(f"monoid:{kind.value}/{m}+{k}")
        for m in range(1, 5):
            for r in range(1, 5):
                divisibility_check(rep, m, r)
        if not lambda_roots_numeric(rep, _samples(kind), 10).ok:
            bad.append(f"lambda:{kind.value}")

    f, g, h = coefficient_sequences(instantiate(RepKind.MOTIVIC), 10)
    for m in range(11):
        sign = -1 if m % 2 else 1
        if f[m] != g[m] - sign or h[m] != L * g[m].derivative():
            bad.append(f"motivic-identity:{m}")
        if (f[m], g[m], h[m]) != multiplied_edge_coefficients(m):
            bad.append(f"closed:{m}")

    tutte_rep = instantiate(RepKind.TUTTE)
    for name, g in (("triangle", triangle()), ("k4", k4()), ("square", square())):
        for e in g.edge_ids:
            if classify_edge(g, e) is not EdgeKind.REGULAR:
                continue
            parts = tutte(g).value, tutte(g.delete(e)).value, tutte(g.contract(e)).value
            for m in range(6):
                fm, gm, hm = coefficients(tutte_rep, m)
                if fm * parts[0] + gm * parts[1] + hm * parts[2] != tutte_multiedge(g, e, m).value:
                    bad.append(f"tutte-instantiation:{name}/e{e}/m{m}")
    return {"passed": not bad, "bad": bad}


def check_csm(rng: random.Random) -> dict[str, Any]:
    fixture = load_csm_fixture()
    predicted = csm_doubled_triangle(fixture)
    series = csm_series_check(10)
    ok = predicted == fixture["expected_poly"] and series.ok
    return {"passed": ok, "predicted": predicted.render(), "series": series.to_json()}


def _random_laurent(rng: random.Random) -> LaurentPoly:
    return LaurentPoly.from_dict(
        {k: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for k in range(-3, 4) if rng.random() < 0.6}
    )


def check_hopf(rng: random.Random) -> dict[str, Any]:
    toy = toy_character()
    bad: list[str] = []
    for name, g in corpus_graphs().items():
        if g.n_edges > 5 or not is_1pi(g):
            continue
        if not birkhoff(toy, g).polar_free:
            bad.append(f"birkhoff:{name}")
        if not counit_check(g):
            bad.append(f"counit:{name}")
    for g in (banana(2), banana(3), banana(4), triangle_double_edge()):
        if not is_coassociative(g):
            bad.append(f"coassociative:{g.n_edges}")
    rb_fail = sum(
        not rota_baxter_identity(_random_laurent(rng), _random_laurent(rng)) for _ in range(200)
    )
    return {"passed": not bad and rb_fail == 0, "bad": bad, "rota_baxter_failures": rb_fail}


def check_interpolation(rng: random.Random) -> dict[str, Any]:
    cand = interpolate_class(k4(), [2, 3, 5, 7, 11, 13, 17], 19)
    divisible = cand.poly is not None and T.divides(cand.poly)
    return {"passed": cand.exact_fit and divisible, "candidate": cand.to_json()}


CHECKS: dict[str, Callable[[random.Random], dict[str, Any]]] = {
    "lemon": check_lemon,
    "polygon-chain": check_polygon_chain,
    "banana": check_banana,
    "delcon": check_delcon,
    "master": check_master,
    "tutte": check_tutte,
    "euler": check_euler,
    "universal": check_universal,
    "csm": check_csm,
    "hopf": check_hopf,
    "interpolation": check_interpolation,
}


@dataclass
class CorpusReport:
    run_id: str
    seed: int
    results: list[CheckResult]
    stored: list[str] | None = None  # имена проверок, прочитанные обратно из журнала

    @property
    def ok(self) -> bool:
        if self.stored is not None and self.stored != [r.name for r in self.results]:
            return False
        return all(r.passed for r in self.results)

    def to_json(self) -> dict[str, Any]:
        return {
            "run_id": self.run_id,
            "seed": self.seed,
            "ok": self.ok,
            "stored": self.stored,
            "checks": [r.to_json() for r in self.results],
        }


def run_check(name: str, seed: int) -> CheckResult:
    fn = CHECKS.get(name)
    if fn is None:
        raise GraphError(f"unknown corpus check {name!r}; known: {', '.join(CHECKS)}")
    started = time.perf_counter()
    try:
        detail = fn(random.Random(seed))
    except Exception as exc:
        log.exception("[CORPUS] check=%s crashed", name)
        detail = {"passed": False, "error": f"{type(exc).__name__}: {exc}"}
    elapsed = time.perf_counter() - started
    passed = bool(detail.pop("passed"))
    log.info("[CORPUS] check=%s passed=%s elapsed=%.2fs", name, passed, elapsed)
    return CheckResult(name, passed, elapsed, detail)


def run_corpus(
    names: list[str] | None = None,
    seed: int | None = None,
    con: sqlite3.Connection | None = None,
) -> CorpusReport:
    seed = settings.seed if seed is None else seed
    run_id = uuid.uuid4().hex[:12]
    names = list(dict.fromkeys(names or CHECKS))
    if con is not None:
        db.init_db(con)
        db.start_run(con, run_id, seed)

    results = []
    for name in names:
        result = run_check(name, seed)
        results.append(result)
        if con is not None:
            db.record_check(con, run_id, name, result.passed, result.elapsed_sec, result.detail)

    report = CorpusReport(run_id, seed, results)
    if con is not None:
        report.stored = [row["name"] for row in db.run_checks(con, run_id)]
        failed = [r.name for r in results if not r.passed]
        db.finish_run(con, run_id, "ok" if report.ok else "failed", ", ".join(failed) or None)
    log.info("[CORPUS] run=%s seed=%s ok=%s", run_id, seed, report.ok)
    return report
