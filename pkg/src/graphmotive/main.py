from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Callable

import sympy

from .config import settings
from .db import connect
from .errors import (
    CharacterError,
    CheckFailed,
    GraphError,
    GraphFormatError,
    InexactDivisionError,
    SizeGuardError,
)
from .families import FAMILIES, NAMED, family_graph
from .graph import MultiGraph, canonical_key, classify_edge, render_key, stats
from .graph_io import format_json, format_text, load_graph
from .hopf import antipode, birkhoff, coproduct, load_character, toy_character
from .kirchhoff import check_minor_identities, psi
from .logging_setup import setup_logging
from .motivic import (
    MotivicClass,
    Provenance,
    algebraic_multiedge_series,
    euler_char,
    euler_multiedge_series,
    lemonade_euler_series,
    lemonade_series,
    motivic_class,
    multiedge_base,
    multiplied_edge_series,
)
from .poly import IntPoly
from .pointcount import class_report, count_complement, interpolate_class, verify_delcon
from .series import SeriesKind, SeriesTrunc
from .tutte import chromatic, tg_invariant, tutte, tutte_multiedge, tutte_multiedge_series, tutte_states
from .universal import (
    CsmBase,
    RepKind,
    coefficient_sequences,
    csm_doubled_triangle,
    csm_predict,
    csm_series_check,
    divisibility_check,
    instantiate,
    lambda_roots_numeric,
    load_csm_fixture,
    matrix_power,
    matrix_shape,
)

log = logging.getLogger("graphmotive.main")

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]


def _sample(text: str) -> dict[str, Fraction]:
    out = {}
    for part in text.split(","):
        name, _, value = part.partition("=")
        out[name.strip()] = Fraction(value.strip())
    return out


def _emit(args: argparse.Namespace, text: str, payload: Any) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(text)


def _render(value: Any) -> str:
    return value.render() if hasattr(value, "render") else str(value)


def _series_text(series: SeriesTrunc) -> str:
    return "\n".join(f"m={m}: {_render(c)}" for m, c in enumerate(series))


def _primes(n: int) -> list[int]:
    return [int(sympy.prime(i)) for i in range(1, n + 1)]


# --- команды ---


def cmd_psi(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    res = psi(g)
    payload = {"psi": res.psi.to_json(), "loop_number": res.loop_number}
    if args.edge is not None:
        payload["minor_identities"] = check_minor_identities(g, args.edge)
    _emit(args, res.psi.render(), payload)
    if args.edge is not None and not all(payload["minor_identities"].values()):
        return EXIT_CHECK
    return EXIT_OK


def cmd_tutte(args: argparse.Namespace) -> int:
    t = tutte(load_graph(args.graph))
    _emit(args, t.render(), t.to_json())
    return EXIT_OK


def cmd_tutte_states(args: argparse.Namespace) -> int:
    t = tutte_states(load_graph(args.graph))
    _emit(args, t.render(), t.to_json())
    return EXIT_OK


def cmd_chromatic(args: argparse.Namespace) -> int:
    p = chromatic(load_graph(args.graph))
    _emit(args, p.render("λ"), p.to_json("λ"))
    return EXIT_OK


def cmd_tg(args: argparse.Namespace) -> int:
    value = tg_invariant(load_graph(args.graph), args.alpha, args.beta, args.gamma, args.x, args.y)
    _emit(args, str(value), {"value": str(value)})
    return EXIT_OK


def cmd_tutte_medge(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    if args.order is not None:
        series = tutte_multiedge_series(g, args.edge, SeriesKind(args.kind), args.order)
        _emit(args, _series_text(series), series.to_json())
        return EXIT_OK
    t = tutte_multiedge(g, args.edge, args.m)
    _emit(args, t.render(), t.to_json())
    return EXIT_OK


def _class_with_fallback(g: MultiGraph, args: argparse.Namespace) -> MotivicClass:
    c = motivic_class(g)
    if c.known or not getattr(args, "fallback", False):
        return c
    primes = _primes(g.n_edges + 2)
    cand = interpolate_class(g, primes[:-1], primes[-1])
    if cand.exact_fit:
        return MotivicClass(cand.poly, Provenance.INTERPOLATED, ("interpolation",))
    return MotivicClass(None, Provenance.UNKNOWN, c.rule_trace, c.residue)


def cmd_class(args: argparse.Namespace) -> int:
    c = _class_with_fallback(load_graph(args.graph), args)
    if c.value is None:
        text = f"unknown (irreducible residue with {c.residue.n_edges if c.residue else '?'} edges)"
    else:
        text = c.value.render_factored() if args.factored else c.value.render()
    _emit(args, text, c.to_json())
    return EXIT_OK


def cmd_class_medge(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    if args.lemonade:
        series = lemonade_series(g, args.edge, args.order if args.order is not None else args.m)
    elif args.algebraic:
        base = multiedge_base(g, args.edge)
        if base is None:
            raise GraphError("base classes are not rule-derived")
        order = args.order if args.order is not None else args.m
        series = algebraic_multiedge_series(classify_edge(g, args.edge), base, order)
    else:
        order = args.order if args.order is not None else args.m
        series = multiplied_edge_series(g, args.edge, order, kind=SeriesKind(args.kind))
    if args.order is None:
        value = series.term(args.m)
        text = value.render_factored() if args.factored else value.render()
        _emit(args, text, value.to_json())
    else:
        _emit(args, _series_text(series), series.to_json())
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    base = load_graph(args.base) if args.base else None
    g = family_graph(args.family, m=args.m, sides=args.sides, base=base, edge_id=args.edge)
    if getattr(args, "json", False):
        print(format_json(g))
    else:
        sys.stdout.write(format_text(g))
    return EXIT_OK


def cmd_euler(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    c = _class_with_fallback(g, args)
    chi = euler_char(c, stats(g).is_forest, args.point)
    _emit(args, str(chi), {"euler": chi, "point": args.point, "class": c.to_json()})
    return EXIT_OK


def cmd_euler_series(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    if args.lemonade:
        series = lemonade_euler_series(g, args.edge, args.order)
    else:
        series = euler_multiedge_series(g, args.edge, args.order)
    _emit(args, _series_text(series), series.to_json())
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    p = psi(load_graph(args.graph)).psi
    rows = [count_complement(p, q) for q in args.primes]
    text = "\n".join(f"q={r.q} complement={r.complement_count} zeros={r.zero_count}" for r in rows)
    _emit(args, text, [r.to_json() for r in rows])
    return EXIT_OK


def cmd_interpolate(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    primes = args.primes or _primes(g.n_edges + 1)
    holdout = args.holdout or next(q for q in _primes(len(primes) + 8) if q > max(primes))
    cand = interpolate_class(g, primes, holdout)
    if cand.poly is not None:
        text = cand.poly.render_factored() if args.factored else cand.poly.render()
    else:
        text = f"no integral fit: {cand.interpolant}"
    _emit(args, f"{text}\nexact_fit={cand.exact_fit}", cand.to_json())
    return EXIT_OK if cand.exact_fit else EXIT_CHECK


def cmd_verify_delcon(args: argparse.Namespace) -> int:
    report = verify_delcon(load_graph(args.graph), args.edge, args.primes)
    lines = [
        f"q={r.q} lhs={r.complement} rhs={r.predicted} identity={'ok' if r.identity_ok else 'FAIL'} "
        f"intersection={'ok' if r.intersection_ok else 'FAIL'}"
        for r in report.rows
    ]
    _emit(args, "\n".join(lines), report.to_json())
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_verify_class(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    if args.value:
        value = IntPoly.parse(args.value)
    else:
        c = motivic_class(g)
        if c.value is None:
            raise GraphError("class is not rule-derived; pass --value")
        value = c.value
    rows = class_report(value, g, args.primes)
    ok = all(r["ok"] for r in rows.values())
    lines = [f"q={q} count={r['count']} predicted={r['predicted']}" for q, r in rows.items()]
    _emit(args, "\n".join(lines + [f"ok={ok}"]),
          {"value": value.render(), "ok": ok, "rows": {str(q): r for q, r in rows.items()}})
    return EXIT_OK if ok else EXIT_CHECK


def cmd_universal(args: argparse.Namespace) -> int:
    rep = instantiate(args.kind)
    f, g, h = coefficient_sequences(rep, args.order)
    shape_ok = all(matrix_power(rep, m) == matrix_shape(rep, m) for m in range(args.order + 1))
    payload: dict[str, Any] = {
        "kind": rep.kind.value,
        "f": [_render(v) for v in f],
        "g": [_render(v) for v in g],
        "h": [_render(v) for v in h],
        "matrix_shape_ok": shape_ok,
    }
    ok = shape_ok
    if args.sample:
        report = lambda_roots_numeric(rep, _sample(args.sample), args.order)
        payload["lambda"] = report.to_json()
        ok = ok and report.ok
    if args.divisibility:
        m, r = args.divisibility
        payload["divisibility"] = divisibility_check(rep, m, r).to_json()
    if rep.kind is RepKind.CSM:
        series = csm_series_check(args.order)
        payload["csm_series"] = series.to_json()
        ok = ok and series.ok
    lines = [f"m={m}: f={_render(f[m])} g={_render(g[m])} h={_render(h[m])}" for m in range(args.order + 1)]
    _emit(args, "\n".join(lines + [f"ok={ok}"]), payload)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_csm_predict(args: argparse.Namespace) -> int:
    if args.doubled_triangle:
        fixture = load_csm_fixture(args.fixture)
        value = csm_doubled_triangle(fixture)
        expected = fixture.get("expected_poly")
        ok = expected is None or value == expected
        _emit(args, value.render(), {"value": value.render(), "expected_ok": ok})
        return EXIT_OK if ok else EXIT_CHECK
    if not (args.base_class and args.deleted and args.contracted):
        raise GraphError("csm-predict needs --doubled-triangle or --class/--deleted/--contracted")
    base = CsmBase(IntPoly.parse(args.base_class), IntPoly.parse(args.deleted), IntPoly.parse(args.contracted))
    value = csm_predict(base, args.m)
    _emit(args, value.render(), value.to_json())
    return EXIT_OK


def cmd_coproduct(args: argparse.Namespace) -> int:
    delta = coproduct(load_graph(args.graph))
    _emit(args, delta.render(), delta.to_json())
    return EXIT_OK


def cmd_antipode(args: argparse.Namespace) -> int:
    s = antipode(load_graph(args.graph))
    _emit(args, s.render(), s.to_json())
    return EXIT_OK


def cmd_renorm(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    u = toy_character() if args.character == "toy" else load_character(args.character)
    res = birkhoff(u, g)
    text = f"U = {res.u.render()}\nU_- = {res.u_minus.render()}\nU_+ = {res.u_plus.render()}"
    _emit(args, text, res.to_json())
    return EXIT_OK if res.polar_free else EXIT_CHECK


def cmd_corpus(args: argparse.Namespace) -> int:
    from .corpus import run_corpus

    con = None if args.no_db else connect(args.db)
    try:
        report = run_corpus(args.check or None, getattr(args, "seed", None), con)
    finally:
        if con is not None:
            con.close()
    lines = [
        f"{'ok  ' if r.passed else 'FAIL'} {r.name} ({r.elapsed_sec:.2f}s)" for r in report.results
    ]
    if report.stored is not None:
        lines.append(f"ledger: {len(report.stored)} checks in {args.db or settings.db_path}")
    _emit(args, "\n".join(lines + [f"run={report.run_id} ok={report.ok}"]), report.to_json())
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_key(args: argparse.Namespace) -> int:
    key = canonical_key(load_graph(args.graph))
    _emit(args, render_key(key), {"key": render_key(key)})
    return EXIT_OK


# --- разбор аргументов ---


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="Вывод в JSON.")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Зерно для случайных проверок.")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="Потоки для подсчёта точек.")
    p.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="Бюджет подсчёта (вычислений).")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="graphmotive",
        description="Классы графовых гиперповерхностей, полином Тата, подсчёт точек и перенормировка.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable[[argparse.Namespace], int], help_text: str, graph: bool = True):
        p = sub.add_parser(name, help=help_text, parents=[common])
        if graph:
            p.add_argument("graph", nargs="?", default="-",
                           help="Файл графа, '-' (stdin) или запись семейства (banana:3).")
        p.set_defaults(func=fn)
        return p

    p = add("psi", cmd_psi, "Полином Кирхгофа.")
    p.add_argument("-e", "--edge", type=int, help="Проверить F, G для ребра.")

    add("tutte", cmd_tutte, "Полином Тата (удаление-стягивание).")
    add("tutte-states", cmd_tutte_states, "Полином Тата как сумма по подмножествам.")
    add("chromatic", cmd_chromatic, "Хроматический многочлен.")

    p = add("tg", cmd_tg, "Инвариант Тата-Гротендика.")
    for name, default in (("alpha", "1"), ("beta", "1"), ("gamma", "1"), ("x", "x"), ("y", "y")):
        p.add_argument(f"--{name}", default=default)

    p = add("tutte-medge", cmd_tutte_medge, "Полином Тата с умноженным ребром.")
    p.add_argument("-e", "--edge", type=int, required=True)
    p.add_argument("-m", type=int, default=2)
    p.add_argument("--order", type=int)
    p.add_argument("--kind", choices=[k.value for k in SeriesKind], default="exp")

    p = add("class", cmd_class, "Класс дополнения по правилам редукции.")
    p.add_argument("--fallback", action="store_true", help="Интерполяция, если правила не помогли.")
    p.add_argument("--factored", action="store_true")

    p = add("class-medge", cmd_class_medge, "Классы графа с умноженным ребром.")
    p.add_argument("-e", "--edge", type=int, required=True)
    p.add_argument("-m", type=int, default=2)
    p.add_argument("--order", type=int)
    p.add_argument("--kind", choices=[k.value for k in SeriesKind], default="exp")
    p.add_argument("--algebraic", action="store_true", help="Рациональные обычные производящие функции.")
    p.add_argument("--lemonade", action="store_true", help="Лимонад, выращенный из ребра.")
    p.add_argument("--factored", action="store_true")

    p = add("gen", cmd_gen, "Сгенерировать граф семейства.", graph=False)
    p.add_argument("family", choices=list(FAMILIES) + list(NAMED))
    p.add_argument("-m", type=int)
    p.add_argument("--sides", type=_int_list)
    p.add_argument("--base", help="Базовый граф для lemonade.")
    p.add_argument("-e", "--edge", type=int)

    p = add("euler", cmd_euler, "Эйлерова характеристика дополнения в проективном пространстве.")
    p.add_argument("--point", type=int, default=0, help="Точка вычисления U/T (по умолчанию 0).")
    p.add_argument("--fallback", action="store_true")

    p = add("euler-series", cmd_euler_series, "Эйлеровы характеристики вдоль умножения ребра.")
    p.add_argument("-e", "--edge", type=int, required=True)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--lemonade", action="store_true")

    p = add("count", cmd_count, "Число точек дополнения над F_q.")
    p.add_argument("--primes", type=_int_list, default=[2, 3, 5])

    p = add("interpolate", cmd_interpolate, "Интерполяция класса по числам точек.")
    p.add_argument("--primes", type=_int_list)
    p.add_argument("--holdout", type=int)
    p.add_argument("--factored", action="store_true")

    p = add("verify-delcon", cmd_verify_delcon, "Проверка тождества удаления-стягивания.")
    p.add_argument("-e", "--edge", type=int, required=True)
    p.add_argument("--primes", type=_int_list, default=[2, 3, 5])

    p = add("verify-class", cmd_verify_class, "Сверка класса с числом точек.")
    p.add_argument("--primes", type=_int_list, default=[2, 3, 5, 7])
    p.add_argument("--value", help="Класс в виде многочлена от T (иначе по правилам).")

    p = add("universal", cmd_universal, "Универсальная рекурсия умножения ребра.", graph=False)
    p.add_argument("--kind", choices=[k.value for k in RepKind if k is not RepKind.CUSTOM], default="motivic")
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--sample", help="Точка для проверки через lambda, например T=2 или y=2.")
    p.add_argument("--divisibility", type=_int_list, metavar="M,R")

    p = add("csm-predict", cmd_csm_predict, "Предсказание классов CSM.", graph=False)
    p.add_argument("--doubled-triangle", action="store_true")
    p.add_argument("--fixture")
    p.add_argument("--class", dest="base_class")
    p.add_argument("--deleted")
    p.add_argument("--contracted")
    p.add_argument("-m", type=int, default=1)

    add("coproduct", cmd_coproduct, "Копроизведение в алгебре Хопфа графов.")
    add("antipode", cmd_antipode, "Антипод.")
    p = add("renorm", cmd_renorm, "Факторизация Биркгофа характера.")
    p.add_argument("--character", default="toy", help="toy или путь к JSON-файлу характера.")

    add("key", cmd_key, "Канонический ключ графа.")

    p = add("corpus", cmd_corpus, "Прогон приёмочных проверок.", graph=False)
    p.add_argument("--check", action="append", help="Имя проверки (можно несколько раз).")
    p.add_argument("--no-db", action="store_true", help="Не записывать прогон в базу.")
    p.add_argument("--db", help="Путь к базе (по умолчанию GRAPHMOTIVE_DB_PATH).")

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging(settings.log_path, settings.log_to_file)
    if getattr(args, "threads", None):
        settings.threads = args.threads
    if getattr(args, "budget", None):
        settings.budget = args.budget
    if getattr(args, "divisibility", None) is not None and len(args.divisibility) != 2:
        parser.print_usage(sys.stderr)
        print("--divisibility expects M,R", file=sys.stderr)
        return EXIT_USAGE

    try:
        return args.func(args)
    except CheckFailed as exc:
        log.error("[CHECK] %s: %s", args.command, exc)
        return EXIT_CHECK
    except SizeGuardError as exc:
        log.error("[GUARD] %s: %s", args.command, exc)
        return EXIT_GUARD
    except (GraphFormatError, GraphError, CharacterError, InexactDivisionError, ValueError) as exc:
        log.error("[INPUT] %s: %s", args.command, exc)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
