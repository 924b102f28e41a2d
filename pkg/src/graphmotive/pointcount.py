from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
import sympy

from .config import settings
from .errors import BudgetExceededError, GraphError
from .graph import EdgeKind, MultiGraph, classify_edge, minor_map
from .kirchhoff import deletion_contraction_split, psi
from .motivic import MotivicClass
from .poly import EdgePoly, IntPoly

log = logging.getLogger("graphmotive.pointcount")

Terms = tuple[tuple[tuple[int, ...], int], ...]


@dataclass(frozen=True)
class CountResult:
    q: int
    n: int
    complement_count: int

    @property
    def zero_count(self) -> int:
        return self.q**self.n - self.complement_count

    def to_json(self) -> dict[str, int]:
        return {
            "q": self.q,
            "n": self.n,
            "complement_count": self.complement_count,
            "zero_count": self.zero_count,
        }


def _check_prime(q: int) -> None:
    if not sympy.isprime(q):
        raise ValueError(f"q={q} is not a prime")


def _eval_mod(terms: Terms, cols: dict[int, np.ndarray], q: int, size: int) -> np.ndarray:
    acc = np.zeros(size, dtype=np.int64)
    for mono, c in terms:
        term = np.full(size, c % q, dtype=np.int64)
        for v in mono:
            term = term * cols[v] % q
        acc = (acc + term) % q
    return acc


def _chunked(
    variables: Sequence[int],
    q: int,
    fn: Callable[[dict[int, np.ndarray], int], int],
    threads: int | None = None,
    chunk_size: int | None = None,
) -> int:
    """Сумма fn по всем точкам F_q^k (k = len(variables)), кусками по chunk_size точек."""
    threads = threads or settings.threads
    chunk = chunk_size or settings.chunk_size
    total = q ** len(variables)

    def work(start: int) -> int:
        size = min(chunk, total - start)
        idx = np.arange(start, start + size, dtype=np.int64)
        cols: dict[int, np.ndarray] = {}
        for v in variables:
            cols[v] = idx % q
            idx = idx // q
        return fn(cols, size)

    starts = range(0, total, chunk)
    if threads == 1 or len(starts) == 1:
        return sum(work(s) for s in starts)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(work, starts))


def _restrict(polys: Sequence[EdgePoly]) -> tuple[list[EdgePoly], int]:
    """Оставляет только переменные из носителя; возвращает многочлены и число выброшенных переменных."""
    n = polys[0].n
    support = sorted({v for p in polys for v in p.support()})
    mapping = {v: i for i, v in enumerate(support, start=1)}
    return [p.relabel(mapping, len(support)) for p in polys], n - len(support)


def _check_budget(cost: int, budget: int | None) -> None:
    budget = budget or settings.budget
    if cost > budget:
        raise BudgetExceededError(f"counting needs ~{cost} evaluations, budget is {budget}")


def choose_split(p: EdgePoly) -> int:
    """Переменная, минимизирующая max(|F|, |G|); при равенстве - последняя."""
    best, best_cost = p.n, None
    for v in range(1, p.n + 1):
        cost = max(len(p.partial_derivative(v)), len(p.set_zero(v)))
        if best_cost is None or cost <= best_cost:
            best, best_cost = v, cost
    return best


def count_complement(
    p: EdgePoly,
    q: int,
    *,
    threads: int | None = None,
    chunk_size: int | None = None,
    budget: int | None = None,
) -> CountResult:
    """
    Число точек F_q^n, где p != 0. Исключение переменной t_s: p = t_s F + G,
    при F != 0 ровно один корень по t_s, при F = G = 0 их q.
    """
    _check_prime(q)
    n = p.n
    (r,), absent = _restrict([p])
    k = r.n
    if k == 0:
        complement = q**n if r.constant_term() % q else 0
        return CountResult(q, n, complement)

    s = choose_split(r)
    F, G = r.partial_derivative(s), r.set_zero(s)
    others = [v for v in range(1, k + 1) if v != s]
    _check_budget(q ** (k - 1) * (len(F) + len(G)), budget)

    def zeros(cols: dict[int, np.ndarray], size: int) -> int:
        fv = _eval_mod(F.terms, cols, q, size)
        gv = _eval_mod(G.terms, cols, q, size)
        return int(np.count_nonzero(fv)) + q * int(np.count_nonzero((fv == 0) & (gv == 0)))

    zero_count = _chunked(others, q, zeros, threads, chunk_size)
    complement = (q**k - zero_count) * q**absent
    log.info("[COUNT] q=%s n=%s support=%s split=t%s complement=%s", q, n, k, s, complement)
    return CountResult(q, n, complement)


def count_common_zeros(
    polys: Sequence[EdgePoly],
    q: int,
    *,
    threads: int | None = None,
    chunk_size: int | None = None,
    budget: int | None = None,
) -> int:
    _check_prime(q)
    if not polys:
        raise ValueError("count_common_zeros needs at least one polynomial")
    restricted, absent = _restrict(polys)
    k = restricted[0].n
    _check_budget(q**k * sum(len(p) for p in restricted), budget)

    def common(cols: dict[int, np.ndarray], size: int) -> int:
        mask = np.ones(size, dtype=bool)
        for p in restricted:
            mask &= _eval_mod(p.terms, cols, q, size) == 0
        return int(np.count_nonzero(mask))

    return _chunked(list(range(1, k + 1)), q, common, threads, chunk_size) * q**absent


# --- интерполяция класса ---


@dataclass
class ClassCandidate:
    poly: IntPoly | None
    sample_primes: list[int]
    holdout: int
    exact_fit: bool
    counts: dict[int, int] = field(default_factory=dict)
    interpolant: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "poly": self.poly.render() if self.poly is not None else None,
            "factored": self.poly.render_factored() if self.poly is not None else None,
            "sample_primes": self.sample_primes,
            "holdout": self.holdout,
            "exact_fit": self.exact_fit,
            "counts": {str(q): c for q, c in self.counts.items()},
            "interpolant": self.interpolant,
        }


def interpolate_class(g: MultiGraph, primes: Sequence[int], holdout: int) -> ClassCandidate:
    """
    Интерполяция числа точек дополнения многочленом от q степени <= n и подстановка q = T + 1.
    exact_fit требует целых коэффициентов и совпадения в контрольном простом.
    """
    primes = sorted(set(primes))
    n = g.n_edges
    if len(primes) < n + 1:
        raise ValueError(f"need at least {n + 1} primes for {n} edges, got {len(primes)}")
    if holdout in primes:
        raise ValueError("holdout prime must differ from the sample primes")
    p = psi(g).psi
    counts = {q: count_complement(p, q).complement_count for q in [*primes, holdout]}

    qs, Ts = sympy.Symbol("q"), sympy.Symbol("T")
    expr = sympy.expand(sympy.interpolate([(q, counts[q]) for q in primes], qs).subs(qs, Ts + 1))
    coeffs = sympy.Poly(expr, Ts).all_coeffs() if expr != 0 else []
    poly = None
    if all(c.is_Integer for c in coeffs):
        poly = IntPoly(tuple(int(c) for c in reversed(coeffs)))
    exact = poly is not None and poly(holdout - 1) == counts[holdout]
    log.info("[INTERPOLATE] edges=%s primes=%s holdout=%s exact=%s", n, primes, holdout, exact)
    return ClassCandidate(poly, list(primes), holdout, exact, counts, str(expr))


# --- проверки ---


def class_report(value: IntPoly, g: MultiGraph, primes: Sequence[int]) -> dict[int, dict[str, int | bool]]:
    p = psi(g).psi
    out: dict[int, dict[str, int | bool]] = {}
    for q in primes:
        count = count_complement(p, q).complement_count
        predicted = value(q - 1)
        out[q] = {"count": count, "predicted": predicted, "ok": count == predicted}
    return out


def verify_class(c: MotivicClass, g: MultiGraph, primes: Sequence[int]) -> bool:
    if c.value is None:
        raise GraphError("class has no value to verify")
    return all(row["ok"] for row in class_report(c.value, g, primes).values())


@dataclass(frozen=True)
class DelconRow:
    q: int
    complement: int
    intersection_zeros: int
    deletion_complement: int
    predicted: int
    psi_f_zeros: int

    @property
    def identity_ok(self) -> bool:
        return self.complement == self.predicted

    @property
    def intersection_ok(self) -> bool:
        return self.psi_f_zeros == self.q * self.intersection_zeros

    def to_json(self) -> dict[str, Any]:
        return {
            "q": self.q,
            "complement": self.complement,
            "intersection_zeros": self.intersection_zeros,
            "deletion_complement": self.deletion_complement,
            "predicted": self.predicted,
            "identity_ok": self.identity_ok,
            "psi_f_zeros": self.psi_f_zeros,
            "intersection_ok": self.intersection_ok,
        }


@dataclass
class DelconReport:
    edge: int
    rows: list[DelconRow]

    @property
    def ok(self) -> bool:
        return all(r.identity_ok and r.intersection_ok for r in self.rows)

    def to_json(self) -> dict[str, Any]:
        return {"edge": self.edge, "ok": self.ok, "rows": [r.to_json() for r in self.rows]}


def verify_delcon(g: MultiGraph, e: int, primes: Sequence[int]) -> DelconReport:
    """
    #(A^n \\ X_G) = q (q^{n-1} - #{F = G = 0}) - #(A^{n-1} \\ X_{G\\e}),
    а также #{Psi = F = 0} = q #{F = G = 0}.
    """
    kind = classify_edge(g, e)
    if kind is not EdgeKind.REGULAR:
        raise GraphError(f"edge {e} is a {kind.value} edge, expected regular")
    n = g.n_edges
    full = psi(g).psi
    split = deletion_contraction_split(g, e)
    mapping = minor_map(g, e)
    F, G = split.F.relabel(mapping, n - 1), split.G.relabel(mapping, n - 1)
    deleted = psi(g.delete(e)).psi

    rows = []
    for q in primes:
        inter = count_common_zeros([F, G], q)
        del_comp = count_complement(deleted, q).complement_count
        rows.append(
            DelconRow(
                q=q,
                complement=count_complement(full, q).complement_count,
                intersection_zeros=inter,
                deletion_complement=del_comp,
                predicted=q * (q ** (n - 1) - inter) - del_comp,
                psi_f_zeros=count_common_zeros([full, split.F], q),
            )
        )
    report = DelconReport(e, rows)
    log.info("[DELCON] edges=%s edge=%s primes=%s ok=%s", n, e, list(primes), report.ok)
    return report
