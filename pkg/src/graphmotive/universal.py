from __future__ import annotations

import cmath
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .errors import CheckFailed, GraphFormatError
from .poly import BiPoly, IntPoly
from .series import SeriesKind, SeriesTrunc

log = logging.getLogger("graphmotive.universal")

FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"

Matrix3 = tuple[tuple[Any, Any, Any], tuple[Any, Any, Any], tuple[Any, Any, Any]]


class RepKind(str, Enum):
    MOTIVIC = "motivic"
    TUTTE = "tutte"
    CSM = "csm"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Rep3:
    """
    Представление моноида умножения ребра матрицами 3x3 над кольцом коэффициентов.
    Столбцы упорядочены как (g, f, h).
    """

    kind: RepKind
    f2: Any
    g2: Any
    h2: Any
    Z: Any

    @property
    def one(self) -> Any:
        return self.f2 * 0 + 1

    @property
    def zero(self) -> Any:
        return self.f2 * 0

    @property
    def A1(self) -> Matrix3:
        z0, z1 = self.zero, self.one
        return ((z0, self.g2, z0), (z1, self.f2, z0), (z0, self.h2, self.Z))


def instantiate(kind: RepKind | str) -> Rep3:
    kind = RepKind(kind)
    if kind is RepKind.MOTIVIC:
        T = IntPoly.T()
        return Rep3(kind, T - 1, T, T + 1, T)
    if kind is RepKind.TUTTE:
        y = BiPoly.y()
        return Rep3(kind, BiPoly.zero(), BiPoly.one(), 1 + y, y)
    if kind is RepKind.CUSTOM:
        raise ValueError("custom representations are built with Rep3 directly")
    T = IntPoly.T()
    return Rep3(kind, 2 * T - 1, -(T * (T - 1)), IntPoly.one(), T)


def coefficient_sequences(rep: Rep3, order: int) -> tuple[list[Any], list[Any], list[Any]]:
    """f_m, g_m, h_m для m = 0..order из начальных условий f=(0,1), g=(1,0), h=(0,0)."""
    f = [rep.zero, rep.one]
    while len(f) < order + 2:
        f.append(rep.f2 * f[-1] + rep.g2 * f[-2])
    g = [rep.one] + [rep.g2 * f[m] for m in range(order + 1)]
    h = [rep.zero]
    for m in range(order + 1):
        h.append(rep.h2 * f[m] + rep.Z * h[m])
    return f[: order + 1], g[: order + 1], h[: order + 1]


def coefficients(rep: Rep3, m: int) -> tuple[Any, Any, Any]:
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    f, g, h = coefficient_sequences(rep, m)
    return f[m], g[m], h[m]


def mat_mul(a: Matrix3, b: Matrix3) -> Matrix3:
    return tuple(
        tuple(
            a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j]
            for j in range(3)
        )
        for i in range(3)
    )


def identity(rep: Rep3) -> Matrix3:
    z0, z1 = rep.zero, rep.one
    return ((z1, z0, z0), (z0, z1, z0), (z0, z0, z1))


def matrix_power(rep: Rep3, m: int) -> Matrix3:
    out = identity(rep)
    for _ in range(m):
        out = mat_mul(out, rep.A1)
    return out


def matrix_shape(rep: Rep3, m: int) -> Matrix3:
    """A_m, собранная из последовательностей коэффициентов."""
    f, g, h = coefficient_sequences(rep, m + 1)
    z0 = rep.zero
    return (
        (g[m], g[m + 1], z0),
        (f[m], f[m + 1], z0),
        (h[m], h[m + 1], rep.Z**m),
    )


def column(matrix: Matrix3, j: int) -> tuple[Any, Any, Any]:
    return matrix[0][j], matrix[1][j], matrix[2][j]


# --- проверки замкнутых формул в числовой точке ---


def _at(value: Any, sample: Mapping[str, Any]) -> Fraction:
    if isinstance(value, IntPoly):
        return Fraction(value(Fraction(sample["T"])))
    if isinstance(value, BiPoly):
        return Fraction(value.evaluate(Fraction(sample.get("x", 0)), Fraction(sample["y"])))
    return Fraction(value)


def _fraction_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    num, den = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if num * num == x.numerator and den * den == x.denominator:
        return Fraction(num, den)
    return None


@dataclass
class LambdaReport:
    kind: str
    sample: dict[str, str]
    discriminant: Fraction
    lam_plus: Any
    lam_minus: Any
    exact: bool
    path: str
    checked: int = 0
    mismatches: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "sample": self.sample,
            "discriminant": str(self.discriminant),
            "lambda_plus": str(self.lam_plus),
            "lambda_minus": str(self.lam_minus),
            "exact": self.exact,
            "path": self.path,
            "checked": self.checked,
            "mismatches": self.mismatches,
            "ok": self.ok,
        }


def _close(a: Any, b: Any, exact: bool) -> bool:
    if exact:
        return a == b
    return abs(complex(a) - complex(b)) <= 1e-9 * max(1.0, abs(complex(b)))


def lambda_roots_numeric(rep: Rep3, sample: Mapping[str, Any], order: int = 10) -> LambdaReport:
    """
    Сравнивает рекурсию с формулами через lambda_{+-} = (f2 +- sqrt(f2^2 + 4 g2))/2 в точке sample.
    Точная арифметика, если дискриминант полный квадрат; иначе complex с допуском 1e-9.
    """
    f2, g2, h2, Z = (_at(v, sample) for v in (rep.f2, rep.g2, rep.h2, rep.Z))
    disc = f2 * f2 + 4 * g2
    f, g, h = coefficient_sequences(rep, order)
    fv = [_at(v, sample) for v in f]
    gv = [_at(v, sample) for v in g]
    hv = [_at(v, sample) for v in h]

    if disc == 0:
        lam = f2 / 2
        lp = lm = lam
        exact = True
        path = "double-root"

        def f_closed(m: int) -> Any:
            return m * lam ** (m - 1) if m else Fraction(0)

        def g_closed(m: int) -> Any:
            return -(m - 1) * lam**m

        def h_closed(m: int) -> Any:
            return h2 * sum((Z ** (m - 1 - k) * f_closed(k) for k in range(m)), Fraction(0))

    else:
        root = _fraction_sqrt(disc)
        exact = root is not None
        r: Any = root if exact else cmath.sqrt(complex(disc))
        lp, lm = (f2 + r) / 2, (f2 - r) / 2
        delta = lp - lm

        def f_closed(m: int) -> Any:
            return (lp**m - lm**m) / delta

        def g_closed(m: int) -> Any:
            return (lp * lm**m - lm * lp**m) / delta

        if _close(Z, lp, exact) or _close(Z, lm, exact):
            path = "degenerate"
            other = lm if _close(Z, lp, exact) else lp

            def h_closed(m: int) -> Any:
                if m == 0:
                    return 0
                return h2 / (Z - other) * (m * Z ** (m - 1) - (Z**m - other**m) / (Z - other))

        else:
            path = "generic"

            def h_closed(m: int) -> Any:
                return h2 / delta * (
                    (lp**m - Z**m) / (lp - Z) - (lm**m - Z**m) / (lm - Z)
                )

    report = LambdaReport(
        rep.kind.value, {k: str(v) for k, v in sample.items()}, disc, lp, lm, exact, path
    )
    for m in range(order + 1):
        report.checked += 1
        if not (
            _close(f_closed(m), fv[m], exact)
            and _close(g_closed(m), gv[m], exact)
            and _close(h_closed(m), hv[m], exact)
        ):
            report.mismatches.append(m)
    log.debug("[LAMBDA] kind=%s path=%s exact=%s ok=%s", rep.kind.value, path, exact, report.ok)
    return report


# --- делимость ---


@dataclass
class DivisibilityReport:
    m: int
    r: int
    quotients: list[Any]
    ok: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "r": self.r,
            "quotients": [q.render() if hasattr(q, "render") else str(q) for q in self.quotients],
            "ok": self.ok,
        }


def divisibility_check(rep: Rep3, m: int, r: int) -> DivisibilityReport:
    """
    f_m делит f_{rm}; частные q_k = f_{km}/f_m задаются рекурсией
    q_{k+2} = (f2 f_m + 2 g2 f_{m-1}) q_{k+1} - (-g2)^m q_k, q_0 = 0, q_1 = 1.
    """
    if m < 1 or r < 1:
        raise ValueError("divisibility_check needs m >= 1 and r >= 1")
    f, _, _ = coefficient_sequences(rep, r * m)
    lead = rep.f2 * f[m] + 2 * rep.g2 * f[m - 1]
    tail = (-rep.g2) ** m
    q = [rep.zero, rep.one]
    while len(q) <= r:
        q.append(lead * q[-1] - tail * q[-2])

    for k in range(r + 1):
        if q[k] * f[m] != f[k * m]:
            raise CheckFailed(f"quotient certificate fails at k={k} for m={m}")
    if f[m]:
        if f[r * m].exact_div(f[m]) != q[r]:
            raise CheckFailed(f"f_{r * m} / f_{m} disagrees with the certificate")
    return DivisibilityReport(m, r, q[1:], True)


# --- гипотеза для классов CSM ---


@dataclass(frozen=True)
class CsmBase:
    graph: IntPoly
    deleted: IntPoly
    contracted: IntPoly


def csm_predict(base: CsmBase, m: int) -> IntPoly:
    """Класс графа с ребром, заменённым на m+1 параллельных: f_{m+1} C + g_{m+1} C\\e + h_{m+1} C/e."""
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    f, g, h = coefficients(instantiate(RepKind.CSM), m + 1)
    return f * base.graph + g * base.deleted + h * base.contracted


def load_csm_fixture(path: str | Path | None = None) -> dict[str, Any]:
    p = Path(path) if path else FIXTURES_DIR / "csm_base.json"
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphFormatError(f"cannot read csm fixture {p}: {exc}") from exc
    values = data.get("values") or {}
    data["parsed"] = {name: IntPoly.parse(text) for name, text in values.items()}
    if data.get("expected"):
        data["expected_poly"] = IntPoly.parse(data["expected"])
    return data


def csm_doubled_triangle(fixture: Mapping[str, Any]) -> IntPoly:
    """
    Удвоение всех трёх рёбер треугольника по одному.
    Промежуточные классы получаются из правил моста, петли и склейки в вершине.
    """
    v = fixture["parsed"]
    tri, edge, loop, b2 = v["triangle"], v["edge"], v["loop"], v["banana2"]
    one_doubled = csm_predict(CsmBase(tri, edge * edge, b2), 1)
    b3 = csm_predict(CsmBase(b2, edge, loop), 1)
    two_doubled = csm_predict(CsmBase(one_doubled, edge * b2, b3), 1)
    b4 = csm_predict(CsmBase(b3, b2, loop * loop), 1)
    return csm_predict(CsmBase(two_doubled, b2 * b2, b4), 1)


@dataclass
class CsmSeriesReport:
    order: int
    diffeq_ok: bool
    closed_forms_ok: bool

    @property
    def ok(self) -> bool:
        return self.diffeq_ok and self.closed_forms_ok

    def to_json(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "diffeq_ok": self.diffeq_ok,
            "closed_forms_ok": self.closed_forms_ok,
            "ok": self.ok,
        }


def csm_series_check(order: int = 10) -> CsmSeriesReport:
    """
    Экспоненциальные ряды F, G, H для CSM-представления:
    F'' = f2 F' + g2 F, G' = g2 F, H' = h2 F + Z H; и замкнутые формы
    f = e^{Ts} - e^{(T-1)s}, g = T e^{(T-1)s} - (T-1) e^{Ts}, h = e^{(T-1)s} + s e^{Ts} - e^{Ts}.
    """
    rep = instantiate(RepKind.CSM)
    kind = SeriesKind.EXPONENTIAL
    f, g, h = coefficient_sequences(rep, order + 2)
    F, G, H = (SeriesTrunc(kind, tuple(seq)) for seq in (f, g, h))

    dF = F.derivative()
    diffeq_ok = (
        dF.derivative().truncate(order) == (dF.scale(rep.f2) + F.scale(rep.g2)).truncate(order)
        and G.derivative().truncate(order) == F.scale(rep.g2).truncate(order)
        and H.derivative().truncate(order) == (F.scale(rep.h2) + H.scale(rep.Z)).truncate(order)
    )

    T = IntPoly.T()
    eT = SeriesTrunc.geometric(T, kind, order)
    eT1 = SeriesTrunc.geometric(T - 1, kind, order)
    closed_f = eT - eT1
    closed_g = eT1.scale(T) - eT.scale(T - 1)
    closed_h = eT1 + eT.shift_s() - eT
    closed_ok = (
        closed_f == F.truncate(order)
        and closed_g == G.truncate(order)
        and closed_h == H.truncate(order)
    )
    return CsmSeriesReport(order, diffeq_ok, closed_ok)
