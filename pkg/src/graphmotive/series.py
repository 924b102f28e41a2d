from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import comb, factorial
from typing import Any, Iterable, Sequence


class SeriesKind(str, Enum):
    EXPONENTIAL = "exp"
    ORDINARY = "ord"


@dataclass(frozen=True)
class SeriesTrunc:
    """
    Усечённый производящий ряд.
    Для EXPONENTIAL coefficients[m] хранит сам член последовательности (m! * коэффициент при s^m),
    поэтому вся арифметика остаётся целочисленной.
    """

    kind: SeriesKind
    coefficients: tuple[Any, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("series needs at least the constant term")
        object.__setattr__(self, "kind", SeriesKind(self.kind))
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def term(self, m: int) -> Any:
        return self.coefficients[m]

    def __iter__(self):
        return iter(self.coefficients)

    @property
    def _zero(self) -> Any:
        return self.coefficients[0] * 0

    @classmethod
    def from_terms(cls, kind: SeriesKind, terms: Iterable[Any]) -> SeriesTrunc:
        return cls(kind, tuple(terms))

    @classmethod
    def constant(cls, c: Any, kind: SeriesKind, order: int) -> SeriesTrunc:
        return cls(kind, (c,) + (c * 0,) * order)

    @classmethod
    def polynomial_in_s(cls, coeffs: Sequence[Any], kind: SeriesKind, order: int) -> SeriesTrunc:
        """Ряд из многочлена c0 + c1 s + c2 s^2 + ... (коэффициенты как при s^k)."""
        zero = coeffs[0] * 0
        terms = []
        for m in range(order + 1):
            c = coeffs[m] if m < len(coeffs) else zero
            if kind is SeriesKind.EXPONENTIAL:
                c = c * factorial(m)
            terms.append(c)
        return cls(kind, tuple(terms))

    @classmethod
    def geometric(cls, a: Any, kind: SeriesKind, order: int) -> SeriesTrunc:
        # e^{a s} для EXPONENTIAL и 1/(1 - a s) для ORDINARY: в обоих случаях члены a^m
        return cls(kind, tuple(a**m for m in range(order + 1)))

    def _check(self, other: SeriesTrunc) -> int:
        if self.kind is not other.kind:
            raise ValueError(f"series kind mismatch: {self.kind.value} vs {other.kind.value}")
        return min(self.order, other.order)

    def __add__(self, other: SeriesTrunc) -> SeriesTrunc:
        m = self._check(other)
        return SeriesTrunc(
            self.kind, tuple(a + b for a, b in zip(self.coefficients[: m + 1], other.coefficients))
        )

    def __neg__(self) -> SeriesTrunc:
        return SeriesTrunc(self.kind, tuple(-a for a in self.coefficients))

    def __sub__(self, other: SeriesTrunc) -> SeriesTrunc:
        return self + (-other)

    def scale(self, c: Any) -> SeriesTrunc:
        return SeriesTrunc(self.kind, tuple(a * c for a in self.coefficients))

    def __mul__(self, other: SeriesTrunc) -> SeriesTrunc:
        top = self._check(other)
        a, b = self.coefficients, other.coefficients
        out = []
        for m in range(top + 1):
            acc = a[0] * b[m]
            for k in range(1, m + 1):
                w = comb(m, k) if self.kind is SeriesKind.EXPONENTIAL else 1
                acc = acc + a[k] * b[m - k] * w
            out.append(acc)
        return SeriesTrunc(self.kind, tuple(out))

    def inverse(self) -> SeriesTrunc:
        """Обратный ряд; свободный член должен быть +1 или -1."""
        a0 = self.coefficients[0]
        if not (a0 == 1 or a0 == -1):
            raise ValueError("series inverse needs a constant term of +1 or -1")
        exp = self.kind is SeriesKind.EXPONENTIAL
        out = [a0]
        for m in range(1, self.order + 1):
            acc = self._zero
            for k in range(1, m + 1):
                w = comb(m, k) if exp else 1
                acc = acc + self.coefficients[k] * out[m - k] * w
            out.append(-(acc * a0))
        return SeriesTrunc(self.kind, tuple(out))

    def shift_s(self) -> SeriesTrunc:
        """Умножение на s с сохранением порядка усечения."""
        zero = self._zero
        if self.kind is SeriesKind.EXPONENTIAL:
            terms = [zero] + [self.coefficients[m - 1] * m for m in range(1, self.order + 1)]
        else:
            terms = [zero] + list(self.coefficients[:-1])
        return SeriesTrunc(self.kind, tuple(terms))

    def derivative(self) -> SeriesTrunc:
        if self.order == 0:
            return SeriesTrunc(self.kind, (self._zero,))
        if self.kind is SeriesKind.EXPONENTIAL:
            return SeriesTrunc(self.kind, self.coefficients[1:])
        return SeriesTrunc(
            self.kind,
            tuple(self.coefficients[m] * m for m in range(1, self.order + 1)),
        )

    def exact_div(self, d: Any) -> SeriesTrunc:
        return SeriesTrunc(self.kind, tuple(a.exact_div(d) for a in self.coefficients))

    def map(self, fn) -> SeriesTrunc:
        return SeriesTrunc(self.kind, tuple(fn(a) for a in self.coefficients))

    def truncate(self, order: int) -> SeriesTrunc:
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return SeriesTrunc(self.kind, self.coefficients[: order + 1])

    def to_json(self, render=None) -> dict[str, Any]:
        render = render or (lambda c: c.render() if hasattr(c, "render") else c)
        return {
            "kind": self.kind.value,
            "order": self.order,
            "terms": [render(c) for c in self.coefficients],
        }


def series_solve_order2(
    f2: Any,
    g2: Any,
    seed0: Any,
    seed1: Any,
    order: int,
    kind: SeriesKind = SeriesKind.EXPONENTIAL,
) -> SeriesTrunc:
    """a_{m+2} = f2*a_{m+1} + g2*a_m от двух начальных членов, до члена с номером order."""
    if order < 1:
        raise ValueError("order must be at least 1")
    terms = [seed0, seed1]
    while len(terms) <= order:
        terms.append(f2 * terms[-1] + g2 * terms[-2])
    return SeriesTrunc(kind, tuple(terms))
