from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping

import sympy

from .errors import GraphFormatError, InexactDivisionError


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [operator.index(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _sympify(text: str, names: tuple[str, ...]) -> tuple[Any, tuple[sympy.Symbol, ...]]:
    symbols = tuple(sympy.Symbol(n) for n in names)
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals=dict(zip(names, symbols)))
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise GraphFormatError(f"cannot parse polynomial {text!r}: {exc}") from exc
    return sympy.expand(expr), symbols


def _term_text(coeff: Any, monomial: str) -> str:
    if not monomial:
        return str(coeff)
    if coeff == 1:
        return monomial
    if coeff == -1:
        return f"-{monomial}"
    return f"{coeff}*{monomial}"


def _join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    text = parts[0]
    for p in parts[1:]:
        text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return text


def _power_text(var: str, k: int) -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


@dataclass(frozen=True, eq=False)
class IntPoly:
    """Многочлен от T с целыми коэффициентами; coeffs[i] при T^i."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def const(cls, c: int) -> IntPoly:
        return cls((c,))

    @classmethod
    def one(cls) -> IntPoly:
        return cls((1,))

    @classmethod
    def zero(cls) -> IntPoly:
        return cls(())

    @classmethod
    def T(cls) -> IntPoly:
        return cls((0, 1))

    @classmethod
    def L(cls) -> IntPoly:
        return cls((1, 1))

    @staticmethod
    def _coerce(other: Any) -> IntPoly | None:
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly((other,))
        return None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash(("IntPoly", self.coeffs))

    def __add__(self, other: Any) -> IntPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> IntPoly:
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Any) -> IntPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> IntPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> IntPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPoly:
        if k < 0:
            raise ValueError("negative power of IntPoly")
        result = IntPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, other: IntPoly | int) -> IntPoly:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot divide IntPoly by {type(other).__name__}")
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        d = o.degree
        lc = o.coeffs[-1]
        quot = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1 - d, -1, -1):
            c = rem[i + d]
            if c == 0:
                continue
            if c % lc:
                raise InexactDivisionError(f"{self.render()} is not divisible by {o.render()}")
            k = c // lc
            quot[i] = k
            for j, oc in enumerate(o.coeffs):
                rem[i + j] -= k * oc
        if any(rem):
            raise InexactDivisionError(f"{self.render()} is not divisible by {o.render()}")
        return IntPoly(tuple(quot))

    def divides(self, other: IntPoly) -> bool:
        if self.is_zero():
            return other.is_zero()
        try:
            other.exact_div(self)
        except InexactDivisionError:
            return False
        return True

    def derivative(self) -> IntPoly:
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def __call__(self, x: Any) -> Any:
        # Горнер; x может быть int, Fraction, float или IntPoly
        acc: Any = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if isinstance(x, IntPoly) and not isinstance(acc, IntPoly):
            acc = IntPoly.const(acc)
        return acc

    def compose(self, inner: IntPoly) -> IntPoly:
        return self(inner)

    def to_sympy(self, var: str | sympy.Symbol = "T") -> Any:
        sym = sympy.Symbol(var) if isinstance(var, str) else var
        return sum((c * sym**i for i, c in enumerate(self.coeffs)), sympy.Integer(0))

    def render(self, var: str = "T") -> str:
        parts = [
            _term_text(c, _power_text(var, i))
            for i, c in reversed(list(enumerate(self.coeffs)))
            if c
        ]
        return _join_terms(parts)

    def split_known_factors(self) -> tuple[int, int, IntPoly]:
        """
        Отделяет T^a (T+1)^b точным делением. Для нуля возвращает (0, 0, 0).
        """
        if self.is_zero():
            return 0, 0, self
        rest, a, b = self, 0, 0
        while rest.coeffs[0] == 0:
            rest = IntPoly(rest.coeffs[1:])
            a += 1
        while rest.degree > 0 and rest(-1) == 0:
            rest = rest.exact_div(IntPoly.L())
            b += 1
        return a, b, rest

    def render_factored(self, var: str = "T") -> str:
        a, b, rest = self.split_known_factors()
        if self.is_zero() or (a == 0 and b == 0):
            return self.render(var)
        factors = []
        if a:
            factors.append(_power_text(var, a))
        if b:
            factors.append(f"({var}+1)" if b == 1 else f"({var}+1)^{b}")
        sign = ""
        if rest.degree == 0:
            c = rest.coeffs[0]
            if c == -1:
                sign = "-"
            elif c != 1:
                factors.insert(0, str(c))
        else:
            factors.append(f"({rest.render(var)})")
        return sign + "*".join(factors)

    @classmethod
    def parse(cls, text: str, var: str = "T") -> IntPoly:
        expr, (sym,) = _sympify(text, (var,))
        try:
            poly = sympy.Poly(expr, sym)
        except sympy.PolynomialError as exc:
            raise GraphFormatError(f"not a polynomial in {var}: {text!r}") from exc
        coeffs = list(reversed(poly.all_coeffs()))
        if not all(c.is_Integer for c in coeffs):
            raise GraphFormatError(f"non-integer coefficients in {text!r}")
        return cls(tuple(int(c) for c in coeffs))

    def to_json(self, var: str = "T") -> dict[str, Any]:
        return {"coefficients": list(self.coeffs), "text": self.render(var)}

    def __repr__(self) -> str:
        return f"IntPoly({self.render()})"


def _norm_terms(items: Iterable[tuple[Any, int]]) -> tuple[tuple[Any, int], ...]:
    acc: dict[Any, int] = {}
    for k, c in items:
        acc[k] = acc.get(k, 0) + c
    return tuple(sorted((k, c) for k, c in acc.items() if c))


@dataclass(frozen=True, eq=False)
class BiPoly:
    """Многочлен от (x, y): разреженный словарь (deg_x, deg_y) -> коэффициент."""

    terms: tuple[tuple[tuple[int, int], int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", _norm_terms(self.terms))

    @classmethod
    def from_dict(cls, d: Mapping[tuple[int, int], int]) -> BiPoly:
        return cls(tuple(d.items()))

    @classmethod
    def const(cls, c: int) -> BiPoly:
        return cls((((0, 0), c),))

    @classmethod
    def one(cls) -> BiPoly:
        return cls.const(1)

    @classmethod
    def zero(cls) -> BiPoly:
        return cls(())

    @classmethod
    def x(cls) -> BiPoly:
        return cls((((1, 0), 1),))

    @classmethod
    def y(cls) -> BiPoly:
        return cls((((0, 1), 1),))

    @staticmethod
    def _coerce(other: Any) -> BiPoly | None:
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, int):
            return BiPoly.const(other)
        return None

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        return hash(("BiPoly", self.terms))

    def __add__(self, other: Any) -> BiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return BiPoly(self.terms + o.terms)

    __radd__ = __add__

    def __neg__(self) -> BiPoly:
        return BiPoly(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: Any) -> BiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> BiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> BiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return BiPoly(
            tuple(
                ((i1 + i2, j1 + j2), c1 * c2)
                for (i1, j1), c1 in self.terms
                for (i2, j2), c2 in o.terms
            )
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> BiPoly:
        if k < 0:
            raise ValueError("negative power of BiPoly")
        result = BiPoly.one()
        for _ in range(k):
            result = result * self
        return result

    def leading(self) -> tuple[tuple[int, int], int]:
        # лексикографический порядок: сначала x, потом y
        return self.terms[-1]

    def exact_div(self, other: BiPoly | int) -> BiPoly:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot divide BiPoly by {type(other).__name__}")
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        (di, dj), lc = o.leading()
        rem = self
        quot: dict[tuple[int, int], int] = {}
        while rem:
            (ri, rj), rc = rem.leading()
            if ri < di or rj < dj or rc % lc:
                raise InexactDivisionError(f"{self.render()} is not divisible by {o.render()}")
            step = BiPoly((((ri - di, rj - dj), rc // lc),))
            quot[(ri - di, rj - dj)] = quot.get((ri - di, rj - dj), 0) + rc // lc
            rem = rem - step * o
        return BiPoly.from_dict(quot)

    def evaluate(self, x: Any, y: Any) -> Any:
        acc: Any = 0
        for (i, j), c in self.terms:
            acc = acc + c * (x**i) * (y**j)
        return acc

    def __call__(self, x: Any, y: Any) -> Any:
        return self.evaluate(x, y)

    def substitute(self, x: IntPoly, y: IntPoly) -> IntPoly:
        out = IntPoly.zero()
        for (i, j), c in self.terms:
            out = out + c * (x**i) * (y**j)
        return out

    def to_sympy(self, x: Any = None, y: Any = None) -> Any:
        x = sympy.Symbol("x") if x is None else x
        y = sympy.Symbol("y") if y is None else y
        return sum((c * x**i * y**j for (i, j), c in self.terms), sympy.Integer(0))

    def render(self, names: tuple[str, str] = ("x", "y")) -> str:
        ordered = sorted(self.terms, key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0]))
        parts = []
        for (i, j), c in ordered:
            mono = "*".join(p for p in (_power_text(names[0], i), _power_text(names[1], j)) if p)
            parts.append(_term_text(c, mono))
        return _join_terms(parts)

    @classmethod
    def parse(cls, text: str) -> BiPoly:
        expr, (xs, ys) = _sympify(text, ("x", "y"))
        try:
            poly = sympy.Poly(expr, xs, ys)
        except sympy.PolynomialError as exc:
            raise GraphFormatError(f"not a polynomial in x, y: {text!r}") from exc
        if not all(c.is_Integer for c in poly.coeffs()):
            raise GraphFormatError(f"non-integer coefficients in {text!r}")
        return cls(tuple(((int(i), int(j)), int(c)) for (i, j), c in poly.terms()))

    def to_json(self) -> dict[str, Any]:
        return {
            "terms": [[i, j, c] for (i, j), c in self.terms],
            "text": self.render(),
        }

    def __repr__(self) -> str:
        return f"BiPoly({self.render()})"


@dataclass(frozen=True, eq=False)
class EdgePoly:
    """
    Полилинейный многочлен от t_1..t_n.
    Моном хранится как отсортированный кортеж номеров переменных.
    """

    n: int
    terms: tuple[tuple[tuple[int, ...], int], ...] = ()

    def __post_init__(self) -> None:
        for mono, _ in self.terms:
            if len(set(mono)) != len(mono):
                raise ValueError(f"monomial {mono} is not multilinear")
            if any(i < 1 or i > self.n for i in mono):
                raise ValueError(f"monomial {mono} uses a variable outside t1..t{self.n}")
        object.__setattr__(
            self,
            "terms",
            _norm_terms((tuple(sorted(m)), c) for m, c in self.terms),
        )

    @classmethod
    def one(cls, n: int) -> EdgePoly:
        return cls(n, (((), 1),))

    @classmethod
    def zero(cls, n: int) -> EdgePoly:
        return cls(n, ())

    @classmethod
    def var(cls, i: int, n: int) -> EdgePoly:
        return cls(n, (((i,), 1),))

    @classmethod
    def from_monomials(cls, n: int, monomials: Iterable[Iterable[int]]) -> EdgePoly:
        return cls(n, tuple((tuple(m), 1) for m in monomials))

    def _coerce(self, other: Any) -> EdgePoly | None:
        if isinstance(other, EdgePoly):
            if other.n != self.n:
                raise ValueError(f"variable-count mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, int):
            return EdgePoly(self.n, (((), other),))
        return None

    @property
    def monomials(self) -> list[tuple[int, ...]]:
        return [m for m, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, EdgePoly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == _norm_terms([((), other)])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("EdgePoly", self.n, self.terms))

    def __add__(self, other: Any) -> EdgePoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return EdgePoly(self.n, self.terms + o.terms)

    __radd__ = __add__

    def __neg__(self) -> EdgePoly:
        return EdgePoly(self.n, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: Any) -> EdgePoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other: Any) -> EdgePoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        linear: dict[tuple[int, ...], int] = {}
        squared: dict[tuple[int, ...], int] = {}
        for m1, c1 in self.terms:
            s1 = set(m1)
            for m2, c2 in o.terms:
                if s1.isdisjoint(m2):
                    key = tuple(sorted(m1 + m2))
                    linear[key] = linear.get(key, 0) + c1 * c2
                else:
                    key = tuple(sorted(m1 + m2))
                    squared[key] = squared.get(key, 0) + c1 * c2
        if any(squared.values()):
            raise ValueError("product leaves the multilinear ring")
        return EdgePoly(self.n, tuple(linear.items()))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> EdgePoly:
        result = EdgePoly.one(self.n)
        for _ in range(k):
            result = result * self
        return result

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise IndexError(f"variable index {i} outside 1..{self.n}")

    def partial_derivative(self, i: int) -> EdgePoly:
        self._check_index(i)
        return EdgePoly(
            self.n,
            tuple((tuple(v for v in m if v != i), c) for m, c in self.terms if i in m),
        )

    def set_zero(self, i: int) -> EdgePoly:
        self._check_index(i)
        return EdgePoly(self.n, tuple((m, c) for m, c in self.terms if i not in m))

    def support(self) -> list[int]:
        return sorted({v for m, _ in self.terms for v in m})

    def constant_term(self) -> int:
        return dict(self.terms).get((), 0)

    def degrees(self) -> set[int]:
        return {len(m) for m, _ in self.terms}

    def relabel(self, mapping: Mapping[int, int], n: int) -> EdgePoly:
        terms = []
        for m, c in self.terms:
            try:
                terms.append((tuple(mapping[v] for v in m), c))
            except KeyError as exc:
                raise ValueError(f"variable t{exc.args[0]} has no image under the relabeling") from exc
        return EdgePoly(n, tuple(terms))

    def shifted(self, k: int, n: int) -> EdgePoly:
        return EdgePoly(n, tuple((tuple(v + k for v in m), c) for m, c in self.terms))

    def evaluate(self, point: Iterable[int]) -> int:
        pt = list(point)
        if len(pt) != self.n:
            raise ValueError(f"point has {len(pt)} coordinates, expected {self.n}")
        total = 0
        for m, c in self.terms:
            term = c
            for v in m:
                term *= pt[v - 1]
            total += term
        return total

    def eval_mod_p(self, point: Iterable[int], q: int) -> int:
        pt = [int(v) % q for v in point]
        if len(pt) != self.n:
            raise ValueError(f"point has {len(pt)} coordinates, expected {self.n}")
        total = 0
        for m, c in self.terms:
            term = c % q
            for v in m:
                term = term * pt[v - 1] % q
            total = (total + term) % q
        return total

    def render(self) -> str:
        parts = [_term_text(c, "*".join(f"t{v}" for v in m)) for m, c in self.terms]
        return _join_terms(parts)

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "monomials": [list(m) for m, _ in self.terms],
            "coefficients": [c for _, c in self.terms],
            "text": self.render(),
        }

    def __repr__(self) -> str:
        return f"EdgePoly({self.render()})"


@dataclass(frozen=True, eq=False)
class LaurentPoly:
    """Конечный ряд Лорана по z с рациональными коэффициентами."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "terms",
            _norm_terms((int(k), Fraction(c)) for k, c in self.terms),
        )

    @classmethod
    def from_dict(cls, d: Mapping[int, Any]) -> LaurentPoly:
        return cls(tuple(d.items()))

    @classmethod
    def const(cls, c: Any) -> LaurentPoly:
        return cls(((0, Fraction(c)),))

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls.const(1)

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls(())

    @classmethod
    def z(cls, k: int = 1) -> LaurentPoly:
        return cls(((k, Fraction(1)),))

    @staticmethod
    def _coerce(other: Any) -> LaurentPoly | None:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other)
        return None

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        return hash(("LaurentPoly", self.terms))

    def __add__(self, other: Any) -> LaurentPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LaurentPoly(self.terms + o.terms)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: Any) -> LaurentPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> LaurentPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> LaurentPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LaurentPoly(
            tuple((k1 + k2, c1 * c2) for k1, c1 in self.terms for k2, c2 in o.terms)
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            raise ValueError("negative power of LaurentPoly")
        result = LaurentPoly.one()
        for _ in range(k):
            result = result * self
        return result

    def polar_part(self) -> LaurentPoly:
        return LaurentPoly(tuple((k, c) for k, c in self.terms if k < 0))

    def regular_part(self) -> LaurentPoly:
        return LaurentPoly(tuple((k, c) for k, c in self.terms if k >= 0))

    def is_polar_free(self) -> bool:
        return all(k >= 0 for k, _ in self.terms)

    def is_pure_polar(self) -> bool:
        return all(k < 0 for k, _ in self.terms)

    def render(self, var: str = "z") -> str:
        parts = []
        for k, c in self.terms:
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append(_term_text(c, mono))
        return _join_terms(parts)

    def to_json(self) -> dict[str, str]:
        return {str(k): str(c) for k, c in self.terms}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> LaurentPoly:
        try:
            return cls(tuple((int(k), Fraction(str(v))) for k, v in data.items()))
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphFormatError(f"bad Laurent coefficients {dict(data)!r}: {exc}") from exc

    def __repr__(self) -> str:
        return f"LaurentPoly({self.render()})"
