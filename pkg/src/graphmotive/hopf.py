from __future__ import annotations

import itertools
import json
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

from .config import settings
from .errors import CharacterError, CheckFailed, GraphError, GraphFormatError, SizeGuardError
from .graph import (
    CanonicalKey,
    MultiGraph,
    canonical_key,
    components,
    graph_from_key,
    is_1pi,
    render_key,
    stats,
)
from .poly import LaurentPoly

log = logging.getLogger("graphmotive.hopf")

# моном - отсортированный кортеж канонических ключей связных 1PI-графов; () = 1
Monomial = tuple[CanonicalKey, ...]


def monomial(*graphs: MultiGraph) -> Monomial:
    return tuple(sorted(canonical_key(g) for g in graphs))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


@lru_cache(maxsize=None)
def _names() -> dict[CanonicalKey, str]:
    from .families import NAMED, banana, bouquet

    names: dict[CanonicalKey, str] = {}
    for m in range(2, 7):
        names[canonical_key(banana(m))] = f"banana:{m}"
    for k in range(1, 5):
        names[canonical_key(bouquet(k))] = "loop" if k == 1 else f"bouquet:{k}"
    for name, build in NAMED.items():
        names.setdefault(canonical_key(build()), name)
    return names


def render_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(_names().get(k, render_key(k)) for k in m)


def _coeff_text(c: int, body: str) -> str:
    return body if c == 1 else f"{c}*{body}"


@dataclass(frozen=True)
class GraphSum:
    """Линейная комбинация мономов от графов (значения антипода)."""

    terms: tuple[tuple[Monomial, int], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[Monomial, int] = {}
        for m, c in self.terms:
            merged[m] = merged.get(m, 0) + c
        object.__setattr__(self, "terms", tuple(sorted((m, c) for m, c in merged.items() if c)))

    @classmethod
    def of(cls, m: Monomial, c: int = 1) -> GraphSum:
        return cls(((m, c),))

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: GraphSum) -> GraphSum:
        return GraphSum(self.terms + other.terms)

    def __neg__(self) -> GraphSum:
        return GraphSum(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: GraphSum) -> GraphSum:
        return self + (-other)

    def __mul__(self, other: GraphSum | int) -> GraphSum:
        if isinstance(other, int):
            return GraphSum(tuple((m, c * other) for m, c in self.terms))
        return GraphSum(
            tuple((_mono_mul(m1, m2), c1 * c2) for m1, c1 in self.terms for m2, c2 in other.terms)
        )

    __rmul__ = __mul__

    def evaluate(self, u: Character) -> LaurentPoly:
        return sum((c * u.evaluate(m) for m, c in self.terms), LaurentPoly.zero())

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = [_coeff_text(abs(c), render_monomial(m)) for m, c in self.terms]
        text = ("-" if self.terms[0][1] < 0 else "") + parts[0]
        for (_, c), p in zip(self.terms[1:], parts[1:]):
            text += (" - " if c < 0 else " + ") + p
        return text

    def to_json(self) -> dict[str, Any]:
        return {
            "text": self.render(),
            "terms": [{"monomial": render_monomial(m), "coefficient": c} for m, c in self.terms],
        }


@dataclass(frozen=True)
class GraphTensorSum:
    """Сумма c * (левый моном ⊗ правый моном) в нормальной форме."""

    terms: tuple[tuple[tuple[Monomial, Monomial], int], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[tuple[Monomial, Monomial], int] = {}
        for pair, c in self.terms:
            merged[pair] = merged.get(pair, 0) + c
        object.__setattr__(self, "terms", tuple(sorted((p, c) for p, c in merged.items() if c)))

    def as_dict(self) -> dict[tuple[Monomial, Monomial], int]:
        return dict(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: GraphTensorSum) -> GraphTensorSum:
        return GraphTensorSum(self.terms + other.terms)

    def __mul__(self, other: GraphTensorSum) -> GraphTensorSum:
        return GraphTensorSum(
            tuple(
                ((_mono_mul(l1, l2), _mono_mul(r1, r2)), c1 * c2)
                for (l1, r1), c1 in self.terms
                for (l2, r2), c2 in other.terms
            )
        )

    def proper_terms(self) -> list[tuple[Monomial, Monomial, int]]:
        """Слагаемые без Γ⊗1 и 1⊗Γ."""
        return [(left, right, c) for (left, right), c in self.terms if left and right]

    def render(self) -> str:
        parts = [
            _coeff_text(c, f"{render_monomial(left)} ⊗ {render_monomial(right)}")
            for (left, right), c in self.terms
        ]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict[str, Any]:
        return {
            "text": self.render(),
            "terms": [
                {"left": render_monomial(left), "right": render_monomial(right), "coefficient": c}
                for (left, right), c in self.terms
            ],
        }


def _require_generator(g: MultiGraph) -> None:
    if g.n_edges > settings.hopf_max_edges:
        raise SizeGuardError(
            f"hopf: {g.n_edges} edges exceed the guard {settings.hopf_max_edges}"
        )
    if not is_1pi(g):
        raise GraphError("hopf operations need a connected 1PI graph")


@lru_cache(maxsize=4096)
def _coproduct_key(key: CanonicalKey) -> GraphTensorSum:
    g = graph_from_key(key)
    whole: Monomial = (key,)
    terms: list[tuple[tuple[Monomial, Monomial], int]] = [((whole, ()), 1), (((), whole), 1)]
    ids = list(g.edge_ids)
    for size in range(1, g.n_edges):
        for subset in itertools.combinations(ids, size):
            parts = components(g.subgraph(subset))
            if not all(is_1pi(p) for p in parts):
                continue
            left = monomial(*parts)
            right = (canonical_key(g.quotient(subset)),)
            terms.append(((left, right), 1))
    result = GraphTensorSum(tuple(terms))
    log.debug("[HOPF] coproduct edges=%s terms=%s", g.n_edges, len(result))
    return result


def coproduct(g: MultiGraph) -> GraphTensorSum:
    """
    Δ(Γ) = Γ⊗1 + 1⊗Γ + Σ γ⊗Γ/γ по собственным непустым подмножествам рёбер,
    все компоненты которых 1PI.
    """
    _require_generator(g)
    return _coproduct_key(canonical_key(g))


def coproduct_monomial(m: Monomial) -> GraphTensorSum:
    result = GraphTensorSum(((((), ()), 1),))
    for key in m:
        result = result * coproduct(graph_from_key(key))
    return result


_ANTIPODE: dict[CanonicalKey, GraphSum] = {}
_LOCK = threading.Lock()


def clear_cache() -> None:
    with _LOCK:
        _ANTIPODE.clear()


def _antipode_monomial(m: Monomial) -> GraphSum:
    result = GraphSum.of(())
    for key in m:
        result = result * _antipode_key(key)
    return result


def _antipode_key(key: CanonicalKey) -> GraphSum:
    hit = _ANTIPODE.get(key)
    if hit is not None:
        return hit
    value = GraphSum.of((key,), -1)
    for left, right, c in _coproduct_key(key).proper_terms():
        value = value - _antipode_monomial(left) * GraphSum.of(right, c)
    with _LOCK:
        return _ANTIPODE.setdefault(key, value)


def antipode(g: MultiGraph) -> GraphSum:
    """S(Γ) = -Γ - Σ S(γ) Γ/γ."""
    _require_generator(g)
    return _antipode_key(canonical_key(g))


def counit_check(g: MultiGraph) -> bool:
    """m(S⊗id)Δ(Γ) = 0."""
    _require_generator(g)
    total = GraphSum()
    for (left, right), c in coproduct(g).terms:
        total = total + _antipode_monomial(left) * GraphSum.of(right, c)
    return total.is_zero()


TripleKey = tuple[Monomial, Monomial, Monomial]


def _triple(pairs: Iterable[tuple[TripleKey, int]]) -> dict[TripleKey, int]:
    out: dict[TripleKey, int] = {}
    for k, c in pairs:
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def iterated_coproducts(g: MultiGraph) -> tuple[dict[TripleKey, int], dict[TripleKey, int]]:
    """(Δ⊗id)Δ и (id⊗Δ)Δ в нормальной форме тройных тензоров."""
    delta = coproduct(g)
    left = _triple(
        ((a, b, right), c * c2)
        for (mono, right), c in delta.terms
        for (a, b), c2 in coproduct_monomial(mono).terms
    )
    right = _triple(
        ((mono, a, b), c * c2)
        for (mono, r), c in delta.terms
        for (a, b), c2 in coproduct_monomial(r).terms
    )
    return left, right


def is_coassociative(g: MultiGraph) -> bool:
    left, right = iterated_coproducts(g)
    return left == right


# --- характеры и факторизация Биркгофа ---


@dataclass
class Character:
    """
    Гомоморфизм алгебры графов в многочлены Лорана. Значения на образующих задаются
    таблицей по canonical_key или правилом от графа; на мономах - произведение.
    """

    name: str
    values: dict[CanonicalKey, LaurentPoly] = field(default_factory=dict)
    rule: Callable[[MultiGraph], LaurentPoly] | None = None
    _minus: dict[CanonicalKey, LaurentPoly] = field(default_factory=dict, repr=False)

    def generator(self, key: CanonicalKey) -> LaurentPoly:
        hit = self.values.get(key)
        if hit is not None:
            return hit
        if self.rule is None:
            raise CharacterError(f"character {self.name!r} is undefined on {render_key(key)}")
        return self.rule(graph_from_key(key))

    def evaluate(self, m: Monomial) -> LaurentPoly:
        value = LaurentPoly.one()
        for key in m:
            value = value * self.generator(key)
        return value

    def __call__(self, g: MultiGraph) -> LaurentPoly:
        return self.evaluate(monomial(*[c for c in components(g) if c.n_edges]))


def _toy(g: MultiGraph) -> LaurentPoly:
    return LaurentPoly.z(-stats(g).b1) * (1 + LaurentPoly.z()) ** g.n_edges


def toy_character() -> Character:
    """U(Γ) = z^{-b1} (1+z)^{#E}."""
    return Character("toy", rule=_toy)


def load_character(path: str | Path) -> Character:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        values: dict[CanonicalKey, LaurentPoly] = {}
        for item in data["generators"]:
            g = MultiGraph.from_edges(tuple(pair) for pair in item["edges"])
            values[canonical_key(g)] = LaurentPoly.from_json(item["laurent"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GraphFormatError):
            raise
        raise GraphFormatError(f"bad character file {path}: {exc}") from exc
    return Character(Path(path).stem, values)


def rota_baxter_polar(x: LaurentPoly) -> LaurentPoly:
    return x.polar_part()


def rota_baxter_identity(x: LaurentPoly, y: LaurentPoly) -> bool:
    """R(x)R(y) = R(xR(y)) + R(R(x)y) - R(xy), вес -1."""
    R = rota_baxter_polar
    return R(x) * R(y) == R(x * R(y)) + R(R(x) * y) - R(x * y)


@dataclass(frozen=True)
class BirkhoffResult:
    u: LaurentPoly
    bar: LaurentPoly
    u_minus: LaurentPoly
    u_plus: LaurentPoly

    @property
    def polar_free(self) -> bool:
        return self.u_plus.is_polar_free() and self.u_minus.is_pure_polar()

    def to_json(self) -> dict[str, Any]:
        return {
            "u": self.u.render(),
            "bar": self.bar.render(),
            "u_minus": self.u_minus.render(),
            "u_plus": self.u_plus.render(),
            "polar_free": self.polar_free,
        }


def _bar(u: Character, key: CanonicalKey) -> LaurentPoly:
    value = u.generator(key)
    for left, right, c in _coproduct_key(key).proper_terms():
        value = value + Fraction(c) * _minus_monomial(u, left) * u.evaluate(right)
    return value


def _minus_key(u: Character, key: CanonicalKey) -> LaurentPoly:
    hit = u._minus.get(key)
    if hit is not None:
        return hit
    value = -rota_baxter_polar(_bar(u, key))
    with _LOCK:
        return u._minus.setdefault(key, value)


def _minus_monomial(u: Character, m: Monomial) -> LaurentPoly:
    value = LaurentPoly.one()
    for key in m:
        value = value * _minus_key(u, key)
    return value


def birkhoff(u: Character, g: MultiGraph) -> BirkhoffResult:
    """
    U_-(Γ) = -R(X), U_+(Γ) = (1-R)(X), X = U(Γ) + Σ U_-(γ) U(Γ/γ), R - полярная часть.
    """
    _require_generator(g)
    key = canonical_key(g)
    bar = _bar(u, key)
    u_minus = _minus_key(u, key)
    u_plus = bar - rota_baxter_polar(bar)

    proper = sum(
        (Fraction(c) * _minus_monomial(u, left) * u.evaluate(right)
         for left, right, c in _coproduct_key(key).proper_terms()),
        LaurentPoly.zero(),
    )
    if u_plus != u_minus + u.generator(key) + proper:
        raise CheckFailed("birkhoff: U_+ = U_- + U + Σ U_-(γ)U(Γ/γ) does not hold")
    result = BirkhoffResult(u.generator(key), bar, u_minus, u_plus)
    log.info("[BIRKHOFF] character=%s edges=%s u_minus=%s u_plus=%s",
             u.name, g.n_edges, u_minus.render(), u_plus.render())
    return result


def character_from_mapping(name: str, values: Mapping[MultiGraph, LaurentPoly]) -> Character:
    return Character(name, {canonical_key(g): v for g, v in values.items()})
