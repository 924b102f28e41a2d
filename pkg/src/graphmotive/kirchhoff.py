from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import sympy

from .config import settings
from .errors import CheckFailed, SizeGuardError
from .graph import EdgeKind, MultiGraph, classify_edge, components, minor_map, stats
from .poly import EdgePoly

log = logging.getLogger("graphmotive.kirchhoff")


@dataclass(frozen=True)
class KirchhoffResult:
    psi: EdgePoly
    loop_number: int


@dataclass(frozen=True)
class DeletionContraction:
    """Psi = t_e * F + G; флаги отмечают вырожденные случаи моста (F = 0) и петли (G = 0)."""

    edge: int
    kind: EdgeKind
    F: EdgePoly
    G: EdgePoly

    @property
    def f_zero(self) -> bool:
        return self.F.is_zero()

    @property
    def g_zero(self) -> bool:
        return self.G.is_zero()


def _guard(g: MultiGraph) -> None:
    if g.n_edges > settings.max_edges:
        raise SizeGuardError(f"psi: {g.n_edges} edges exceed the guard {settings.max_edges}")


def spanning_forests(g: MultiGraph) -> list[tuple[int, ...]]:
    """
    Все максимальные остовные леса (по дереву на компоненту), в лексикографическом порядке номеров рёбер.
    """
    st = stats(g)
    need = g.n_vertices - st.b0
    index = {v: i for i, v in enumerate(g.vertices)}
    pairs = [(index[a], index[b]) for a, b in g.edges]
    out: list[tuple[int, ...]] = []

    def walk(pos: int, comp: tuple[int, ...], chosen: list[int]) -> None:
        if len(chosen) == need:
            out.append(tuple(chosen))
            return
        if g.n_edges - pos < need - len(chosen):
            return
        a, b = pairs[pos]
        ca, cb = comp[a], comp[b]
        if ca != cb:
            merged = tuple(ca if c == cb else c for c in comp)
            chosen.append(pos + 1)
            walk(pos + 1, merged, chosen)
            chosen.pop()
        walk(pos + 1, comp, chosen)

    walk(0, tuple(range(g.n_vertices)), [])
    return out


def matrix_tree_count(g: MultiGraph) -> int:
    """Число максимальных остовных лесов: произведение миноров лапласианов компонент."""
    total = 1
    for comp in components(g):
        n = comp.n_vertices
        if n <= 1:
            continue
        index = {v: i for i, v in enumerate(comp.vertices)}
        lap = sympy.zeros(n, n)
        for a, b in comp.edges:
            i, j = index[a], index[b]
            if i == j:
                continue
            lap[i, i] += 1
            lap[j, j] += 1
            lap[i, j] -= 1
            lap[j, i] -= 1
        total *= int(lap[1:, 1:].det())
    return total


@lru_cache(maxsize=4096)
def psi(g: MultiGraph) -> KirchhoffResult:
    _guard(g)
    n = g.n_edges
    forests = spanning_forests(g)
    every = set(g.edge_ids)
    poly = EdgePoly.from_monomials(n, (sorted(every.difference(f)) for f in forests))

    if any(c != 1 for _, c in poly.terms):
        raise CheckFailed("psi: a monomial was produced twice by the forest enumeration")
    expected = matrix_tree_count(g)
    if len(poly) != expected:
        raise CheckFailed(f"psi: {len(poly)} forests enumerated, matrix-tree count is {expected}")
    b1 = stats(g).b1
    if poly.degrees() != {b1}:
        raise CheckFailed(f"psi: degrees {sorted(poly.degrees())} differ from b1={b1}")

    log.debug("[PSI] edges=%s forests=%s b1=%s", n, len(poly), b1)
    return KirchhoffResult(poly, b1)


def deletion_contraction_split(g: MultiGraph, e: int) -> DeletionContraction:
    kind = classify_edge(g, e)
    p = psi(g).psi
    return DeletionContraction(e, kind, p.partial_derivative(e), p.set_zero(e))


def check_minor_identities(g: MultiGraph, e: int) -> dict[str, bool]:
    """
    F совпадает с Psi(G\\e), G совпадает с Psi(G/e) после перенумерации рёбер.
    Для моста проверяется только G, для петли только F.
    """
    split = deletion_contraction_split(g, e)
    mapping = minor_map(g, e)
    m = g.n_edges - 1
    report: dict[str, bool] = {}
    if split.kind is not EdgeKind.BRIDGE:
        report["deletion"] = split.F.relabel(mapping, m) == psi(g.delete(e)).psi
    else:
        report["bridge_free_of_te"] = split.f_zero
    if split.kind is not EdgeKind.LOOP:
        report["contraction"] = split.G.relabel(mapping, m) == psi(g.contract(e)).psi
    else:
        report["loop_divisible_by_te"] = split.g_zero
    return report
