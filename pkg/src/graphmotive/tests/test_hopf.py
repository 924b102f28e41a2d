from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from ..config import settings
from ..errors import CharacterError, GraphError, GraphFormatError, SizeGuardError
from ..families import banana, bouquet, loop, path, triangle, triangle_double_edge
from ..hopf import (
    Character,
    GraphSum,
    antipode,
    birkhoff,
    character_from_mapping,
    clear_cache,
    coproduct,
    counit_check,
    is_coassociative,
    load_character,
    monomial,
    rota_baxter_identity,
    rota_baxter_polar,
    toy_character,
)
from ..poly import LaurentPoly

z = LaurentPoly.z()


def test_coproduct_of_bananas():
    b2, b3, b4 = banana(2), banana(3), banana(4)
    d3 = coproduct(b3).as_dict()
    assert d3 == {
        (monomial(b3), ()): 1,
        ((), monomial(b3)): 1,
        (monomial(b2), monomial(loop())): 3,
    }
    d4 = coproduct(b4).as_dict()
    assert d4[(monomial(b2), monomial(bouquet(2)))] == 6
    assert d4[(monomial(b3), monomial(loop()))] == 4
    assert "3*banana:2 ⊗ loop" in coproduct(b3).render()


def test_coproduct_of_two_loops():
    d = coproduct(bouquet(2)).as_dict()
    assert d[(monomial(loop()), monomial(loop()))] == 2
    assert len(coproduct(banana(2))) == 2


def test_generators_must_be_small_and_1pi(monkeypatch):
    with pytest.raises(GraphError):
        coproduct(path(2))
    monkeypatch.setattr(settings, "hopf_max_edges", 3)
    with pytest.raises(SizeGuardError):
        coproduct(banana(4))


def test_antipode():
    clear_cache()
    assert antipode(banana(2)) == GraphSum.of(monomial(banana(2)), -1)
    expected = GraphSum.of(monomial(banana(3)), -1) + GraphSum.of(monomial(banana(2), loop()), 3)
    assert antipode(banana(3)) == expected


@pytest.mark.parametrize("g", [banana(2), banana(3), banana(4), bouquet(2), triangle(), triangle_double_edge()])
def test_antipode_cancels_against_coproduct(g):
    assert counit_check(g)


@pytest.mark.parametrize("g", [banana(2), banana(3), banana(4), triangle_double_edge()])
def test_coassociativity(g):
    assert is_coassociative(g)


def test_toy_birkhoff_values():
    toy = toy_character()
    r2 = birkhoff(toy, banana(2))
    assert r2.u_minus == -LaurentPoly.z(-1)
    assert r2.u_plus == 2 + z
    r3 = birkhoff(toy, banana(3))
    assert r3.u_minus == 2 * LaurentPoly.z(-2)
    assert r3.u_plus == 3 + z
    assert r3.polar_free
    assert birkhoff(toy, triangle_double_edge()).polar_free


def test_table_characters(tmp_path):
    table = character_from_mapping("t", {banana(2): LaurentPoly.z(-1) + 2})
    assert table(banana(2)) == LaurentPoly.z(-1) + 2
    with pytest.raises(CharacterError):
        table(loop())

    path_ = tmp_path / "chi.json"
    path_.write_text(
        json.dumps({"generators": [{"edges": [[0, 1], [1, 0]], "laurent": {"-1": "1", "0": "2"}}]}),
        encoding="utf-8",
    )
    loaded = load_character(path_)
    assert isinstance(loaded, Character)
    assert loaded.name == "chi"
    assert loaded(banana(2)) == LaurentPoly.z(-1) + 2
    assert birkhoff(loaded, banana(2)).u_minus == -LaurentPoly.z(-1)

    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": [{"edges": [[0, 1]]}]}', encoding="utf-8")
    with pytest.raises(GraphFormatError):
        load_character(bad)


laurents = st.dictionaries(st.integers(-3, 3), st.integers(-5, 5), max_size=5).map(LaurentPoly.from_dict)


@given(laurents, laurents)
def test_polar_projection_is_rota_baxter(x, y):
    assert rota_baxter_identity(x, y)
    assert rota_baxter_polar(rota_baxter_polar(x)) == rota_baxter_polar(x)
