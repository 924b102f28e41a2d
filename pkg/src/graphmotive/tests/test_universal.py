from __future__ import annotations

import pytest

from ..errors import GraphFormatError
from ..families import k4, square, triangle
from ..graph import EdgeKind, classify_edge
from ..motivic import multiplied_edge_coefficients
from ..tutte import tutte, tutte_multiedge
from ..universal import (
    CsmBase,
    RepKind,
    coefficients,
    csm_doubled_triangle,
    csm_predict,
    csm_series_check,
    divisibility_check,
    instantiate,
    lambda_roots_numeric,
    load_csm_fixture,
    mat_mul,
    matrix_power,
    matrix_shape,
)


@pytest.mark.parametrize("m", range(7))
def test_motivic_coefficients_match_closed_forms(m):
    assert coefficients(instantiate(RepKind.MOTIVIC), m) == multiplied_edge_coefficients(m)


@pytest.mark.parametrize("kind", [RepKind.MOTIVIC, RepKind.TUTTE, RepKind.CSM])
def test_matrix_power_has_the_coefficient_shape(kind):
    rep = instantiate(kind)
    for m in range(6):
        assert matrix_power(rep, m) == matrix_shape(rep, m)
    assert matrix_power(rep, 1) == rep.A1
    # моноид: A_a A_b = A_{a+b}
    assert mat_mul(matrix_power(rep, 2), matrix_power(rep, 3)) == matrix_power(rep, 5)


def test_lambda_paths():
    motivic = lambda_roots_numeric(instantiate(RepKind.MOTIVIC), {"T": 2})
    assert motivic.discriminant == 9
    assert motivic.path == "degenerate"
    assert motivic.ok and motivic.exact

    csm = lambda_roots_numeric(instantiate(RepKind.CSM), {"T": 2})
    assert csm.discriminant == 1
    assert csm.path == "degenerate"
    assert csm.ok

    tutte = lambda_roots_numeric(instantiate(RepKind.TUTTE), {"y": 2})
    assert {tutte.lam_plus, tutte.lam_minus} == {1, -1}
    assert tutte.path == "generic"
    assert tutte.ok

    fractional = lambda_roots_numeric(instantiate(RepKind.MOTIVIC), {"T": "1/3"})
    assert fractional.ok


def test_lambda_double_root():
    # f2^2 + 4 g2 = 0 при T = -1
    report = lambda_roots_numeric(instantiate(RepKind.MOTIVIC), {"T": -1})
    assert report.path == "double-root"
    assert report.ok


@pytest.mark.parametrize("kind", [RepKind.MOTIVIC, RepKind.TUTTE, RepKind.CSM])
def test_divisibility(kind):
    rep = instantiate(kind)
    for m, r in ((1, 3), (2, 3), (3, 2)):
        assert divisibility_check(rep, m, r).ok
    with pytest.raises(ValueError):
        divisibility_check(rep, 0, 2)


def test_custom_kind_is_not_instantiated():
    with pytest.raises(ValueError):
        instantiate("custom")


def test_csm_prediction():
    fixture = load_csm_fixture()
    assert csm_doubled_triangle(fixture) == fixture["expected_poly"]
    assert csm_series_check(8).ok
    base = CsmBase(*(fixture["parsed"][k] for k in ("triangle", "edge", "banana2")))
    assert csm_predict(base, 0) == base.graph
    with pytest.raises(ValueError):
        csm_predict(base, -1)


def test_csm_fixture_errors(tmp_path):
    with pytest.raises(GraphFormatError):
        load_csm_fixture(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    with pytest.raises(GraphFormatError):
        load_csm_fixture(bad)


@pytest.mark.parametrize("g", [triangle(), k4(), square()], ids=["triangle", "k4", "square"])
def test_tutte_instantiation_matches_multiplied_edge(g):
    rep = instantiate(RepKind.TUTTE)
    for e in g.edge_ids:
        if classify_edge(g, e) is not EdgeKind.REGULAR:
            continue
        parts = tutte(g).value, tutte(g.delete(e)).value, tutte(g.contract(e)).value
        for m in range(6):
            f, gm, h = coefficients(rep, m)
            assert f * parts[0] + gm * parts[1] + h * parts[2] == tutte_multiedge(g, e, m).value
