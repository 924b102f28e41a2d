from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ..errors import GraphFormatError, InexactDivisionError
from ..poly import BiPoly, EdgePoly, IntPoly, LaurentPoly

T = IntPoly.T()
x, y = BiPoly.x(), BiPoly.y()

int_polys = st.lists(st.integers(-6, 6), max_size=5).map(lambda c: IntPoly(tuple(c)))


def test_intpoly_arithmetic_and_render():
    p = (T + 1) ** 2
    assert p == IntPoly((1, 2, 1))
    assert p.render() == "T^2 + 2*T + 1"
    assert (T**2 - 1).exact_div(T + 1) == T - 1
    assert (2 * T - T * 2).is_zero()
    assert IntPoly.zero().render() == "0"
    assert (-T + 3).render() == "-T + 3"


def test_intpoly_inexact_division():
    with pytest.raises(InexactDivisionError):
        (T**2 + 1).exact_div(T + 1)
    with pytest.raises(InexactDivisionError):
        (T + 1).exact_div(2)
    assert not (T + 1).divides(T**2 + 1)
    assert T.divides(T**3 + T)


def test_intpoly_evaluation_and_derivative():
    p = T**3 + 6 * T**2 + 9 * T + 1
    assert p(0) == 1
    assert p(-1) == -3
    assert p(Fraction(1, 2)) == Fraction(1, 8) + Fraction(6, 4) + Fraction(9, 2) + 1
    assert p.derivative() == 3 * T**2 + 12 * T + 9
    assert (T + 1).compose(T - 1) == T


def test_intpoly_factored_rendering():
    p = T**4 * (T + 1) ** 10 * (T**3 + 6 * T**2 + 9 * T + 1)
    assert p.render_factored() == "T^4*(T+1)^10*(T^3 + 6*T^2 + 9*T + 1)"
    assert (T * (T + 1)).render_factored() == "T*(T+1)"
    assert (-(T**2)).render_factored() == "-T^2"


def test_intpoly_parse():
    assert IntPoly.parse("T^2+2*T+1") == (T + 1) ** 2
    assert IntPoly.parse("T*(T+1)^2") == T * (T + 1) ** 2
    with pytest.raises(GraphFormatError):
        IntPoly.parse("T/2")
    with pytest.raises(GraphFormatError):
        IntPoly.parse("T +* 1")


@given(int_polys, int_polys, int_polys)
def test_intpoly_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a - a == IntPoly.zero()


@given(int_polys, int_polys)
def test_intpoly_exact_div_inverts_multiplication(a, b):
    if b.is_zero() or abs(b.coeffs[-1]) != 1:
        return
    assert (a * b).exact_div(b) == a


def test_bipoly_render_and_division():
    assert ((x + y) ** 2).render() == "x^2 + 2*x*y + y^2"
    assert (x**2 + x + y).render() == "x^2 + x + y"
    assert ((x + y) * (x - 1)).exact_div(x - 1) == x + y
    with pytest.raises(InexactDivisionError):
        (x + y).exact_div(x)
    assert BiPoly.parse("x^2+x+y") == x**2 + x + y
    assert (x**2 + x + y)(2, 3) == 9


def test_bipoly_substitute():
    p = x**2 + x + y
    assert p.substitute(T, IntPoly.zero()) == T**2 + T


def test_edgepoly_tree_form_and_split():
    p = EdgePoly.from_monomials(3, [(1, 2), (1, 3), (2, 3)])
    assert p.render() == "t1*t2 + t1*t3 + t2*t3"
    assert p.partial_derivative(3) == EdgePoly.from_monomials(3, [(1,), (2,)])
    assert p.set_zero(3) == EdgePoly.from_monomials(3, [(1, 2)])
    assert p.degrees() == {2}
    assert p.support() == [1, 2, 3]
    assert p.evaluate([1, 2, 3]) == 2 + 3 + 6
    assert p.eval_mod_p([1, 2, 3], 5) == 1


def test_edgepoly_multilinear_guards():
    t1 = EdgePoly.var(1, 2)
    with pytest.raises(ValueError):
        t1 * t1
    with pytest.raises(IndexError):
        t1.partial_derivative(3)
    assert EdgePoly.from_monomials(2, [(1,), (1,)]).terms == (((1,), 2),)


def test_edgepoly_relabel():
    p = EdgePoly.from_monomials(3, [(1,), (3,)])
    assert p.relabel({1: 2, 3: 1}, 2) == EdgePoly.from_monomials(2, [(1,), (2,)])
    with pytest.raises(ValueError):
        p.relabel({1: 1}, 2)


def test_laurent_parts():
    z = LaurentPoly.z()
    u = LaurentPoly.z(-2) + 3 + z
    assert u.polar_part() == LaurentPoly.z(-2)
    assert u.regular_part() == 3 + z
    assert LaurentPoly.const(5).polar_part().is_zero()
    assert (z + 1) ** 2 == z * z + 2 * z + 1
    assert LaurentPoly.from_json({"-1": "1", "0": "1/2"}) == LaurentPoly.z(-1) + Fraction(1, 2)
    with pytest.raises(GraphFormatError):
        LaurentPoly.from_json({"-1": "abc"})
