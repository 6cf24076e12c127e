"""Ring laws, printing, and parsing for exact multivariate polynomials."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homconf.parser import PolyParseError, parse_poly
from homconf.poly import D, L, ONE, VARS, ZERO, MultiPoly, PolyVector, lam

coefficients = st.fractions(
    min_value=-5, max_value=5, max_denominator=4).filter(lambda f: f != 0)

exponents = st.tuples(*[st.integers(min_value=0, max_value=3)
                        for _ in range(3)])


@st.composite
def polys(draw) -> MultiPoly:
    terms = draw(st.dictionaries(exponents, coefficients, max_size=4))
    # exponents cover d, l, l1; remaining universe slots are zero
    return MultiPoly({e + (0,) * (len(VARS) - 3): c
                      for e, c in terms.items()})


@given(polys(), polys())
def test_addition_commutes(p, q):
    assert p + q == q + p


@given(polys(), polys())
def test_multiplication_commutes(p, q):
    assert p * q == q * p


@given(polys(), polys(), polys())
@settings(max_examples=40)
def test_multiplication_associates_and_distributes(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@given(polys())
def test_additive_inverse(p):
    assert (p - p).is_zero()
    assert p + ZERO == p
    assert p * ONE == p


@given(polys())
def test_parse_inverts_printing(p):
    assert parse_poly(str(p)) == p


@given(polys())
def test_substitution_identity(p):
    assert p.subs({name: MultiPoly.var(name) for name in VARS}) == p


def test_canonical_printing():
    assert str(D + lam(1).scale(2)) == "1*d + 2*l1"
    assert str(ZERO) == "0"
    assert str(MultiPoly.const(Fraction(-3, 2)) * D) == "-3/2*d"
    assert str((D + L) * (D - L)) == "1*d^2 - 1*l^2"


def test_parse_rejects_unknown_variables():
    with pytest.raises(PolyParseError):
        parse_poly("1*x + 2")
    with pytest.raises(PolyParseError):
        parse_poly("d + l2", {"d", "l1"})


def test_parse_accepts_rationals_and_parentheses():
    assert parse_poly("(d + l)^2 - d^2 - l^2") == D * L.scale(2)
    assert parse_poly("1/2*d - (1/2)*d").is_zero()


def test_degree_and_variables():
    p = D ** 2 * L + lam(3)
    assert p.degree_in("d") == 2
    assert p.variables() == {"d", "l", "l3"}


def test_substitution_composes():
    p = (D + L) ** 2
    once = p.subs1("l", D)
    assert once == (D + D) ** 2
    assert p.subs1("l", ZERO) == D ** 2


def test_vector_arithmetic():
    v = PolyVector([D, L])
    w = PolyVector([L, D])
    assert (v + w) - w == v
    assert v.scale(2)[0] == D.scale(2)
    assert not v.is_zero()
    assert PolyVector.zeros(3).is_zero()
    assert PolyVector.unit(2, 1)[1] == ONE
