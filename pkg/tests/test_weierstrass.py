import random

import pytest
from hypothesis import given, settings, strategies as st

from sepnorm.fields import DomainError
from sepnorm.series import SeriesRing
from sepnorm.weierstrass import DistinguishedPoly, NotRegular, prepare, reduce_mod, weierstrass_order

from helpers import field_for, make_ring, random_distinguished_terms, random_poly, random_unit


def test_order_examples():
    R = make_ring(3, 2)
    assert weierstrass_order(R.parse("X2^2+X1*X2+X1"), 1) == 2
    assert weierstrass_order(R.parse("X1*X2"), 1) is None
    Rt = SeriesRing(field_for(2, True), 2, 24, ("X", "Y"))
    assert weierstrass_order(Rt.parse("X^3+t*X^2+Y^2"), 0) == 2


def test_prepare_recovers_factors():
    R = make_ring(3, 2, precision=24)
    f0 = R.parse("X2^2+X1*X2+X1")
    w = prepare(R.parse("1+X1") * f0, 1)
    assert w.unit == R.parse("1+X1")
    assert w.distinguished.as_series() == f0
    assert w.distinguished.degree == 2
    assert w.precision == 24


def test_prepare_distinguished_input():
    R = make_ring(2, 3, precision=16)
    f = R.parse("X3^3 + X1*X2*X3 + X1^2 + X2^5")
    w = prepare(f, 2)
    assert w.unit == R.one()
    assert w.distinguished.as_series() == f


def test_prepare_rational_example():
    R = SeriesRing(field_for(2, True), 2, 8, ("X", "Y"))
    f = R.parse("X^3+t*X^2+Y^2")
    w = prepare(f, 0)
    a0, a1 = w.distinguished.coeffs
    t = R.field("t")
    assert a0.leading_term() == ((0, 2), 1 / t)
    assert a1.leading_term() == ((0, 2), 1 / t**2)
    assert w.unit * w.distinguished.as_series() == f


def test_prepare_order_zero():
    R = make_ring(3, 2)
    f = R.parse("2+X1+X2^3")
    w = prepare(f, 1)
    assert w.distinguished.degree == 0
    assert w.unit == f


def test_not_regular():
    R = make_ring(3, 2)
    with pytest.raises(NotRegular):
        prepare(R.parse("X1*X2"), 1)
    with pytest.raises(NotRegular):
        prepare(make_ring(3, 2, precision=4).parse("X2^5+X1"), 1)


def test_distinguished_invariants():
    R = make_ring(3, 2)
    with pytest.raises(DomainError):
        DistinguishedPoly(R, 1, (R.parse("1+X1"),))
    with pytest.raises(DomainError):
        DistinguishedPoly(R, 1, (R.parse("X1*X2"),))


def test_reduce_mod_examples():
    R = make_ring(3, 2, precision=24)
    d = prepare(R.parse("X2^2+X1*X2+X1"), 1).distinguished
    assert reduce_mod(d.as_series(), d).is_zero()
    g = R.parse("X1^5 + 2*X1*X2")
    assert reduce_mod(g, d) == g
    assert reduce_mod(R.parse("X2^3"), d) == R.parse("(X1^2+2*X1)*X2 + X1^2")


# -- properties ----------------------------------------------------------------


@st.composite
def product_case(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    nvars = draw(st.integers(2, 3))
    rational = draw(st.booleans())
    degree = draw(st.integers(1, 3))
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    R = make_ring(p, nvars, precision=24, rational=rational)
    r = nvars - 1
    u = random_unit(rng, R)
    g, _ = random_distinguished_terms(rng, R, r, degree)
    return R, r, u, g


@settings(max_examples=150, deadline=None)
@given(product_case())
def test_roundtrip_and_uniqueness(case):
    R, r, u, g = case
    f = u * g
    w = prepare(f, r)
    assert weierstrass_order(f, r) == w.distinguished.degree
    assert w.unit * w.distinguished.as_series() == f
    assert w.unit == u
    assert w.distinguished.as_series() == g


@settings(max_examples=100, deadline=None)
@given(product_case())
def test_precision_windows_agree(case):
    R, r, u, g = case
    hi = prepare(u.with_precision(40) * g.with_precision(40), r)
    lo = prepare(u * g, r)
    assert hi.unit.agrees_with(lo.unit)
    assert hi.distinguished.as_series().agrees_with(lo.distinguished.as_series())


@settings(max_examples=150, deadline=None)
@given(product_case())
def test_reduce_mod_of_multiple(case):
    R, r, _, g = case
    R = R.with_precision(48)
    g = g.with_precision(48)
    d = prepare(g, r).distinguished
    rng = random.Random(len(g))
    a = random_poly(rng, R, 3, 4)
    rem = random_poly(rng, R, 4, 5)
    rem = R.from_terms({e: c for e, c in rem.terms().items() if e[r] < d.degree})
    assert reduce_mod(a * g + rem, d) == rem
