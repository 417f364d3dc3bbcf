import pytest

from sepnorm.oracle import (
    DensePoly,
    OracleTooLarge,
    agree,
    all_exponents,
    dense_derivative,
    dense_mul,
    dense_substitute,
)
from sepnorm.series import SeriesRing

import oracle_corpus
from helpers import field_for, make_ring


def dense(f):
    return DensePoly.from_terms(f.field, f.nvars, f.terms())


def test_dense_mul_example():
    R = SeriesRing(field_for(2), 2, 10, ("X", "Y"))
    out = dense_mul(dense(R.parse("X+Y")), dense(R.parse("X+Y")))
    assert out.terms() == R.parse("X^2+Y^2").terms()


def test_dense_substitute_example():
    R = make_ring(2, 2, precision=12)
    out = dense_substitute(dense(R.parse("X1^2+X2^3")), 1, dense(R.parse("X2+X1^3")))
    # hand expansion: (X2+X1^3)^3 = X2^3 + X2^2 X1^3 + X2 X1^6 + X1^9 in char 2
    expected = {(2, 0): 1, (0, 3): 1, (3, 2): 1, (6, 1): 1, (9, 0): 1}
    assert out.terms() == {e: R.field(c) for e, c in expected.items()}


@pytest.mark.parametrize("p", [2, 3, 5])
def test_dense_derivative_vanishes(p):
    R = SeriesRing(field_for(p, True), 2, 24, ("X", "Y"))
    assert dense_derivative(dense(R.parse(f"X^{p}+t*Y^{p}")), 0).terms() == {}


def test_agree_window():
    R = make_ring(3, 2, precision=5)
    f = R.parse("X1+X2^2")
    d = dense(make_ring(3, 2, precision=50).parse("X1+X2^2+X1^7"))
    assert agree(f, d, 5)
    corrupt = dense(make_ring(3, 2, precision=50).parse("X1+2*X2^2"))
    assert not agree(f, corrupt, 5)


def test_cap():
    R = make_ring(2, 3, precision=200)
    big = dense(R.parse("X1^60+X2^60+X3^60"))
    with pytest.raises(OracleTooLarge):
        dense_mul(big, big, cap=10_000)


def test_all_exponents():
    exps = list(all_exponents(2, 2))
    assert exps == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]


@pytest.mark.parametrize("op", oracle_corpus.OPERATIONS)
def test_agreement_corpus(op):
    assert oracle_corpus.run(op) == []
