from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from superpot.novikov import ConfigurationError, EnergyMonoid, NovikovScalar, energies_below

N = NovikovScalar


def test_product_distributes_over_monomials():
    a = N({F(1, 2): 2})
    b = N({F(1, 2): 3, 1: 1})
    assert a * b == N({1: 6, F(3, 2): 2})


def test_truncation_drops_high_terms_in_products():
    x = N({0: 1, 1: 1}, emax=2)
    assert x * x == N({0: 1, 1: 2})


def test_valuation_examples():
    assert N({F(7, 10): 3, F(6, 5): 1}).valuation() == F(7, 10)
    assert N().valuation() is None
    assert N.constant(5).valuation() == 0


def test_truncate_is_strict():
    assert N({1: 6, F(3, 2): 2}).truncate(F(3, 2)) == N({1: 6})
    assert N({F(1, 3): 4}).truncate(0).is_zero()
    assert N({0: 1, 2: 1}).truncate(1) == N.constant(1)


def test_exp_examples():
    assert N({F(1, 2): 1}, emax=F(6, 5)).exp() == N({0: 1, F(1, 2): 1, 1: F(1, 2)})
    assert N(emax=3).exp() == N.constant(1)
    # Taylor series written out by hand
    assert N({1: 2}, emax=F(5, 2)).exp() == N({0: 1, 1: 2, 2: 2})


def test_exp_needs_positive_valuation_and_truncation():
    with pytest.raises(ValueError):
        N({0: 1}, emax=2).exp()
    with pytest.raises(ConfigurationError):
        N({1: 1}).exp()


def test_monoid_elements():
    m = EnergyMonoid([F(1, 2), 1], emax=2)
    assert m.elements() == [0, F(1, 2), 1, F(3, 2)]
    assert F(3, 2) in m and F(1, 3) not in m
    assert energies_below([F(2, 3)], 2, include_zero=False) == [F(2, 3), F(4, 3)]


def test_t_calculus():
    x = N({(1, 2): 3, (F(1, 2), 0): 1})
    assert x.d_dt() == N({(1, 1): 6})
    assert x.integrate_t().d_dt() == x
    assert x.evaluate_t(2) == N({1: 12, F(1, 2): 1})
    assert x.substitute_t(1, 0) == x


exponents = st.fractions(min_value=0, max_value=3, max_denominator=4)
coefs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.dictionaries(exponents, coefs, max_size=4).map(lambda d: N(d, emax=3))


@given(scalars, scalars, scalars)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + (-a)).is_zero()


@given(scalars, scalars)
def test_valuation_of_product(a, b):
    p = a * b
    if p:
        assert p.valuation() >= a.valuation() + b.valuation()


@given(st.dictionaries(st.fractions(min_value=F(1, 4), max_value=2, max_denominator=4), coefs, max_size=3),
       st.dictionaries(st.fractions(min_value=F(1, 4), max_value=2, max_denominator=4), coefs, max_size=3))
def test_exp_is_a_homomorphism(x, y):
    a, b = N(x, emax=3), N(y, emax=3)
    assert (a + b).exp() == a.exp() * b.exp()


@given(st.dictionaries(st.fractions(min_value=0, max_value=2, max_denominator=3), coefs, min_size=1, max_size=3))
def test_inverse(d):
    x = N(d, emax=2)
    if x:
        inv = x.inverse()
        assert (x.with_emax(None) * inv.with_emax(None)).truncate(2) == N.constant(1)
