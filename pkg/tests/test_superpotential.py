import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from superpot import models
from superpot.ainf import ClassLabel, OperationTensor
from helpers import generated as generate
from superpot.graded import NVector
from superpot.laurent import divisor_model
from superpot.mc import gauge_flow, mc_residual, mc_solutions
from superpot.novikov import NovikovScalar
from superpot.pseudoiso import random_gauge_parameter
from superpot.superpotential import constant_term, d_psi, psi, psi_along_path, psi_prime


def symbolic_gradient(S, coeffs, lam):
    """Differentiate sum T^E/(k+1) sum c[j, ins] x_j x_ins symbolically at x = coeffs, b = x T^lam."""
    deg1 = S.basis.of_degree(1)
    xs = {i: sympy.Symbol(f"x{i}") for i in deg1}
    out = {i: NovikovScalar.zero(S.emax) for i in deg1}
    for (k, cls), t in S.ops.items():
        poly = 0
        for (_, idx), c in t.entries.items():
            if all(i in xs for i in idx):
                term = sympy.Rational(c.numerator, c.denominator) / (k + 1)
                for i in idx:
                    term *= xs[i]
                poly += term
        if poly == 0:
            continue
        for i in deg1:
            val = sympy.diff(poly, xs[i]).subs({xs[j]: sympy.Rational(v.numerator, v.denominator)
                                                for j, v in coeffs.items()})
            val = F(int(sympy.numer(val)), int(sympy.denom(val)))
            out[i] = out[i] + NovikovScalar({cls.energy + k * lam: val}, S.emax)
    return out


def test_potential_vanishes_at_zero():
    S = generate(4)
    assert psi_prime(S, NVector.zero(S.dimension, S.emax)).is_zero()


def test_single_bracket():
    S = models.s1s2_sum(1).structure(3)
    beta = ClassLabel(1)
    a1 = S.basis.index["a1"]
    q = F(5, 3)
    S = S.replace(ops={**S.ops, (1, beta): OperationTensor(1, beta, {(a1, a1): q})})
    b = NVector(S.dimension, {a1: NovikovScalar({F(1, 2): 1})}, S.emax)
    assert psi_prime(S, b) == NovikovScalar({2: q / 2}, S.emax)


def test_constant_term_at_zero():
    S = generate(5)
    zero = NVector.zero(S.dimension, S.emax)
    expected = NovikovScalar.zero(S.emax)
    for cls, v in S.m_minus1.items():
        expected = expected + NovikovScalar({cls.energy: v.coefficient(0)}, S.emax)
    assert psi(S, zero) == expected
    assert psi(S.replace(m_minus1={}), zero).is_zero()


def test_without_constants_psi_is_psi_prime():
    S = generate(1).replace(m_minus1={})
    b = mc_solutions(S, 1, random.Random(0))[0].b
    assert psi(S, b) == psi_prime(S, b)


@pytest.mark.parametrize("n,d", [(1, 1), (2, -1), (F(1, 2), 2)])
def test_divisor_potential_resums(n, d):
    S = divisor_model(1, [(1, (d,), n)], emax=4)
    a1 = S.basis.of_degree(1)[0]
    x = NovikovScalar({F(1, 2): 1, 1: F(1, 3)}, S.emax)
    b = NVector(S.dimension, {a1: x}, S.emax)
    e = (x * d).exp()
    shifted = (e - NovikovScalar.constant(1, S.emax)).shift(1) * n
    assert psi_prime(S, b) == shifted
    assert psi(S, b) == e.shift(1) * n


def test_gradient_of_empty_structure():
    S = models.torus3().structure(3).replace(ops={})
    b = NVector(8, {1: NovikovScalar({1: 1})}, 3)
    assert all(v.is_zero() for v in d_psi(S, b).values())


@pytest.mark.parametrize("seed", range(5))
def test_gradient_matches_symbolic_derivative(seed):
    S = generate(seed)
    rng = random.Random(seed)
    lam = F(1, 2)
    coeffs = {i: F(rng.choice([1, -1, 2, 3])) for i in S.basis.of_degree(1)}
    b = NVector(S.dimension, {i: NovikovScalar({lam: c}) for i, c in coeffs.items()}, S.emax)
    assert d_psi(S, b) == symbolic_gradient(S, coeffs, lam)


@pytest.mark.parametrize("seed", range(5))
def test_gradient_is_the_residual(seed):
    S = generate(seed)
    rng = random.Random(seed)
    b = NVector(S.dimension, {i: NovikovScalar({F(1, 2): rng.choice([1, 2, -1])}) for i in S.basis.of_degree(1)},
                S.emax)
    r = mc_residual(S, b)
    grad = d_psi(S, b)
    for i in S.basis.of_degree(1):
        assert grad[i] == r.pair(S.pairing, NVector.basis_monomial(S.dimension, i, 0, S.emax))


@settings(max_examples=10)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_solutions_are_critical(seed):
    S = generate(seed % 50)
    for sol in mc_solutions(S, 2, random.Random(seed)):
        assert all(v.is_zero() for v in d_psi(S, sol.b).values())


def test_constant_path():
    S = generate(1)
    b = mc_solutions(S, 1, random.Random(2))[0].b
    assert psi_along_path(S, b).ok


@pytest.mark.parametrize("seed", range(3))
def test_gauge_path_and_corrupted_path(seed):
    S = generate(seed)
    rng = random.Random(seed)
    b0 = mc_solutions(S, 1, rng)[0].b
    c = random_gauge_parameter(S, rng)
    b = gauge_flow(S, b0, c)
    assert psi_along_path(S, b).ok
    moving = b - b.evaluate_t(0)
    if moving.is_zero():
        return
    # drop the lowest level of the flow correction
    corrupt = b - moving.restrict_levels(lambda l: l == min(moving.exponents()))
    assert not psi_along_path(S, corrupt).ok


def test_constant_term_requires_data():
    S = generate(1).replace(m_minus1=None)
    with pytest.raises(ValueError):
        constant_term(S)
