import random
from fractions import Fraction as F

import pytest

from helpers import generated
from superpot import models
from superpot.ainf import ClassLabel, OperationTensor, complete_structure
from superpot.fixtures import random_minus1
from superpot.graded import NVector
from superpot.mc import is_mc, mc_solutions, solve_mc
from superpot.novikov import NovikovScalar
from superpot.pseudoiso import (TimeFamily, check_isotopy, constant_correction_integral, extend_truncation,
                                integrate_isotopy, invariance_profile, random_generators, transport_mc,
                                verify_isotopy_invariance)
from superpot.superpotential import constant_term


def one_level(nu=F(3, 2)):
    """S^1 x S^2 with m_{0,beta} = b1 and generator c_{0,beta} = t * nu * (dual of b1)."""
    S = models.s1s2_sum(1).structure(3)
    beta = ClassLabel(1)
    b1 = S.basis.index["b1"]
    entries = {(j,): S.pairing.matrix[b1][j] for j in range(S.dimension) if S.pairing.matrix[b1][j]}
    S = S.replace(ops={**S.ops, (0, beta): OperationTensor(0, beta, entries)},
                  m_minus1={beta: NovikovScalar.constant(1), beta + beta: NovikovScalar.constant(2)})
    c = {(0, beta): OperationTensor(0, beta, {(1, (b1,)): nu}, parity=0)}
    return S, c, beta


def test_zero_generators_leave_the_structure():
    S = generated(2)
    F0 = integrate_isotopy(S, {})
    assert F0.m.at_t(1).ops == S.ops
    assert F0.m.m_minus1 == S.m_minus1


def test_one_level_constant_shift():
    nu = F(3, 2)
    S, c, beta = one_level(nu)
    fam = integrate_isotopy(S, c)
    assert check_isotopy(fam).ok
    two = beta + beta
    start = fam.m.m_minus1[two].evaluate_t(0)
    end = fam.m.m_minus1[two].evaluate_t(1)
    # d/dt m_{-1,2beta} = -<c_0, m_0> = -nu t
    assert end - start == NovikovScalar.constant(-nu / 2)


def test_frozen_operations_fail():
    S = generated(0)
    c = random_generators(S, random.Random(1))
    fam = integrate_isotopy(S, c)
    if fam.m.ops == S.ops:
        pytest.skip("generators act trivially")
    assert not check_isotopy(TimeFamily(S, c)).ok


def test_frozen_constants_fail():
    nu = F(3, 2)
    S, c, beta = one_level(nu)
    fam = integrate_isotopy(S, c)
    frozen = TimeFamily(fam.m.replace(m_minus1=S.m_minus1), fam.c)
    rep = check_isotopy(frozen)
    assert not rep.ok and any("constant-term" in v for v in rep.violations)


def test_transport_with_zero_generators():
    S = generated(1)
    b0 = mc_solutions(S, 1, random.Random(0))[0].b
    assert transport_mc(integrate_isotopy(S, {}), b0) == b0


def sphere_family(seed):
    rng = random.Random(seed)
    base = models.sphere3(True).structure(F(4))
    S = complete_structure(base, classes=[ClassLabel(1, (), "e")], rng=rng, random_arities=(0, 1, 2))
    S = S.replace(m_minus1=random_minus1(rng, S.class_closure()))
    return S, integrate_isotopy(S, random_generators(S, rng, max_arity=1))


@pytest.mark.parametrize("seed", range(3))
def test_transport_matches_slice_solutions(seed):
    """Without degree-one cohomology every slice has one solution."""
    S, fam = sphere_family(seed)
    b0 = solve_mc(S).b
    b = transport_mc(fam, b0)
    for t0 in (0, F(1, 2), 1):
        sl = solve_mc(fam.m.at_t(t0))
        assert sl.ok
        assert b.evaluate_t(t0) == sl.b


@pytest.mark.parametrize("seed", range(3))
def test_invariance_and_dropped_correction(seed):
    S, fam = sphere_family(seed)
    b0 = solve_mc(S).b
    rep = verify_isotopy_invariance(fam, b0)
    assert rep.ok, rep.violations
    bad, _ = invariance_profile(fam, b0, drop_constant_correction=True)
    drift = bad.evaluate_t(1) - bad.evaluate_t(0)
    dropped = constant_term(fam.m.at_t(0)) - constant_term(fam.m.at_t(1))
    assert drift == dropped
    assert drift == constant_correction_integral(fam)


def test_extension_without_source_is_constant():
    S = generated(3)
    fam = integrate_isotopy(S, {})
    cls = ClassLabel(S.emax)
    ext = extend_truncation(fam, S.emax, {cls: F(7)})
    assert ext.m.m_minus1.get(cls) is None or ext.m.m_minus1[cls] == NovikovScalar.constant(7)


def test_extension_integrates_backward():
    nu = F(3, 2)
    S, c, beta = one_level(nu)
    fam = integrate_isotopy(S, c)
    two = beta + beta
    ext = extend_truncation(fam, two.energy, {two: F(5)})
    t = NovikovScalar({(0, 2): 1})
    # source <c_0, m_0> = nu t gives m1 + nu (1 - t^2) / 2
    assert ext.m.m_minus1[two] == NovikovScalar.constant(5) + (NovikovScalar.constant(1) - t) * (nu / 2)
    assert check_isotopy(ext).ok


def test_generators_must_have_positive_class():
    S = generated(2)
    with pytest.raises(ValueError):
        integrate_isotopy(S, {(0, ClassLabel(0)): OperationTensor(0, ClassLabel(0), {}, parity=0)})


def test_transported_solution_stays_mc():
    S, fam = sphere_family(5)
    b = transport_mc(fam, solve_mc(S).b)
    assert is_mc(fam.m, b)
    assert NVector.zero(S.dimension, S.emax) == b - b
