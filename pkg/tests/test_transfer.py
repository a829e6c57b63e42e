import random
from fractions import Fraction as F

import pytest

from helpers import transfer_case
from superpot import models
from superpot.ainf import ZERO, ClassLabel, check_structure, complete_structure, constant_map_vector
from superpot.graded import NVector
from superpot.mc import is_mc, mc_residual
from superpot.novikov import NovikovScalar
from superpot.transfer import (CanonicalModel, HarmonicData, f_gamma, flag_independence, arity_identity,
                               edge_count_identity, vertex_count_identity, m_can_minus1, m_prime, m_tree, phi,
                               transfer_report)
from superpot.trees import TreeEnumerator

E = ClassLabel(1, (), "e")


def with_constants(seed, m_minus1=None):
    rng = random.Random(seed)
    base = models.sphere3(True).structure(F(3))
    S = complete_structure(base, classes=[E], rng=rng, random_arities=(0, 1, 2))
    mm = m_minus1 or {E: NovikovScalar.constant(F(2, 3)), E + E: NovikovScalar.constant(-1)}
    return S.replace(m_minus1=mm)


@pytest.mark.parametrize("model", [models.sphere3(True), models.s1s2_sum(1, True), models.s1s2_sum(2, True)])
def test_harmonic_identities(model):
    hd = HarmonicData(model.structure(F(2)))
    assert hd.check().ok
    assert hd.rank == len(model.structure(F(2)).basis.names) - 2


def test_minimal_model_is_unchanged():
    S = models.s1s2_sum(1).structure(F(3))
    S = complete_structure(S, classes=[E], rng=random.Random(3), random_arities=(1, 2))
    can = CanonicalModel(S)
    assert {k: t.entries for k, t in can.structure.ops.items()} == {k: t.entries for k, t in S.ops.items()}
    assert all(not any(f.values()) for key, f in can.f.items() if key != (1, ZERO))


def test_canonical_structure_is_cyclic():
    can = CanonicalModel(with_constants(1))
    assert check_structure(can.structure).ok


def test_single_vertex_constant():
    S = with_constants(2)
    assert m_can_minus1(CanonicalModel(S), E) == F(2, 3)


def test_two_vertex_constant():
    S = with_constants(4)
    can = CanonicalModel(S)
    m0 = constant_map_vector(S.op_map(0, E), S.dimension, 0, S.emax)
    correction = m0.pair(S.pairing, can.hd.propagate(m0)).coefficient(0) / 2
    assert m_can_minus1(can, E + E) == -1 + correction


def test_trivial_rooted_tree_includes():
    S, b = transfer_case(0)
    can = CanonicalModel(S)
    root_only = TreeEnumerator(S.classes()).rooted(1, ZERO, include_trivial=True)
    assert len(root_only) == 1
    assert f_gamma(can, root_only[0], b) == can.hd.include(b).with_emax(S.emax)


@pytest.mark.parametrize("seed", range(3))
def test_push_forward_routes_agree(seed):
    S, b = transfer_case(seed)
    can = CanonicalModel(S)
    assert can.f_push(b) == can.f_push_fixed_point(b)


@pytest.mark.parametrize("seed", range(3))
def test_fixture_point_is_mc(seed):
    S, b = transfer_case(seed)
    can = CanonicalModel(S)
    assert is_mc(can.structure, b)
    assert mc_residual(S, can.f_push(b)).is_zero()


@pytest.mark.parametrize("seed", range(3))
def test_potential_transfers(seed):
    S, b = transfer_case(seed)
    rep = transfer_report(S, b)
    assert rep.ok, rep.violations
    can = rep.data["model"]
    assert phi(can, b) == can.psi_can(b)
    lhs, rhs = vertex_count_identity(can, b)
    assert lhs == rhs
    lhs, rhs = edge_count_identity(can, b)
    assert lhs == rhs


def test_arity_identity():
    S, b = transfer_case(1)
    can = CanonicalModel(S)
    for cls in [ZERO] + S.class_closure()[:2]:
        for k in range(3):
            lhs, rhs = arity_identity(can, b, k, cls)
            assert lhs == rhs, (k, cls)


def random_h_point(can, rng):
    C = can.structure
    return NVector(C.dimension, {i: NovikovScalar({F(1): rng.choice((1, -1, 2)), F(2): rng.choice((0, 1, 3))},
                                                  C.emax) for i in C.basis.of_degree(1)}, C.emax)


def test_tree_expansion_off_the_mc_locus():
    S, _ = transfer_case(2)
    can = CanonicalModel(S)
    b = random_h_point(can, random.Random(0))
    assert phi(can, b) == can.psi_can(b)


def test_flags_and_edge_halves():
    S, _ = transfer_case(0)
    can = CanonicalModel(S)
    b = random_h_point(can, random.Random(1))
    enum = TreeEnumerator(S.classes())
    for cls in [ZERO] + S.class_closure()[:2]:
        for k in range(3):
            for tree, _ in enum.unrooted(k, cls):
                vals = flag_independence(can, tree, b)
                assert len(set(vals)) <= 1
                for (v, w) in tree.interior_edges():
                    for end in (v, w):
                        assert m_prime(can, tree, (v, w), end, b) == -m_tree(can, tree, b)


def test_non_mc_point_is_reported():
    S, _ = transfer_case(0)
    can = CanonicalModel(S)
    b = random_h_point(can, random.Random(2))
    if is_mc(can.structure, b):
        pytest.skip("random point happens to solve the equation")
    rep = transfer_report(S, b)
    assert not rep.ok
    assert any("not Maurer-Cartan" in v for v in rep.violations)


def test_time_dependent_structure_is_rejected():
    S = with_constants(0)
    t_dep = S.replace(m_minus1={E: NovikovScalar({(0, 1): 1})})
    with pytest.raises(ValueError):
        CanonicalModel(t_dep)
