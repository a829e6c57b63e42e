import random
from fractions import Fraction as F

import pytest

from helpers import wallcross_case
from superpot.ainf import ClassLabel
from superpot.novikov import NovikovScalar
from superpot.pseudoiso import integrate_isotopy
from superpot.wallcross import (SphereClass, SphereCountData, corrected_isotopy, delta_beta, random_counts,
                                reprofile, verify_wallcross)

BETA = ClassLabel(1, (), "e1")
GAMMA = ClassLabel(2, (), "e2")


def test_delta_sums_counts_per_class():
    counts = SphereCountData([SphereClass("a", 1, 3, BETA), SphereClass("b", 1, -1, BETA),
                              SphereClass("c", 2, 5, GAMMA)])
    assert delta_beta(counts, BETA) == 2
    assert delta_beta(counts, GAMMA) == 5
    assert delta_beta(counts, ClassLabel(3)) == 0


def test_profile_must_interpolate():
    t = NovikovScalar({(0, 1): 1})
    with pytest.raises(ValueError):
        SphereClass("a", 1, 2, BETA, t)
    with pytest.raises(ValueError):
        SphereClass("a", 1, 1, BETA, t + NovikovScalar.constant(1))
    with pytest.raises(ValueError):
        SphereClass("a", 2, 1, BETA)


def test_no_spheres_change_nothing():
    F0, _, b0 = wallcross_case(0)
    rep = verify_wallcross(F0, SphereCountData(), b0)
    assert rep.ok, rep.violations
    assert rep.data["difference"].is_zero()


def test_single_sphere_shifts_constant_term():
    F0, _, _ = wallcross_case(0)
    cls = F0.m.class_closure()[0]
    q = F(7, 3)
    G = corrected_isotopy(F0, SphereCountData([SphereClass("a", cls.energy, q, cls)]))
    before = (F0.m.m_minus1 or {}).get(cls, NovikovScalar.zero())
    after = G.m.m_minus1[cls]
    assert (after - before).evaluate_t(1) - (after - before).evaluate_t(0) == NovikovScalar.constant(q)


@pytest.mark.parametrize("seed", range(3))
def test_difference_is_sphere_count(seed):
    F0, counts, b0 = wallcross_case(seed)
    rep = verify_wallcross(F0, counts, b0)
    assert rep.ok, rep.violations
    assert rep.data["difference"] == counts.expected_difference(F0.m.emax)


@pytest.mark.parametrize("seed", range(3))
def test_profile_independence(seed):
    F0, counts, b0 = wallcross_case(seed)
    first = verify_wallcross(F0, counts, b0).data["difference"]
    again = verify_wallcross(F0, reprofile(counts, random.Random(seed + 100)), b0).data["difference"]
    assert first == again


def test_uncorrected_family_misses_the_counts():
    F0, counts, b0 = wallcross_case(1)
    if counts.expected_difference(F0.m.emax).is_zero():
        pytest.skip("counts cancel below the truncation")
    rep = verify_wallcross(F0, SphereCountData(), b0)
    assert rep.data["difference"] != counts.expected_difference(F0.m.emax)


def test_two_spheres_on_one_class():
    F0, _, b0 = wallcross_case(2)
    cls = F0.m.class_closure()[0]
    counts = SphereCountData([SphereClass("a", cls.energy, 2, cls), SphereClass("b", cls.energy, F(-1, 2), cls)])
    rep = verify_wallcross(F0, counts, b0)
    assert rep.ok, rep.violations
    assert rep.data["difference"] == NovikovScalar.monomial(cls.energy, F0.m.emax, F(3, 2))


def test_random_counts_stay_below_truncation():
    F0, _, _ = wallcross_case(0)
    counts = random_counts(random.Random(0), F0.m.class_closure(), F0.m.emax, how_many=4)
    assert all(s.energy < F0.m.emax and s.count for s in counts.spheres)


def test_constant_family():
    F0, counts, b0 = wallcross_case(0)
    still = integrate_isotopy(F0.m.at_t(0), {})
    rep = verify_wallcross(still, counts, b0)
    assert rep.ok, rep.violations
