"""Sphere-count corrections to the constant terms and the wall-crossing difference."""

from dataclasses import dataclass
from fractions import Fraction

from .ainf import ClassLabel
from .novikov import NovikovScalar, as_fraction
from .pseudoiso import TimeFamily, check_isotopy, transport_mc
from .report import CheckReport
from .superpotential import psi


def linear_profile(count):
    return NovikovScalar({(0, 1): as_fraction(count)})


@dataclass
class SphereClass:
    """A sphere class with its energy, count, target disc class and time profile ``n(t)``."""

    name: str
    energy: Fraction
    count: Fraction
    target: ClassLabel
    profile: NovikovScalar = None

    def __post_init__(self):
        self.energy = as_fraction(self.energy)
        self.count = as_fraction(self.count)
        if self.profile is None:
            self.profile = linear_profile(self.count)
        if any(lam for (lam, _), _ in self.profile.items()):
            raise ValueError(f"profile of {self.name} must be a polynomial in t only")
        if self.profile.evaluate_t(0).coefficient(0) != 0:
            raise ValueError(f"profile of {self.name} must vanish at t = 0")
        if self.profile.evaluate_t(1).coefficient(0) != self.count:
            raise ValueError(f"profile of {self.name} must end at the count {self.count}")
        if self.target.energy != self.energy:
            raise ValueError(f"sphere {self.name} and its disc class have different energies")


class SphereCountData:
    def __init__(self, spheres=()):
        self.spheres = list(spheres)

    def delta_beta(self, beta):
        """Sum of the counts of spheres whose disc class is ``beta``."""
        return sum((s.count for s in self.spheres if s.target == beta), Fraction(0))

    def targets(self):
        return sorted({s.target for s in self.spheres})

    def profile_sum(self, beta):
        total = NovikovScalar.zero()
        for s in self.spheres:
            if s.target == beta:
                total = total + s.profile
        return total

    def expected_difference(self, emax):
        """``sum T^(energy) count`` over all spheres below ``emax``."""
        total = NovikovScalar.zero(emax)
        for s in self.spheres:
            total = total + NovikovScalar.monomial(s.energy, emax, s.count)
        return total


def delta_beta(counts, beta):
    return counts.delta_beta(beta)


def corrected_isotopy(F, counts):
    """Add the sphere profiles to ``m^t_{-1}``; their derivatives become the extra constant-term source."""
    S = F.m
    mm = dict(S.m_minus1 or {})
    source = dict(F.source)
    for beta in counts.targets():
        if beta.energy >= S.emax:
            continue
        prof = counts.profile_sum(beta)
        mm[beta] = mm.get(beta, NovikovScalar.zero()) + prof
        source[beta] = source.get(beta, NovikovScalar.zero()) + prof.d_dt()
    mm = {c: v for c, v in mm.items() if not v.is_zero()}
    return TimeFamily(S.replace(m_minus1=mm), F.c, source)


def verify_wallcross(F, counts, b0):
    """``psi(I_*(b)) - psi(b)`` against ``sum T^(a) n`` for the corrected family."""
    G = corrected_isotopy(F, counts)
    bad = []
    rep = check_isotopy(G, extra_source=G.source)
    bad += rep.violations
    b = transport_mc(G, b0)
    start = psi(G.m.at_t(0), b.evaluate_t(0))
    end = psi(G.m.at_t(1), b.evaluate_t(1))
    diff = end - start
    want = counts.expected_difference(G.m.emax)
    if diff != want:
        bad.append(f"difference {diff} but sphere counts give {want}")
    return CheckReport("wall crossing", not bad, bad, {"difference": diff, "expected": want, "family": G})


def random_profile(rng, count, tdeg=3):
    """``count * t + t (1 - t) q(t)`` with random rational ``q``."""
    prof = linear_profile(count)
    bump = NovikovScalar({(0, 1): 1, (0, 2): -1})
    q = NovikovScalar({(0, d): rng.choice((0, 1, -1, 2, Fraction(1, 2))) for d in range(max(tdeg - 1, 0))})
    return prof + bump * q


def random_counts(rng, classes, emax, how_many=2):
    """Random sphere classes mapping onto the given disc classes (counts nonzero, random profiles)."""
    spheres = []
    pool = [c for c in classes if c.energy < emax]
    for j in range(how_many):
        target = rng.choice(pool)
        count = Fraction(rng.choice((1, -1, 2, 3, Fraction(1, 2), -2)))
        spheres.append(SphereClass(f"alpha{j + 1}", target.energy, count, target, random_profile(rng, count)))
    return SphereCountData(spheres)


def reprofile(counts, rng):
    """Same classes and counts with fresh random profiles."""
    return SphereCountData([SphereClass(s.name, s.energy, s.count, s.target, random_profile(rng, s.count))
                            for s in counts.spheres])
