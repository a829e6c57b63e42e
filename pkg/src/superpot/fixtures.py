"""Seeded random fixtures: completed structures, transfer fixtures and sphere-type fixtures."""

import random
from fractions import Fraction

from . import models
from .ainf import ZERO, ClassLabel, Obstruction, complete_structure
from .graded import NVector
from .mc import mc_solutions, twist
from .novikov import NovikovScalar
from .pseudoiso import integrate_isotopy, random_generators
from .transfer import HarmonicData
from .wallcross import random_counts

BASE_MODELS = {
    "S3": lambda: models.sphere3(),
    "S3+pair": lambda: models.sphere3(acyclic=True),
    "S1xS2": lambda: models.s1s2_sum(1),
    "#2(S1xS2)": lambda: models.s1s2_sum(2),
    "#3(S1xS2)": lambda: models.s1s2_sum(3),
    "S1xS2+pair": lambda: models.s1s2_sum(1, acyclic=True),
    "#2(S1xS2)+pair": lambda: models.s1s2_sum(2, acyclic=True),
    "T3": lambda: models.torus3(),
}

FIRST_BETTI = {"S3": 0, "S3+pair": 0, "S1xS2": 1, "#2(S1xS2)": 2, "#3(S1xS2)": 3,
               "S1xS2+pair": 1, "#2(S1xS2)+pair": 2, "T3": 3}

ENERGIES = (Fraction(1, 2), Fraction(1), Fraction(3, 2))
MINUS1_VALUES = (1, -1, 2, Fraction(1, 2), Fraction(-2, 3), 3)


def random_boundary(rng, b1):
    return tuple(rng.choice((-1, 0, 0, 1)) for _ in range(b1))


def random_minus1(rng, classes, density=Fraction(2, 3)):
    out = {}
    for c in classes:
        if rng.random() < density:
            out[c] = NovikovScalar.constant(rng.choice(MINUS1_VALUES))
    return out


def _retry(build, rng, attempts):
    last = None
    for _ in range(attempts):
        try:
            return build()
        except Obstruction as exc:
            last = exc
    raise last


def generate(seed, model=None, kmax=5, attempts=20):
    """Random completed cyclic structure with ``m_{-1}`` data.

    One or two classes share the lowest energy ``e`` (with different
    boundaries when the model has first Betti number > 0); the truncation is
    ``4e``, so at most three energy levels occur.
    """
    rng = random.Random(seed)
    name = model or rng.choice(sorted(BASE_MODELS))
    b1 = FIRST_BETTI[name]
    e = rng.choice(ENERGIES)
    base = BASE_MODELS[name]().structure(4 * e, kmax, name=name)
    classes = [ClassLabel(e, random_boundary(rng, b1), "e1")]
    if b1 and rng.random() < 0.5:
        second = ClassLabel(e, random_boundary(rng, b1), "e2")
        if second != classes[0]:
            classes.append(second)
    random_arities = (0, 1, 2) if (1, ZERO) in base.ops else (1, 2)

    def build():
        return complete_structure(base, classes=classes, rng=rng, random_arities=random_arities)

    S = _retry(build, rng, attempts)
    return S.replace(m_minus1=random_minus1(rng, S.class_closure(classes)))


def transfer_fixture(seed, model=None):
    """Structure with ``m_{1,0} != 0`` and a known Maurer-Cartan point on cohomology.

    A completed structure without arity-0 terms is twisted by ``x = h + w``
    with ``h`` harmonic and ``w`` in the complement of ``H + Im m1``; then
    ``-h`` (in H coordinates) solves the canonical Maurer-Cartan equation.
    Returns ``(S, h_coordinates)`` where ``h_coordinates`` is an NVector on H.
    Two generator energies ``1`` and ``3/2``, truncation 4.
    """
    rng = random.Random(seed)
    name = model or rng.choice(["S1xS2+pair", "#2(S1xS2)+pair", "S3+pair"])
    base = BASE_MODELS[name]().structure(Fraction(4), 5, name=name)
    classes = [ClassLabel(1, (), "e"), ClassLabel(Fraction(3, 2), (), "f")]

    def build():
        return complete_structure(base, classes=classes, rng=rng, random_arities=(1, 2),
                                  density=Fraction(1, 2))

    S0 = _retry(build, rng, 20)
    hd = HarmonicData(S0)
    n, r = S0.dimension, hd.rank
    h1 = [j for j, d in enumerate(hd.h_degrees) if d == 1]
    w1 = [w for w in hd.w_vectors if any(w[i] for i in S0.basis.of_degree(1))]
    hterms, x = {}, NVector.zero(n, S0.emax)
    for lam in (Fraction(1), Fraction(3, 2)):
        hc = [Fraction(0)] * r
        vec = [Fraction(0)] * n
        for j in h1:
            if rng.random() < 0.7:
                hc[j] = Fraction(rng.choice((1, -1, 2)))
        for w in w1:
            if rng.random() < 0.7:
                c = Fraction(rng.choice((1, -1, Fraction(1, 2))))
                vec = [a + c * b for a, b in zip(vec, w)]
        for j in range(r):
            vec = [a + hc[j] * b for a, b in zip(vec, hd.h_vectors[j])]
        if any(hc):
            hterms[lam] = hc
        x = x + NVector.from_levels(n, {lam: vec}, S0.emax)
    S = twist(S0, x, kmax=3)
    closure = S.class_closure()
    S = S.replace(m_minus1=random_minus1(rng, closure))
    b = NVector.from_levels(r, {lam: [-c for c in hc] for lam, hc in hterms.items()}, S.emax)
    return S, b


def sphere_fixture(seed):
    """Rational-homology-sphere type fixture: ``S^3`` plus an acyclic pair, with arity-0 terms."""
    return generate(seed, model="S3+pair")


def wallcross_fixture(seed):
    """Generated structure, isotopy generators, a Maurer-Cartan element and random sphere counts."""
    rng = random.Random(seed)
    for attempt in range(20):
        S = generate(rng.randrange(10 ** 6))
        c = random_generators(S, rng, max_arity=1, tdeg=2)
        try:
            F = integrate_isotopy(S, c)
        except ValueError:
            continue
        sols = mc_solutions(S, 1, rng)
        if not sols:
            continue
        counts = random_counts(rng, S.class_closure(), S.emax)
        return F, counts, sols[0].b
    raise RuntimeError("no usable wall-crossing fixture found")
