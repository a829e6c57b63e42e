"""Laurent form of the potential for divisor-type structures.

When the brackets of every class ``beta`` are the polarised powers
``<m_k(x_1..x_k), x_0> = (1/k!) prod_j (x_j . d beta) m_{-1,beta}`` on
degree-one inputs, the potential resums to
``sum_beta T^E(beta) m_{-1,beta} y^(d beta)`` with ``y_i = exp(x_i)``.
"""

import random
from fractions import Fraction
from itertools import product
from math import factorial

from . import models
from .ainf import ClassLabel, OperationTensor
from .graded import NVector
from .novikov import ConfigurationError, NovikovScalar, as_fraction, unit_power
from .report import CheckReport
from .superpotential import psi


class LaurentElement:
    """Finite sum of ``coef * T^lam * y^n`` with ``n`` an integer vector, truncated below ``emax``."""

    def __init__(self, terms, nvars, emax=None):
        self.nvars = nvars
        self.emax = None if emax is None else as_fraction(emax)
        out = {}
        for (lam, n), c in terms.items():
            lam, c, n = as_fraction(lam), as_fraction(c), tuple(int(a) for a in n)
            if len(n) != nvars:
                raise ValueError("exponent vector has the wrong length")
            if self.emax is not None and lam >= self.emax:
                continue
            if c:
                out[(lam, n)] = out.get((lam, n), 0) + c
        self.terms = {k: v for k, v in out.items() if v}

    def __eq__(self, other):
        if not isinstance(other, LaurentElement):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __add__(self, other):
        emax = self.emax if other.emax is None else other.emax if self.emax is None else min(self.emax, other.emax)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return LaurentElement(terms, self.nvars, emax)

    def exponents(self):
        return sorted({lam for lam, _ in self.terms})

    def min_exponent(self):
        return min((lam for lam, _ in self.terms), default=None)

    def is_polynomial(self):
        return all(min(n, default=0) >= 0 for _, n in self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (lam, n), c in sorted(self.terms.items()):
            mono = "*".join(f"y{i + 1}^{a}" if a != 1 else f"y{i + 1}" for i, a in enumerate(n) if a)
            s = f"{c}*T^{lam}"
            parts.append(s + ("*" + mono if mono else ""))
        return " + ".join(parts)


def divisor_tensors(basis, cls, value, kmax):
    """Polarised divisor brackets of class ``cls`` with ``m_{-1} = value``, arities ``0..kmax``."""
    deg1 = basis.of_degree(1)
    d = cls.boundary_vector(len(deg1))
    value = as_fraction(value)
    out = {}
    for k in range(kmax + 1):
        entries = {}
        for idx in product(range(len(deg1)), repeat=k + 1):
            c = value / factorial(k)
            for j in idx:
                c *= d[j]
            if c:
                entries[tuple(deg1[j] for j in idx)] = c
        if entries:
            out[(k, cls)] = OperationTensor(k, cls, entries)
    return out


def divisor_model(b1, data, emax, kmax=5):
    """Cohomology model with ``b1`` degree-one classes carrying divisor brackets.

    ``data`` lists ``(energy, boundary, m_{-1})``; ``b1 <= 3`` uses
    ``#b1 (S^1 x S^2)`` (``b1 = 0`` gives ``S^3``).
    """
    base = models.s1s2_sum(b1) if b1 else models.sphere3()
    S = base.structure(emax, kmax, name=f"divisor b1={b1}")
    ops = dict(S.ops)
    mm = {}
    for energy, boundary, value in data:
        boundary = tuple(boundary)
        if len(boundary) != b1:
            raise ValueError("boundary has the wrong length")
        cls = ClassLabel(energy, boundary)
        if cls.energy >= S.emax:
            continue
        ops.update(divisor_tensors(S.basis, cls, value, kmax))
        mm[cls] = NovikovScalar.constant(as_fraction(value))
    return S.replace(ops=ops, m_minus1=mm)


def check_divisor(S):
    """Violations of the divisor identity (empty when every positive class satisfies it)."""
    bad = []
    deg1 = S.basis.of_degree(1)
    mm = S.m_minus1 or {}
    for (k, cls), t in S.ops.items():
        if cls.is_zero():
            continue
        value = mm.get(cls, NovikovScalar.zero()).coefficient(0) if cls in mm else Fraction(0)
        want = divisor_tensors(S.basis, cls, value, k).get((k, cls))
        want_entries = {} if want is None else want.entries
        if t.entries != want_entries:
            bad.append(f"class {cls.label()} arity {k} breaks the divisor identity")
    for cls in mm:
        if cls.is_zero():
            bad.append("m_-1 at class 0")
        if len(cls.boundary) > len(deg1):
            bad.append(f"class {cls.label()} has too many boundary entries")
    return bad


def psi_laurent(S):
    """``sum_beta T^E(beta) m_{-1,beta} y^(d beta)``; raises if the divisor identity fails."""
    bad = check_divisor(S)
    if bad:
        raise ConfigurationError("; ".join(bad))
    nvars = len(S.basis.of_degree(1))
    terms = {}
    for cls, v in (S.m_minus1 or {}).items():
        if not v.is_t_constant():
            raise ConfigurationError("m_-1 depends on t")
        key = (cls.energy, cls.boundary_vector(nvars))
        terms[key] = terms.get(key, 0) + v.coefficient(0)
    return LaurentElement(terms, nvars, S.emax)


def substitute_shift(f, c):
    """Substitute ``y_i -> T^(-c_i) y_i``: ``(lam, n) -> (lam - sum c_i n_i, n)``.

    Raises if a term would get a negative exponent.
    """
    c = [as_fraction(x) for x in c]
    if len(c) != f.nvars:
        raise ValueError("shift has the wrong length")
    terms, bad = {}, []
    for (lam, n), coef in f.terms.items():
        new = lam - sum(ci * ni for ci, ni in zip(c, n))
        if new < 0:
            bad.append(f"T^{lam} y^{n}")
        terms[(new, n)] = coef
    if bad:
        raise ConfigurationError("shift leaves the admissible window for: " + ", ".join(bad))
    return LaurentElement(terms, f.nvars, f.emax)


def shift_energies(S, c):
    """Divisor structure with class energies ``E - sum c_i d_i beta`` (same brackets and ``m_{-1}``)."""
    c = [as_fraction(x) for x in c]
    data = []
    nvars = len(S.basis.of_degree(1))
    for cls, v in (S.m_minus1 or {}).items():
        d = cls.boundary_vector(nvars)
        data.append((cls.energy - sum(ci * di for ci, di in zip(c, d)), d, v.coefficient(0)))
    return divisor_model(nvars, data, S.emax, S.kmax)


def default_delta(f):
    """``min exponent / (max |n_i| * number of variables)``; ``None`` if nothing restricts it."""
    lam = [l for l, n in f.terms if any(n)]
    spread = max((abs(a) for _, n in f.terms for a in n), default=0)
    if not lam or not spread:
        return None
    return min(lam) / (spread * f.nvars)


def eval_window(f, y, delta=None):
    """Evaluate at Novikov values ``y_i`` with ``|v(y_i)| < delta``; truncated below ``f.emax``."""
    if len(y) != f.nvars:
        raise ValueError("need one value per variable")
    delta = default_delta(f) if delta is None else as_fraction(delta)
    if f.emax is None:
        raise ConfigurationError("evaluation needs a truncation level")
    for i, yi in enumerate(y):
        v = yi.valuation()
        if v is None:
            raise ConfigurationError(f"y{i + 1} is zero")
        if delta is not None and abs(v) >= delta:
            raise ConfigurationError(f"v(y{i + 1}) = {v} lies outside (-{delta}, {delta})")
    vals = [yi.valuation() for yi in y]
    total = NovikovScalar.zero(f.emax)
    for (lam, n), coef in f.terms.items():
        shift = lam + sum(ni * v for ni, v in zip(n, vals))
        if shift < 0:
            raise ConfigurationError(f"term T^{lam} y^{n} has negative valuation at these values")
        bound = f.emax - shift
        if bound <= 0:
            continue
        term = NovikovScalar.constant(coef)
        for ni, yi, v in zip(n, y, vals):
            if not ni:
                continue
            if yi.emax is not None and yi.emax - v < bound:
                raise ConfigurationError("y is not known to enough precision")
            unit = NovikovScalar(dict(yi.shift(-v).items()))
            term = (term * unit_power(unit, ni, bound)).truncate(bound)
        total = total + NovikovScalar(dict(term.items())).shift(shift).truncate(f.emax)
    return total


def exp_coordinates(x):
    """``y_i = exp(x_i)`` for ``x_i`` of positive valuation."""
    return [xi.exp() for xi in x]


def random_point(S, rng):
    """Degree-one coordinates ``x_i`` of positive valuation, built from the lowest class energy."""
    emin = min((c.energy for c in S.m_minus1 or {}), default=S.emax / 4)
    return [NovikovScalar({emin: rng.choice((1, -1, 2)), emin * Fraction(3, 2): rng.choice((0, 1, Fraction(1, 3)))},
                          S.emax) for _ in S.basis.of_degree(1)]


def random_shift(S, rng):
    emin = min((c.energy for c in S.m_minus1 or {}), default=S.emax / 4)
    n = len(S.basis.of_degree(1))
    return [Fraction(rng.choice((-1, 0, 1)), 8 * n) * emin for _ in range(n)]


def laurent_report(S, x, c=None):
    """Compare the Laurent form at ``y = exp(x)`` with ``psi(b)`` and, given ``c``, check shift covariance."""
    bad = []
    f = psi_laurent(S)
    deg1 = S.basis.of_degree(1)
    b = NVector(S.dimension, dict(zip(deg1, x)), S.emax)
    lhs = eval_window(f, exp_coordinates(x))
    rhs = psi(S, b)
    if lhs != rhs:
        bad.append(f"Laurent value {lhs} differs from psi(b) = {rhs}")
    data = {"laurent": f, "value": lhs, "psi": rhs}
    if c is not None:
        shifted = substitute_shift(f, c)
        want = psi_laurent(shift_energies(S, c))
        if shifted != want:
            bad.append(f"shift by {[str(a) for a in c]} gives {shifted}, shifted structure gives {want}")
        data["shifted"] = shifted
    return CheckReport("Laurent form", not bad, bad, data)


def divisor_fixture(seed, b1=None):
    """Random divisor model with ``b1 <= 3``: one to three classes, truncation ``4 * min energy``."""
    rng = random.Random(seed)
    b1 = rng.randint(1, 3) if b1 is None else b1
    emin = rng.choice((Fraction(1, 2), Fraction(1)))
    data = []
    for j in range(rng.randint(1, 3)):
        energy = emin * rng.choice((1, 1, Fraction(3, 2), 2))
        if j == 0:
            energy = emin
        boundary = tuple(rng.choice((-1, 0, 1, 1, 2)) for _ in range(b1))
        data.append((energy, boundary, rng.choice((1, -1, 2, Fraction(1, 2), 3))))
    return divisor_model(b1, data, 4 * emin)
