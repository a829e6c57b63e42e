"""Truncated Novikov ring arithmetic with exact rational coefficients.

An element is a finite sum of terms ``a * T**lam * t**d`` where ``lam`` is a
rational energy and ``d`` a nonnegative integer power of an auxiliary time
parameter ``t``.  Constant-in-``t`` elements are the usual truncated
Novikov elements; the ``t`` direction is only used for one-parameter families.

Terms with ``lam >= emax`` are discarded.  ``emax=None`` means no truncation.

>>> T = NovikovScalar.monomial
>>> (2 * T(Fraction(1, 2), 5)) * (3 * T(Fraction(1, 2), 5) + T(1, 5))
6*T^1 + 2*T^3/2
"""

from fractions import Fraction
from math import comb, factorial


class ConfigurationError(ValueError):
    """Raised when operands carry incompatible truncation data."""


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"not an exact rational: {x!r}")


def merge_emax(a, b):
    """Common truncation level of two operands; ``None`` is compatible with anything."""
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise ConfigurationError(f"mixed truncation levels {a} and {b}")


class EnergyMonoid:
    """Finitely generated additive monoid of nonnegative rational energies.

    >>> EnergyMonoid([Fraction(1, 2), 1], emax=2).elements()
    [Fraction(0, 1), Fraction(1, 2), Fraction(1, 1), Fraction(3, 2)]
    """

    def __init__(self, generators, emax=None):
        gens = sorted({as_fraction(g) for g in generators})
        if any(g <= 0 for g in gens):
            raise ValueError("monoid generators must be positive")
        self.generators = tuple(gens)
        self.emax = None if emax is None else as_fraction(emax)

    def elements(self, emax=None):
        bound = self.emax if emax is None else as_fraction(emax)
        if bound is None:
            raise ConfigurationError("an energy bound is needed to list monoid elements")
        return energies_below(self.generators, bound)

    def __contains__(self, e):
        e = as_fraction(e)
        return e in set(energies_below(self.generators, e + 1))

    def __repr__(self):
        return f"EnergyMonoid({[str(g) for g in self.generators]}, emax={self.emax})"


def energies_below(generators, bound, include_zero=True):
    """All finite sums of ``generators`` strictly below ``bound``, sorted."""
    gens = [as_fraction(g) for g in generators if as_fraction(g) > 0]
    seen = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                s = e + g
                if s < bound and s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    out = sorted(seen)
    return out if include_zero else out[1:]


class NovikovScalar:
    __slots__ = ("_t", "emax")

    def __init__(self, terms=None, emax=None):
        self.emax = None if emax is None else as_fraction(emax)
        raw = {}
        for lam, coef in (terms or {}).items():
            if isinstance(lam, tuple):
                lam, d = lam
            else:
                d = 0
            lam, coef = as_fraction(lam), as_fraction(coef)
            if d < 0:
                raise ValueError("negative power of t")
            if coef and (self.emax is None or lam < self.emax):
                key = (lam, int(d))
                raw[key] = raw.get(key, 0) + coef
        self._t = {k: v for k, v in raw.items() if v}

    @classmethod
    def _raw(cls, terms, emax):
        x = cls.__new__(cls)
        x._t = terms
        x.emax = emax
        return x

    @classmethod
    def monomial(cls, lam, emax=None, coef=1, tdeg=0):
        return cls({(lam, tdeg): coef}, emax)

    @classmethod
    def constant(cls, c, emax=None):
        return cls({0: c}, emax)

    @classmethod
    def zero(cls, emax=None):
        return cls._raw({}, None if emax is None else as_fraction(emax))

    # inspection

    def items(self):
        """Sorted ``((lam, tdeg), coef)`` pairs."""
        return sorted(self._t.items())

    @property
    def terms(self):
        """``{lam: coef}`` for a constant-in-t element."""
        if not self.is_t_constant():
            raise ValueError("element depends on t")
        return {lam: c for (lam, _), c in sorted(self._t.items())}

    def is_zero(self):
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def valuation(self):
        """Smallest exponent with a nonzero coefficient, ``None`` for zero."""
        if not self._t:
            return None
        return min(lam for lam, _ in self._t)

    def coefficient(self, lam, tdeg=0):
        return self._t.get((as_fraction(lam), tdeg), Fraction(0))

    def exponents(self):
        return sorted({lam for lam, _ in self._t})

    def t_degree(self):
        return max((d for _, d in self._t), default=0)

    def is_t_constant(self):
        return all(d == 0 for _, d in self._t)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, NovikovScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return NovikovScalar._raw({(Fraction(0), 0): Fraction(other)} if other else {}, None)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        emax = merge_emax(self.emax, other.emax)
        out = dict(self._t)
        for k, v in other._t.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        if emax is not None:
            out = {k: v for k, v in out.items() if k[0] < emax}
        return NovikovScalar._raw(out, emax)

    __radd__ = __add__

    def __neg__(self):
        return NovikovScalar._raw({k: -v for k, v in self._t.items()}, self.emax)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return NovikovScalar._raw({}, self.emax)
            return NovikovScalar._raw({k: v * other for k, v in self._t.items()}, self.emax)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        emax = merge_emax(self.emax, other.emax)
        out = {}
        for (l1, d1), a in self._t.items():
            for (l2, d2), b in other._t.items():
                lam = l1 + l2
                if emax is not None and lam >= emax:
                    continue
                k = (lam, d1 + d2)
                out[k] = out.get(k, 0) + a * b
        return NovikovScalar._raw({k: v for k, v in out.items() if v}, emax)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return self.inverse() ** (-n)
        result = NovikovScalar._raw({(Fraction(0), 0): Fraction(1)}, self.emax)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, NovikovScalar) else other
        if other is NotImplemented:
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def truncate(self, emax):
        emax = as_fraction(emax)
        return NovikovScalar._raw({k: v for k, v in self._t.items() if k[0] < emax}, emax)

    def with_emax(self, emax):
        """Same terms under a new truncation level (``None`` drops truncation)."""
        if emax is None:
            return NovikovScalar._raw(dict(self._t), None)
        return self.truncate(emax)

    def shift(self, lam):
        """Multiply by ``T**lam``."""
        lam = as_fraction(lam)
        out = {(l + lam, d): v for (l, d), v in self._t.items()}
        if self.emax is not None:
            out = {k: v for k, v in out.items() if k[0] < self.emax}
        return NovikovScalar._raw(out, self.emax)

    def exp(self):
        """Exponential series; needs strictly positive valuation and a finite truncation."""
        v = self.valuation()
        if v is None:
            return NovikovScalar._raw({(Fraction(0), 0): Fraction(1)}, self.emax)
        if v <= 0:
            raise ValueError("exp needs an argument of positive valuation")
        if self.emax is None:
            raise ConfigurationError("exp needs a finite truncation level")
        result = NovikovScalar._raw({(Fraction(0), 0): Fraction(1)}, self.emax)
        power = result
        n = 1
        while n * v < self.emax:
            power = power * self * Fraction(1, n)
            result = result + power
            n += 1
        return result

    def inverse(self):
        """Inverse of ``a T**v (1 + z)`` with ``v(z) > 0``; may have negative exponents."""
        if not self._t:
            raise ZeroDivisionError("inverse of zero")
        if not self.is_t_constant():
            raise ValueError("inverse of a t-dependent element")
        v = self.valuation()
        lead = self.coefficient(v)
        z = self.shift(-v) * (1 / lead) - 1
        z = NovikovScalar._raw(dict(z._t), None)
        bound = None if self.emax is None else self.emax + 2 * abs(v)
        inv_unit = _unit_power(z, -1, bound)
        return inv_unit.shift(-v) * (1 / lead)

    # t direction

    def evaluate_t(self, t0):
        t0 = as_fraction(t0)
        out = {}
        for (lam, d), c in self._t.items():
            k = (lam, 0)
            out[k] = out.get(k, 0) + c * t0 ** d
        return NovikovScalar._raw({k: v for k, v in out.items() if v}, self.emax)

    def d_dt(self):
        return NovikovScalar._raw({(lam, d - 1): c * d for (lam, d), c in self._t.items() if d}, self.emax)

    def integrate_t(self):
        """Antiderivative vanishing at ``t = 0``."""
        return NovikovScalar._raw({(lam, d + 1): c / (d + 1) for (lam, d), c in self._t.items()}, self.emax)

    def substitute_t(self, a, b):
        """Replace ``t`` by ``a*t + b``."""
        a, b = as_fraction(a), as_fraction(b)
        out = {}
        for (lam, d), c in self._t.items():
            for j in range(d + 1):
                w = c * comb(d, j) * a ** j * b ** (d - j)
                if w:
                    k = (lam, j)
                    out[k] = out.get(k, 0) + w
        return NovikovScalar._raw({k: v for k, v in out.items() if v}, self.emax)

    # display and serialisation

    def __repr__(self):
        if not self._t:
            return "0"
        parts = []
        for (lam, d), c in sorted(self._t.items()):
            s = str(c)
            if lam:
                s += f"*T^{lam}"
            if d:
                s += f"*t^{d}" if d > 1 else "*t"
            parts.append(s)
        return " + ".join(parts)

    def to_quads(self):
        """``[[num, den, expnum, expden], ...]`` for a constant-in-t element."""
        return [[c.numerator, c.denominator, lam.numerator, lam.denominator]
                for lam, c in self.terms.items()]

    @classmethod
    def from_quads(cls, quads, emax=None):
        return cls({Fraction(q[2], q[3]): Fraction(q[0], q[1]) for q in quads}, emax)


def _unit_power(z, n, bound):
    """``(1 + z)**n`` for integer ``n`` and ``v(z) > 0``, truncated below ``bound``."""
    one = NovikovScalar._raw({(Fraction(0), 0): Fraction(1)}, None)
    if n >= 0:
        r = one
        for _ in range(n):
            r = r * z + r
            if bound is not None:
                r = r.truncate(bound)
        return r if bound is None else r.truncate(bound)
    v = z.valuation()
    if v is None:
        return one
    if bound is None:
        raise ConfigurationError("negative powers need a finite truncation level")
    # binomial series sum_j C(n, j) z^j
    result = one
    power = one
    j = 1
    while j * v < bound:
        power = (power * z).truncate(bound)
        coef = Fraction(1)
        for i in range(j):
            coef *= (n - i)
        coef /= factorial(j)
        result = result + power * coef
        j += 1
    return result.truncate(bound)


def unit_power(x, n, bound):
    """``x**n`` for a unit-times-monomial ``x`` where the result is kept below ``bound``.

    The leading monomial ``a T**v`` is split off so the unit series is only
    expanded as far as the shifted bound requires.
    """
    v = x.valuation()
    lead = x.coefficient(v)
    z = NovikovScalar._raw(dict((x.shift(-v) * (1 / lead) - 1)._t), None)
    shift = n * v
    inner_bound = as_fraction(bound) - shift
    if inner_bound <= 0:
        return NovikovScalar.zero(bound)
    return (_unit_power(z, n, inner_bound).shift(shift) * (lead ** n)).with_emax(bound)


def nov_exp(x):
    return x.exp()


def valuation(x):
    return x.valuation()


def truncate(x, emax):
    return x.truncate(emax)
