"""One-parameter families of structures generated by degree-0 operations.

A family is determined by its value at ``t = 0`` and operations
``c_{k,beta}(t)`` (polynomial in ``t``, positive classes only).  The
operations ``m^t`` solve::

    d/dt m_k + sum (-1)^(*) c(.., m(..), ..) - sum m(.., c(..), ..) = 0

and the constant terms solve ``d/dt m_{-1,beta} + sum <c_{0,b1}, m_{0,b2}> = 0``.
Both are integrated exactly, one energy level at a time.
"""

from fractions import Fraction

from .ainf import (FilteredAInfinity, OperationTensor, add_into, check_cyclic,
                   check_structure, clean_map, class_closure, compose_into, constant_map_vector,
                   apply_map, index_by_output, map_to_tensor, orbit_representatives)
from .graded import NVector
from .mc import exponent_levels, mc_residual
from .novikov import NovikovScalar, as_fraction
from .report import CheckReport
from .superpotential import psi, psi_prime, constant_term


class TimeFamily:
    """Family ``(m^t, m^t_{-1}, c^t)``; ``m`` is a structure with t-polynomial entries."""

    def __init__(self, m, c, source=None):
        self.m = m
        self.c = {key: t for key, t in c.items() if not t.is_zero() and key[1].energy < m.emax}
        self.source = dict(source or {})
        self._cmaps = {}

    def c_map(self, k, cls):
        key = (k, cls)
        if key not in self._cmaps:
            t = self.c.get(key)
            self._cmaps[key] = t.to_map(self.m.pairing) if t is not None else {}
        return self._cmaps[key]

    def classes(self):
        return class_closure(list(self.m.classes()) + [cls for (_, cls) in self.c], self.m.emax)

    def at(self, t0):
        return self.m.at_t(t0)

    def reparametrize(self, a, b):
        """Family ``u -> F(a u + b)``; generators pick up the factor ``a``."""
        ops = {key: t.substitute_t(a, b) for key, t in self.m.ops.items()}
        mm = None if self.m.m_minus1 is None else {c: v.substitute_t(a, b) for c, v in self.m.m_minus1.items()}
        m = FilteredAInfinity(self.m.basis, self.m.pairing, ops, self.m.emax, self.m.kmax, mm, self.m.name)
        c = {key: t.substitute_t(a, b).scaled(as_fraction(a)) for key, t in self.c.items()}
        src = {cls: v.substitute_t(a, b) * as_fraction(a) for cls, v in self.source.items()}
        return TimeFamily(m, c, src)

    def __repr__(self):
        return f"TimeFamily({self.m!r}, c={sorted((k, c.label()) for k, c in self.c)})"


def _pair_constants(pairing, v, w):
    """``<v, w>`` for arity-0 maps as a t-polynomial."""
    g = pairing.matrix
    out = {}
    for (d1, _), a in v.items():
        for (d2, _), b in w.items():
            s = Fraction(0)
            for i, x in a.items():
                for j, y in b.items():
                    if g[i][j]:
                        s += x * y * g[i][j]
            if s:
                out[(0, d1 + d2)] = out.get((0, d1 + d2), 0) + s
    return NovikovScalar(out)


def _map_integrate(mp):
    return {(d + 1, ins): {a: c / (d + 1) for a, c in vec.items()} for (d, ins), vec in mp.items()}


def _map_derivative(mp):
    return clean_map({(d - 1, ins): {a: c * d for a, c in vec.items()} for (d, ins), vec in mp.items() if d})


def isotopy_rhs(S, c_maps, k, cls):
    """``d/dt m_{k,cls}`` predicted by the isotopy equation, from lower classes."""
    acc = {}
    sh = S.shifted
    for (k1, b1), cm in c_maps.items():
        b2 = cls - b1
        if b2.energy < 0:
            continue
        # -(-1)^(*) c_{k1,b1}(.., m_{k2,b2}(..), ..)
        k2 = k + 1 - k1
        if k2 >= 0 and (k2, b2) in S.ops:
            inner = index_by_output(S.op_map(k2, b2))
            for pos in range(k1):
                compose_into(acc, cm, inner, pos, 1, sh, -1)
        # + m_{k1', b2}(.., c_{k1,b1}(..), ..)
        k3 = k + 1 - k1
        if k3 >= 1 and (k3, b2) in S.ops:
            outer = S.op_map(k3, b2)
            cin = index_by_output(cm)
            for pos in range(k3):
                compose_into(acc, outer, cin, pos, 0, sh, 1)
    return acc


def minus1_rate(S, c_maps, cls):
    """``-sum_{b1 + b2 = cls} <c_{0,b1}(1), m_{0,b2}(1)>`` as a t-polynomial."""
    total = NovikovScalar.zero()
    for (k1, b1), cm in c_maps.items():
        if k1 != 0:
            continue
        b2 = cls - b1
        if (0, b2) in S.ops:
            total = total - _pair_constants(S.pairing, cm, S.op_map(0, b2))
    return total


def integrate_isotopy(m0, c, arity_cap=None):
    """Integrate the isotopy equations from ``m0`` with generators ``c``.

    ``c`` maps ``(k, class)`` to degree-0 tensors (``parity=0``).  Raises
    ``ValueError`` if the family would need operations above ``m0.kmax``.
    """
    for (k, cls), t in c.items():
        if cls.is_zero():
            raise ValueError("generators must vanish at class 0")
        if t.parity != 0:
            raise ValueError("generators must have parity 0")
    emax = m0.emax
    c = {key: t for key, t in c.items() if key[1].energy < emax and not t.is_zero()}
    classes = class_closure(list(m0.classes()) + [cls for (_, cls) in c], emax)
    cmax = max((k for (k, _) in c), default=0)
    kseed = max((k for (k, _) in m0.ops), default=2)
    if arity_cap is None:
        arity_cap = max(kseed, 2) + len(classes) * max(cmax - 1, 0) + 1
    c_maps = {key: t.to_map(m0.pairing) for key, t in c.items()}
    ops = {key: t for key, t in m0.ops.items() if key[1].is_zero()}
    mm = {}
    for cls in classes:
        cur = FilteredAInfinity(m0.basis, m0.pairing, ops, emax, arity_cap)
        for k in range(arity_cap + 1):
            rate = isotopy_rhs(cur, c_maps, k, cls)
            mp = {}
            t0 = m0.ops.get((k, cls))
            if t0 is not None:
                for key, vec in m0.op_map(k, cls).items():
                    add_into(mp, key, vec)
            for key, vec in _map_integrate(rate).items():
                add_into(mp, key, vec)
            if mp:
                ops[(k, cls)] = map_to_tensor(mp, m0.pairing, k, cls)
        start = (m0.m_minus1 or {}).get(cls, NovikovScalar.zero())
        mm[cls] = start + minus1_rate(cur, c_maps, cls).integrate_t()
    too_big = sorted({(k, cls.label()) for (k, cls) in ops if k > m0.kmax})
    if too_big:
        raise ValueError(f"family needs operations above arity {m0.kmax}: {too_big}")
    mm = {cls: v for cls, v in mm.items() if not v.is_zero()} if m0.m_minus1 is not None else None
    m = FilteredAInfinity(m0.basis, m0.pairing, ops, emax, m0.kmax, mm, m0.name)
    return TimeFamily(m, c)


def check_isotopy(F, extra_source=None):
    """Verify every defining identity of a family exactly (as polynomials in ``t``).

    ``extra_source`` maps classes to t-polynomials added to the right-hand side
    of the ``m_{-1}`` equation.
    """
    S = F.m
    bad = []
    rep = check_structure(S)
    bad += rep.violations
    ctens = list(F.c.values())
    rc = check_cyclic(ctens, S.basis)
    bad += ["generator " + v for v in rc.violations]
    sh = S.shifted
    for (k, cls), t in F.c.items():
        if cls.is_zero():
            bad.append(f"generator at class 0, arity {k}")
        for (_, idx) in t.entries:
            if sum(sh[i] for i in idx) != 1:
                bad.append(f"generator ({k}, {cls.label()}) has wrong degree")
                break
    for (k, cls), t in S.ops.items():
        if cls.is_zero() and t.t_degree():
            bad.append(f"m_({k}, 0) depends on t")
    c_maps = {key: F.c_map(*key) for key in F.c}
    kmax = max((k for (k, _) in S.ops), default=0) + 1
    for cls in F.classes():
        for k in range(kmax + 1):
            lhs = _map_derivative(S.op_map(k, cls)) if (k, cls) in S.ops else {}
            rate = isotopy_rhs(S, c_maps, k, cls)
            for key, vec in rate.items():
                add_into(lhs, key, vec, -1)
            if lhs:
                bad.append(f"isotopy equation fails at arity {k}, class {cls.label()}")
        if S.m_minus1 is not None:
            lhs = S.m_minus1.get(cls, NovikovScalar.zero()).d_dt() - minus1_rate(S, c_maps, cls)
            if extra_source:
                lhs = lhs - extra_source.get(cls, NovikovScalar.zero())
            if not lhs.is_zero():
                bad.append(f"constant-term equation fails at class {cls.label()}: residual {lhs}")
    return CheckReport("pseudo-isotopy", not bad, bad)


def extend_truncation(F, e0, m1_minus1):
    """Redefine ``m_{-1}`` at classes with energy ``>= e0`` from prescribed values at ``t = 1``.

    The new values solve the constant-term equation backward from ``t = 1``:
    ``m_{-1}(t) = m1 + integral_t^1 <c_0, m_0> ds``.
    """
    S = F.m
    e0 = as_fraction(e0)
    c_maps = {key: F.c_map(*key) for key in F.c}
    mm = {cls: v for cls, v in (S.m_minus1 or {}).items() if cls.energy < e0}
    for cls, v1 in m1_minus1.items():
        if cls.energy < e0:
            raise ValueError(f"class {cls.label()} lies below the old truncation level")
        v1 = v1 if isinstance(v1, NovikovScalar) else NovikovScalar.constant(as_fraction(v1))
        rate = minus1_rate(S, c_maps, cls)
        anti = rate.integrate_t()
        mm[cls] = v1 + anti - anti.evaluate_t(1)
    m = S.replace(m_minus1=mm)
    return TimeFamily(m, F.c, F.source)


def transport_mc(F, b0):
    """Solve ``db/dt = -sum T^E c_{k,beta}(b, .., b)`` with ``b(0) = b0``; exact polynomial in ``t``."""
    S = F.m
    b0 = b0.with_emax(S.emax)
    b = b0
    levels = exponent_levels(S, [b0], extra=[cls.energy for (_, cls) in F.c])
    for lam in levels:
        rate = NVector.zero(S.dimension, S.emax)
        for (k, cls) in sorted(F.c, key=lambda kc: (kc[1], kc[0])):
            if cls.energy > lam:
                continue
            cm = F.c_map(k, cls)
            if k == 0:
                rate = rate + constant_map_vector(cm, S.dimension, cls.energy, S.emax)
            else:
                rate = rate + apply_map(cm, [b] * k, energy=cls.energy, emax=S.emax)
        rate = rate.restrict_levels(lambda l: l == lam)
        b = b.restrict_levels(lambda l: l != lam) + b0.restrict_levels(lambda l: l == lam) - rate.integrate_t()
    return b


def invariance_profile(F, b0, drop_constant_correction=False):
    """``f(t) = psi_{m^t}(b(t))`` along the transported solution.

    With ``drop_constant_correction`` the ``m_{-1}`` terms are frozen at ``t = 0``,
    which breaks invariance in a predictable way.
    """
    S = F.m
    b = transport_mc(F, b0)
    if drop_constant_correction:
        frozen = {cls: v.evaluate_t(0) for cls, v in (S.m_minus1 or {}).items()}
        f = psi_prime(S, b) + constant_term(S.replace(m_minus1=frozen))
    else:
        f = psi(S, b)
    return f, b


def verify_isotopy_invariance(F, b0):
    """Transported ``b(t)`` stays Maurer-Cartan and ``f(t)`` is constant."""
    f, b = invariance_profile(F, b0)
    bad = []
    if not mc_residual(F.m, b).is_zero():
        bad.append("transported element is not Maurer-Cartan for all t")
    if not f.is_t_constant():
        bad.append(f"potential varies: {f}")
    return CheckReport("isotopy invariance", not bad, bad, {"f": f, "b": b})


def constant_correction_integral(F):
    """``sum_beta T^E(beta) integral_0^1 sum <c_{0,b1}, m_{0,b2}> dt`` (the dropped correction)."""
    S = F.m
    c_maps = {key: F.c_map(*key) for key in F.c}
    total = NovikovScalar.zero(S.emax)
    for cls in F.classes():
        rate = -minus1_rate(S, c_maps, cls)
        total = total + NovikovScalar.constant(rate.integrate_t().evaluate_t(1).coefficient(0)).shift(cls.energy).with_emax(S.emax)
    return total


def random_generators(S, rng, max_arity=1, tdeg=3, density=Fraction(1, 3),
                      values=(1, -1, 2, Fraction(1, 2), Fraction(-1, 3))):
    """Random cyclic degree-0 tensors at the structure's classes, polynomial of degree ``<= tdeg`` in t."""
    c = {}
    for cls in S.class_closure():
        for k in range(max_arity + 1):
            reps = {}
            for rep in orbit_representatives(S.basis, k, parity=0):
                for d in range(tdeg + 1):
                    if rng.random() < density:
                        reps[(d, rep)] = rng.choice(values)
            if reps:
                t = OperationTensor.from_orbits(k, cls, S.basis, reps, parity=0)
                if not t.is_zero():
                    c[(k, cls)] = t
    return c


def random_gauge_parameter(S, rng, tdeg=3, density=Fraction(1, 2), values=(1, -1, 2, Fraction(1, 3))):
    """Degree-0 element of positive valuation, polynomial of degree ``<= tdeg`` in t."""
    comps = {}
    levels = exponent_levels(S)
    for i in S.basis.of_degree(0):
        terms = {}
        for lam in levels:
            for d in range(tdeg + 1):
                if rng.random() < density:
                    terms[(lam, d)] = rng.choice(values)
        if terms:
            comps[i] = NovikovScalar(terms, S.emax)
    return NVector(S.dimension, comps, S.emax)
