"""Maurer-Cartan equation: residual, level-by-level solver and gauge flow."""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from . import linalg
from .ainf import ClassLabel, apply_map, compose_multi, constant_map_vector, map_to_tensor
from .graded import NVector
from .novikov import as_fraction, energies_below


def weighted_ops(S):
    """``(k, cls, map)`` for every stored operation, lowest energy first."""
    return [(k, cls, S.op_map(k, cls)) for (k, cls) in sorted(S.ops, key=lambda kc: (kc[1], kc[0]))]


def mc_residual(S, b):
    """``sum_{k, beta} T^E(beta) m_{k,beta}(b, .., b)`` truncated at the structure's level."""
    emax = S.emax
    b = b.with_emax(emax)
    total = NVector.zero(S.dimension, emax)
    for k, cls, mp in weighted_ops(S):
        if k == 0:
            total = total + constant_map_vector(mp, S.dimension, cls.energy, emax)
        else:
            total = total + apply_map(mp, [b] * k, energy=cls.energy, emax=emax)
    return total


def insertion_sum(S, b, c):
    """``sum T^E m_{k,beta}(b, .., c, .., b)`` over every slot for ``c``."""
    emax = S.emax
    total = NVector.zero(S.dimension, emax)
    for k, cls, mp in weighted_ops(S):
        for pos in range(k):
            args = [b] * k
            args[pos] = c
            total = total + apply_map(mp, args, energy=cls.energy, emax=emax)
    return total


def exponent_levels(S, vectors=(), extra=()):
    """Positive exponents reachable from class energies and the given vectors."""
    gens = {c.energy for c in S.classes()} | set(as_fraction(e) for e in extra)
    for v in vectors:
        gens |= set(v.exponents())
    gens.discard(Fraction(0))
    return energies_below(sorted(gens), S.emax, include_zero=False)


@dataclass
class MCSolution:
    """Result of :func:`solve_mc`.

    ``choices`` records, per level, the kernel basis and the coefficients used.
    ``obstruction`` is ``None`` or ``(level, source_vector)``.
    """

    b: NVector
    choices: dict = field(default_factory=dict)
    obstruction: tuple = None

    @property
    def ok(self):
        return self.obstruction is None


def solve_mc(S, rng=None, choose=None, extra_levels=(), density=Fraction(1, 2),
             values=(1, -1, 2, Fraction(1, 2), Fraction(-3, 2)), random_from=None):
    """Solve the Maurer-Cartan equation for ``b`` of degree one, level by level.

    At a level ``lam`` the equation reads ``m_{1,0}(b_lam) = -source`` where the
    source only involves lower levels.  Kernel directions are free: ``choose``
    (``(lam, kernel_basis) -> coefficients``) or ``rng`` fixes them, default 0.
    With ``random_from`` set, ``rng`` is only used at levels ``>= random_from``.
    """
    n = S.dimension
    deg1 = S.basis.of_degree(1)
    mat = S.m10_matrix()
    sub = [[mat[r][c] for c in deg1] for r in range(n)]
    kernel = linalg.nullspace(sub, len(deg1)) if deg1 else []
    levels = exponent_levels(S, extra=extra_levels)
    b = NVector.zero(n, S.emax)
    choices = {}
    for lam in levels:
        res = mc_residual(S, b)
        src = res.at_level(lam)
        rows = {r: {j: sub[r][j] for j in range(len(deg1)) if sub[r][j]} for r in range(n)}
        rhs = {r: -src[r] for r in range(n) if src[r]}
        sol, _, bad = linalg.solve_affine(rows, rhs, len(deg1))
        if bad is not None:
            return MCSolution(b, choices, (lam, src))
        coeffs = [Fraction(0)] * len(kernel)
        if choose is not None:
            coeffs = [as_fraction(x) for x in choose(lam, kernel)]
        elif rng is not None and (random_from is None or lam >= random_from):
            coeffs = [rng.choice(values) if rng.random() < density else Fraction(0) for _ in kernel]
        for cf, kv in zip(coeffs, kernel):
            sol = [s + cf * x for s, x in zip(sol, kv)]
        choices[lam] = {"kernel": kernel, "coefficients": coeffs}
        full = [Fraction(0)] * n
        for j, idx in enumerate(deg1):
            full[idx] = sol[j]
        b = b + NVector.from_levels(n, {lam: full}, S.emax)
    return MCSolution(b, choices, None)


def mc_solutions(S, count, rng, attempts=50, **kw):
    """Up to ``count`` distinct unobstructed solutions found with ``rng``."""
    found = []
    levels = exponent_levels(S, extra=kw.get("extra_levels", ()))
    for i in range(attempts):
        # later attempts leave more low levels at zero, which obstructs less often
        start = levels[min(len(levels) - 1, rng.randrange(len(levels)) if i % 2 else i // 4)] if levels else None
        sol = solve_mc(S, rng=rng, random_from=start, **kw)
        if sol.ok and sol.b not in [s.b for s in found]:
            found.append(sol)
        if len(found) == count:
            break
    return found


def is_mc(S, b):
    return mc_residual(S, b).is_zero()


def gauge_flow(S, b0, c):
    """Solve ``db/dt = -sum T^E m_k(b, .., c(t), .., b)`` with ``b(0) = b0`` exactly.

    ``c`` has degree zero and positive valuation, possibly polynomial in ``t``.
    The right-hand side at a level only sees lower levels of ``b``, so the
    solution is built level by level by exact integration.
    """
    if any(d != 0 for d in c.support_degrees(S.basis)):
        raise ValueError("gauge parameter must have degree 0")
    if c.valuation() is not None and c.valuation() <= 0:
        raise ValueError("gauge parameter must have positive valuation")
    b0 = b0.with_emax(S.emax)
    c = c.with_emax(S.emax)
    b = b0
    for lam in exponent_levels(S, [b0, c]):
        rhs = insertion_sum(S, b, c).restrict_levels(lambda l: l == lam)
        b = b.restrict_levels(lambda l: l != lam) + b0.restrict_levels(lambda l: l == lam) - rhs.integrate_t()
    return b


def twist(S, x, kmax=None):
    """Structure deformed by the degree-one element ``x``: ``m^x_k(..) = sum m_{k+l}(x, .., x, .., x)``.

    Each level ``T^lam`` of ``x`` is inserted with class ``ClassLabel(lam)``,
    so ``b`` is Maurer-Cartan for the result iff ``b + x`` is for ``S``.
    Original operations above arity ``S.kmax`` are absent, so relations of the
    result are only reliable up to a lower arity; ``kmax`` caps the result.
    """
    if any(d != 1 for d in x.support_degrees(S.basis)) or not x.is_t_constant():
        raise ValueError("twisting element must be t-independent of degree one")
    if x.valuation() is not None and x.valuation() <= 0:
        raise ValueError("twisting element must have positive valuation")
    kmax = S.kmax if kmax is None else kmax
    n = S.dimension
    ident = {(0, (i,)): {i: Fraction(1)} for i in range(n)}
    pieces = []
    for lam in x.exponents():
        vec = {i: c for i, c in enumerate(x.at_level(lam)) if c}
        pieces.append((ClassLabel(lam), {(0, ()): vec}))
    maps = {}
    for (big, cls), _ in sorted(S.ops.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        outer = S.op_map(big, cls)
        for k in range(min(big, kmax) + 1):
            for slots in combinations(range(big), big - k):
                for choice in product(pieces, repeat=big - k):
                    total = cls
                    for lab, _ in choice:
                        total = total + lab
                    if total.energy >= S.emax:
                        continue
                    inners = [ident] * big
                    for pos, (_, mp) in zip(slots, choice):
                        inners[pos] = mp
                    comp = compose_multi(outer, inners)
                    acc = maps.setdefault((k, total), {})
                    for key, vec in comp.items():
                        row = acc.setdefault(key, {})
                        for a, c in vec.items():
                            row[a] = row.get(a, 0) + c
    ops = {}
    for (k, cls), mp in maps.items():
        mp = {key: {a: c for a, c in row.items() if c} for key, row in mp.items()}
        mp = {key: row for key, row in mp.items() if row}
        t = map_to_tensor(mp, S.pairing, k, cls)
        if not t.is_zero():
            ops[(k, cls)] = t
    return S.replace(ops=ops, kmax=kmax)
