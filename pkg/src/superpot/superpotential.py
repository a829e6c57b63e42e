"""The potential ``Psi`` and its formal gradient on degree-one elements."""

from fractions import Fraction

from .ainf import apply_map, constant_map_vector
from .mc import mc_residual, weighted_ops
from .novikov import NovikovScalar
from .report import CheckReport


def psi_prime(S, b):
    """``sum_{k, beta} T^E / (k + 1) <m_{k,beta}(b, .., b), b>``."""
    emax = S.emax
    b = b.with_emax(emax)
    total = NovikovScalar.zero(emax)
    for k, cls, mp in weighted_ops(S):
        if k == 0:
            v = constant_map_vector(mp, S.dimension, cls.energy, emax)
        else:
            v = apply_map(mp, [b] * k, energy=cls.energy, emax=emax)
        total = total + v.pair(S.pairing, b) * Fraction(1, k + 1)
    return total


def constant_term(S):
    """``sum_beta T^E(beta) m_{-1,beta}``."""
    if S.m_minus1 is None:
        raise ValueError("structure has no m_-1 data")
    total = NovikovScalar.zero(S.emax)
    for cls, v in S.m_minus1.items():
        total = total + v.shift(cls.energy).with_emax(S.emax)
    return total


def psi(S, b):
    """``psi_prime(b)`` plus the ``m_{-1}`` constant term."""
    return psi_prime(S, b) + constant_term(S)


def d_psi(S, b):
    """Formal partial derivatives of ``psi_prime`` in the degree-one coordinates of ``b``.

    Computed by the product rule on the tensor entries directly, without using
    cyclic symmetry.  Returns ``{basis_index: NovikovScalar}`` over degree-one indices.
    """
    deg1 = S.basis.of_degree(1)
    if any(d != 1 for d in b.support_degrees(S.basis)):
        raise ValueError("d_psi needs a degree-one element")
    emax = S.emax
    comps = b.with_emax(emax).components()
    grad = {i: NovikovScalar.zero(emax) for i in deg1}
    deg1set = set(deg1)
    for (k, cls), t in S.ops.items():
        if k == 0:
            # linear term <m_0, b> / 1
            for (d, idx), c in t.entries.items():
                i0 = idx[0]
                if i0 in deg1set:
                    grad[i0] = grad[i0] + NovikovScalar({(cls.energy, d): c}, emax)
            continue
        w = Fraction(1, k + 1)
        for (d, idx), c in t.entries.items():
            if not all(i in deg1set for i in idx):
                continue
            missing = {p for p, i in enumerate(idx) if i not in comps}
            if len(missing) > 1:
                continue
            base = NovikovScalar({(cls.energy, d): c * w}, emax)
            for p, i in enumerate(idx):
                if missing and p not in missing:
                    continue
                term = base
                for q, j in enumerate(idx):
                    if q != p:
                        term = term * comps.get(j, NovikovScalar.zero(emax))
                        if term.is_zero():
                            break
                if not term.is_zero():
                    grad[i] = grad[i] + term
    return grad


def gradient_vanishes(S, b):
    return all(v.is_zero() for v in d_psi(S, b).values())


def psi_along_path(S, b_t, constant_of=None):
    """Check that ``b(t)`` stays Maurer-Cartan and ``psi_prime(b(t))`` is constant in ``t``.

    Returns a report whose ``data`` holds the (polynomial in ``t``) value.
    """
    res = mc_residual(S, b_t)
    val = psi_prime(S, b_t)
    bad = []
    if not res.is_zero():
        bad.append("path leaves the Maurer-Cartan locus")
    if not val.is_t_constant():
        bad.append("potential varies along the path")
    return CheckReport("potential along path", not bad, bad, {"value": val, "residual": res})
