"""Small Poincare-duality models used as base algebras and fixtures.

Each model is a finite graded commutative algebra with a differential and an
integral on the top class.  It becomes a cyclic A-infinity algebra at class 0
through ``m1(x) = (-1)^deg(x) dx`` and ``m2(x, y) = (-1)^(deg x (deg y + 1)) x y``
with pairing ``<x, y> = (-1)^deg(x) * integral(x y)``.
"""

from fractions import Fraction

from .ainf import ZERO, FilteredAInfinity, OperationTensor
from .graded import GradedBasis, Pairing
from .novikov import as_fraction


class CDGA:
    """Graded commutative algebra data on a named basis (unit first)."""

    def __init__(self, names, degrees, products, integral, differential=None, dim=3):
        self.basis = GradedBasis(names, degrees, dim)
        n = len(names)
        ix = self.basis.index
        degs = self.basis.degrees
        self.mult = {}
        for (a, b), out in products.items():
            i, j = ix[a], ix[b]
            vec = {ix[c]: as_fraction(v) for c, v in out.items()}
            self.mult[(i, j)] = vec
            sign = -1 if (degs[i] * degs[j]) % 2 else 1
            self.mult.setdefault((j, i), {k: sign * v for k, v in vec.items()})
        unit = 0
        for i in range(n):
            self.mult.setdefault((unit, i), {i: Fraction(1)})
            self.mult.setdefault((i, unit), {i: Fraction(1)})
        self.integral = {ix[a]: as_fraction(v) for a, v in integral.items()}
        self.d = {ix[a]: {ix[c]: as_fraction(v) for c, v in out.items()} for a, out in (differential or {}).items()}

    def product(self, i, j):
        return self.mult.get((i, j), {})

    def pairing(self):
        n = len(self.basis)
        entries = {}
        for i in range(n):
            for j in range(n):
                s = sum((c * self.integral.get(k, 0) for k, c in self.product(i, j).items()), Fraction(0))
                if s:
                    entries[(i, j)] = (-1) ** self.basis.degrees[i] * s
        return Pairing(self.basis, entries)

    def structure(self, emax, kmax=5, name=None):
        P = self.pairing()
        degs = self.basis.degrees
        n = len(degs)
        t2, t1 = {}, {}
        for (i, j), out in self.mult.items():
            sign = -1 if (degs[i] * (degs[j] + 1)) % 2 else 1
            for k, c in out.items():
                # <m2(e_i, e_j), e_l> = sign * c * <e_k, e_l>
                for l in range(n):
                    g = P.matrix[k][l]
                    if g:
                        t2[(l, i, j)] = t2.get((l, i, j), 0) + sign * c * g
        for i, out in self.d.items():
            sign = -1 if degs[i] % 2 else 1
            for k, c in out.items():
                for l in range(n):
                    g = P.matrix[k][l]
                    if g:
                        t1[(l, i)] = t1.get((l, i), 0) + sign * c * g
        ops = {(2, ZERO): OperationTensor(2, ZERO, t2)}
        if t1:
            ops[(1, ZERO)] = OperationTensor(1, ZERO, t1)
        return FilteredAInfinity(self.basis, P, ops, emax, kmax, name=name)


def sphere3(acyclic=False):
    """Cohomology of the 3-sphere, optionally with a contractible pair ``w -> z``.

    The pair has ``dw = z`` and ``w z = p`` so it pairs nondegenerately.
    """
    names, degs = ["u", "p"], [0, 3]
    products, d = {}, {}
    if acyclic:
        names += ["w", "z"]
        degs += [1, 2]
        products[("w", "z")] = {"p": 1}
        d["w"] = {"z": 1}
    return CDGA(names, degs, products, {"p": 1}, d)


def torus3():
    """Exterior algebra on three degree-one generators."""
    names = ["1", "a1", "a2", "a3", "a12", "a13", "a23", "a123"]
    degs = [0, 1, 1, 1, 2, 2, 2, 3]
    products = {
        ("a1", "a2"): {"a12": 1}, ("a1", "a3"): {"a13": 1}, ("a2", "a3"): {"a23": 1},
        ("a1", "a23"): {"a123": 1}, ("a2", "a13"): {"a123": -1}, ("a3", "a12"): {"a123": 1},
    }
    return CDGA(names, degs, products, {"a123": 1})


def s1s2_sum(b1=1, acyclic=False):
    """Connected sum of ``b1`` copies of S^1 x S^2: ``a_i b_j = delta_ij top``."""
    if not 1 <= b1 <= 3:
        raise ValueError("b1 must be 1, 2 or 3")
    names = ["1"] + [f"a{i + 1}" for i in range(b1)] + [f"b{i + 1}" for i in range(b1)] + ["top"]
    degs = [0] + [1] * b1 + [2] * b1 + [3]
    products = {(f"a{i + 1}", f"b{i + 1}"): {"top": 1} for i in range(b1)}
    d = {}
    if acyclic:
        names += ["w", "z"]
        degs += [1, 2]
        products[("w", "z")] = {"top": 1}
        d["w"] = {"z": 1}
    return CDGA(names, degs, products, {"top": 1}, d)

