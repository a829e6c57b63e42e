"""Graded vector spaces with a perfect pairing, and Novikov-valued vectors.

Degrees are the ordinary cohomological degrees; the shifted degree used for
Koszul signs is ``deg - 1``.  The pairing has degree ``-dim`` and is graded
antisymmetric in shifted degrees::

    <x, y> = (-1) ** (deg'(x) * deg'(y) + 1) * <y, x>

which in dimension 3 simply means ``<x, y> = -<y, x>``.
"""

from fractions import Fraction

from . import linalg
from .novikov import NovikovScalar, as_fraction, merge_emax


class GradedBasis:
    """Ordered homogeneous basis ``e_0 .. e_{n-1}`` with names and degrees."""

    def __init__(self, names, degrees, dim=3):
        if len(names) != len(degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(names)) != len(names):
            raise ValueError("duplicate basis names")
        self.names = tuple(names)
        self.degrees = tuple(int(d) for d in degrees)
        self.dim = int(dim)
        if any(d < 0 or d > self.dim for d in self.degrees):
            raise ValueError("degrees must lie in [0, dim]")
        self.index = {n: i for i, n in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def shifted(self, i):
        return self.degrees[i] - 1

    def of_degree(self, d):
        return [i for i, deg in enumerate(self.degrees) if deg == d]

    def __repr__(self):
        return "GradedBasis(" + ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees)) + ")"


def symmetry_sign(da, db):
    """Sign ``s`` with ``<x, y> = s <y, x>`` for degrees ``da``, ``db``."""
    return -1 if ((da - 1) * (db - 1)) % 2 == 0 else 1


class Pairing:
    """Perfect graded pairing given by its Gram matrix on a basis."""

    def __init__(self, basis, entries):
        self.basis = basis
        n = len(basis)
        self.matrix = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in entries.items():
            self.matrix[i][j] = as_fraction(v)
        validate_pairing(self)
        # dual basis: row a of ``dual`` is u_a with <u_a, e_j> = delta_aj
        self.dual = linalg.inverse(self.matrix)

    def __call__(self, x, y):
        return pairing_eval(self, x, y)

    def entries(self):
        n = len(self.basis)
        return {(i, j): self.matrix[i][j] for i in range(n) for j in range(n) if self.matrix[i][j]}


def validate_pairing(p):
    """Check degree support, graded antisymmetry and perfectness.

    Raises ``ValueError`` naming the first offending pair.
    """
    b = p.basis
    n = len(b)
    for i in range(n):
        for j in range(n):
            v = p.matrix[i][j]
            if v and b.degrees[i] + b.degrees[j] != b.dim:
                raise ValueError(f"pairing <{b.names[i]}, {b.names[j]}> has wrong degree")
            w = p.matrix[j][i]
            if v != symmetry_sign(b.degrees[i], b.degrees[j]) * w:
                raise ValueError(f"pairing not graded antisymmetric at ({b.names[i]}, {b.names[j]})")
    if linalg.rank(p.matrix) != n:
        raise ValueError("pairing is degenerate")
    return True


def pairing_eval(p, x, y):
    """Pair two vectors: plain rational lists/dicts give a Fraction, NVectors a NovikovScalar."""
    if isinstance(x, NVector) or isinstance(y, NVector):
        return x.pair(p, y)
    x = dict(enumerate(x)) if isinstance(x, (list, tuple)) else x
    y = dict(enumerate(y)) if isinstance(y, (list, tuple)) else y
    total = Fraction(0)
    for i, a in x.items():
        if not a:
            continue
        row = p.matrix[i]
        for j, c in y.items():
            if c and row[j]:
                total += a * c * row[j]
    return total


class NVector:
    """Sparse vector with truncated Novikov coefficients.

    Stored as ``{(lam, tdeg): {basis_index: Fraction}}``.
    """

    __slots__ = ("_c", "dimension", "emax")

    def __init__(self, dimension, components=None, emax=None):
        self.dimension = dimension
        self.emax = None if emax is None else as_fraction(emax)
        self._c = {}
        for i, s in (components or {}).items():
            if not isinstance(s, NovikovScalar):
                s = NovikovScalar.constant(s)
            for key, v in s.items():
                if self.emax is None or key[0] < self.emax:
                    self._c.setdefault(key, {})[i] = v

    @classmethod
    def _raw(cls, dimension, c, emax):
        x = cls.__new__(cls)
        x.dimension = dimension
        x._c = c
        x.emax = emax
        return x

    @classmethod
    def zero(cls, dimension, emax=None):
        return cls._raw(dimension, {}, None if emax is None else as_fraction(emax))

    @classmethod
    def basis_monomial(cls, dimension, i, lam, emax=None, coef=1, tdeg=0):
        return cls(dimension, {i: NovikovScalar.monomial(lam, None, coef, tdeg)}, emax)

    @classmethod
    def from_levels(cls, dimension, levels, emax=None):
        """Build from ``{lam: [coef_0, .., coef_{n-1}]}``."""
        c = {}
        for lam, vec in levels.items():
            lam = as_fraction(lam)
            comp = {i: as_fraction(v) for i, v in enumerate(vec) if v}
            if comp:
                c[(lam, 0)] = comp
        out = cls._raw(dimension, c, None if emax is None else as_fraction(emax))
        return out.truncate(out.emax) if out.emax is not None else out

    # inspection

    def levels(self):
        """``{(lam, tdeg): {i: coef}}`` sorted by key (a copy)."""
        return {k: dict(v) for k, v in sorted(self._c.items())}

    def component(self, i):
        return NovikovScalar._raw({k: v[i] for k, v in self._c.items() if i in v}, self.emax)

    def components(self):
        return {i: self.component(i) for i in sorted({i for v in self._c.values() for i in v})}

    def at_level(self, lam, tdeg=0):
        """Rational coefficient vector at ``T**lam t**tdeg`` (dense list)."""
        v = self._c.get((as_fraction(lam), tdeg), {})
        return [v.get(i, Fraction(0)) for i in range(self.dimension)]

    def exponents(self):
        return sorted({lam for lam, _ in self._c})

    def valuation(self):
        return min((lam for lam, _ in self._c), default=None)

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def support_degrees(self, basis):
        return sorted({basis.degrees[i] for v in self._c.values() for i in v})

    def is_t_constant(self):
        return all(d == 0 for _, d in self._c)

    def t_degree(self):
        return max((d for _, d in self._c), default=0)

    def by_index(self):
        """``{i: [((lam, tdeg), coef), ...]}`` used by the multilinear evaluator."""
        out = {}
        for key, v in self._c.items():
            for i, c in v.items():
                out.setdefault(i, []).append((key, c))
        return out

    # arithmetic

    def _check(self, other):
        if not isinstance(other, NVector):
            raise TypeError("expected an NVector")
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        return merge_emax(self.emax, other.emax)

    def __add__(self, other):
        emax = self._check(other)
        out = {k: dict(v) for k, v in self._c.items()}
        for k, v in other._c.items():
            if emax is not None and k[0] >= emax:
                continue
            row = out.setdefault(k, {})
            for i, c in v.items():
                s = row.get(i, 0) + c
                if s:
                    row[i] = s
                else:
                    row.pop(i, None)
            if not row:
                del out[k]
        if emax is not None:
            out = {k: v for k, v in out.items() if k[0] < emax}
        return NVector._raw(self.dimension, out, emax)

    def __neg__(self):
        return NVector._raw(self.dimension, {k: {i: -c for i, c in v.items()} for k, v in self._c.items()}, self.emax)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        """Multiply by a rational or a NovikovScalar."""
        if isinstance(s, NovikovScalar):
            emax = merge_emax(self.emax, s.emax)
            out = {}
            for (l1, d1), a in s.items():
                for (l2, d2), v in self._c.items():
                    lam = l1 + l2
                    if emax is not None and lam >= emax:
                        continue
                    row = out.setdefault((lam, d1 + d2), {})
                    for i, c in v.items():
                        row[i] = row.get(i, 0) + a * c
            return NVector._raw(self.dimension, _clean(out), emax)
        s = as_fraction(s)
        if not s:
            return NVector.zero(self.dimension, self.emax)
        return NVector._raw(self.dimension, {k: {i: c * s for i, c in v.items()} for k, v in self._c.items()}, self.emax)

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def shift(self, lam):
        lam = as_fraction(lam)
        out = {(l + lam, d): dict(v) for (l, d), v in self._c.items()}
        if self.emax is not None:
            out = {k: v for k, v in out.items() if k[0] < self.emax}
        return NVector._raw(self.dimension, out, self.emax)

    def __eq__(self, other):
        if not isinstance(other, NVector):
            return NotImplemented
        return self.dimension == other.dimension and self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self._c.items())))

    def truncate(self, emax):
        emax = as_fraction(emax)
        return NVector._raw(self.dimension, {k: dict(v) for k, v in self._c.items() if k[0] < emax}, emax)

    def with_emax(self, emax):
        if emax is None:
            return NVector._raw(self.dimension, {k: dict(v) for k, v in self._c.items()}, None)
        return self.truncate(emax)

    def restrict_levels(self, keep):
        """Keep only exponents ``lam`` with ``keep(lam)`` true."""
        return NVector._raw(self.dimension, {k: dict(v) for k, v in self._c.items() if keep(k[0])}, self.emax)

    def apply_matrix(self, mat, out_dim=None):
        """Linear map given as a dense matrix acting on coefficient columns."""
        out_dim = len(mat) if out_dim is None else out_dim
        out = {}
        for k, v in self._c.items():
            row = {}
            for r in range(out_dim):
                mr = mat[r]
                s = sum((mr[i] * c for i, c in v.items() if mr[i]), Fraction(0))
                if s:
                    row[r] = s
            if row:
                out[k] = row
        return NVector._raw(out_dim, out, self.emax)

    def pair(self, p, other):
        emax = merge_emax(self.emax, other.emax)
        out = {}
        g = p.matrix
        for (l1, d1), v in self._c.items():
            for (l2, d2), w in other._c.items():
                lam = l1 + l2
                if emax is not None and lam >= emax:
                    continue
                s = Fraction(0)
                for i, a in v.items():
                    gi = g[i]
                    for j, b in w.items():
                        if gi[j]:
                            s += a * b * gi[j]
                if s:
                    key = (lam, d1 + d2)
                    out[key] = out.get(key, 0) + s
        return NovikovScalar._raw({k: v for k, v in out.items() if v}, emax)

    # t direction

    def evaluate_t(self, t0):
        t0 = as_fraction(t0)
        out = {}
        for (lam, d), v in self._c.items():
            row = out.setdefault((lam, 0), {})
            w = t0 ** d
            for i, c in v.items():
                row[i] = row.get(i, 0) + c * w
        return NVector._raw(self.dimension, _clean(out), self.emax)

    def d_dt(self):
        return NVector._raw(self.dimension, {(lam, d - 1): {i: c * d for i, c in v.items()}
                                             for (lam, d), v in self._c.items() if d}, self.emax)

    def integrate_t(self):
        return NVector._raw(self.dimension, {(lam, d + 1): {i: c / (d + 1) for i, c in v.items()}
                                             for (lam, d), v in self._c.items()}, self.emax)

    def substitute_t(self, a, b):
        """Replace ``t`` by ``a*t + b``."""
        comps = {i: s.substitute_t(a, b) for i, s in self.components().items()}
        return NVector(self.dimension, comps, self.emax)

    def __repr__(self):
        if not self._c:
            return "NVector(0)"
        return "NVector(" + ", ".join(f"{i}: {s!r}" for i, s in self.components().items()) + ")"


def _clean(out):
    res = {}
    for k, v in out.items():
        v = {i: c for i, c in v.items() if c}
        if v:
            res[k] = v
    return res
