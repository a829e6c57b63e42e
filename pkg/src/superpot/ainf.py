"""Gapped filtered cyclic A-infinity structures stored as cyclic tensors.

An operation ``m_{k,beta}`` is stored through its cyclic tensor::

    c[i0, i1, .., ik] = < m_{k,beta}(e_i1, .., e_ik), e_i0 >

and turned into a multilinear map through the dual basis of the pairing.
Tensor entries are rationals, optionally polynomial in a time parameter ``t``
(keys carry the power of ``t``).  Relations are checked as exact identities of
sparse maps, so a family depending on ``t`` is verified for every ``t`` at once.
"""

from fractions import Fraction
from functools import total_ordering
from itertools import product

from .graded import NVector
from .novikov import NovikovScalar, as_fraction
from .report import CheckReport
from . import linalg


@total_ordering
class ClassLabel:
    """Element of the discrete monoid of disc classes.

    Identity is the pair ``(energy, boundary)``; ``name`` is cosmetic.
    Boundary vectors are compared up to trailing zeros.
    """

    __slots__ = ("energy", "boundary", "name")

    def __init__(self, energy, boundary=(), name=None):
        self.energy = as_fraction(energy)
        b = [int(x) for x in boundary]
        while b and b[-1] == 0:
            b.pop()
        self.boundary = tuple(b)
        self.name = name

    @classmethod
    def zero(cls):
        return cls(0, (), "0")

    def is_zero(self):
        return self.energy == 0 and not self.boundary

    def key(self):
        return (self.energy, self.boundary)

    def __eq__(self, other):
        return isinstance(other, ClassLabel) and self.key() == other.key()

    def __lt__(self, other):
        return self.key() < other.key()

    def __hash__(self):
        return hash(self.key())

    def _combine(self, other, sign):
        n = max(len(self.boundary), len(other.boundary))
        a = self.boundary + (0,) * (n - len(self.boundary))
        b = other.boundary + (0,) * (n - len(other.boundary))
        return ClassLabel(self.energy + sign * other.energy, [x + sign * y for x, y in zip(a, b)])

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def boundary_vector(self, n):
        if len(self.boundary) > n:
            raise ValueError("boundary vector longer than the first Betti number")
        return self.boundary + (0,) * (n - len(self.boundary))

    def label(self):
        if self.name:
            return self.name
        if self.is_zero():
            return "0"
        b = ",".join(map(str, self.boundary))
        return f"E{self.energy}" + (f"[{b}]" if b else "")

    def __repr__(self):
        return f"ClassLabel({self.energy}, {self.boundary}" + (f", {self.name!r})" if self.name else ")")


ZERO = ClassLabel.zero()


def cyclic_sign(degrees):
    """Sign relating ``<m(x1..xk), x0>`` to ``<m(x0..x_{k-1}), xk>`` (ordinary degrees)."""
    k = len(degrees) - 1
    e = (degrees[0] + 1) * (sum(degrees[1:]) + k)
    return -1 if e % 2 else 1


def rotate(idx):
    """``(i0, i1, .., ik) -> (ik, i0, .., i_{k-1})``."""
    return (idx[-1],) + idx[:-1]


class OperationTensor:
    """Cyclic tensor of one operation ``(arity, class)``.

    ``parity`` is 1 for structure maps (shifted degree +1) and 0 for the
    degree-0 operations generating a pseudo-isotopy.
    """

    def __init__(self, arity, cls, entries=None, parity=1):
        self.arity = int(arity)
        self.cls = cls
        self.parity = parity
        self.entries = {}
        for key, v in (entries or {}).items():
            if isinstance(v, NovikovScalar):
                for (lam, d), c in v.items():
                    if lam != 0:
                        raise ValueError("tensor coefficients are polynomials in t only")
                    self._add((d, tuple(key)), c)
            elif len(key) == 2 and isinstance(key[1], tuple):
                self._add((int(key[0]), tuple(key[1])), as_fraction(v))
            else:
                self._add((0, tuple(key)), as_fraction(v))
        for (_, idx) in self.entries:
            if len(idx) != self.arity + 1:
                raise ValueError(f"entry {idx} does not have arity {self.arity}")

    def _add(self, key, v):
        s = self.entries.get(key, 0) + v
        if s:
            self.entries[key] = s
        else:
            self.entries.pop(key, None)

    @classmethod
    def from_orbits(cls, arity, label, basis, reps, parity=1):
        """Fill all rotations of the given entries using the cyclic sign rule.

        ``reps`` maps index tuples (optionally ``(tdeg, idx)``) to values.
        Orbits forced to vanish by their own symmetry must have value 0.
        """
        entries = {}
        for key, v in reps.items():
            if len(key) == 2 and isinstance(key[1], tuple):
                d, idx = key
            else:
                d, idx = 0, tuple(key)
            v = as_fraction(v) if not isinstance(v, NovikovScalar) else v
            orbit = orbit_signs(idx, basis)
            if orbit is None:
                if v:
                    raise ValueError(f"orbit of {idx} is forced to vanish by cyclic symmetry")
                continue
            for j, s in orbit.items():
                entries[(d, j)] = entries.get((d, j), 0) + s * v
        return cls(arity, label, {k: v for k, v in entries.items()}, parity)

    def t_degree(self):
        return max((d for d, _ in self.entries), default=0)

    def is_zero(self):
        return not self.entries

    def at_t(self, t0):
        t0 = as_fraction(t0)
        out = {}
        for (d, idx), v in self.entries.items():
            out[(0, idx)] = out.get((0, idx), 0) + v * t0 ** d
        return OperationTensor(self.arity, self.cls, out, self.parity)

    def d_dt(self):
        return OperationTensor(self.arity, self.cls,
                               {(d - 1, idx): v * d for (d, idx), v in self.entries.items() if d}, self.parity)

    def integrate_t(self):
        return OperationTensor(self.arity, self.cls,
                               {(d + 1, idx): v / (d + 1) for (d, idx), v in self.entries.items()}, self.parity)

    def substitute_t(self, a, b):
        out = {}
        for (d, idx), v in self.entries.items():
            s = NovikovScalar({(0, d): v}).substitute_t(a, b)
            for (_, j), c in s.items():
                out[(j, idx)] = out.get((j, idx), 0) + c
        return OperationTensor(self.arity, self.cls, out, self.parity)

    def scaled(self, s):
        return OperationTensor(self.arity, self.cls, {k: v * s for k, v in self.entries.items()}, self.parity)

    def __add__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return OperationTensor(self.arity, self.cls, out, self.parity)

    def to_map(self, pairing):
        """``{(tdeg, inputs): {out_index: coef}}``."""
        dual = pairing.dual
        out = {}
        for (d, idx), v in self.entries.items():
            row = dual[idx[0]]
            vec = out.setdefault((d, idx[1:]), {})
            for j, u in enumerate(row):
                if u:
                    vec[j] = vec.get(j, 0) + v * u
        return clean_map(out)

    def __eq__(self, other):
        return (isinstance(other, OperationTensor) and self.arity == other.arity
                and self.cls == other.cls and self.entries == other.entries)

    def __repr__(self):
        return f"OperationTensor(k={self.arity}, {self.cls.label()}, {len(self.entries)} entries)"


def orbit_signs(idx, basis):
    """``{rotated index: sign}`` for the rotation orbit of ``idx`` or ``None`` if it must vanish."""
    degs = basis.degrees
    out = {idx: 1}
    cur, s = idx, 1
    for _ in range(len(idx) - 1):
        # c[cur] = cyclic_sign(cur) * c[rotate(cur)]
        s = s * cyclic_sign([degs[i] for i in cur])
        cur = rotate(cur)
        if cur in out:
            if out[cur] != s:
                return None
        else:
            out[cur] = s
    s = s * cyclic_sign([degs[i] for i in cur])
    if rotate(cur) != idx or s != 1:
        return None
    return out


def map_to_tensor(mp, pairing, arity, cls, parity=1):
    """Inverse of :meth:`OperationTensor.to_map`: ``c[j, ins] = <m(ins), e_j>``."""
    g = pairing.matrix
    n = len(g)
    entries = {}
    for (d, ins), vec in mp.items():
        for j in range(n):
            s = Fraction(0)
            for p, v in vec.items():
                if g[p][j]:
                    s += v * g[p][j]
            if s:
                entries[(d, (j,) + tuple(ins))] = s
    return OperationTensor(arity, cls, entries, parity)


def clean_map(mp):
    out = {}
    for k, vec in mp.items():
        vec = {i: c for i, c in vec.items() if c}
        if vec:
            out[k] = vec
    return out


def add_into(acc, key, vec, factor=1):
    row = acc.setdefault(key, {})
    for i, c in vec.items():
        s = row.get(i, 0) + factor * c
        if s:
            row[i] = s
        else:
            row.pop(i, None)
    if not row:
        del acc[key]


def index_by_output(mp):
    out = {}
    for (d, ins), vec in mp.items():
        for a, c in vec.items():
            out.setdefault(a, []).append((d, ins, c))
    return out


def compose_into(acc, outer, inner_by_out, pos, inner_parity, shifted, factor=1):
    """Add ``factor * outer(.., inner(..) at slot pos, ..)`` to ``acc``.

    Koszul sign ``(-1)^(inner_parity * sum of shifted degrees before pos)``.
    """
    for (d1, ins1), vec1 in outer.items():
        hits = inner_by_out.get(ins1[pos])
        if not hits:
            continue
        pre, post = ins1[:pos], ins1[pos + 1:]
        sign = -1 if inner_parity and sum(shifted[i] for i in pre) % 2 else 1
        for d2, ins2, c in hits:
            add_into(acc, (d1 + d2, pre + ins2 + post), vec1, factor * sign * c)


def compose_multi(outer, inners):
    """``outer(inner_1(..), .., inner_l(..))`` with degree-0 inner maps (no signs)."""
    by_out = [index_by_output(m) for m in inners]
    acc = {}
    for (d0, ins0), vec in outer.items():
        partial = [(d0, (), Fraction(1))]
        for j, a in enumerate(ins0):
            hits = by_out[j].get(a)
            if not hits:
                partial = []
                break
            partial = [(d + d2, ins + ins2, c * c2) for d, ins, c in partial for d2, ins2, c2 in hits]
        for d, ins, c in partial:
            add_into(acc, (d, ins), vec, c)
    return acc


class FilteredAInfinity:
    """Gapped filtered cyclic A-infinity structure with optional ``m_{-1}`` data.

    ``ops`` maps ``(k, ClassLabel)`` to an :class:`OperationTensor`.
    ``m_minus1`` maps nonzero classes to rationals (or t-polynomials).
    """

    def __init__(self, basis, pairing, ops, emax, kmax=5, m_minus1=None, name=None):
        self.basis = basis
        self.pairing = pairing
        self.emax = as_fraction(emax)
        self.kmax = kmax
        self.ops = {}
        for (k, cls), t in ops.items():
            if t.arity != k or t.cls != cls:
                raise ValueError(f"tensor stored under wrong key ({k}, {cls.label()})")
            if cls.energy >= self.emax:
                continue
            if not t.is_zero():
                self.ops[(k, cls)] = t
        self.m_minus1 = None
        if m_minus1 is not None:
            self.m_minus1 = {}
            for cls, v in m_minus1.items():
                if cls.energy >= self.emax:
                    continue
                v = v if isinstance(v, NovikovScalar) else NovikovScalar.constant(as_fraction(v))
                self.m_minus1[cls] = v
        self.name = name
        self._maps = {}
        self.shifted = tuple(d - 1 for d in basis.degrees)

    @property
    def dimension(self):
        return len(self.basis)

    def classes(self):
        """Nonzero classes carrying an operation or an ``m_{-1}`` value, by energy."""
        out = {cls for (_, cls) in self.ops if not cls.is_zero()}
        if self.m_minus1:
            out |= {c for c in self.m_minus1 if not c.is_zero()}
        return sorted(out)

    def class_closure(self, extra=()):
        """All nonzero sums of present classes below the truncation level."""
        return class_closure(list(self.classes()) + list(extra), self.emax)

    def boundary_rank(self):
        return max((len(c.boundary) for c in self.classes()), default=0)

    def tensor(self, k, cls):
        return self.ops.get((k, cls))

    def op_map(self, k, cls):
        key = (k, cls)
        if key not in self._maps:
            t = self.ops.get(key)
            self._maps[key] = t.to_map(self.pairing) if t is not None else {}
        return self._maps[key]

    def arities(self, cls):
        return sorted(k for (k, c) in self.ops if c == cls)

    def is_t_constant(self):
        return all(t.t_degree() == 0 for t in self.ops.values()) and \
            all(v.is_t_constant() for v in (self.m_minus1 or {}).values())

    def at_t(self, t0):
        ops = {key: t.at_t(t0) for key, t in self.ops.items()}
        mm = None if self.m_minus1 is None else {c: v.evaluate_t(t0) for c, v in self.m_minus1.items()}
        return FilteredAInfinity(self.basis, self.pairing, ops, self.emax, self.kmax, mm, self.name)

    def replace(self, ops=None, m_minus1="keep", emax=None, kmax=None):
        return FilteredAInfinity(self.basis, self.pairing, self.ops if ops is None else ops,
                                 self.emax if emax is None else emax,
                                 self.kmax if kmax is None else kmax,
                                 self.m_minus1 if m_minus1 == "keep" else m_minus1, self.name)

    def m10_matrix(self):
        """Dense matrix of ``m_{1,0}`` acting on coefficient columns."""
        n = self.dimension
        mat = [[Fraction(0)] * n for _ in range(n)]
        for (d, ins), vec in self.op_map(1, ZERO).items():
            if d:
                raise ValueError("m_{1,0} must not depend on t")
            for a, c in vec.items():
                mat[a][ins[0]] += c
        return mat

    def __repr__(self):
        return (f"FilteredAInfinity(dim={self.dimension}, emax={self.emax}, "
                f"ops={len(self.ops)}, classes={[c.label() for c in self.classes()]})")


def class_closure(classes, emax):
    """Nonzero sums of ``classes`` with energy below ``emax``, sorted."""
    gens = sorted({c for c in classes if not c.is_zero()})
    seen = set()
    frontier = [ZERO]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                s = a + g
                if s.energy < emax and s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return sorted(seen)


def decompositions(S, cls, present=None):
    """Pairs ``(b1, b2)`` of present classes (zero included) with ``b1 + b2 = cls``."""
    present = set(present if present is not None else [ZERO] + S.classes())
    present.add(ZERO)
    return [(b1, cls - b1) for b1 in sorted(present) if (cls - b1) in present]


def ainf_residual(S, k, cls):
    """Left-hand side of the A-infinity relation of arity ``k`` and class ``cls`` as a sparse map.

    An empty dict means the relation holds exactly.
    """
    acc = {}
    shifted = S.shifted
    by_cls = {}
    for (k2, c2) in S.ops:
        by_cls.setdefault(c2, []).append(k2)
    for b1, b2 in decompositions(S, cls):
        for k1 in by_cls.get(b1, []):
            k2 = k + 1 - k1
            if k2 < 0 or (k2, b2) not in S.ops:
                continue
            outer = S.op_map(k1, b1)
            inner = index_by_output(S.op_map(k2, b2))
            for pos in range(k1):
                compose_into(acc, outer, inner, pos, 1, shifted)
    return acc


def check_ainf(S, kmax=None):
    """All A-infinity relations for arities ``<= kmax`` and classes below the truncation."""
    kmax = S.kmax if kmax is None else kmax
    bad = []
    for cls in [ZERO] + S.class_closure():
        for k in range(kmax + 1):
            r = ainf_residual(S, k, cls)
            if r:
                bad.append(f"relation k={k} class={cls.label()} has {len(r)} nonzero entries")
    return CheckReport("A-infinity relations", not bad, bad)


def check_cyclic(S_or_tensors, basis=None):
    """Cyclic symmetry of every stored tensor.

    Accepts a structure or an iterable of tensors (then ``basis`` is needed).
    """
    if isinstance(S_or_tensors, FilteredAInfinity):
        tensors = list(S_or_tensors.ops.values())
        basis = S_or_tensors.basis
    else:
        tensors = list(S_or_tensors)
    bad = []
    degs = basis.degrees
    for t in tensors:
        for (d, idx), v in t.entries.items():
            w = t.entries.get((d, rotate(idx)), 0)
            s = cyclic_sign([degs[i] for i in idx])
            if v != s * w:
                bad.append(f"({t.arity}, {t.cls.label()}) entry {idx}: {v} vs rotated {w}")
        for (d, idx), w in t.entries.items():
            # catch entries whose preimage under rotation is missing
            pre = idx[1:] + idx[:1]
            if (d, pre) not in t.entries:
                s = cyclic_sign([degs[i] for i in pre])
                if s * w:
                    bad.append(f"({t.arity}, {t.cls.label()}) entry {pre} missing")
    return CheckReport("cyclic symmetry", not bad, bad)


def check_cyclic_maps(S):
    """Rebuild tensors from the operation maps and compare; guards the dual-basis step."""
    bad = []
    for (k, cls), t in S.ops.items():
        back = map_to_tensor(S.op_map(k, cls), S.pairing, k, cls, t.parity)
        if back.entries != t.entries:
            bad.append(f"({k}, {cls.label()}) does not survive map round trip")
    rep = check_cyclic(S)
    return CheckReport("cyclic symmetry of maps", not bad and rep.ok, bad + rep.violations)


def check_gapped_degrees(S):
    """Degree support, gapping and energy conditions."""
    bad = []
    sh = S.shifted
    for (k, cls), t in S.ops.items():
        want = 0 if t.parity == 1 else 1
        if cls.is_zero() and k == 0:
            bad.append("m_{0,0} must vanish")
        if not cls.is_zero() and cls.energy <= 0:
            bad.append(f"class {cls.label()} has nonpositive energy")
        for (_, idx) in t.entries:
            if sum(sh[i] for i in idx) != want:
                bad.append(f"({k}, {cls.label()}) entry {idx} has wrong degree")
                break
    for cls in (S.m_minus1 or {}):
        if cls.is_zero() or cls.energy <= 0:
            bad.append(f"m_-1 at class {cls.label()} must have positive energy")
    if S.kmax is not None and any(k > S.kmax for (k, _) in S.ops):
        bad.append("operation above the arity bound")
    return CheckReport("gapped degrees", not bad, bad)


def check_structure(S):
    reports = [check_gapped_degrees(S), check_cyclic(S), check_cyclic_maps(S), check_ainf(S)]
    bad = [v for r in reports for v in r.violations]
    return CheckReport("structure", all(r.ok for r in reports), bad)


# evaluation on Novikov vectors


def apply_map(mp, args, energy=0, emax=None, dimension=None):
    """Evaluate a multilinear map on NVector arguments, times ``T**energy``.

    No Koszul signs are introduced: scalars carry degree 0.  ``dimension``
    is the output dimension when it differs from the inputs'.
    """
    dim = dimension
    for a in args:
        dim = a.dimension if dimension is None else dimension
        emax = a.emax if emax is None else emax
    energy = as_fraction(energy)
    lists = [a.by_index() for a in args]
    out = {}
    for (d0, ins), vec in mp.items():
        combos = [((energy, d0), Fraction(1))]
        for slot, i in enumerate(ins):
            terms = lists[slot].get(i)
            if not terms:
                combos = None
                break
            nxt = []
            for (lam, d), c in combos:
                for (l2, d2), c2 in terms:
                    l3 = lam + l2
                    if emax is not None and l3 >= emax:
                        continue
                    nxt.append(((l3, d + d2), c * c2))
            combos = nxt
            if not combos:
                break
        if not combos:
            continue
        for key, c in combos:
            row = out.setdefault(key, {})
            for a, v in vec.items():
                row[a] = row.get(a, 0) + c * v
    if dim is None:
        dim = max((a for vec in mp.values() for a in vec), default=-1) + 1
        if not mp:
            dim = 0
    res = NVector._raw(dim, {}, None if emax is None else as_fraction(emax))
    for key, row in out.items():
        row = {a: v for a, v in row.items() if v}
        if row and (emax is None or key[0] < emax):
            res._c[key] = row
    return res


def constant_map_vector(mp, dimension, energy, emax):
    """Value of an arity-0 operation map times ``T**energy`` as an NVector."""
    out = {}
    for (d, ins), vec in mp.items():
        if energy < emax:
            out[(as_fraction(energy), d)] = dict(vec)
    return NVector._raw(dimension, out, as_fraction(emax))


# completion of seed data


class Obstruction(Exception):
    """Raised when a linear system for new operations is inconsistent."""

    def __init__(self, k, cls, detail=""):
        super().__init__(f"obstruction at arity {k}, class {cls.label()}: {detail}")
        self.k = k
        self.cls = cls
        self.detail = detail


def orbit_representatives(basis, arity, parity=1):
    """Canonical representatives of rotation orbits on the degree support that may be nonzero."""
    sh = [d - 1 for d in basis.degrees]
    want = 0 if parity == 1 else 1
    n = len(basis)
    reps = []
    seen = set()
    for idx in product(range(n), repeat=arity + 1):
        if idx in seen or sum(sh[i] for i in idx) != want:
            continue
        orb = orbit_signs(idx, basis)
        rots = {idx}
        cur = idx
        for _ in range(arity):
            cur = rotate(cur)
            rots.add(cur)
        seen |= rots
        if orb is not None:
            reps.append(min(rots))
    return sorted(reps)


def complete_structure(seed, classes=None, arities=None, rng=None, density=Fraction(1, 4),
                       values=(1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2)), random_arities=None):
    """Solve for operations at positive classes so all A-infinity relations hold.

    Levels are processed by increasing energy.  At each class, tensors of the
    given ``arities`` that the seed does not fix become unknowns (one rational
    per admissible rotation orbit); the relations of arity ``<= kmax`` form an
    affine system solved exactly.  Free parameters are drawn from ``values``
    with probability ``density`` when ``rng`` is given (only for arities in
    ``random_arities`` if set), else set to zero.
    Raises :class:`Obstruction` on an inconsistent level.
    """
    S = seed
    kmax = S.kmax
    arities = list(range(kmax + 1)) if arities is None else list(arities)
    targets = S.class_closure(classes or [])
    ops = dict(S.ops)
    basis = S.basis
    base_maps = {k: S.op_map(k, ZERO) for (k, c) in S.ops if c.is_zero()}
    # the linear part depends only on which arities are unknown, not on the class
    linear = {}
    for cls in targets:
        fixed = {k for (k, c) in ops if c == cls}
        unknown = [a for a in arities if a not in fixed]
        # constant part: residual with the unknowns at zero
        cur = FilteredAInfinity(basis, S.pairing, ops, S.emax, kmax, S.m_minus1)
        const = {}
        for k in range(kmax + 1):
            for key, vec in ainf_residual(cur, k, cls).items():
                const[(k,) + key] = vec
        sig = tuple(unknown)
        if sig not in linear:
            var_list, columns = [], []
            for a in unknown:
                if a == kmax and 1 not in base_maps:
                    # enters no relation of arity <= kmax without a differential
                    continue
                for rep in orbit_representatives(basis, a):
                    t = OperationTensor.from_orbits(a, cls, basis, {rep: 1})
                    var_list.append((a, rep))
                    columns.append(_linear_column(t.to_map(S.pairing), a, base_maps, kmax, S.shifted))
            linear[sig] = (var_list, columns)
        var_list, columns = linear[sig]
        rows, rhs, row_keys = _assemble(columns, const)
        if rng is None:
            free_values = None
        else:
            def free_values(j):
                if random_arities is not None and var_list[j][0] not in random_arities:
                    return 0
                return rng.choice(values) if rng.random() < density else 0
        sol, _, bad = linalg.solve_affine(rows, rhs, len(var_list), free_values)
        if bad is not None:
            key = row_keys[bad]
            raise Obstruction(key[0], cls, f"inconsistent relation entry {key[1:]}")
        reps_by_arity = {}
        for (a, rep), v in zip(var_list, sol):
            if v:
                reps_by_arity.setdefault(a, {})[rep] = v
        for a, reps in reps_by_arity.items():
            ops[(a, cls)] = OperationTensor.from_orbits(a, cls, basis, reps)
    return FilteredAInfinity(basis, S.pairing, ops, S.emax, kmax, S.m_minus1, S.name)


def _linear_column(phi_map, a, base_maps, kmax, shifted):
    """Contribution of one unknown tensor (arity ``a``) to the relations, keyed by ``(k, tdeg, ins)``."""
    col = {}
    phi_by_out = index_by_output(phi_map)
    for j, mj in base_maps.items():
        k = j + a - 1
        if k > kmax or k < 0:
            continue
        acc = {}
        # m_{j,0}( .., phi(..), ..)
        for pos in range(j):
            compose_into(acc, mj, phi_by_out, pos, 1, shifted)
        # phi( .., m_{j,0}(..), ..)
        mj_by_out = index_by_output(mj)
        for pos in range(a):
            compose_into(acc, phi_map, mj_by_out, pos, 1, shifted)
        for key, vec in acc.items():
            col[(k,) + key] = vec
    return col


def _assemble(columns, const):
    """Sparse rows ``{row: {var: coef}}`` and right-hand side for ``A x = -const``."""
    row_index = {}
    row_keys = []
    rows = {}

    def rid(key):
        if key not in row_index:
            row_index[key] = len(row_keys)
            row_keys.append(key)
        return row_index[key]

    for j, col in enumerate(columns):
        for key, vec in col.items():
            for a, c in vec.items():
                r = rid(key + (a,))
                rows.setdefault(r, {})[j] = rows.get(r, {}).get(j, 0) + c
    rhs = {}
    for key, vec in const.items():
        for a, c in vec.items():
            rhs[rid(key + (a,))] = -c
    return rows, rhs, row_keys
