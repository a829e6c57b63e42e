"""Harmonic data, the canonical model on cohomology and tree sums.

Harmonic data splits ``C = H + Im m1 + W`` with ``W`` isotropic and
orthogonal to ``H``; the propagator ``G`` inverts ``-m1`` from ``Im m1`` to
``W`` and vanishes on ``H + W``.  Then ``m1 G + G m1 = Pi - id`` and
``<Im G, Im G + Im Pi> = 0``.

Transferred maps ``f_{k,beta}: H^k -> C`` and operations ``m^can_{k,beta}``
are sums over rooted trees, computed here by the equivalent recursion::

    f = G  o sum m_{l,beta'}(f, .., f)      over (l, beta') != (1, 0)
    m^can = Pi o (the same sum)

The transferred maps have degree 0, so no Koszul signs appear.
"""

from fractions import Fraction

from . import linalg
from .ainf import (ZERO, FilteredAInfinity, OperationTensor, add_into, apply_map, compose_multi,
                   constant_map_vector)
from .graded import GradedBasis, NVector, Pairing
from .mc import mc_residual
from .novikov import NovikovScalar
from .report import CheckReport
from .superpotential import psi
from .trees import TreeEnumerator, split_at_edge


class HarmonicData:
    """Splitting ``C = H + Im m1 + W`` of the class-0 complex.

    ``h_vectors`` are the chosen cohomology representatives (columns in C),
    ``G`` and ``Pi`` are dense matrices on C, ``coords`` maps C to H-coordinates
    of ``Pi x``.
    """

    def __init__(self, S):
        self.S = S
        n = S.dimension
        basis = S.basis
        M = S.m10_matrix()
        P = S.pairing.matrix
        top = basis.dim
        H, Im, W0 = {}, {}, {}
        for d in range(top + 1):
            cols = basis.of_degree(d)
            sub = [[M[r][c] for c in cols] for r in range(n)]
            ker = [_embed(v, cols, n) for v in linalg.nullspace(sub, len(cols))] if cols else []
            outs = [[M[r][c] for r in range(n)] for c in cols]
            im_idx = linalg.column_basis(outs, n)
            Im[d + 1] = [outs[i] for i in im_idx]
            H[d] = ker
        # H_d: complement of Im_d inside ker_d
        for d in range(top + 1):
            chosen = list(Im.get(d, []))
            base = len(chosen)
            for v in H[d]:
                if linalg.rank(chosen + [v]) > len(chosen):
                    chosen.append(v)
            H[d] = chosen[base:]
        hvecs = [v for d in range(top + 1) for v in H[d]]
        # W0_d: complement of Im_d inside the orthogonal of H, degree by degree
        for d in range(top + 1):
            cols = basis.of_degree(d)
            eqs = []
            for h in H.get(top - d, []):
                eqs.append([sum(h[p] * P[p][c] for p in range(n)) for c in cols])
            orth = [_embed(v, cols, n) for v in linalg.nullspace(eqs, len(cols))] if cols else []
            chosen = list(Im.get(d, []))
            base = len(chosen)
            for v in orth:
                if linalg.rank(chosen + [v]) > len(chosen):
                    chosen.append(v)
            W0[d] = chosen[base:]
        # make W isotropic by adding image vectors to the low-degree half
        W = dict(W0)
        for d in range(top + 1):
            e = top - d
            if d >= e or not W0.get(d) or not W0.get(e):
                continue
            imd = Im.get(d, [])
            new = []
            for w in W0[d]:
                rows = {r: {j: _pair(P, y, wp) for j, y in enumerate(imd)} for r, wp in enumerate(W0[e])}
                rhs = {r: -_pair(P, w, wp) for r, wp in enumerate(W0[e])}
                sol, _, bad = linalg.solve_affine(rows, rhs, len(imd))
                if bad is not None:
                    raise ValueError("cannot make the complement isotropic")
                new.append([w[i] + sum(s * y[i] for s, y in zip(sol, imd)) for i in range(n)])
            W[d] = new
        wvecs = [v for d in range(top + 1) for v in W.get(d, [])]
        imvecs = [_matvec(M, w) for w in wvecs]
        cols = hvecs + imvecs + wvecs
        if len(cols) != n or linalg.rank(cols) != n:
            raise ValueError("harmonic splitting failed")
        B = linalg.transpose(cols)
        Binv = linalg.inverse(B)
        r, s = len(hvecs), len(wvecs)
        # G sends m1(w_j) to -w_j
        target_G = [[Fraction(0)] * n for _ in range(n)]
        target_Pi = [[Fraction(0)] * n for _ in range(n)]
        for j in range(s):
            for i in range(n):
                target_G[i][r + j] = -wvecs[j][i]
        for j in range(r):
            for i in range(n):
                target_Pi[i][j] = hvecs[j][i]
        self.G = linalg.matmul(target_G, Binv)
        self.Pi = linalg.matmul(target_Pi, Binv)
        self.coords = [Binv[j] for j in range(r)]
        self.h_vectors = hvecs
        self.w_vectors = wvecs
        self.h_degrees = [next(d for d in range(top + 1) if v in H[d]) for v in hvecs]
        self.m1 = M

    @property
    def rank(self):
        return len(self.h_vectors)

    def h_basis(self):
        names = [f"h{j}" for j in range(self.rank)]
        return GradedBasis(names, self.h_degrees, self.S.basis.dim)

    def h_pairing(self, hb=None):
        hb = hb or self.h_basis()
        P = self.S.pairing.matrix
        ent = {}
        for i, a in enumerate(self.h_vectors):
            for j, b in enumerate(self.h_vectors):
                v = _pair(P, a, b)
                if v:
                    ent[(i, j)] = v
        return Pairing(hb, ent)

    def include(self, x):
        """H-coordinates (NVector on H) to an NVector on C."""
        mat = [[self.h_vectors[j][i] for j in range(self.rank)] for i in range(self.S.dimension)]
        return x.apply_matrix(mat, self.S.dimension)

    def project(self, x):
        """C-vector to the H-coordinates of ``Pi x``."""
        return x.apply_matrix(self.coords, self.rank)

    def propagate(self, x):
        return x.apply_matrix(self.G, self.S.dimension)

    def check(self):
        """Homotopy identity, projection identities and orthogonality, all exactly."""
        n = self.S.dimension
        M, G, Pi = self.m1, self.G, self.Pi
        P = self.S.pairing.matrix
        bad = []
        lhs = _add(linalg.matmul(M, G), linalg.matmul(G, M))
        rhs = _add(Pi, [[-Fraction(int(i == j)) for j in range(n)] for i in range(n)])
        if lhs != rhs:
            bad.append("m1 G + G m1 != Pi - id")
        if linalg.matmul(Pi, Pi) != Pi:
            bad.append("Pi is not a projection")
        if any(any(r) for r in linalg.matmul(G, G)):
            bad.append("G G != 0")
        if any(any(r) for r in linalg.matmul(G, Pi)) or any(any(r) for r in linalg.matmul(Pi, G)):
            bad.append("G Pi or Pi G nonzero")
        Gcols = [[G[i][j] for i in range(n)] for j in range(n)]
        Pcols = [[Pi[i][j] for i in range(n)] for j in range(n)]
        for a in Gcols:
            for b in Gcols + Pcols:
                if _pair(P, a, b) or _pair(P, b, a):
                    bad.append("<Im G, Im G + Im Pi> != 0")
                    break
            else:
                continue
            break
        return CheckReport("harmonic data", not bad, bad)


def _embed(v, cols, n):
    out = [Fraction(0)] * n
    for x, c in zip(v, cols):
        out[c] = x
    return out


def _pair(P, a, b):
    n = len(a)
    return sum((a[i] * b[j] * P[i][j] for i in range(n) if a[i] for j in range(n) if b[j] and P[i][j]),
               Fraction(0))


def _matvec(M, v):
    return [sum((M[i][j] * v[j] for j in range(len(v)) if v[j]), Fraction(0)) for i in range(len(M))]


def _add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def harmonic_data(S):
    return HarmonicData(S)


def _apply_dense(mat, vec):
    out = {}
    for i, row in enumerate(mat):
        s = sum((row[j] * c for j, c in vec.items() if row[j]), Fraction(0))
        if s:
            out[i] = s
    return out


class CanonicalModel:
    """Transferred structure on cohomology together with the maps ``f_{k,beta}``."""

    def __init__(self, S, kmax=None, harmonic=None):
        if not S.is_t_constant():
            raise ValueError("transfer needs a t-independent structure")
        self.S = S
        self.hd = harmonic or HarmonicData(S)
        self.kmax = S.kmax if kmax is None else kmax
        hd = self.hd
        n, r = S.dimension, hd.rank
        self.classes = [ZERO] + S.class_closure()
        f = {(1, ZERO): {(0, (j,)): {i: v for i, v in enumerate(hd.h_vectors[j]) if v} for j in range(r)}}
        raw = {}
        ops = [(k, c) for (k, c) in S.ops if (k, c) != (1, ZERO)]
        targets = sorted(((k, c) for c in self.classes for k in range(self.kmax + 1)
                          if (k, c) not in ((1, ZERO), (0, ZERO))), key=lambda kc: (kc[1], kc[0]))
        for k, cls in targets:
            acc = {}
            for (l, b1) in ops:
                rest = cls - b1
                if rest.energy < 0 or (rest not in self.classes):
                    continue
                for parts in _compositions(l, k, rest, f):
                    term = compose_multi(S.op_map(l, b1), [f[p] for p in parts])
                    for key, vec in term.items():
                        add_into(acc, key, vec)
            if acc:
                raw[(k, cls)] = acc
                fk = {key: _apply_dense(hd.G, vec) for key, vec in acc.items()}
                fk = {key: v for key, v in fk.items() if v}
                if fk:
                    f[(k, cls)] = fk
        self.f = f
        self.raw = raw
        hb = hd.h_basis()
        hp = hd.h_pairing(hb)
        P = S.pairing.matrix
        tensors = {}
        for (k, cls), acc in raw.items():
            ent = {}
            for (d, ins), vec in acc.items():
                for i0, h in enumerate(hd.h_vectors):
                    v = sum((c * h[j] * P[a][j] for a, c in vec.items() for j in range(n) if h[j] and P[a][j]),
                            Fraction(0))
                    if v:
                        ent[(d, (i0,) + ins)] = v
            if ent:
                tensors[(k, cls)] = OperationTensor(k, cls, ent)
        mm = None
        if S.m_minus1 is not None:
            mm = {}
            for cls in S.class_closure():
                v = m_can_minus1(self, cls)
                if v:
                    mm[cls] = NovikovScalar.constant(v)
        self.structure = FilteredAInfinity(hb, hp, tensors, S.emax, self.kmax, mm, name="canonical")

    # evaluation

    def f_push(self, b):
        """``f_*(b) = sum T^E f_{k,beta}(b, .., b)`` for ``b`` with H coordinates."""
        S = self.S
        total = NVector.zero(S.dimension, S.emax)
        b = b.with_emax(S.emax)
        for (k, cls), mp in self.f.items():
            if k == 0:
                total = total + constant_map_vector(mp, S.dimension, cls.energy, S.emax)
            else:
                total = total + apply_map(mp, [b] * k, energy=cls.energy, emax=S.emax, dimension=S.dimension)
        return total

    def f_push_fixed_point(self, b):
        """Independent route to ``f_*(b)``: iterate ``B = i(b) + G M'(B)`` until stable."""
        S = self.S
        ib = self.hd.include(b.with_emax(S.emax)).with_emax(S.emax)
        B = ib
        for _ in range(200):
            total = NVector.zero(S.dimension, S.emax)
            for (k, cls) in S.ops:
                if (k, cls) == (1, ZERO):
                    continue
                mp = S.op_map(k, cls)
                if k == 0:
                    total = total + constant_map_vector(mp, S.dimension, cls.energy, S.emax)
                else:
                    total = total + apply_map(mp, [B] * k, energy=cls.energy, emax=S.emax)
            nxt = ib + self.hd.propagate(total)
            if nxt == B:
                return B
            B = nxt
        raise RuntimeError("fixed point iteration did not stabilise")

    def psi_can(self, b):
        return psi(self.structure, b)


def _compositions(l, k, rest, f):
    """Ordered tuples of ``l`` keys of ``f`` whose arities sum to ``k`` and classes to ``rest``."""
    keys = sorted(f, key=lambda kc: (kc[1], kc[0]))

    def rec(slots, k_left, c_left):
        if slots == 0:
            if k_left == 0 and c_left.is_zero():
                yield ()
            return
        for (kj, cj) in keys:
            if kj > k_left:
                continue
            c2 = c_left - cj
            if c2.energy < 0:
                continue
            for tail in rec(slots - 1, k_left - kj, c2):
                yield ((kj, cj),) + tail

    yield from rec(l, k, rest)


def canonical_model(S, kmax=None):
    return CanonicalModel(S, kmax)


# tree sums


def _tree_enumerator(S):
    return TreeEnumerator(S.classes())


def f_gamma(can, tree, args, root=None):
    """Value of the rooted tree on its inputs (H coordinates), without ``T^E`` weights.

    ``args`` is one NVector for every input in counterclockwise order, or a
    single NVector used for all of them.
    """
    S = can.S
    r = tree.root if root is None else root
    if isinstance(args, NVector):
        args = [args] * (tree.n_exterior() - 1)
    if len(args) != tree.n_exterior() - 1:
        raise ValueError("one argument per input is needed")
    feed = iter([can.hd.include(a.with_emax(S.emax)).with_emax(S.emax) for a in args])
    return _f_from(can, tree, tree.adj[r][0], r, feed)


def _f_from(can, tree, w, parent, feed):
    if tree.labels[w] is None:
        return next(feed)
    return can.hd.propagate(_vertex_value(can, tree, w, tree.after(w, parent), feed))


def _vertex_value(can, tree, v, children, feed):
    """``m_{l, beta(v)}`` applied to the subtree values in ``children`` order."""
    S = can.S
    l = len(children)
    cls = tree.labels[v]
    args = [_f_from(can, tree, c, v, feed) for c in children]
    if (l, cls) not in S.ops or (l, cls) == (1, ZERO):
        return NVector.zero(S.dimension, S.emax)
    mp = S.op_map(l, cls)
    if l == 0:
        return constant_map_vector(mp, S.dimension, 0, S.emax)
    return apply_map(mp, args, energy=0, emax=S.emax)


def m_tree(can, tree, b=None, flag=None):
    """``m(Gamma, v, e; b)``: pair ``m_{l,beta(v)}`` of the other components with the one across ``e``.

    ``flag`` is ``(v, w)`` with ``w`` the neighbour across ``e``; default is
    the first interior vertex and its first edge.  A single vertex gives
    ``m_{-1, beta}``.
    """
    S = can.S
    if b is None:
        b = NVector.zero(can.hd.rank, S.emax)
    ib = can.hd.include(b.with_emax(S.emax)).with_emax(S.emax)
    feed = _repeat(ib)
    if len(tree.labels) == 1:
        cls = tree.labels[0]
        v = (S.m_minus1 or {}).get(cls)
        return NovikovScalar.zero(S.emax) if v is None else v.with_emax(S.emax)
    if flag is None:
        v = tree.interior()[0]
        flag = (v, tree.adj[v][0])
    v, e = flag
    order = tree.starting_at(v, e)
    other = _f_from(can, tree, order[0], v, feed)
    val = _vertex_value(can, tree, v, order[1:], feed)
    return val.pair(S.pairing, other)


def _repeat(x):
    while True:
        yield x


def flags(tree):
    return [(v, w) for v in tree.interior() for w in tree.adj[v]]


def m_prime(can, tree, e, v, b):
    """``<m_{1,0}(f_{G1}(b)), f_{G0}(b)>`` for the two halves of an interior edge."""
    S = can.S
    g0, g1 = split_at_edge(tree, e, v)
    x1 = f_gamma(can, g1, b)
    x0 = f_gamma(can, g0, b)
    m1 = apply_map(S.op_map(1, ZERO), [x1], energy=0, emax=S.emax) if (1, ZERO) in S.ops else \
        NVector.zero(S.dimension, S.emax)
    return m1.pair(S.pairing, x0)


def m_can_minus1(can, cls):
    """``sum over Gr^-(0, cls) of m(Gamma) / |Aut(Gamma)|`` as a rational."""
    total = Fraction(0)
    for tree, aut in TreeEnumerator(can.S.classes()).unrooted(0, cls):
        val = m_tree(can, tree)
        total += val.coefficient(0) / aut if val else 0
    return total


def tree_sum(can, b, weight=None, include_single=True):
    """``sum_{k, beta} sum_Gamma T^E(beta) w(Gamma) m(Gamma; b) / |Aut|`` below the truncation.

    ``weight`` maps a tree to a rational (default 1).
    """
    S = can.S
    emax = S.emax
    v = b.valuation()
    enum = TreeEnumerator(S.classes())
    total = NovikovScalar.zero(emax)
    for cls in [ZERO] + S.class_closure():
        k = 0
        while True:
            if v is None and k > 0:
                break
            if v is not None and k * v + cls.energy >= emax:
                break
            for tree, aut in enum.unrooted(k, cls):
                if len(tree.labels) == 1 and not include_single:
                    continue
                w = Fraction(1) if weight is None else Fraction(weight(tree))
                if not w:
                    continue
                val = m_tree(can, tree, b)
                if val:
                    total = total + (val * (w / aut)).shift(cls.energy).with_emax(emax)
            k += 1
    return total


def phi(can, b):
    """Tree expansion of the canonical potential."""
    return tree_sum(can, b)


def vertex_count_identity(can, b):
    """Both sides of: sum over (l, beta') != (1, 0) of T^E/(l+1) <m(f_* b..), f_* b> = tree sum weighted by #vertices."""
    S = can.S
    B = can.f_push(b)
    lhs = NovikovScalar.zero(S.emax)
    for (k, cls) in S.ops:
        if (k, cls) == (1, ZERO):
            continue
        mp = S.op_map(k, cls)
        if k == 0:
            val = constant_map_vector(mp, S.dimension, cls.energy, S.emax)
        else:
            val = apply_map(mp, [B] * k, energy=cls.energy, emax=S.emax)
        lhs = lhs + val.pair(S.pairing, B) * Fraction(1, k + 1)
    rhs = tree_sum(can, b, weight=lambda t: len(t.interior()), include_single=False)
    return lhs, rhs


def edge_count_identity(can, b):
    """Both sides of: <m_{1,0}(f_* b), f_* b> = -2 * tree sum weighted by #interior edges (b Maurer-Cartan)."""
    S = can.S
    B = can.f_push(b)
    if (1, ZERO) in S.ops:
        lhs = apply_map(S.op_map(1, ZERO), [B], emax=S.emax).pair(S.pairing, B)
    else:
        lhs = NovikovScalar.zero(S.emax)
    rhs = tree_sum(can, b, weight=lambda t: -2 * len(t.interior_edges()), include_single=False)
    return lhs, rhs


def arity_identity(can, b, k, cls):
    """Both sides of: <m^can_{k,cls}(b..), b> = (k+1) * sum over Gr^-(k+1, cls) of m(Gamma; b)/|Aut|."""
    C = can.structure
    mp = C.op_map(k, cls)
    bb = b.with_emax(C.emax)
    if k == 0:
        val = constant_map_vector(mp, C.dimension, 0, C.emax) if mp else NVector.zero(C.dimension, C.emax)
    else:
        val = apply_map(mp, [bb] * k, energy=0, emax=C.emax) if mp else NVector.zero(C.dimension, C.emax)
    lhs = val.pair(C.pairing, bb)
    rhs = NovikovScalar.zero(C.emax)
    for tree, aut in TreeEnumerator(can.S.classes()).unrooted(k + 1, cls):
        rhs = rhs + m_tree(can, tree, b) * Fraction(k + 1, aut)
    return lhs, rhs


def flag_independence(can, tree, b):
    """All flag values of ``m(Gamma, v, e; b)`` (they should coincide)."""
    return [m_tree(can, tree, b, fl) for fl in flags(tree)]


def transfer_report(S, b, kmax=None):
    """Check ``psi(f_*(b)) = psi_can(b)`` and related identities for a Maurer-Cartan ``b`` on H."""
    can = CanonicalModel(S, kmax)
    bad = []
    B = can.f_push(b)
    if not mc_residual(can.structure, b).is_zero():
        bad.append("b is not Maurer-Cartan for the canonical model")
    if not mc_residual(S, B).is_zero():
        bad.append("f_*(b) is not Maurer-Cartan")
    lhs, rhs = psi(S, B), can.psi_can(b)
    ok = lhs == rhs
    if not ok:
        bad.append(f"psi(f_*(b)) = {lhs} but psi_can(b) = {rhs}")
    return CheckReport("Ψ(f_*(b)) = Ψ^can(b)", ok and not bad, bad, {"psi": lhs, "psi_can": rhs, "model": can})
