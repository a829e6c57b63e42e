"""Planar (ribbon) trees with interior and exterior vertices.

Interior vertices carry a class label; a vertex with the zero class needs at
least three edges.  Exterior vertices are unlabeled leaves.  A rooted tree
marks one exterior vertex; rooted trees have no nontrivial automorphisms.

Isomorphism classes are found by a canonical code: every directed edge
``u -> w`` gets the pair (planted code of ``w`` seen from ``u``, planted code
of ``u`` seen from ``w``) and the tree's code is the smallest one.  Directed
edges realising the minimum are in bijection with automorphisms.
"""

from functools import lru_cache
from itertools import combinations, permutations, product

from .ainf import ZERO, ClassLabel, class_closure
from .novikov import EnergyMonoid


class RibbonTree:
    """``labels[v]`` is ``None`` for an exterior vertex, else a ClassLabel.

    ``adj[v]`` lists the neighbours of ``v`` in counterclockwise order.
    """

    __slots__ = ("labels", "adj", "root", "_canon")

    def __init__(self, labels, adj, root=None):
        self.labels = tuple(labels)
        self.adj = tuple(tuple(a) for a in adj)
        self.root = root
        self._canon = None
        self._validate()

    def _validate(self):
        n = len(self.labels)
        edges = set()
        for v, nb in enumerate(self.adj):
            if len(set(nb)) != len(nb) or v in nb:
                raise ValueError("bad adjacency")
            for w in nb:
                if v not in self.adj[w]:
                    raise ValueError("adjacency not symmetric")
                edges.add(frozenset((v, w)))
        if n and len(edges) != n - 1:
            raise ValueError("not a tree")
        if n > 1 and not self._connected():
            raise ValueError("not connected")
        for v, lab in enumerate(self.labels):
            if lab is None and len(self.adj[v]) != 1:
                raise ValueError("exterior vertex must have exactly one edge")
            if lab is not None and lab.is_zero() and len(self.adj[v]) < 3:
                raise ValueError("zero-class vertex needs at least three edges")
        if self.root is not None and self.labels[self.root] is not None:
            raise ValueError("root must be exterior")

    def _connected(self):
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.labels)

    # counts

    def interior(self):
        return [v for v, l in enumerate(self.labels) if l is not None]

    def exterior(self):
        return [v for v, l in enumerate(self.labels) if l is None]

    def interior_edges(self):
        return [(v, w) for v in self.interior() for w in self.adj[v] if v < w and self.labels[w] is not None]

    def edges(self):
        return [(v, w) for v in range(len(self.labels)) for w in self.adj[v] if v < w]

    def total_class(self):
        total = ZERO
        for l in self.labels:
            if l is not None:
                total = total + l
        return total

    def n_exterior(self):
        return len(self.exterior())

    def inputs(self):
        """Number of exterior vertices other than the root."""
        return self.n_exterior() - (1 if self.root is not None else 0)

    # navigation

    def after(self, v, w):
        """Neighbours of ``v`` in cyclic order starting just after ``w``."""
        nb = self.adj[v]
        i = nb.index(w)
        return nb[i + 1:] + nb[:i]

    def starting_at(self, v, w):
        """Neighbours of ``v`` in cyclic order starting with ``w``."""
        nb = self.adj[v]
        i = nb.index(w)
        return nb[i:] + nb[:i]

    def _vkey(self, v):
        l = self.labels[v]
        if l is None:
            return (0,)
        return (1, l.energy, l.boundary)

    def planted_code(self, w, parent, memo=None):
        memo = {} if memo is None else memo
        key = (w, parent)
        if key not in memo:
            memo[key] = (self._vkey(w), tuple(self.planted_code(c, w, memo) for c in self.after(w, parent)))
        return memo[key]

    def canonical(self):
        """Canonical code and automorphism count ``(code, aut)``; rooted trees use the root edge."""
        if self._canon is None:
            memo = {}
            if self.root is not None:
                w = self.adj[self.root][0]
                code = ("rooted", self.planted_code(w, self.root, memo))
                self._canon = (code, 1)
            elif len(self.labels) == 1:
                self._canon = (("single", self._vkey(0)), 1)
            else:
                codes = [(self.planted_code(w, u, memo), self.planted_code(u, w, memo))
                         for u in range(len(self.labels)) for w in self.adj[u]]
                best = min(codes)
                self._canon = (("tree", best), codes.count(best))
        return self._canon

    def code(self):
        return self.canonical()[0]

    def __eq__(self, other):
        return isinstance(other, RibbonTree) and self.code() == other.code()

    def __hash__(self):
        return hash(self.code())

    def describe(self):
        parts = []
        for v, l in enumerate(self.labels):
            tag = "ext" if l is None else l.label()
            if v == self.root:
                tag = "root"
            parts.append(f"{v}:{tag}->{list(self.adj[v])}")
        return "; ".join(parts)

    def __repr__(self):
        return f"RibbonTree({self.describe()})"


def aut_order(tree):
    return tree.canonical()[1]


def euler_characteristic(tree):
    """``#interior vertices - #interior edges`` (equals 1 for trees with an interior vertex)."""
    return len(tree.interior()) - len(tree.interior_edges())


# building trees from nested codes


def _build(code_root, children, rooted):
    """Assemble a tree from a root vertex label and planted children codes.

    Planted codes are ``"E"`` (exterior leaf) or ``(label, (child codes...))``.
    """
    labels, adj = [], []

    def new(label):
        labels.append(label)
        adj.append([])
        return len(labels) - 1

    def plant(code, parent):
        if code == "E":
            v = new(None)
            adj[v].append(parent)
            return v
        label, kids = code
        v = new(label)
        adj[v].append(parent)
        for k in kids:
            adj[v].append(plant(k, v))
        return v

    if rooted:
        r = new(None)
        top = plant(code_root, r)
        adj[r].append(top)
        return RibbonTree(labels, adj, root=r)
    v = new(code_root)
    for k in children:
        adj[v].append(plant(k, v))
    return RibbonTree(labels, adj)


class TreeEnumerator:
    """Enumerates trees whose interior labels come from ``labels`` (nonzero classes)."""

    def __init__(self, labels):
        if isinstance(labels, EnergyMonoid):
            labels = [ClassLabel(g) for g in labels.generators]
        self.labels = sorted({l for l in labels if not l.is_zero()})
        self._planted = lru_cache(maxsize=None)(self._planted_impl)
        self._forest = lru_cache(maxsize=None)(self._forest_impl)
        self._closure = {}

    def vertex_labels(self, beta):
        """Possible interior labels: every nonzero sum of generators up to ``beta``."""
        return [c for c in self.sums(beta) if not c.is_zero()]

    def sums(self, beta):
        if beta not in self._closure:
            cl = [c for c in class_closure(self.labels, beta.energy + 1) if _le(c, beta)]
            self._closure[beta] = [ZERO] + cl
        return self._closure[beta]

    def _splits(self, beta):
        s = set(self.sums(beta))
        return [(g, beta - g) for g in self.sums(beta) if (beta - g) in s]

    def _planted_impl(self, k, beta):
        out = []
        if k == 1 and beta.is_zero():
            out.append("E")
        for lab in self.vertex_labels(beta):
            rest = beta - lab
            if rest.energy < 0 or (not rest.is_zero() and rest not in set(self.sums(beta))):
                continue
            for f in self._forest(k, rest, 0):
                out.append((lab, f))
        for f in self._forest(k, beta, 2):
            out.append((ZERO, f))
        return tuple(out)

    def _forest_impl(self, k, beta, nmin):
        out = []
        if k == 0 and beta.is_zero() and nmin == 0:
            out.append(())
        for k1 in range(k + 1):
            for b1, b2 in self._splits(beta):
                if k1 == 0 and b1.is_zero():
                    continue
                # tails first: a part taking everything leaves no room for more parts
                tails = self._forest(k - k1, b2, max(nmin - 1, 0))
                if not tails:
                    continue
                heads = self._planted(k1, b1)
                for h in heads:
                    for t in tails:
                        out.append((h,) + t)
        return tuple(out)

    def unrooted(self, k, beta):
        """Representatives of Gr^-(k, beta) with automorphism orders, in canonical order."""
        found = {}
        for lab in [ZERO] + self.vertex_labels(beta):
            rest = beta - lab
            if rest.energy < 0 or (not rest.is_zero() and rest not in set(self.sums(beta))):
                continue
            nmin = 3 if lab.is_zero() else 0
            for f in self._forest(k, rest, nmin):
                t = _build(lab, f, rooted=False)
                code, aut = t.canonical()
                if code not in found:
                    found[code] = (t, aut)
        return [found[c] for c in sorted(found, key=repr)]

    def rooted(self, k, beta, include_trivial=False):
        """Rooted trees with ``k`` inputs besides the root; at least one interior vertex."""
        out = []
        for code in self._planted(k, beta):
            if code == "E":
                if include_trivial:
                    out.append(RibbonTree([None, None], [[1], [0]], root=0))
                continue
            out.append(_build(code, (), rooted=True))
        return out


def _le(a, b):
    """``a <= b`` componentwise on the boundary, by energy otherwise."""
    if a.energy > b.energy:
        return False
    d = b - a
    return d.energy >= 0


def _labels_of(monoid):
    if isinstance(monoid, EnergyMonoid):
        return [ClassLabel(g) for g in monoid.generators]
    return list(monoid)


def enum_gr_minus(k, beta, monoid):
    """Isomorphism classes of unrooted trees with ``k`` exterior vertices and total class ``beta``."""
    return TreeEnumerator(_labels_of(monoid)).unrooted(k, beta)


def enum_gr_rooted(k, beta, monoid):
    """Rooted trees with ``k`` inputs (plus the root) and total class ``beta``."""
    return TreeEnumerator(_labels_of(monoid)).rooted(k, beta)


# splitting


def _component(tree, start, banned):
    """Vertices reachable from ``start`` without passing through ``banned``."""
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in tree.adj[v]:
            if w != banned and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def planted_subtree(tree, w, parent):
    """Rooted tree made of ``w``'s side of edge ``(parent, w)``; the root stub replaces ``parent``."""
    verts = sorted(_component(tree, w, parent))
    idx = {v: i + 1 for i, v in enumerate(verts)}
    labels = [None] + [tree.labels[v] for v in verts]
    adj = [[idx[w]]]
    for v in verts:
        adj.append([0 if x == parent else idx[x] for x in tree.adj[v]])
    return RibbonTree(labels, adj, root=0)


def split_at_flag(tree, v, e):
    """Components of ``tree - v`` as rooted trees, starting with the one across edge ``e``.

    ``e`` is given as the neighbour of ``v`` it leads to.  Returns ``(l, [G0, .., Gl])``.
    """
    if tree.labels[v] is None:
        raise ValueError("flag needs an interior vertex")
    if e not in tree.adj[v]:
        raise ValueError("edge not incident to vertex")
    comps = [planted_subtree(tree, w, v) for w in tree.starting_at(v, e)]
    return len(comps) - 1, comps


def join_at_vertex(label, comps):
    """Inverse of :func:`split_at_flag`: glue rooted trees around a new vertex."""
    labels, adj = [label], [[]]
    for c in comps:
        top = c.adj[c.root][0]
        remap = {}
        for u in range(len(c.labels)):
            if u != c.root:
                remap[u] = len(labels)
                labels.append(c.labels[u])
                adj.append(None)
        for u, nu in remap.items():
            adj[nu] = [0 if x == c.root else remap[x] for x in c.adj[u]]
        adj[0].append(remap[top])
    return RibbonTree(labels, adj)


def split_at_edge(tree, e, v):
    """Cut an interior edge ``e = (v, w)``.

    Returns ``(G0, G1)``: ``G0`` is ``v``'s side rooted where ``w`` was and
    ``G1`` is ``w``'s side rooted where ``v`` was.
    """
    a, b = e
    if v not in (a, b):
        raise ValueError("v must be an endpoint of e")
    w = b if v == a else a
    if w not in tree.adj[v]:
        raise ValueError("not an edge")
    if tree.labels[v] is None or tree.labels[w] is None:
        raise ValueError("edge is exterior")
    return planted_subtree(tree, v, w), planted_subtree(tree, w, v)


def join_rooted(g0, g1):
    """Inverse of :func:`split_at_edge`: identify the two root edges."""
    labels, adj = [], []
    maps = []
    for g in (g0, g1):
        remap = {}
        for u in range(len(g.labels)):
            if u != g.root:
                remap[u] = len(labels)
                labels.append(g.labels[u])
                adj.append(None)
        maps.append(remap)
    tops = [maps[0][g0.adj[g0.root][0]], maps[1][g1.adj[g1.root][0]]]
    for j, g in enumerate((g0, g1)):
        other = tops[1 - j]
        for u, nu in maps[j].items():
            adj[nu] = [other if x == g.root else maps[j][x] for x in g.adj[u]]
    return RibbonTree(labels, adj)


# brute force oracle


def labeled_trees(n, accept=None):
    """All labeled trees on ``n`` vertices as adjacency sets (via Pruefer sequences).

    ``accept``, if given, filters on the degree list before the tree is built.
    """
    if n == 1:
        yield [set()]
        return
    if n == 2:
        yield [{1}, {0}]
        return
    for seq in product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        if accept is not None and not accept(degree):
            continue
        adj = [set() for _ in range(n)]
        for x in seq:
            leaf = min(i for i in range(n) if degree[i] == 1)
            adj[leaf].add(x)
            adj[x].add(leaf)
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = [i for i in range(n) if degree[i] == 1]
        adj[u].add(w)
        adj[w].add(u)
        yield adj


def _cyclic_orders(nbrs):
    nbrs = sorted(nbrs)
    if len(nbrs) <= 1:
        yield tuple(nbrs)
        return
    first = nbrs[0]
    for rest in permutations(nbrs[1:]):
        yield (first,) + rest


def _label_assignments(nverts, beta, labels):
    """Tuples of labels (with ZERO) on ``nverts`` vertices summing to ``beta``."""
    choices = [ZERO] + [c for c in class_closure(labels, beta.energy + 1) if _le(c, beta)]

    def rec(i, rem):
        if i == nverts:
            if rem.is_zero():
                yield ()
            return
        for c in choices:
            r = rem - c
            if r.energy >= 0 and (r.is_zero() or r.energy > 0):
                for tail in rec(i + 1, r):
                    yield (c,) + tail

    yield from rec(0, beta)


def brute_force_classes(k, beta, monoid, max_interior):
    """Labeled-tree oracle: ``({code: number of labeled structures}, total)``.

    Every labeled tree with ``k`` exterior and up to ``max_interior`` interior
    vertices is built with every choice of cyclic orders and labels, then
    reduced to its canonical code.
    """
    labels = _labels_of(monoid)
    emin = min((l.energy for l in labels if l.energy > 0), default=None)
    # interior vertices of degree < 3 carry nonzero labels, and at most this many labels are nonzero
    max_nonzero = 0 if emin is None else int(beta.energy // emin)

    def accept(degree):
        low = sum(1 for d in degree if d <= 2)
        return sum(1 for d in degree if d == 1) >= k and low - k <= max_nonzero

    counts = {}
    total = 0
    assignments = {}
    for m in range(1, max_interior + 1):
        n = m + k
        for adj in labeled_trees(n, accept if n > 2 else None):
            leaves = [v for v in range(n) if len(adj[v]) == 1]
            for ext in combinations(leaves, k) if n > 1 else ([()] if k == 0 else []):
                ext = set(ext)
                inter = [v for v in range(n) if v not in ext]
                if any(w in ext for v in ext for w in adj[v]):
                    continue
                if len(inter) not in assignments:
                    assignments[len(inter)] = list(_label_assignments(len(inter), beta, labels))
                for labs in assignments[len(inter)]:
                    lab = [None] * n
                    for v, c in zip(inter, labs):
                        lab[v] = c
                    if any(c.is_zero() and len(adj[v]) < 3 for v, c in zip(inter, labs)):
                        continue
                    for orders in product(*[list(_cyclic_orders(adj[v])) for v in range(n)]):
                        t = RibbonTree(lab, orders)
                        code = t.code()
                        counts[code] = counts.get(code, 0) + 1
                        total += 1
    return counts, total
