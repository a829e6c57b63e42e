"""Exact linear algebra over the rationals.

Thin wrappers around sympy's ``DomainMatrix`` over ``QQ``.  Inputs and outputs
are plain lists of ``Fraction`` or sparse ``{row: {col: Fraction}}`` dicts.
"""

from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _q(x):
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _f(q):
    return Fraction(int(QQ.numer(q)), int(QQ.denom(q)))


def to_dm(rows, ncols=None):
    """Dense list-of-lists (or sparse dict rows) to a ``DomainMatrix``."""
    if isinstance(rows, dict):
        nrows = max(rows, default=-1) + 1
        data = {i: {j: _q(v) for j, v in r.items() if v} for i, r in rows.items()}
        data = {i: r for i, r in data.items() if r}
        return DomainMatrix(data, (nrows, ncols), QQ)
    nrows = len(rows)
    ncols = len(rows[0]) if rows else (ncols or 0)
    data = {}
    for i, r in enumerate(rows):
        d = {j: _q(v) for j, v in enumerate(r) if v}
        if d:
            data[i] = d
    return DomainMatrix(data, (nrows, ncols), QQ)


def from_dm(m):
    nrows, ncols = m.shape
    out = [[Fraction(0)] * ncols for _ in range(nrows)]
    for i, r in m.to_sdm().items():
        for j, v in r.items():
            out[i][j] = _f(v)
    return out


def rank(rows):
    if not rows:
        return 0
    return to_dm(rows).rank()


def inverse(rows):
    return from_dm(to_dm(rows).inv())


def matmul(a, b):
    return from_dm(to_dm(a) * to_dm(b))


def transpose(a):
    return [list(r) for r in zip(*a)] if a else []


def nullspace(rows, ncols=None):
    """Basis (list of column vectors) of ``{x : A x = 0}``."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m = to_dm(rows)
    ns = m.nullspace()
    return from_dm(ns)


def column_basis(vectors, dim):
    """Indices of a maximal independent subset of ``vectors`` (kept in order)."""
    chosen = []
    current = []
    r = 0
    for idx, v in enumerate(vectors):
        trial = current + [list(v)]
        rr = rank(trial) if trial else 0
        if rr > r:
            chosen.append(idx)
            current = trial
            r = rr
    return chosen


def solve_affine(rows, rhs, nvars, free_values=None):
    """Solve the sparse system ``A x = rhs`` exactly.

    ``rows`` is ``{row: {col: coef}}``, ``rhs`` is ``{row: value}``.  Free
    variables take values from ``free_values(var_index)`` (default 0).
    Returns ``(solution, free_vars, bad_row)``; ``bad_row`` is the index of an
    equation witnessing inconsistency, otherwise ``None``.
    """
    row_ids = sorted(set(rows) | {i for i, v in rhs.items() if v})
    if not row_ids:
        sol = [Fraction(0)] * nvars
        if free_values is not None:
            sol = [Fraction(free_values(j)) for j in range(nvars)]
        return sol, list(range(nvars)), None
    data = {}
    for new_i, i in enumerate(row_ids):
        r = {j: _q(v) for j, v in rows.get(i, {}).items() if v}
        b = rhs.get(i, 0)
        if b:
            r[nvars] = _q(b)
        if r:
            data[new_i] = r
    aug = DomainMatrix(data, (len(row_ids), nvars + 1), QQ)
    red, pivots = aug.rref()
    if nvars in pivots:
        # find the original equation responsible
        sub = DomainMatrix({i: r for i, r in data.items()}, (len(row_ids), nvars + 1), QQ)
        bad = _first_inconsistent(sub, nvars)
        return None, None, row_ids[bad]
    pivots = list(pivots)
    free = [j for j in range(nvars) if j not in set(pivots)]
    values = [Fraction(0)] * nvars
    if free_values is not None:
        for j in free:
            values[j] = Fraction(free_values(j))
    sdm = red.to_sdm()
    for pi, col in enumerate(pivots):
        r = sdm.get(pi, {})
        val = _f(r.get(nvars, QQ(0)))
        for j, v in r.items():
            if j != col and j != nvars:
                val -= _f(v) * values[j]
        values[col] = val
    return values, free, None


def _first_inconsistent(aug, nvars):
    """Smallest prefix of rows that is already inconsistent (binary search)."""
    n = aug.shape[0]
    data = aug.to_sdm()

    def bad(k):
        sub = DomainMatrix({i: r for i, r in data.items() if i < k}, (k, nvars + 1), QQ)
        _, piv = sub.rref()
        return nvars in piv

    lo, hi = 1, n
    while lo < hi:
        mid = (lo + hi) // 2
        if bad(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo - 1
