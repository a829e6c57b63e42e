"""Cached fixtures shared by the test modules (structures are immutable values)."""

from functools import lru_cache

from superpot import fixtures


@lru_cache(maxsize=None)
def generated(seed, model=None):
    return fixtures.generate(seed, model)


@lru_cache(maxsize=None)
def transfer_case(seed):
    return fixtures.transfer_fixture(seed)


@lru_cache(maxsize=None)
def wallcross_case(seed):
    return fixtures.wallcross_fixture(seed)


def permutation_automorphisms(tree):
    """Count vertex permutations preserving labels, adjacency and every cyclic order."""
    from itertools import permutations

    n = len(tree.labels)
    count = 0
    for p in permutations(range(n)):
        if any(tree.labels[p[v]] != tree.labels[v] for v in range(n)):
            continue
        ok = True
        for v in range(n):
            img = [p[w] for w in tree.adj[v]]
            target = list(tree.adj[p[v]])
            if len(img) != len(target) or not any(img[i:] + img[:i] == target for i in range(max(len(img), 1))):
                ok = False
                break
        count += ok
    return count
