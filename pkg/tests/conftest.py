"""Shared catalogs of small graphs, deduplicated up to isomorphism.

Isomorphism-class representatives are enough for every property we
test (critical groups, tree counts, pairings are label-invariant), and
they cut the exhaustive sweeps by roughly the permutation factor.
"""

import itertools
from functools import lru_cache

from chipfire import Multigraph, is_connected


def _pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _perm_maps(n):
    """For each vertex permutation, the induced permutation of pair slots."""
    pairs = _pairs(n)
    slot = {p: k for k, p in enumerate(pairs)}
    maps = []
    for sigma in itertools.permutations(range(n)):
        maps.append(
            tuple(slot[tuple(sorted((sigma[i], sigma[j])))] for i, j in pairs)
        )
    return maps


def graph_from_multiplicities(n, mults):
    """Multigraph from a multiplicity value per vertex pair (i < j order)."""
    pairs = _pairs(n)
    table = [[0] * n for _ in range(n)]
    for (i, j), m in zip(pairs, mults):
        table[i][j] = m
        table[j][i] = m
    return Multigraph([f"v{k+1}" for k in range(n)], table)


@lru_cache(maxsize=None)
def connected_simple_reps(n):
    """Connected simple graphs on n vertices, one per isomorphism class."""
    if n == 1:
        return (Multigraph(["v1"], [[0]]),)
    pairs = _pairs(n)
    m = len(pairs)
    maps = _perm_maps(n)
    seen = set()
    reps = []
    for mask in range(1 << m):
        if mask in seen:
            continue
        for pm in maps:
            x = 0
            for k in range(m):
                if mask >> k & 1:
                    x |= 1 << pm[k]
            seen.add(x)
        G = graph_from_multiplicities(n, [(mask >> k) & 1 for k in range(m)])
        if is_connected(G):
            reps.append(G)
    return tuple(reps)


def _mult_tuples(slots, total_max):
    """All tuples of nonnegative ints of the given length with sum <= total_max."""
    if slots == 0:
        yield ()
        return
    for head in range(total_max + 1):
        for rest in _mult_tuples(slots - 1, total_max - head):
            yield (head,) + rest


@lru_cache(maxsize=None)
def connected_multigraph_reps(n, max_edges):
    """Connected multigraphs on n vertices with <= max_edges edge units,
    one per isomorphism class."""
    if n == 1:
        return (Multigraph(["v1"], [[0]]),)
    pairs = _pairs(n)
    maps = _perm_maps(n)
    seen = set()
    reps = []
    for tup in _mult_tuples(len(pairs), max_edges):
        if tup in seen:
            continue
        for pm in maps:
            seen.add(tuple(tup[pm.index(k)] for k in range(len(pairs))))
        G = graph_from_multiplicities(n, tup)
        if is_connected(G):
            reps.append(G)
    return tuple(reps)


def small_connected_reps(max_n):
    """All connected simple-graph reps with up to max_n vertices."""
    out = []
    for n in range(1, max_n + 1):
        out.extend(connected_simple_reps(n))
    return out
