"""Arithmetical structures: generalized Laplacians diag(d) - A.

An arithmetical structure labels the vertices with coprime positive
integers r so that each label divides the multiplicity-weighted sum of
its neighbors' labels; d records the quotients.  The Laplacian
structure is r = all ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd, log2

from .critgrp import AbelianGroup, cokernel, spanning_tree_enumerate
from .errors import GuardError, InvalidStructureError
from .exactla import IntegerMatrix
from .graphs import Multigraph, family, is_connected

_ENUM_GUARD_BITS = 44.0  # cap on n * log2(r_max + 1)
_UNIT_FRACTION_GUARD = 8


@dataclass(frozen=True)
class ArithmeticalStructure:
    """Paired (r, d) vectors with (diag(d) - A) r = 0 and gcd(r) = 1."""

    r: tuple
    d: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))

    def __str__(self):
        return structure_to_text(self)


def structure_to_text(s: ArithmeticalStructure) -> str:
    return "r=(%s) d=(%s)" % (
        ",".join(str(x) for x in s.r),
        ",".join(str(x) for x in s.d),
    )


def host_matrix(G: Multigraph, s: ArithmeticalStructure) -> IntegerMatrix:
    """diag(d) - A, the generalized Laplacian of the structure."""
    n = G.n
    return IntegerMatrix(
        [[(s.d[i] if i == j else 0) - G.mult[i][j] for j in range(n)] for i in range(n)]
    )


def validate(G: Multigraph, r) -> ArithmeticalStructure:
    """Check an r-vector and derive d, or raise InvalidStructureError."""
    if not is_connected(G):
        raise InvalidStructureError("arithmetical structures live on connected graphs")
    r = [int(x) for x in r]
    if len(r) != G.n:
        raise InvalidStructureError("r-vector length does not match graph")
    if any(x < 1 for x in r):
        raise InvalidStructureError("r entries must be positive")
    d = []
    for v in range(G.n):
        s = sum(G.mult[v][w] * r[w] for w in range(G.n))
        if s % r[v]:
            raise InvalidStructureError(
                f"vertex {G.labels[v]!r}: {r[v]} does not divide its neighbor sum {s}"
            )
        d.append(s // r[v])
    g = 0
    for x in r:
        g = gcd(g, x)
    if g != 1:
        raise InvalidStructureError(f"gcd of r entries is {g}, not 1")
    return ArithmeticalStructure(tuple(r), tuple(d))


def laplacian_structure(G: Multigraph) -> ArithmeticalStructure:
    """r = all ones, d = the degree vector."""
    return validate(G, [1] * G.n)


def enumerate_structures(G: Multigraph, r_max: int):
    """All structures with every r entry <= r_max, in lexicographic r order.

    Depth-first search over r assignments in vertex order.  A vertex is
    checked exactly once all its neighbors are assigned; otherwise the
    candidate is pruned if no multiple of r_v can be reached by the
    remaining assignments.  Completeness is only relative to r_max.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    n = G.n
    if n * log2(r_max + 1) > _ENUM_GUARD_BITS:
        raise GuardError(
            f"search space {n} * log2({r_max + 1}) exceeds {_ENUM_GUARD_BITS} bits"
        )
    nbrs = [[w for w in range(n) if G.mult[v][w]] for v in range(n)]
    out = []
    r = [0] * n

    def feasible(k: int) -> bool:
        for v in range(k + 1):
            assigned = 0
            pending = 0
            for w in nbrs[v]:
                if w <= k:
                    assigned += G.mult[v][w] * r[w]
                else:
                    pending += G.mult[v][w]
            if pending == 0:
                if assigned % r[v]:
                    return False
            else:
                lo = assigned + pending
                hi = assigned + pending * r_max
                if (hi // r[v]) * r[v] < lo:
                    return False
        return True

    def dfs(k: int):
        if k == n:
            g = 0
            for x in r:
                g = gcd(g, x)
            if g == 1:
                out.append(validate(G, r))
            return
        for val in range(1, r_max + 1):
            r[k] = val
            if feasible(k):
                dfs(k + 1)
        r[k] = 0

    dfs(0)
    out.sort(key=lambda s: s.r)
    return out


# ---------------------------------------------------------------------------
# smoothing


def smoothable_vertices(G: Multigraph, s: ArithmeticalStructure):
    """Vertices where a smoothing operation applies.

    Degree 2 with two distinct neighbors and r_v strictly above both
    (then r_v = r_u + r_w automatically), or degree 1 with r_v equal to
    the neighbor's label.
    """
    out = []
    for v in range(G.n):
        deg = sum(G.mult[v])
        nb = [w for w in range(G.n) if G.mult[v][w]]
        if deg == 1:
            if s.r[v] == s.r[nb[0]]:
                out.append(v)
        elif deg == 2 and len(nb) == 2:
            u, w = nb
            if s.r[v] > s.r[u] and s.r[v] > s.r[w]:
                out.append(v)
    return out


def is_smooth(G: Multigraph, s: ArithmeticalStructure) -> bool:
    return not smoothable_vertices(G, s)


def smooth_at(G: Multigraph, s: ArithmeticalStructure, v):
    """Contract the structure at a smoothable vertex.

    Degree-2 smoothing drops v and adds one u-w edge; degree-1
    smoothing just drops v.  Returns (new graph, new structure).
    """
    vi = G.index(v)
    if vi not in smoothable_vertices(G, s):
        raise InvalidStructureError(f"vertex {G.labels[vi]!r} is not smoothable")
    keep = [i for i in range(G.n) if i != vi]
    labels = [G.labels[i] for i in keep]
    mult = [[G.mult[i][j] for j in keep] for i in keep]
    nb = [w for w in range(G.n) if G.mult[vi][w]]
    if len(nb) == 2:
        u, w = nb
        iu, iw = keep.index(u), keep.index(w)
        mult[iu][iw] += 1
        mult[iw][iu] += 1
    newG = Multigraph(labels, mult)
    news = validate(newG, [s.r[i] for i in keep])
    return newG, news


# ---------------------------------------------------------------------------
# critical groups and order formulas


def g_r(G: Multigraph, s: ArithmeticalStructure) -> Multigraph:
    """The graph with every multiplicity x_ij scaled by r_i * r_j."""
    n = G.n
    mult = [[G.mult[i][j] * s.r[i] * s.r[j] for j in range(n)] for i in range(n)]
    return Multigraph(G.labels, mult)


def critical_group_arith(G: Multigraph, s: ArithmeticalStructure) -> AbelianGroup:
    """Torsion of cok(diag(d) - A)."""
    return cokernel(host_matrix(G, s)).torsion


def _skeleton_edges(G: Multigraph):
    return [(i, j, m) for i, j, m in G.edges()]


def order_formula_tree(G: Multigraph, s: ArithmeticalStructure) -> Fraction:
    """|K(G; r)| when the skeleton of G is a tree.

    Product of the edge multiplicities times prod r_i^(skeleton degree
    of v_i minus 2); an integer by the structure theory, returned as an
    exact rational for transparency.
    """
    edges = _skeleton_edges(G)
    skel_deg = [0] * G.n
    for i, j, _ in edges:
        skel_deg[i] += 1
        skel_deg[j] += 1
    if len(edges) != G.n - 1:
        raise InvalidStructureError("graph skeleton is not a tree")
    # n-1 skeleton edges on a connected graph force a tree; connectivity
    # is implied by the structure's rank condition, checked cheaply here
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in edges:
        parent[find(i)] = find(j)
    if len({find(i) for i in range(G.n)}) != 1:
        raise InvalidStructureError("graph skeleton is not a tree")
    value = Fraction(1)
    for _, _, m in edges:
        value *= m
    for v in range(G.n):
        value *= Fraction(s.r[v]) ** (skel_deg[v] - 2)
    return value


def order_formula_spanning(G: Multigraph, s: ArithmeticalStructure) -> Fraction:
    """|K(G; r)| as a sum over spanning trees of prod r_i^(deg_T(v_i) - 2)."""
    total = Fraction(0)
    for tree in spanning_tree_enumerate(G):
        deg_t = [0] * G.n
        for i, j, _ in tree:
            deg_t[i] += 1
            deg_t[j] += 1
        term = Fraction(1)
        for v in range(G.n):
            term *= Fraction(s.r[v]) ** (deg_t[v] - 2)
        total += term
    return total


# ---------------------------------------------------------------------------
# complete graphs and Egyptian fractions


def kn_unit_fractions(n: int):
    """Structures on K_n, one per way of writing 1 as n unit fractions.

    Enumerates ordered tuples (d_1, ..., d_n) with sum 1/(d_i + 1) = 1
    and converts each to the structure with r_i proportional to
    1/(d_i + 1), normalized to gcd 1.  Returned in lexicographic r
    order on family('complete', n).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > _UNIT_FRACTION_GUARD:
        raise GuardError(f"unit fraction enumeration is limited to n <= {_UNIT_FRACTION_GUARD}")
    G = family("complete", n)
    multisets = []

    def search(prefix, remaining, count):
        if count == 0:
            if remaining == 0:
                multisets.append(tuple(prefix))
            return
        if remaining <= 0:
            return
        # nondecreasing terms; 1/a <= remaining <= count/a bounds a
        ceil_inv = -((-remaining.denominator) // remaining.numerator)
        a = max(prefix[-1] if prefix else 2, ceil_inv)
        while Fraction(count, a) >= remaining:
            if Fraction(1, a) <= remaining:
                prefix.append(a)
                search(prefix, remaining - Fraction(1, a), count - 1)
                prefix.pop()
            a += 1

    if n == 1:
        multisets.append((1,))
    else:
        search([], Fraction(1), n)

    out = []
    for ms in multisets:
        for perm in sorted(set(permutations(ms))):
            lcm_val = 1
            for a in perm:
                lcm_val = lcm_val * a // gcd(lcm_val, a)
            r = [lcm_val // a for a in perm]
            g = 0
            for x in r:
                g = gcd(g, x)
            r = [x // g for x in r]
            out.append(validate(G, r))
    out.sort(key=lambda s: s.r)
    return out
