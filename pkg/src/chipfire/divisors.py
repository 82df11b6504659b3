"""The chip-firing calculus on divisors.

A divisor assigns an integer number of chips to each vertex (negative
means in debt).  Firing a vertex sends one chip along each incident
edge; borrowing is the inverse.  Everything downstream -- q-reduced
canonical forms, effectivity, positive rank, gonality, the monodromy
pairing -- is built on these moves plus exact linear algebra.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

from .critgrp import spanning_tree_count
from .errors import DisconnectedError, GraphParseError, GuardError
from .exactla import smith_normal_form
from .graphs import Multigraph, is_connected, reduced_laplacian

_LIST_GUARD = 100_000  # max class count for representative listings
_BOX_GUARD = 1 << 21  # max candidate box size for representative listings
_GRAM_GUARD = 5000  # max class count for a full pairing table


class Divisor:
    """Integer chip assignment on the vertices of a host graph."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = tuple(int(x) for x in values)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __add__(self, other):
        other = _values(other)
        if len(other) != len(self.values):
            raise ValueError("divisor length mismatch")
        return Divisor(a + b for a, b in zip(self.values, other))

    def __sub__(self, other):
        other = _values(other)
        if len(other) != len(self.values):
            raise ValueError("divisor length mismatch")
        return Divisor(a - b for a, b in zip(self.values, other))

    def __neg__(self):
        return Divisor(-a for a in self.values)

    def __rmul__(self, c):
        return Divisor(int(c) * a for a in self.values)

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"Divisor({list(self.values)!r})"


def _values(D):
    return list(getattr(D, "values", D))


def _check_len(G, values):
    if len(values) != G.n:
        raise ValueError("divisor length does not match graph")


def degree(D) -> int:
    """Total number of chips."""
    return sum(_values(D))


def zero_divisor(G: Multigraph) -> Divisor:
    return Divisor([0] * G.n)


def delta_divisor(G: Multigraph, x, y) -> Divisor:
    """+1 chip at x, -1 at y."""
    values = [0] * G.n
    values[G.index(x)] += 1
    values[G.index(y)] -= 1
    return Divisor(values)


def divisor_to_text(G: Multigraph, D) -> str:
    """`label:value` pairs in vertex order, every vertex explicit."""
    values = _values(D)
    _check_len(G, values)
    return " ".join(f"{lab}:{v}" for lab, v in zip(G.labels, values))


def divisor_from_text(G: Multigraph, text: str) -> Divisor:
    """Parse `label:value` pairs; omitted labels get 0 chips."""
    values = [0] * G.n
    for tok in text.split():
        lab, _, val = tok.rpartition(":")
        if not lab:
            raise GraphParseError(f"bad divisor token {tok!r} (expected label:value)")
        try:
            v = int(val)
        except ValueError:
            raise GraphParseError(f"bad divisor value in token {tok!r}") from None
        try:
            values[G.index(lab)] += v
        except KeyError:
            raise GraphParseError(f"unknown vertex {lab!r} in divisor") from None
    return Divisor(values)


# ---------------------------------------------------------------------------
# chip-firing moves


def fire(G: Multigraph, D, v) -> Divisor:
    """Send one chip from v along each incident edge (debt allowed)."""
    values = _values(D)
    _check_len(G, values)
    i = G.index(v)
    row = G.mult[i]
    values = [x + row[j] for j, x in enumerate(values)]
    values[i] -= sum(row)  # row[i] == 0, so i gained nothing above
    return Divisor(values)


def borrow(G: Multigraph, D, v) -> Divisor:
    """Take one chip from each neighbor of v; inverse of fire."""
    values = _values(D)
    _check_len(G, values)
    i = G.index(v)
    row = G.mult[i]
    values = [x - row[j] for j, x in enumerate(values)]
    values[i] += sum(row)
    return Divisor(values)


def fire_set(G: Multigraph, D, vertices) -> Divisor:
    """Fire every vertex of the set simultaneously.

    Only edges crossing the boundary move chips, so this equals the
    composition of the individual firings.
    """
    values = _values(D)
    _check_len(G, values)
    inside = set(G.index(v) for v in vertices)
    for i in inside:
        out = sum(G.mult[i][j] for j in range(G.n) if j not in inside)
        values[i] -= out
    for j in range(G.n):
        if j not in inside:
            values[j] += sum(G.mult[i][j] for i in inside)
    return Divisor(values)


def div_of_function(G: Multigraph, f) -> Divisor:
    """The (always degree-0) divisor L*f of an integer vertex function."""
    f = [int(x) for x in _values(f)]
    _check_len(G, f)
    values = []
    for v in range(G.n):
        row = G.mult[v]
        values.append(sum(row) * f[v] - sum(row[w] * f[w] for w in range(G.n)))
    return Divisor(values)


def is_principal(G: Multigraph, D):
    """A witness f with div(f) = D, or None.

    A degree-0 divisor is principal iff its restriction away from the
    base vertex lies in the image of the reduced Laplacian; the witness
    is recovered by an exact integer solve.
    """
    values = _values(D)
    _check_len(G, values)
    if not is_connected(G):
        raise DisconnectedError("principality test requires a connected graph")
    if sum(values) != 0:
        return None
    if G.n == 1:
        return Divisor([0])
    q = G.n - 1
    restricted = values[:q]
    res = smith_normal_form(reduced_laplacian(G, q, q))
    ub = res.U.matvec(restricted)
    y = []
    for s, x in zip(res.diag, ub):
        if s == 0 or x % s:
            return None
        y.append(x // s)
    f = res.V.matvec(y) + [0]
    assert div_of_function(G, f).values == tuple(values)
    return Divisor(f)


# ---------------------------------------------------------------------------
# q-reduction (Dhar's burning algorithm)


def _default_q(G, q):
    return G.n - 1 if q is None else G.index(q)


def _burn(G, values, q):
    """One pass of Dhar's burning from q.

    A vertex burns once its number of edges to burnt vertices exceeds
    its chips.  Returns the list of unburnt vertices (empty iff the
    fire consumes the graph, i.e. no debt-free firing set avoids q).
    """
    n = G.n
    burnt = [False] * n
    burnt[q] = True
    threat = [G.mult[v][q] for v in range(n)]
    progressed = True
    while progressed:
        progressed = False
        for v in range(n):
            if not burnt[v] and threat[v] > values[v]:
                burnt[v] = True
                progressed = True
                row = G.mult[v]
                for w in range(n):
                    if not burnt[w]:
                        threat[w] += row[w]
    return [v for v in range(n) if not burnt[v]]


def q_reduce(G: Multigraph, D, q=None) -> Divisor:
    """The unique q-reduced divisor equivalent to D.

    Stage 1 (debt clearing): sweeps fire every vertex v != q holding at
    least deg(v) chips (a debt-free move); when a sweep finds nothing
    to fire and debt remains, q fires once.  Termination: a non-q
    vertex never re-enters debt, so the in-debt set eventually freezes;
    its members then absorb only finitely many further chips, so
    eventually none of their neighbors fires again.  But a vertex next
    to one that fires infinitely often gets overloaded infinitely often
    and is itself fired by the sweeps, so the set of vertices firing
    infinitely often is closed under adjacency; were it nonempty it
    would be all of the (connected) graph, reaching the frozen debtors'
    neighbors.  Hence eventually nothing fires at all -- impossible,
    since the loop fires q whenever debt remains and sweeps stall.

    Stage 2 (Dhar superstabilization): burn from q; if the fire
    consumes the graph the divisor is q-reduced, otherwise the unburnt
    set is fired, which keeps it out of debt by the burn criterion.
    Termination: chips cross only from unburnt to burnt and q is always
    burnt, so the off-q total is non-increasing; values stay in a
    finite box, and a repeated state would make the accumulated firing
    counts a kernel vector of the Laplacian vanishing at q, forcing
    zero firings in between -- but every round fires a nonempty set.
    """
    values = _values(D)
    _check_len(G, values)
    if not is_connected(G):
        raise DisconnectedError("q-reduction requires a connected graph")
    qi = _default_q(G, q)
    n = G.n
    if n == 1:
        return Divisor(values)
    deg = [sum(G.mult[v]) for v in range(n)]

    # stage 1: clear debt off q
    while any(values[v] < 0 for v in range(n) if v != qi):
        moved = False
        for v in range(n):
            if v != qi and values[v] >= deg[v]:
                t = values[v] // deg[v]
                values[v] -= t * deg[v]
                for w in range(n):
                    if w != v:
                        values[w] += t * G.mult[v][w]
                moved = True
        if not moved:
            values[qi] -= deg[qi]
            for w in range(n):
                if w != qi:
                    values[w] += G.mult[qi][w]

    # stage 2: superstabilize via Dhar
    while True:
        unburnt = _burn(G, values, qi)
        if not unburnt:
            return Divisor(values)
        inside = set(unburnt)
        for v in unburnt:
            values[v] -= sum(G.mult[v][w] for w in range(n) if w not in inside)
        for w in range(n):
            if w not in inside:
                values[w] += sum(G.mult[v][w] for v in unburnt)


def is_q_reduced(G: Multigraph, D, q=None, oracle: bool = False) -> bool:
    """Is D nonnegative off q with no debt-free firing set avoiding q?

    The default path runs one Dhar burn.  With oracle=True the
    definition is checked verbatim over all nonempty vertex subsets
    avoiding q (exponential; guarded).
    """
    values = _values(D)
    _check_len(G, values)
    qi = _default_q(G, q)
    if any(values[v] < 0 for v in range(G.n) if v != qi):
        return False
    if oracle:
        if G.n > 16:
            raise GuardError("subset oracle is limited to 16 vertices")
        others = [v for v in range(G.n) if v != qi]
        for size in range(1, len(others) + 1):
            for subset in combinations(others, size):
                inside = set(subset)
                if all(
                    values[v] >= sum(G.mult[v][w] for w in range(G.n) if w not in inside)
                    for v in inside
                ):
                    return False
        return True
    return not _burn(G, values, qi)


def equivalent(G: Multigraph, D1, D2) -> bool:
    """Chip-firing equivalence: equal degree and equal q-reduced form."""
    v1, v2 = _values(D1), _values(D2)
    _check_len(G, v1)
    _check_len(G, v2)
    if sum(v1) != sum(v2):
        return False
    return q_reduce(G, v1).values == q_reduce(G, v2).values


def effective_equivalent(G: Multigraph, D) -> bool:
    """Is D equivalent to a divisor with no vertex in debt?

    The q-reduced form is nonnegative off q, so effectivity of the
    class is just nonnegativity at q after reduction.
    """
    reduced = q_reduce(G, D)
    return reduced.values[_default_q(G, None)] >= 0


def has_positive_rank(G: Multigraph, D) -> bool:
    """Does D stay effective-equivalent after losing a chip anywhere?"""
    values = _values(D)
    _check_len(G, values)
    if sum(values) < 1:
        return False
    for v in range(G.n):
        poorer = list(values)
        poorer[v] -= 1
        if not effective_equivalent(G, poorer):
            return False
    return True


def gonality(G: Multigraph):
    """Smallest degree of an effective divisor of positive rank.

    Brute-force search over effective divisors by increasing degree;
    returns (degree, witness).  Guarded to 12 vertices.
    """
    if not is_connected(G):
        raise DisconnectedError("gonality requires a connected graph")
    if G.n > 12:
        raise GuardError("gonality search is limited to 12 vertices")
    if G.n == 1:
        return 1, Divisor([1])
    for d in range(1, G.n + 1):
        for spots in combinations_with_replacement(range(G.n), d):
            values = [0] * G.n
            for v in spots:
                values[v] += 1
            if has_positive_rank(G, values):
                return d, Divisor(values)
    raise AssertionError("all-ones divisor has positive rank; unreachable")


# ---------------------------------------------------------------------------
# the monodromy pairing


def _reduced_inverse(G, qi):
    """(adjugate, det) of the reduced Laplacian at q: an exact inverse."""
    L0 = reduced_laplacian(G, qi, qi)
    m = L0.rows
    aug = [[Fraction(L0[i, j]) for j in range(m)] + [Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    for c in range(m):
        pr = next(i for i in range(c, m) if aug[i][c])
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = aug[c][c]
        aug[c] = [x / inv for x in aug[c]]
        for i in range(m):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    det = spanning_tree_count(G)
    adj = [[aug[i][m + j] * det for j in range(m)] for i in range(m)]
    out = []
    for row in adj:
        introw = []
        for x in row:
            assert x.denominator == 1
            introw.append(int(x))
        out.append(introw)
    return out, det


def monodromy_pairing(G: Multigraph, D1, D2, q=None) -> Fraction:
    """<D1, D2> in Q/Z via the inverse reduced Laplacian.

    Both divisors must have degree 0; the value D2'^T L0^{-1} D1' is
    taken mod 1 and is independent of the class representatives.
    """
    v1, v2 = _values(D1), _values(D2)
    _check_len(G, v1)
    _check_len(G, v2)
    if sum(v1) or sum(v2):
        raise ValueError("the monodromy pairing is defined on degree-0 divisors")
    if not is_connected(G):
        raise DisconnectedError("the monodromy pairing requires a connected graph")
    qi = _default_q(G, q)
    if G.n == 1:
        return Fraction(0)
    r1 = [x for i, x in enumerate(v1) if i != qi]
    r2 = [x for i, x in enumerate(v2) if i != qi]
    adj, det = _reduced_inverse(G, qi)
    m = len(r1)
    total = sum(r2[i] * adj[i][j] * r1[j] for i in range(m) for j in range(m))
    return Fraction(total, det) % 1


def list_q_reduced_degree0(G: Multigraph, q=None):
    """All q-reduced degree-0 divisors: one per critical group element.

    A q-reduced divisor has 0 <= D(v) < deg(v) off q, so the candidate
    box is the product of vertex degrees; each candidate gets a Dhar
    check.  Deterministic lexicographic order.
    """
    if not is_connected(G):
        raise DisconnectedError("representative listing requires a connected graph")
    qi = _default_q(G, q)
    count = spanning_tree_count(G)
    if count > _LIST_GUARD:
        raise GuardError(f"critical group order {count} exceeds guard {_LIST_GUARD}")
    others = [v for v in range(G.n) if v != qi]
    box = 1
    for v in others:
        box *= max(1, G.degree(v))
    if box > _BOX_GUARD:
        raise GuardError(f"candidate box of size {box} exceeds guard {_BOX_GUARD}")
    out = []
    for combo in product(*(range(G.degree(v)) for v in others)):
        values = [0] * G.n
        for v, c in zip(others, combo):
            values[v] = c
        values[qi] = -sum(c for c in combo)
        if not _burn(G, values, qi):
            out.append(Divisor(values))
    return out


def pairing_gram(G: Multigraph, q=None):
    """(representatives, Gram table) of the pairing over all of K(G).

    The table is |K| x |K| with exact values in [0, 1); the pairing is
    perfect exactly when the rows are pairwise distinct.
    """
    if not is_connected(G):
        raise DisconnectedError("pairing table requires a connected graph")
    qi = _default_q(G, q)
    count = spanning_tree_count(G)
    if count > _GRAM_GUARD:
        raise GuardError(f"critical group order {count} exceeds guard {_GRAM_GUARD}")
    reps = list_q_reduced_degree0(G, qi)
    if G.n == 1:
        return reps, [[Fraction(0)]]
    adj, det = _reduced_inverse(G, qi)
    m = G.n - 1
    others = [v for v in range(G.n) if v != qi]
    restricted = [[rep.values[v] for v in others] for rep in reps]
    half = []
    for r in restricted:
        half.append([sum(adj[i][j] * r[j] for j in range(m)) for i in range(m)])
    table = []
    for r2 in restricted:
        row = []
        for h1 in half:
            row.append(Fraction(sum(a * b for a, b in zip(r2, h1)), det) % 1)
        table.append(row)
    return reps, table
