"""Finite connected multigraphs and their matrix representations.

Vertices are identified by string label; the index of a vertex is its
position in the label list (first appearance order when parsed from a
file).  Parallel edges are allowed everywhere, self-loops nowhere.
Graphs are immutable once built.
"""

from __future__ import annotations

from .errors import DisconnectedError, GraphParseError
from .exactla import IntegerMatrix


class Multigraph:
    """Undirected multigraph: labels plus a symmetric multiplicity table."""

    __slots__ = ("labels", "mult", "_index")

    def __init__(self, labels, mult):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ValueError("vertex labels must be distinct")
        mult = tuple(tuple(int(x) for x in row) for row in mult)
        n = len(labels)
        if len(mult) != n or any(len(row) != n for row in mult):
            raise ValueError("multiplicity table must be n x n")
        for i in range(n):
            if mult[i][i]:
                raise ValueError(f"self-loop at vertex {labels[i]!r}")
            for j in range(n):
                if mult[i][j] < 0:
                    raise ValueError("negative edge multiplicity")
                if mult[i][j] != mult[j][i]:
                    raise ValueError("multiplicity table must be symmetric")
        self.labels = labels
        self.mult = mult
        self._index = {lab: i for i, lab in enumerate(labels)}

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, v) -> int:
        """Resolve a vertex given as label or index."""
        if isinstance(v, str):
            try:
                return self._index[v]
            except KeyError:
                raise KeyError(f"no vertex labelled {v!r}") from None
        i = int(v)
        if not 0 <= i < self.n:
            raise IndexError(f"vertex index {i} out of range")
        return i

    def degree(self, v) -> int:
        return sum(self.mult[self.index(v)])

    def neighbors(self, v):
        i = self.index(v)
        return [j for j in range(self.n) if self.mult[i][j]]

    def edges(self):
        """(i, j, multiplicity) triples over index pairs i < j."""
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.mult[i][j]:
                    yield i, j, self.mult[i][j]

    def edge_count(self) -> int:
        """Total number of edges, parallel edges counted."""
        return sum(m for _, _, m in self.edges())

    def __eq__(self, other):
        return (
            isinstance(other, Multigraph)
            and self.labels == other.labels
            and self.mult == other.mult
        )

    def __hash__(self):
        return hash((self.labels, self.mult))

    def __repr__(self):
        return f"Multigraph(labels={self.labels!r}, edges={self.edge_count()})"


class DirectedMultigraph:
    """Directed multigraph; mult[i][j] counts edges from v_i to v_j."""

    __slots__ = ("labels", "mult", "_index")

    def __init__(self, labels, mult):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ValueError("vertex labels must be distinct")
        mult = tuple(tuple(int(x) for x in row) for row in mult)
        n = len(labels)
        if len(mult) != n or any(len(row) != n for row in mult):
            raise ValueError("multiplicity table must be n x n")
        for i in range(n):
            if mult[i][i]:
                raise ValueError(f"self-loop at vertex {labels[i]!r}")
            if any(x < 0 for x in mult[i]):
                raise ValueError("negative edge multiplicity")
        self.labels = labels
        self.mult = mult
        self._index = {lab: i for i, lab in enumerate(labels)}

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, v) -> int:
        if isinstance(v, str):
            try:
                return self._index[v]
            except KeyError:
                raise KeyError(f"no vertex labelled {v!r}") from None
        i = int(v)
        if not 0 <= i < self.n:
            raise IndexError(f"vertex index {i} out of range")
        return i

    def outdegree(self, v) -> int:
        return sum(self.mult[self.index(v)])

    def __eq__(self, other):
        return (
            isinstance(other, DirectedMultigraph)
            and self.labels == other.labels
            and self.mult == other.mult
        )

    def __hash__(self):
        return hash((self.labels, self.mult))

    def __repr__(self):
        m = sum(sum(row) for row in self.mult)
        return f"DirectedMultigraph(labels={self.labels!r}, edges={m})"


# ---------------------------------------------------------------------------
# file format


def parse_graph(text: str):
    """Parse the graph file format.

    Optional first line `directed`; one edge per line `u v [m]` with m a
    positive multiplicity (default 1, repeated lines accumulate);
    isolated vertices via `vertex u`; blank lines and `#` comments are
    ignored.  Vertex order is first-appearance order.
    """
    directed = None
    labels: list[str] = []
    index: dict[str, int] = {}
    edges: list[tuple[int, int, int]] = []

    def vid(tok: str) -> int:
        if tok not in index:
            index[tok] = len(labels)
            labels.append(tok)
        return index[tok]

    seen_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks == ["directed"]:
            if directed is not None:
                raise GraphParseError(f"line {lineno}: duplicate directed flag")
            if seen_content:
                raise GraphParseError(f"line {lineno}: directed flag must come first")
            directed = True
            continue
        seen_content = True
        if toks[0] == "vertex":
            if len(toks) != 2:
                raise GraphParseError(f"line {lineno}: malformed vertex line {raw!r}")
            vid(toks[1])
            continue
        if len(toks) not in (2, 3):
            raise GraphParseError(f"line {lineno}: malformed edge line {raw!r}")
        u, v = toks[0], toks[1]
        m = 1
        if len(toks) == 3:
            try:
                m = int(toks[2])
            except ValueError:
                raise GraphParseError(
                    f"line {lineno}: multiplicity must be an integer, got {toks[2]!r}"
                ) from None
            if m <= 0:
                raise GraphParseError(f"line {lineno}: multiplicity must be positive")
        if u == v:
            raise GraphParseError(f"line {lineno}: self-loop at {u!r}")
        edges.append((vid(u), vid(v), m))

    n = len(labels)
    mult = [[0] * n for _ in range(n)]
    if directed:
        for i, j, m in edges:
            mult[i][j] += m
        return DirectedMultigraph(labels, mult)
    for i, j, m in edges:
        mult[i][j] += m
        mult[j][i] += m
    return Multigraph(labels, mult)


def graph_to_text(G) -> str:
    """Serialize a graph; inverse of parse_graph up to vertex order.

    Edges go out in lexicographic label order with explicit
    multiplicity, so writing, parsing and re-writing is bit-exact.
    """
    lines = []
    if isinstance(G, DirectedMultigraph):
        lines.append("directed")
        isolated = [
            G.labels[i]
            for i in range(G.n)
            if not any(G.mult[i]) and not any(G.mult[j][i] for j in range(G.n))
        ]
        for lab in sorted(isolated):
            lines.append(f"vertex {lab}")
        arcs = []
        for i in range(G.n):
            for j in range(G.n):
                if G.mult[i][j]:
                    arcs.append((G.labels[i], G.labels[j], G.mult[i][j]))
        for u, v, m in sorted(arcs):
            lines.append(f"{u} {v} {m}")
    else:
        isolated = [G.labels[i] for i in range(G.n) if not any(G.mult[i])]
        for lab in sorted(isolated):
            lines.append(f"vertex {lab}")
        pairs = []
        for i, j, m in G.edges():
            u, v = sorted((G.labels[i], G.labels[j]))
            pairs.append((u, v, m))
        for u, v, m in sorted(pairs):
            lines.append(f"{u} {v} {m}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# matrices


def adjacency(G) -> IntegerMatrix:
    return IntegerMatrix(G.mult)


def laplacian(G: Multigraph) -> IntegerMatrix:
    """L = D - A; rows and columns all sum to zero."""
    n = G.n
    return IntegerMatrix(
        [
            [(sum(G.mult[i]) if i == j else 0) - G.mult[i][j] for j in range(n)]
            for i in range(n)
        ]
    )


def directed_laplacian(G: DirectedMultigraph) -> IntegerMatrix:
    """D - A with D the outdegree diagonal; each row sums to zero."""
    n = G.n
    return IntegerMatrix(
        [
            [(sum(G.mult[i]) if i == j else 0) - G.mult[i][j] for j in range(n)]
            for i in range(n)
        ]
    )


def reduced_laplacian(G: Multigraph, i=None, j=None) -> IntegerMatrix:
    """Laplacian with row i and column j removed (default: last vertex)."""
    if i is None:
        i = G.n - 1
    if j is None:
        j = G.n - 1
    return laplacian(G).delete_row_col(G.index(i), G.index(j))


# ---------------------------------------------------------------------------
# structure


def connected_components(G) -> list:
    """Partition of vertex indices into connected components.

    For directed graphs this is weak connectivity (edge directions
    ignored).
    """
    n = G.n
    seen = [False] * n
    parts = []
    for s in range(n):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in range(n):
                if not seen[w] and (G.mult[v][w] or G.mult[w][v]):
                    seen[w] = True
                    stack.append(w)
        parts.append(sorted(comp))
    return parts


def is_connected(G) -> bool:
    return G.n <= 1 or len(connected_components(G)) == 1


def genus(G: Multigraph) -> int:
    """|E| - |V| + 1, the number of independent cycles."""
    if not is_connected(G):
        raise DisconnectedError("genus is defined for connected graphs")
    return G.edge_count() - G.n + 1


# ---------------------------------------------------------------------------
# families


def _simple(labels, pairs):
    n = len(labels)
    mult = [[0] * n for _ in range(n)]
    for i, j in pairs:
        mult[i][j] += 1
        mult[j][i] += 1
    return Multigraph(labels, mult)


def family(kind: str, *params) -> Multigraph:
    """Standard graph families by name.

    Kinds: path n | cycle n | complete n | complete_bipartite m n |
    star n | circulant n offsets | house | diamond.
    """
    if kind == "path":
        (n,) = params
        if n < 1:
            raise ValueError("path needs at least one vertex")
        return _simple([f"v{i+1}" for i in range(n)], [(i, i + 1) for i in range(n - 1)])
    if kind == "cycle":
        (n,) = params
        if n < 2:
            raise ValueError("cycle needs at least two vertices")
        labels = [f"v{i+1}" for i in range(n)]
        if n == 2:
            # the dual of the doubled edge convention: two vertices, two edges
            return Multigraph(labels, [[0, 2], [2, 0]])
        return _simple(labels, [(i, (i + 1) % n) for i in range(n)])
    if kind == "complete":
        (n,) = params
        if n < 1:
            raise ValueError("complete graph needs at least one vertex")
        labels = [f"v{i+1}" for i in range(n)]
        return _simple(labels, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if kind == "complete_bipartite":
        m, n = params
        if m < 1 or n < 1:
            raise ValueError("complete bipartite parts must be nonempty")
        labels = [f"x{i+1}" for i in range(m)] + [f"y{j+1}" for j in range(n)]
        return _simple(labels, [(i, m + j) for i in range(m) for j in range(n)])
    if kind == "star":
        (n,) = params
        if n < 1:
            raise ValueError("star needs at least one leaf")
        labels = ["v0"] + [f"v{i+1}" for i in range(n)]
        return _simple(labels, [(0, i + 1) for i in range(n)])
    if kind == "circulant":
        n, offsets = params
        offsets = list(offsets)
        if n < 3:
            raise ValueError("circulant graph needs at least three vertices")
        if len(set(offsets)) != len(offsets):
            raise ValueError("circulant offsets must be distinct")
        if any(not 1 <= a <= n // 2 for a in offsets):
            raise ValueError("circulant offsets must lie in 1..n/2")
        mult = [[0] * n for _ in range(n)]
        for a in offsets:
            for i in range(n):
                j = (i + a) % n
                if 2 * a == n and j < i:
                    continue  # the antipodal chord is a single edge
                mult[i][j] += 1
                mult[j][i] += 1
        return Multigraph([f"v{i+1}" for i in range(n)], mult)
    if kind == "house":
        if params:
            raise ValueError("house takes no parameters")
        return _simple(
            ["v1", "v2", "v3", "v4", "v5"],
            [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)],
        )
    if kind == "diamond":
        if params:
            raise ValueError("diamond takes no parameters")
        return _simple(
            ["v1", "v2", "v3", "v4"],
            [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)],
        )
    raise ValueError(f"unknown graph family {kind!r}")


# ---------------------------------------------------------------------------
# operations


def _fresh(label: str, used: set) -> str:
    while label in used:
        label += "'"
    return label


def wedge(G1: Multigraph, v1, G2: Multigraph, v2) -> Multigraph:
    """Identify vertex v1 of G1 with vertex v2 of G2.

    Vertex order is G1's order followed by G2's minus v2; clashing G2
    labels are freshened with primes.  The merged vertex keeps G1's
    label.
    """
    i1 = G1.index(v1)
    i2 = G2.index(v2)
    labels = list(G1.labels)
    used = set(labels)
    # map G2 index -> new index
    remap = {}
    for j in range(G2.n):
        if j == i2:
            remap[j] = i1
        else:
            lab = _fresh(G2.labels[j], used)
            used.add(lab)
            remap[j] = len(labels)
            labels.append(lab)
    n = len(labels)
    mult = [[0] * n for _ in range(n)]
    for i in range(G1.n):
        for j in range(G1.n):
            mult[i][j] = G1.mult[i][j]
    for i in range(G2.n):
        for j in range(G2.n):
            if G2.mult[i][j]:
                mult[remap[i]][remap[j]] += G2.mult[i][j]
    return Multigraph(labels, mult)


def subdivide(G: Multigraph, k: int, edge=None) -> Multigraph:
    """Replace edges by paths of k edges.

    With edge=None every multiplicity unit of every edge is subdivided;
    with edge=(u, v) a single unit of that edge is.  k = 1 is the
    identity.
    """
    if k < 1:
        raise ValueError("subdivision factor must be >= 1")
    if edge is not None:
        u, v = (G.index(edge[0]), G.index(edge[1]))
        if not G.mult[u][v]:
            raise ValueError(
                f"no edge between {G.labels[u]!r} and {G.labels[v]!r} to subdivide"
            )
        targets = [(min(u, v), max(u, v), 1)]
        keep_rest = True
    else:
        targets = list(G.edges())
        keep_rest = False
    if k == 1:
        return Multigraph(G.labels, G.mult)

    labels = list(G.labels)
    used = set(labels)
    mult = [list(row) for row in G.mult]

    def add_vertex(lab):
        lab = _fresh(lab, used)
        used.add(lab)
        for row in mult:
            row.append(0)
        mult.append([0] * (len(labels) + 1))
        labels.append(lab)
        return len(labels) - 1

    def add_edge(a, b):
        mult[a][b] += 1
        mult[b][a] += 1

    for i, j, m in targets:
        copies = m if not keep_rest else 1
        for c in range(copies):
            mult[i][j] -= 1
            mult[j][i] -= 1
            prev = i
            for s in range(k - 1):
                w = add_vertex(f"{G.labels[i]}.{G.labels[j]}.{c+1}.{s+1}")
                add_edge(prev, w)
                prev = w
            add_edge(prev, j)
    return Multigraph(labels, mult)


def cone(G: Multigraph, m: int) -> Multigraph:
    """Join of G with the complete graph K_m (the m-th cone over G)."""
    if m < 1:
        raise ValueError("cone needs at least one new vertex")
    labels = list(G.labels)
    used = set(labels)
    new = []
    for t in range(m):
        lab = _fresh(f"w{t+1}", used)
        used.add(lab)
        new.append(len(labels))
        labels.append(lab)
    n = len(labels)
    mult = [[0] * n for _ in range(n)]
    for i in range(G.n):
        for j in range(G.n):
            mult[i][j] = G.mult[i][j]
    for a in new:
        for b in range(G.n):
            mult[a][b] += 1
            mult[b][a] += 1
        for b in new:
            if b > a:
                mult[a][b] += 1
                mult[b][a] += 1
    return Multigraph(labels, mult)


def toggle_edge(G: Multigraph, x, y) -> Multigraph:
    """Flip the single edge between x and y (present <-> absent).

    Only defined for simple pairs: multiplicity above 1 is an error.
    """
    i, j = G.index(x), G.index(y)
    if i == j:
        raise ValueError("cannot toggle a self-loop")
    if G.mult[i][j] > 1:
        raise ValueError("toggle_edge is only defined when the pair has multiplicity 0 or 1")
    mult = [list(row) for row in G.mult]
    new = 0 if mult[i][j] else 1
    mult[i][j] = mult[j][i] = new
    return Multigraph(G.labels, mult)


def realize_group(factors) -> Multigraph:
    """A graph whose critical group is Z/m_1 + ... + Z/m_d: a wedge of cycles.

    A factor of 2 contributes a doubled edge.  The empty list gives the
    one-vertex graph with trivial group.
    """
    factors = [int(m) for m in factors]
    if any(m < 2 for m in factors):
        raise ValueError("all factors must be >= 2")
    if not factors:
        return Multigraph(["v1"], [[0]])
    G = family("cycle", factors[0])
    for m in factors[1:]:
        G = wedge(G, 0, family("cycle", m), 0)
    return G
