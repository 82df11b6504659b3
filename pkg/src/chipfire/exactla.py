"""Exact integer and rational linear algebra.

Everything here runs over arbitrary-precision integers or exact
rationals; there is no floating point in this module.  The two
workhorses are Bareiss fraction-free elimination (determinants) and
Smith normal form reduction with unimodular transform certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm

from .errors import GuardError

# Refuse minor enumerations bigger than this many determinants.
_MINORS_GUARD = 200_000


class IntegerMatrix:
    """Immutable dense integer matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("ragged rows in matrix")
        else:
            width = 0
        self.rows = len(data)
        self.cols = width
        self._data = data

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries, rows=None, cols=None) -> "IntegerMatrix":
        entries = list(entries)
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, e in enumerate(entries):
            data[i][i] = e
        return cls(data)

    def __getitem__(self, key):
        i, j = key
        return self._data[i][j]

    def row(self, i):
        return self._data[i]

    def tolists(self):
        """Mutable copy as list of row lists."""
        return [list(row) for row in self._data]

    @property
    def entries(self):
        """All entries, row major."""
        return tuple(x for row in self._data for x in row)

    def is_square(self):
        return self.rows == self.cols

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(
            [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def delete_row_col(self, i: int, j: int) -> "IntegerMatrix":
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError("row/column index out of range")
        return IntegerMatrix(
            [
                [self._data[r][c] for c in range(self.cols) if c != j]
                for r in range(self.rows)
                if r != i
            ]
        )

    def __mul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch in matrix product")
            bt = other.transpose()._data
            return IntegerMatrix(
                [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self._data]
            )
        return NotImplemented

    def matvec(self, vec):
        vec = list(vec)
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch in matrix-vector product")
        return [sum(a * b for a, b in zip(row, vec)) for row in self._data]

    def __eq__(self, other):
        return isinstance(other, IntegerMatrix) and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        return f"IntegerMatrix({[list(r) for r in self._data]!r})"

    def __str__(self):
        if not self.rows:
            return "[]"
        w = max(len(str(x)) for row in self._data for x in row)
        return "\n".join(" ".join(str(x).rjust(w) for x in row) for row in self._data)


@dataclass(frozen=True)
class SNFResult:
    """Smith normal form S = U*M*V with unimodular U, V.

    The nonzero diagonal entries are positive, precede the zeros and
    form a divisibility chain.
    """

    S: IntegerMatrix
    U: IntegerMatrix
    V: IntegerMatrix
    diag: tuple

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)


def matrix_to_text(M: IntegerMatrix) -> str:
    """Fixture text format: `rows cols` header, then one line per row."""
    lines = [f"{M.rows} {M.cols}"]
    lines.extend(" ".join(str(x) for x in M.row(i)) for i in range(M.rows))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> IntegerMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        rows, cols = map(int, lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad matrix header: {lines[0]!r}") from exc
    if len(lines) != rows + 1:
        raise ValueError(f"expected {rows} matrix rows, got {len(lines) - 1}")
    data = []
    for ln in lines[1:]:
        row = [int(tok) for tok in ln.split()]
        if len(row) != cols:
            raise ValueError(f"expected {cols} entries per row, got {len(row)}")
        data.append(row)
    return IntegerMatrix(data)


def determinant(M: IntegerMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if not M.is_square():
        raise ValueError("determinant requires a square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.tolists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        prow = a[k]
        for i in range(k + 1, n):
            row = a[i]
            f = row[k]
            for j in range(k + 1, n):
                # exact by the Bareiss identity
                row[j] = (pivot * row[j] - f * prow[j]) // prev
            row[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _snf_reduce(a, rows, cols, track):
    """In-place SNF reduction of the row-list matrix `a`.

    Uses only the five unimodular moves (negate, swap rows/cols, add an
    integer multiple of one row/column to another).  Pivot choice is the
    smallest nonzero absolute value in the working submatrix, ties
    broken by lowest (row, col); this keeps coefficient growth tame.
    Returns (diag, U, V) where U, V are None when untracked.
    """
    U = [[int(i == j) for j in range(rows)] for i in range(rows)] if track else None
    V = [[int(i == j) for j in range(cols)] for i in range(cols)] if track else None

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        if track:
            U[i] = [-x for x in U[i]]

    def row_add(i, j, c):
        # row i += c * row j
        ai, aj = a[i], a[j]
        for k in range(cols):
            ai[k] += c * aj[k]
        if track:
            ui, uj = U[i], U[j]
            for k in range(rows):
                ui[k] += c * uj[k]

    def col_swap(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        if track:
            for r in range(cols):
                V[r][i], V[r][j] = V[r][j], V[r][i]

    def col_add(i, j, c):
        # col i += c * col j
        for r in range(rows):
            a[r][i] += c * a[r][j]
        if track:
            for r in range(cols):
                V[r][i] += c * V[r][j]

    m = min(rows, cols)
    t = 0
    while t < m:
        best = None
        for i in range(t, rows):
            ai = a[i]
            for j in range(t, cols):
                v = ai[j]
                if v:
                    v = -v if v < 0 else v
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break  # remaining submatrix is zero
        _, pi, pj = best
        if pi != t:
            row_swap(pi, t)
        if pj != t:
            col_swap(pj, t)
        if a[t][t] < 0:
            row_negate(t)
        while True:
            pivot = a[t][t]
            restart = False
            for i in range(t + 1, rows):
                x = a[i][t]
                if x:
                    q = x // pivot
                    if q:
                        row_add(i, t, -q)
                    if a[i][t]:
                        # positive remainder < pivot: promote it
                        row_swap(i, t)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, cols):
                x = a[t][j]
                if x:
                    q = x // pivot
                    if q:
                        col_add(j, t, -q)
                    if a[t][j]:
                        col_swap(j, t)
                        restart = True
                        break
            if restart:
                continue
            # enforce pivot | every remaining entry, so the diagonal
            # comes out as a divisibility chain
            pivot = a[t][t]
            culprit = None
            for i in range(t + 1, rows):
                ai = a[i]
                for j in range(t + 1, cols):
                    if ai[j] % pivot:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            row_add(t, culprit, 1)
        t += 1
    diag = tuple(a[i][i] for i in range(m))
    return diag, U, V


def smith_normal_form(M: IntegerMatrix) -> SNFResult:
    """Smith normal form with unimodular certificates U, V (S = U*M*V)."""
    a = M.tolists()
    diag, U, V = _snf_reduce(a, M.rows, M.cols, track=True)
    S = IntegerMatrix.diagonal(diag, rows=M.rows, cols=M.cols)
    return SNFResult(S=S, U=IntegerMatrix(U), V=IntegerMatrix(V), diag=diag)


def snf_diagonal(M: IntegerMatrix) -> tuple:
    """Just the SNF diagonal, skipping transform bookkeeping (faster)."""
    a = M.tolists()
    diag, _, _ = _snf_reduce(a, M.rows, M.cols, track=False)
    return diag


def minors_gcd(M: IntegerMatrix, i: int) -> int:
    """gcd of all i x i minors of M (0 if they all vanish).

    This is a combinatorial oracle, not a production path; the number
    of minors is capped.
    """
    if not 1 <= i <= min(M.rows, M.cols):
        raise ValueError(f"minor size {i} out of range for {M.rows}x{M.cols} matrix")
    count = comb(M.rows, i) * comb(M.cols, i)
    if count > _MINORS_GUARD:
        raise GuardError(f"{count} minors of size {i} exceeds guard {_MINORS_GUARD}")
    g = 0
    for rset in combinations(range(M.rows), i):
        for cset in combinations(range(M.cols), i):
            sub = IntegerMatrix([[M[r, c] for c in cset] for r in rset])
            g = gcd(g, determinant(sub))
            if g == 1:
                return 1
    return g


def _primitive(vec):
    """Scale an exact rational vector to coprime integers, leading entry positive."""
    den = 1
    for x in vec:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def rational_null_space(M: IntegerMatrix) -> list:
    """Basis of the kernel of M over the rationals.

    Each basis vector is returned as a tuple of Fractions scaled to a
    primitive integer vector (coprime entries, first nonzero positive).
    """
    rows, cols = M.rows, M.cols
    a = [[Fraction(x) for x in M.row(i)] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    pivot_set = set(pivots)
    basis = []
    for fc in (c for c in range(cols) if c not in pivot_set):
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for pr, pc in enumerate(pivots):
            v[pc] = -a[pr][fc]
        basis.append(_primitive(v))
    return basis


def solve_integer(M: IntegerMatrix, b):
    """Some integer solution x of M x = b, or None if none exists."""
    b = [int(x) for x in b]
    if len(b) != M.rows:
        raise ValueError("right-hand side length does not match matrix rows")
    res = smith_normal_form(M)
    ub = res.U.matvec(b)
    y = [0] * M.cols
    m = len(res.diag)
    for i in range(M.rows):
        s = res.diag[i] if i < m else 0
        if s:
            if ub[i] % s:
                return None
            y[i] = ub[i] // s
        elif ub[i]:
            return None
    return res.V.matvec(y)


def eval_charpoly(M: IntegerMatrix, t: int) -> int:
    """det(t*I - M), evaluated exactly at the integer t."""
    if not M.is_square():
        raise ValueError("characteristic polynomial requires a square matrix")
    n = M.rows
    shifted = IntegerMatrix(
        [[(t if i == j else 0) - M[i, j] for j in range(n)] for i in range(n)]
    )
    return determinant(shifted)
