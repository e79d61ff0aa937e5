"""Exact integer matrices and Smith normal form.

Entries are Python ints throughout, so nothing ever wraps around.  Two
routes are provided:

* :func:`snf` works on a dense copy and tracks the unimodular transforms,
  so that ``U * M * V == D`` can be checked entry by entry.
* :func:`smith_diagonal` works on a sparse copy without transforms.  It is
  the one used for homology of triangulations, where boundary matrices have
  a few hundred rows and three nonzeros per column.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry storage does not match the stated shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols_b) for row in self.entries
        )
        return IntMatrix(self.rows, other.cols, out)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple[int, ...]
    U: IntMatrix
    V: IntMatrix

    def matrix(self, rows: int, cols: int) -> IntMatrix:
        d = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(self.diagonal):
            d[i][i] = x
        return IntMatrix.from_rows(d, cols)


def _as_matrix(M) -> IntMatrix:
    if isinstance(M, IntMatrix):
        return M
    rows = [list(r) for r in M]
    return IntMatrix.from_rows(rows, len(rows[0]) if rows else 0)


def snf(M) -> SmithForm:
    """Smith normal form with transforms.

    Returns ``SmithForm(diagonal, U, V)`` where ``U @ M @ V`` is diagonal with
    entries ``diagonal`` (length ``min(rows, cols)``), each nonnegative and
    dividing the next, and ``U``, ``V`` are unimodular.

    Pivot rule: the nonzero entry of least absolute value in the active
    block, ties broken by (row, column).
    """
    M = _as_matrix(M)
    m, n = M.rows, M.cols
    A = M.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        if k:
            A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for row in A:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    a = A[i][j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

    diag = tuple(A[i][i] for i in range(min(m, n)))
    return SmithForm(diag, IntMatrix.from_rows(U, m), IntMatrix.from_rows(V, n))


def _normalize_chain(values: Iterable[int]) -> list[int]:
    """Turn any diagonal into its invariant-factor chain (gcd/lcm passes)."""
    d = sorted(abs(v) for v in values if v)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            g = gcd(a, b)
            d[i], d[j] = g, a // g * b
    return d


def smith_diagonal(M) -> list[int]:
    """Nonzero Smith invariants of ``M`` in divisibility order (no transforms).

    Sparse elimination: pick the least-|value| pivot, clear its column with
    row operations (leaving remainders if needed), then its row with column
    operations, which only touch the pivot row once the column is clear.
    """
    if isinstance(M, IntMatrix):
        rows_iter = M.entries
    else:
        rows_iter = M
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows_iter):
        d = {j: int(v) for j, v in enumerate(r) if v}
        if d:
            rows[i] = d
            for j in d:
                cols.setdefault(j, set()).add(i)
    return _sparse_smith(rows, cols)


def smith_diagonal_sparse(entries: dict[tuple[int, int], int]) -> list[int]:
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
    return _sparse_smith(rows, cols)


def _sparse_smith(rows: dict[int, dict[int, int]], cols: dict[int, set[int]]) -> list[int]:
    pivots: list[int] = []

    def set_entry(i, j, v):
        r = rows.setdefault(i, {})
        if v:
            r[j] = v
            cols.setdefault(j, set()).add(i)
        else:
            r.pop(j, None)
            s = cols.get(j)
            if s is not None:
                s.discard(i)
                if not s:
                    del cols[j]
            if not r:
                del rows[i]

    while rows:
        best = None
        for i in sorted(rows):
            for j, v in rows[i].items():
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
                    if key[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        _, pi, pj = best
        p = rows[pi][pj]
        prow = dict(rows[pi])
        residue = False
        for i in sorted(cols[pj] - {pi}):
            a = rows[i][pj]
            k = a // p
            for j, v in prow.items():
                set_entry(i, j, rows.get(i, {}).get(j, 0) - k * v)
            if i in rows and rows[i].get(pj):
                residue = True
        if residue:
            continue
        # column pj is now clear outside the pivot row; column operations
        # reduce the pivot row without touching any other row.
        for j in list(rows[pi]):
            if j == pj:
                continue
            set_entry(pi, j, rows[pi][j] % p)
        if len(rows[pi]) == 1:
            pivots.append(abs(p))
            set_entry(pi, pj, 0)
    return _normalize_chain(pivots)


def rank(M) -> int:
    return len(smith_diagonal(M))


@dataclass(frozen=True)
class Cokernel:
    torsion: tuple[int, ...]
    free_rank: int


def invariant_factors(M, *, rows: int | None = None) -> Cokernel:
    """Cokernel Z^rows / im(M) as (torsion coefficients > 1, free rank)."""
    M = _as_matrix(M) if not isinstance(M, IntMatrix) else M
    d = smith_diagonal(M)
    nrows = M.rows if rows is None else rows
    return Cokernel(tuple(x for x in d if x > 1), nrows - len(d))


def determinant(M) -> int:
    """Fraction-free (Bareiss) determinant of a square matrix."""
    M = _as_matrix(M)
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    A = M.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1
