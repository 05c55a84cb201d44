"""Exact matrices over a supported ring and the Smith normal form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .ring import Element, Ring, RingMismatchError


class Matrix:
    """Immutable rows x cols matrix over ``ring``, stored row-major."""

    __slots__ = ("ring", "rows", "cols", "_data")

    def __init__(self, ring: Ring, data: Iterable[Sequence[Element]], rows: int | None = None, cols: int | None = None):
        entries = tuple(tuple(row) for row in data)
        self.ring = ring
        self.rows = len(entries) if rows is None else rows
        if cols is None:
            cols = len(entries[0]) if entries else 0
        self.cols = cols
        if len(entries) != self.rows or any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix data")
        for row in entries:
            ring.check(*row)
        self._data = entries

    @classmethod
    def _trusted(cls, ring: Ring, entries: Sequence[Sequence[Element]], rows: int, cols: int) -> "Matrix":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.rows = rows
        obj.cols = cols
        obj._data = tuple(tuple(r) for r in entries)
        return obj

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "Matrix":
        z = ring.zero()
        return cls._trusted(ring, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls.scalar(ring, n, ring.one())

    @classmethod
    def scalar(cls, ring: Ring, n: int, c: Element) -> "Matrix":
        z = ring.zero()
        return cls._trusted(ring, [[c if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, ring: Ring, entries: Sequence[Element], rows: int | None = None, cols: int | None = None) -> "Matrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        z = ring.zero()
        data = [[z] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            data[i][i] = d
        return cls._trusted(ring, data, rows, cols)

    @classmethod
    def from_columns(cls, ring: Ring, columns: Sequence[Sequence[Element]], rows: int) -> "Matrix":
        return cls._trusted(ring, [[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    def __getitem__(self, ij: tuple[int, int]) -> Element:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Element]]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def _same_ring(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"matrices over {self.ring} and {other.ring}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_ring(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        z = self.ring.zero()
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for r in self._data:
            out_row = []
            for c in cols:
                acc = z
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return Matrix._trusted(self.ring, out, self.rows, other.cols)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_ring(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._trusted(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                               self.rows, self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix._trusted(self.ring, [[-a for a in r] for r in self._data], self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c: Element) -> "Matrix":
        return Matrix._trusted(self.ring, [[c * a for a in r] for r in self._data], self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix._trusted(self.ring, [self.column(j) for j in range(self.cols)], self.cols, self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._trusted(self.ring, [[self._data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def select_columns(self, cols: Sequence[int]) -> "Matrix":
        return self.submatrix(range(self.rows), cols)

    def select_rows(self, rows: Sequence[int]) -> "Matrix":
        return self.submatrix(rows, range(self.cols))

    def hstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        for m in others:
            self._same_ring(m)
            if m.rows != self.rows:
                raise ValueError("hstack needs equal row counts")
        data = [sum((m._data[i] for m in mats), ()) for i in range(self.rows)]
        return Matrix._trusted(self.ring, data, self.rows, sum(m.cols for m in mats))

    def vstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        for m in others:
            self._same_ring(m)
            if m.cols != self.cols:
                raise ValueError("vstack needs equal column counts")
        return Matrix._trusted(self.ring, [r for m in mats for r in m._data], sum(m.rows for m in mats), self.cols)

    def kron(self, other: "Matrix") -> "Matrix":
        self._same_ring(other)
        rows, cols = self.rows * other.rows, self.cols * other.cols
        data = [[self._data[i // other.rows][j // other.cols] * other._data[i % other.rows][j % other.cols]
                 for j in range(cols)] for i in range(rows)]
        return Matrix._trusted(self.ring, data, rows, cols)

    def is_zero(self) -> bool:
        return not any(a for r in self._data for a in r)

    def is_diagonal(self) -> bool:
        return all(not a for i, r in enumerate(self._data) for j, a in enumerate(r) if i != j)

    def diagonal_entries(self) -> list[Element]:
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def det(self) -> Element:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        ring = self.ring
        n = self.rows
        if n == 0:
            return ring.one()
        a = self.tolist()
        sign = ring.one()
        prev = ring.one()
        for k in range(n - 1):
            if not a[k][k]:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return ring.zero()
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = ring.exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def format(self) -> list[list[str]]:
        return [[self.ring.format(a) for a in r] for r in self._data]

    def __repr__(self) -> str:
        return f"Matrix({self.ring}, {self.format()})"


@dataclass(frozen=True)
class SNFResult:
    """U @ A @ V == S with U, V unimodular; U_inv and V_inv are their inverses."""

    U: Matrix
    S: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix

    @property
    def diagonal(self) -> list[Element]:
        return self.S.diagonal_entries()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A: Matrix) -> SNFResult:
    """Smith normal form with transformation matrices and their inverses.

    Pivots are chosen by smallest Euclidean norm.  Diagonal entries are
    unit-normalized and form a divisibility chain; zeros trail.
    """
    ring = A.ring
    m, n = A.rows, A.cols
    zero, one = ring.zero(), ring.one()
    a = A.tolist()
    U = [[one if i == j else zero for j in range(m)] for i in range(m)]
    Ui = [[one if i == j else zero for j in range(m)] for i in range(m)]
    V = [[one if i == j else zero for j in range(n)] for i in range(n)]
    Vi = [[one if i == j else zero for j in range(n)] for i in range(n)]
    norm = ring.norm

    # row ops act on a, U (left) and on Ui by the inverse column op;
    # column ops act on a, V (right) and on Vi by the inverse row op.
    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        ad, as_ = a[dst], a[src]
        for k in range(n):
            if as_[k]:
                ad[k] = ad[k] + c * as_[k]
        ud, us = U[dst], U[src]
        for k in range(m):
            if us[k]:
                ud[k] = ud[k] + c * us[k]
        for r in Ui:
            if r[dst]:
                r[src] = r[src] - c * r[dst]

    def add_col(dst, src, c):
        # col_dst += c * col_src
        for r in a:
            if r[src]:
                r[dst] = r[dst] + c * r[src]
        for r in V:
            if r[src]:
                r[dst] = r[dst] + c * r[src]
        vd, vs = Vi[dst], Vi[src]
        for k in range(n):
            if vd[k]:
                vs[k] = vs[k] - c * vd[k]

    def scale_row(i, u, u_inv):
        a[i] = [u * x for x in a[i]]
        U[i] = [u * x for x in U[i]]
        for r in Ui:
            r[i] = r[i] * u_inv

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                if row[j]:
                    nv = norm(row[j])
                    if best is None or nv < best[0]:
                        best = (nv, i, j)
                        if nv == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q, r = divmod(a[i][t], a[t][t])
                    if q:
                        add_row(i, t, -q)
                    if r:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q, r = divmod(a[t][j], a[t][t])
                    if q:
                        add_col(j, t, -q)
                    if r:
                        clean = False
            if not clean:
                # move the smallest remaining entry of row/column t to the pivot
                best = (norm(a[t][t]), None, None)
                for i in range(t + 1, m):
                    if a[i][t] and norm(a[i][t]) < best[0]:
                        best = (norm(a[i][t]), i, None)
                for j in range(t + 1, n):
                    if a[t][j] and norm(a[t][j]) < best[0]:
                        best = (norm(a[t][j]), None, j)
                if best[1] is not None:
                    swap_rows(t, best[1])
                elif best[2] is not None:
                    swap_cols(t, best[2])
                continue
            piv = a[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] and a[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, one)
        u = ring.unit_part(a[t][t])
        if u != one:
            u_inv = ring.unit_inverse(u)
            scale_row(t, u_inv, u)
        t += 1
    return SNFResult(
        U=Matrix._trusted(ring, U, m, m),
        S=Matrix._trusted(ring, a, m, n),
        V=Matrix._trusted(ring, V, n, n),
        U_inv=Matrix._trusted(ring, Ui, m, m),
        V_inv=Matrix._trusted(ring, Vi, n, n),
    )


def solve(A: Matrix, B: Matrix, snf: SNFResult | None = None) -> Matrix | None:
    """Return X with A @ X == B over the ring, or None if no solution exists."""
    if snf is None:
        snf = smith_normal_form(A)
    ring = A.ring
    d = snf.diagonal
    rank = snf.rank
    Y = snf.U @ B
    W = []
    for i in range(A.cols):
        row = []
        for j in range(B.cols):
            if i < rank:
                q, r = divmod(Y[i, j], d[i])
                if r:
                    return None
                row.append(q)
            else:
                row.append(ring.zero())
        W.append(row)
    for i in range(rank, A.rows):
        if any(Y[i, j] for j in range(B.cols)):
            return None
    return snf.V @ Matrix._trusted(ring, W, A.cols, B.cols)


def kernel_basis(A: Matrix, snf: SNFResult | None = None) -> Matrix:
    """Columns form a basis of {v : A v = 0} (a saturated free submodule)."""
    if snf is None:
        snf = smith_normal_form(A)
    return snf.V.select_columns(range(snf.rank, A.cols))


def column_basis(A: Matrix) -> Matrix:
    """Columns form a basis of the column span of A."""
    snf = smith_normal_form(A)
    # A V = U^-1 S: the first rank columns of A V span im A and are independent
    return (snf.U_inv @ snf.S).select_columns(range(snf.rank))


def is_unit_determinant(M: Matrix) -> bool:
    return M.rows == M.cols and M.ring.is_unit(M.det())
