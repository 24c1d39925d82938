"""Exact dense linear algebra over a coefficient domain.

Gaussian elimination with first-nonzero pivoting (arithmetic is exact, no
magnitude heuristics), plus a fraction-free Bareiss rank as an independent
cross-check for integer matrices.  Matrices in this package stay small
(at most ~50 x 120), so dense storage is fine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .domains import QQ


class SingularMatrixError(ArithmeticError):
    pass


class ExactMatrix:
    """Dense rows x cols matrix over an exact domain."""

    __slots__ = ("rows", "cols", "entries", "domain")

    def __init__(self, entries: Sequence[Sequence], domain=QQ):
        self.entries = [[domain(x) for x in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged rows")
        self.domain = domain

    @classmethod
    def identity(cls, n: int, domain=QQ):
        return cls([[domain.one if i == j else domain.zero for j in range(n)]
                    for i in range(n)], domain)

    @classmethod
    def zero(cls, rows: int, cols: int, domain=QQ):
        return cls([[domain.zero] * cols for _ in range(rows)], domain)

    def rows_list(self):
        return [list(r) for r in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.entries == other.entries
                and self.domain == other.domain)

    def __repr__(self):
        return f"<ExactMatrix {self.rows}x{self.cols}>"

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self.entries[i][j] for i in range(self.rows)]
                            for j in range(self.cols)], self.domain)

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        zero = self.domain.zero
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                s = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a != 0:
                        s = s + a * other.entries[k][j]
                row.append(s)
            out.append(row)
        return ExactMatrix(out, self.domain)

    def matvec(self, v: Sequence) -> list:
        if self.cols != len(v):
            raise ValueError("dimension mismatch")
        v = [self.domain(x) for x in v]
        return [sum((a * x for a, x in zip(row, v) if a != 0), self.domain.zero)
                for row in self.entries]


def rref(matrix: ExactMatrix):
    """Reduced row echelon form; returns (rref_matrix, pivot_columns)."""
    m = [row[:] for row in matrix.entries]
    rows, cols = matrix.rows, matrix.cols
    domain = matrix.domain
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = domain.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return ExactMatrix(m, domain), pivots


def rank(matrix: ExactMatrix) -> int:
    return len(rref(matrix)[1])


def kernel_basis(matrix: ExactMatrix) -> ExactMatrix:
    """Columns span the right null space; width = cols - rank."""
    R, pivots = rref(matrix)
    domain = matrix.domain
    free = [c for c in range(matrix.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [domain.zero] * matrix.cols
        v[fc] = domain.one
        for r, pc in enumerate(pivots):
            v[pc] = -R.entries[r][fc]
        basis.append(v)
    if not basis:
        return ExactMatrix.zero(matrix.cols, 0, domain) if matrix.cols else \
            ExactMatrix([], domain)
    return ExactMatrix(basis, domain).transpose()


def invert(matrix: ExactMatrix) -> ExactMatrix:
    if matrix.rows != matrix.cols:
        raise SingularMatrixError("only square matrices can be inverted")
    n = matrix.rows
    domain = matrix.domain
    aug = [matrix.entries[i][:] + ExactMatrix.identity(n, domain).entries[i]
           for i in range(n)]
    R, pivots = rref(ExactMatrix(aug, domain))
    if pivots != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return ExactMatrix([row[n:] for row in R.entries], domain)


def bareiss_rank(entries: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss elimination rank for integer input.

    Independent of :func:`rref`; used as a cross-check oracle.
    """
    m = [[int(x) if not isinstance(x, Fraction) else _as_int(x) for x in row]
         for row in entries]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == rows:
            break
    return r


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ValueError("Bareiss oracle needs integer entries")
    return x.numerator


def matrix_from_rows(rows: Sequence[Sequence], domain=QQ) -> ExactMatrix:
    return ExactMatrix(rows, domain)
