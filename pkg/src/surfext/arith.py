"""Exact rational linear algebra.

Everything is done over :class:`fractions.Fraction`; there is no floating
point anywhere in the package.  Matrices are small (dual graphs rarely have
more than a couple of dozen vertices), so plain Gaussian elimination with
exact pivoting is plenty.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction


class ArithError(ValueError):
    pass


class DimensionError(ArithError):
    pass


class SymmetryError(ArithError):
    pass


class SingularMatrixError(ArithError):
    def __init__(self, rank: int, size: int):
        super().__init__(f"matrix is singular (rank {rank} < {size})")
        self.rank = rank
        self.size = size


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use int, Fraction or 'num/den' strings")
    return Fraction(x)


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        entries = tuple(as_rational(x) for r in rows for x in r)
        return cls(len(rows), ncols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def submatrix(self, idx: Sequence[int]) -> "RationalMatrix":
        """Principal submatrix on the given row/column indices."""
        return RationalMatrix.from_rows([[self[i, j] for j in idx] for i in idx])

    def leading(self, k: int) -> "RationalMatrix":
        return self.submatrix(range(k))

    def apply(self, x: Sequence) -> list[Fraction]:
        if len(x) != self.cols:
            raise DimensionError(f"vector of length {len(x)} for {self.cols} columns")
        return [
            sum((self[i, j] * x[j] for j in range(self.cols)), Fraction(0))
            for i in range(self.rows)
        ]

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, tuple(-e for e in self.entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionError("shape mismatch in product")
        return RationalMatrix.from_rows(
            [
                [sum((self[i, k] * other[k, j] for k in range(self.cols)), Fraction(0))
                 for j in range(other.cols)]
                for i in range(self.rows)
            ]
        )


def _require_square(m: RationalMatrix) -> None:
    if not m.is_square:
        raise DimensionError(f"expected a square matrix, got {m.rows}x{m.cols}")


def _eliminate(a: list[list[Fraction]], ncols: int) -> tuple[int, int, list[list[Fraction]]]:
    """Row-reduce ``a`` in place on its first ``ncols`` columns.

    Returns (rank, sign of the row permutation, reduced rows).  Pivots are
    normalized to 1 and cleared above and below (reduced row echelon form).
    """
    n = len(a)
    rank = 0
    sign = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, n) if a[r][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
            sign = -sign
        pivot_row = a[rank]
        pv = pivot_row[col]
        for r in range(n):
            if r != rank and a[r][col] != 0:
                factor = a[r][col] / pv
                a[r] = [x - factor * y for x, y in zip(a[r], pivot_row)]
        rank += 1
        if rank == n:
            break
    return rank, sign, a


def det(m: RationalMatrix) -> Fraction:
    """Exact determinant as the signed product of elimination pivots."""
    _require_square(m)
    n = m.rows
    a = m.to_rows()
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        pv = a[col][col]
        result *= pv
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col] / pv
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return result


def rank(m: RationalMatrix) -> int:
    r, _, _ = _eliminate(m.to_rows(), m.cols)
    return r


def solve(m: RationalMatrix, rhs: Sequence) -> list[Fraction]:
    """Unique exact solution of ``m @ x == rhs``.

    The residual is checked to vanish identically before returning.
    """
    _require_square(m)
    n = m.rows
    if len(rhs) != n:
        raise DimensionError(f"right-hand side has length {len(rhs)}, expected {n}")
    b = [as_rational(x) for x in rhs]
    aug = [row + [bi] for row, bi in zip(m.to_rows(), b)]
    r, _, red = _eliminate(aug, n)
    if r < n:
        raise SingularMatrixError(r, n)
    x = [red[i][n] / red[i][i] for i in range(n)]
    if m.apply(x) != b:
        raise ArithError("residual check failed")  # unreachable in exact arithmetic
    return x


def leading_principal_minors(m: RationalMatrix) -> list[Fraction]:
    _require_square(m)
    if not m.is_symmetric():
        raise SymmetryError("leading principal minors requested for a non-symmetric matrix")
    return [det(m.leading(k)) for k in range(1, m.rows + 1)]


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = lcm(out, as_rational(v).denominator)
    return out


def format_rational(q: Fraction) -> str:
    """Serialize as ``"num/den"`` (always with an explicit denominator)."""
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)
