"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator).  :class:`Matrix` is an immutable dense row-major grid; every
operation returns a new matrix and nothing ever rounds.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction

__all__ = [
    "Rat",
    "Matrix",
    "rat",
    "format_rat",
    "rref",
    "kernel_basis",
    "quotient_basis",
    "quotient_projection",
    "is_nilpotent",
    "rank",
    "det",
    "inverse",
    "solve",
    "span_intersection",
]


def rat(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-1/2"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Matrix:
    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable] = ()):
        grid = tuple(tuple(rat(x) for x in row) for row in data)
        if not grid:
            grid = tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows))
        if len(grid) != rows or any(len(r) != cols for r in grid):
            raise ValueError(f"entry grid does not match shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._data = grid

    # construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = list(rows)
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty row list")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = list(columns)
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n: int, value) -> "Matrix":
        v = rat(value)
        return cls(n, n, [[v if i == j else 0 for j in range(n)] for i in range(n)])

    # access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # algebra ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [[-a for a in r] for r in self._data])

    def scale(self, c) -> "Matrix":
        c = rat(c)
        return Matrix(self.rows, self.cols, [[c * a for a in r] for r in self._data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum((a * c[k] for k, a in nz), Fraction(0)) for c in cols])
        return Matrix(self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum((a * b for a, b in zip(r, vec) if a and b), Fraction(0)) for r in self._data)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [list(c) for c in self.columns()])

    def power(self, k: int) -> "Matrix":
        out = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return Matrix(self.rows, self.cols + other.cols,
                      [list(r) + list(s) for r, s in zip(self._data, other._data)])

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return Matrix(self.rows + other.rows, self.cols, list(self._data) + list(other._data))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), [[self._data[i][j] for j in cols] for i in rows])

    def _same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rat(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def _rref_rows(data: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in data]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form with first-nonzero pivoting."""
    data, pivots = _rref_rows(m.tolist(), m.cols)
    return Matrix(m.rows, m.cols, data) if m.rows else m, pivots, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the null space; one column per free variable."""
    ech, pivots, _ = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    cols = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -ech[i, f]
        cols.append(v)
    return Matrix.from_columns(cols, m.cols)


def _reduced_generators(ambient: int, gens: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    # RREF of the generators with coordinates scanned from the right, so the
    # eliminated coordinates are the largest possible indices.
    if gens.rows != ambient:
        raise ValueError(f"generators have {gens.rows} rows, expected {ambient}")
    rev = [list(reversed(c)) for c in gens.columns()]
    data, piv = _rref_rows(rev, ambient)
    rows = [list(reversed(r)) for r in data[: len(piv)]]
    return rows, [ambient - 1 - p for p in piv]


def quotient_basis(ambient: int, subspace_gens: Matrix) -> list[int]:
    """Lexicographically smallest standard-basis indices spanning ``ambient / span(gens)``."""
    _, eliminated = _reduced_generators(ambient, subspace_gens)
    gone = set(eliminated)
    return [i for i in range(ambient) if i not in gone]


def quotient_projection(ambient: int, subspace_gens: Matrix) -> tuple[list[int], Matrix]:
    """Representatives plus the matrix taking ambient coordinates to quotient coordinates."""
    rows, eliminated = _reduced_generators(ambient, subspace_gens)
    reps = [i for i in range(ambient) if i not in set(eliminated)]
    pos = {r: k for k, r in enumerate(reps)}
    proj = [[Fraction(0)] * ambient for _ in reps]
    for r in reps:
        proj[pos[r]][r] = Fraction(1)
    for row, p in zip(rows, eliminated):
        # e_p is congruent to -(sum of the other row entries) modulo the subspace
        for j, a in enumerate(row):
            if j != p and a != 0:
                proj[pos[j]][p] -= a
    return reps, Matrix(len(reps), ambient, proj)


def is_nilpotent(m: Matrix) -> bool:
    if not m.is_square():
        raise ValueError("nilpotency needs a square matrix")
    return m.power(m.rows).is_zero() if m.rows else True


def det(m: Matrix) -> Fraction:
    if not m.is_square():
        raise ValueError("determinant needs a square matrix")
    a = m.tolist()
    n = m.rows
    sign = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        sign *= a[c][c]
    return sign


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("inverse needs a square matrix")
    n = m.rows
    aug = m.hstack(Matrix.identity(n))
    ech, piv, r = rref(aug)
    if piv[:n] != list(range(n)) or r < n:
        raise ZeroDivisionError("matrix is singular")
    return ech.submatrix(range(n), range(n, 2 * n))


def solve(m: Matrix, rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One particular solution of ``m x = rhs`` (free variables zero), or None."""
    aug = m.hstack(Matrix.from_columns([list(rhs)], m.rows)) if m.rows else None
    if aug is None:
        return tuple(Fraction(0) for _ in range(m.cols))
    ech, piv, _ = rref(aug)
    if m.cols in piv:
        return None
    x = [Fraction(0)] * m.cols
    for i, p in enumerate(piv):
        x[p] = ech[i, m.cols]
    return tuple(x)


def span_intersection(a: Matrix, b: Matrix) -> Matrix:
    """Columns spanning col(a) ∩ col(b)."""
    if a.rows != b.rows:
        raise ValueError("ambient dimensions differ")
    if a.cols == 0 or b.cols == 0:
        return Matrix.zeros(a.rows, 0)
    k = kernel_basis(a.hstack(-b))
    if k.cols == 0:
        return Matrix.zeros(a.rows, 0)
    coeff = k.submatrix(range(a.cols), range(k.cols))
    inter = a @ coeff
    ech, piv, _ = rref(inter.T)
    return Matrix.from_columns([ech.row(i) for i in range(len(piv))], a.rows)
