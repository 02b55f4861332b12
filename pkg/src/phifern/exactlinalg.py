"""Exact rational scalars and small dense linear algebra.

Scalars are :class:`fractions.Fraction`, which already keeps the
denominator positive and the pair reduced.  Matrices are immutable and
stored row-major.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, str, Fraction]

INFINITY = float("inf")


def is_prime(n: int) -> bool:
    """Deterministic trial division; inputs here are small primes."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Sorted distinct prime divisors of ``|n|``."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def to_rational(x: RationalLike) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rational(x: Fraction) -> str:
    """Serialize as ``"num/den"``, dropping the denominator when it is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def padic_valuation(x: RationalLike, p: int) -> Union[int, float]:
    """Exact ``p``-adic valuation, normalized so that ``v(p) = 1``.

    Returns ``float('inf')`` for zero.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    x = to_rational(x)
    if x == 0:
        return INFINITY
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]], ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(to_rational(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RationalLike]], nrows: int | None = None) -> "Matrix":
        columns = [list(c) for c in columns]
        if nrows is None:
            nrows = len(columns[0]) if columns else 0
        if any(len(c) != nrows for c in columns):
            raise ValueError("ragged columns")
        return cls.from_rows([[c[i] for c in columns] for i in range(nrows)], ncols=len(columns))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[Fraction]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def to_columns(self) -> list[list[Fraction]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix.from_columns(self.to_rows(), nrows=self.cols)

    def select_columns(self, idx: Iterable[int]) -> "Matrix":
        return Matrix.from_columns([self.column(j) for j in idx], nrows=self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a, b = self.to_rows(), other.to_columns()
        return Matrix.from_rows(
            [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in b] for r in a],
            ncols=other.cols)


def hstack(*ms: Matrix) -> Matrix:
    if not ms:
        raise ValueError("nothing to stack")
    nrows = ms[0].rows
    if any(m.rows != nrows for m in ms):
        raise ValueError("row-count mismatch")
    cols = [c for m in ms for c in m.to_columns()]
    return Matrix.from_columns(cols, nrows=nrows)


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Row-reduce in place; pivot is the first nonzero entry in column order."""
    m = [list(r) for r in rows]
    pivots = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_echelon(m.to_rows())[1])


def determinant(m: Matrix) -> Fraction:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = m.to_rows()
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.to_rows())]
    red, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix.from_rows([r[n:] for r in red], ncols=n)


def span_intersection_dim(a: Matrix, b: Matrix) -> int:
    """dim(colspan(a) ∩ colspan(b)) by the rank identity."""
    if a.rows != b.rows:
        raise ValueError(f"row-count mismatch: {a.rows} vs {b.rows}")
    return rank(a) + rank(b) - rank(hstack(a, b))


def unit_columns(n: int, idx: Iterable[int]) -> Matrix:
    """Columns e_i (0-based indices) of the standard basis of dimension ``n``."""
    cols = [[1 if r == i else 0 for r in range(n)] for i in idx]
    return Matrix.from_columns(cols, nrows=n)
