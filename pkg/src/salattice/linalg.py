"""Exact integer and rational linear algebra on immutable matrices.

Determinants and adjugates are computed with fraction-free (Bareiss)
elimination so every intermediate value is a minor of the input and stays
inside the Hadamard bound.  Rational inverses use Gaussian elimination over
`fractions.Fraction`.  Column-style Hermite and Smith normal forms cover the
lattice-index bookkeeping.  No floating point anywhere.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RankDeficient, SingularMatrix

Scalar = int | Fraction


def _canon(e) -> Scalar:
    """Normalize an entry: Fractions with denominator 1 collapse to int."""
    if isinstance(e, bool):
        raise TypeError("bool is not a matrix entry")
    if isinstance(e, int):
        return e
    if isinstance(e, Fraction):
        return int(e) if e.denominator == 1 else e
    raise TypeError(f"entries must be int or Fraction, got {type(e).__name__}")


class NormKind(enum.Enum):
    """The three norms the reductions and gap checks are stated for."""

    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def from_str(cls, s: str) -> "NormKind":
        for kind in cls:
            if kind.value == s.lower():
                return kind
        raise ValueError(f"unknown norm {s!r}; expected l1, l2 or linf")


class Vector:
    """Immutable exact vector with int or Fraction entries."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable):
        self.entries = tuple(_canon(e) for e in entries)
        if not self.entries:
            raise ValueError("vector must have positive length")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, Vector) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"Vector({list(self.entries)!r})"

    def __add__(self, other: "Vector") -> "Vector":
        if len(self) != len(other):
            raise ValueError("dimension mismatch")
        return Vector(a + b for a, b in zip(self, other))

    def __sub__(self, other: "Vector") -> "Vector":
        if len(self) != len(other):
            raise ValueError("dimension mismatch")
        return Vector(a - b for a, b in zip(self, other))

    def __neg__(self) -> "Vector":
        return Vector(-a for a in self)

    def scale(self, s) -> "Vector":
        return Vector(s * a for a in self)

    def dot(self, other: "Vector"):
        if len(self) != len(other):
            raise ValueError("dimension mismatch")
        return sum(a * b for a, b in zip(self, other))

    def is_zero(self) -> bool:
        return all(e == 0 for e in self)

    def is_integral(self) -> bool:
        return all(isinstance(e, int) for e in self.entries)

    def lcd(self) -> int:
        """Least common denominator of the entries (1 for integer vectors)."""
        return math.lcm(*(e.denominator if isinstance(e, Fraction) else 1 for e in self))

    @classmethod
    def zero(cls, n: int) -> "Vector":
        return cls([0] * n)

    @classmethod
    def unit(cls, n: int, i: int) -> "Vector":
        return cls([1 if j == i else 0 for j in range(n)])


class Matrix:
    """Immutable exact matrix, stored row-major."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(_canon(e) for e in r) for r in rows)
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix dimensions must be positive")
        w = len(self.rows[0])
        if any(len(r) != w for r in self.rows):
            raise ValueError("rows must all have the same length")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]!r})"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> Vector:
        return Vector(self.rows[i])

    def col(self, j: int) -> Vector:
        return Vector(r[j] for r in self.rows)

    def cols(self) -> list[Vector]:
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows))

    def __neg__(self) -> "Matrix":
        return Matrix(tuple(-a for a in r) for r in self.rows)

    def _same_shape(self, other: "Matrix"):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")

    def scale(self, s) -> "Matrix":
        return Matrix(tuple(s * a for a in r) for r in self.rows)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows))
            return Matrix(
                tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows
            )
        if isinstance(other, Vector):
            if self.ncols != len(other):
                raise ValueError("shape mismatch")
            return Vector(sum(a * b for a, b in zip(r, other)) for r in self.rows)
        return NotImplemented

    def drop_row_col(self, i: int, j: int) -> "Matrix":
        """Submatrix with row i and column j removed (dimensions must stay positive)."""
        return Matrix(
            tuple(e for cj, e in enumerate(r) if cj != j)
            for ri, r in enumerate(self.rows)
            if ri != i
        )

    def leading(self, k: int) -> "Matrix":
        """Top-left k-by-k block."""
        return Matrix(r[:k] for r in self.rows[:k])

    def with_col_replaced(self, j: int, v: Vector) -> "Matrix":
        if len(v) != self.nrows:
            raise ValueError("dimension mismatch")
        return Matrix(
            tuple(v[ri] if cj == j else e for cj, e in enumerate(r))
            for ri, r in enumerate(self.rows)
        )

    def hstack(self, other) -> "Matrix":
        if isinstance(other, Vector):
            other = Matrix.from_cols([other])
        if other.nrows != self.nrows:
            raise ValueError("dimension mismatch")
        return Matrix(ra + rb for ra, rb in zip(self.rows, other.rows))

    def max_abs(self):
        return max(abs(e) for r in self.rows for e in r)

    def is_integral(self) -> bool:
        return all(isinstance(e, int) for r in self.rows for e in r)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))

    @classmethod
    def from_cols(cls, cols: Sequence[Vector]) -> "Matrix":
        return cls(zip(*cols))


# ---------------------------------------------------------------------------
# determinants and adjugates (fraction-free)


def bareiss_det(m: Matrix) -> int:
    """Determinant of a square integer matrix by fraction-free elimination.

    Every intermediate entry is a minor of a row-permuted copy of the input,
    so magnitudes never exceed the Hadamard bound for the input entries.
    """
    if not m.is_square:
        raise ValueError("determinant needs a square matrix")
    n = m.nrows
    a = [list(r) for r in m.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - aik * a[k][j]) // prev
            a[i][k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def _adj_by_cofactors(m: Matrix) -> Matrix:
    # Fallback for singular input: each adjugate entry is a signed minor,
    # itself computed fraction-free.
    n = m.nrows
    if n == 1:
        return Matrix([[1]])
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = bareiss_det(m.drop_row_col(i, j))
            out[j][i] = minor if (i + j) % 2 == 0 else -minor
    return Matrix(out)


def bareiss_det_adj(m: Matrix) -> tuple[int, Matrix]:
    """Determinant and adjugate of a square integer matrix, both exact.

    Runs fraction-free Gauss-Jordan (Montante) elimination on [M | I]; the
    right block ends up holding the adjugate and the final pivot the
    determinant, up to the row-swap sign.  Singular inputs fall back to
    entrywise signed minors; the identity M*adj = det*I holds either way.
    """
    if not m.is_square:
        raise ValueError("adjugate needs a square matrix")
    n = m.nrows
    if n == 1:
        return m[0, 0], Matrix([[1]])
    a = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(m.rows)]
    sign = 1
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0, _adj_by_cofactors(m)
        piv = a[k][k]
        for i in range(n):
            if i == k:
                continue
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(2 * n):
                if j == k:
                    continue
                row_i[j] = (piv * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    d = a[n - 1][n - 1]
    for i in range(n):
        if a[i][i] != d or any(a[i][j] != 0 for j in range(n) if j != i):
            raise ArithmeticError("fraction-free elimination lost the diagonal form")
    det = sign * d
    adj = Matrix(tuple(sign * e for e in a[i][n:]) for i in range(n))
    return det, adj


# ---------------------------------------------------------------------------
# rational elimination


def _frac_rows(m: Matrix) -> list[list[Fraction]]:
    return [[Fraction(e) for e in r] for r in m.rows]


def solve_linear(m: Matrix, b: Vector) -> Vector:
    """Exact solution x of m*x = b; raises SingularMatrix when det = 0."""
    if not m.is_square or len(b) != m.nrows:
        raise ValueError("shape mismatch")
    n = m.nrows
    a = _frac_rows(m)
    rhs = [Fraction(e) for e in b]
    for k in range(n):
        p = next((r for r in range(k, n) if a[r][k] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        if p != k:
            a[k], a[p] = a[p], a[k]
            rhs[k], rhs[p] = rhs[p], rhs[k]
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
                rhs[i] -= f * rhs[k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = rhs[i] - sum(a[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / a[i][i]
    return Vector(x)


def rat_inverse(m: Matrix) -> Matrix:
    """Exact inverse of a square matrix over the rationals."""
    if not m.is_square:
        raise ValueError("inverse needs a square matrix")
    n = m.nrows
    a = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(_frac_rows(m))]
    for k in range(n):
        p = next((r for r in range(k, n) if a[r][k] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        if p != k:
            a[k], a[p] = a[p], a[k]
        piv = a[k][k]
        a[k] = [e / piv for e in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [e - f * ek for e, ek in zip(a[i], a[k])]
    return Matrix(row[n:] for row in a)


# ---------------------------------------------------------------------------
# normal forms


def hnf(m: Matrix) -> Matrix:
    """Column-style Hermite normal form of an n-by-m integer matrix, m >= n.

    Returns the n-by-n lower-triangular basis with positive diagonal and
    below-diagonal entries reduced into [0, pivot).  Column operations only,
    so the column span over the integers is preserved.  Raises RankDeficient
    when the rows are not independent.
    """
    if not m.is_integral():
        raise ValueError("hnf expects an integer matrix")
    n, w = m.nrows, m.ncols
    if w < n:
        raise RankDeficient("need at least as many columns as rows")
    cols = [[m[i, j] for i in range(n)] for j in range(w)]
    p = 0  # next pivot slot
    for r in range(n):
        j = next((c for c in range(p, w) if cols[c][r] != 0), None)
        if j is None:
            raise RankDeficient(f"row {r} has no pivot; rows are dependent")
        cols[p], cols[j] = cols[j], cols[p]
        for c in range(p + 1, w):
            if cols[c][r] == 0:
                continue
            x, y = cols[p][r], cols[c][r]
            g = math.gcd(x, y)
            # unimodular 2-column transform sending (x, y) -> (g, 0)
            s, t = _bezout(x, y, g)
            u, v = x // g, y // g
            new_p = [s * cp + t * cc for cp, cc in zip(cols[p], cols[c])]
            new_c = [-v * cp + u * cc for cp, cc in zip(cols[p], cols[c])]
            cols[p], cols[c] = new_p, new_c
        if cols[p][r] < 0:
            cols[p] = [-e for e in cols[p]]
        piv = cols[p][r]
        for c in range(p):
            q = cols[c][r] // piv
            if q:
                cols[c] = [e - q * ep for e, ep in zip(cols[c], cols[p])]
        p += 1
    if any(any(e != 0 for e in cols[c]) for c in range(n, w)):
        raise ArithmeticError("hnf left a nonzero trailing column")
    return Matrix.from_cols([Vector(c) for c in cols[:n]])


def _bezout(x: int, y: int, g: int) -> tuple[int, int]:
    # Plain extended Euclid; the canonicalized version lives in numtheory.
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r == -g:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def snf_diagonal(m: Matrix) -> tuple[int, ...]:
    """Elementary divisors d1 | d2 | ... | dn of a nonsingular integer matrix.

    The product of the divisors equals |det|.
    """
    if not m.is_square:
        raise ValueError("snf needs a square matrix")
    if not m.is_integral():
        raise ValueError("snf expects an integer matrix")
    det = bareiss_det(m)
    if det == 0:
        raise SingularMatrix("snf_diagonal requires det != 0")
    n = m.nrows
    a = [list(r) for r in m.rows]

    def clear_col(t: int) -> bool:
        changed = False
        for i in range(t + 1, n):
            if a[i][t] == 0:
                continue
            changed = True
            x, y = a[t][t], a[i][t]
            if y % x == 0:
                q = y // x
                a[i] = [e - q * et for e, et in zip(a[i], a[t])]
            else:
                g = math.gcd(x, y)
                s, tt = _bezout(x, y, g)
                u, v = x // g, y // g
                row_t = [s * et + tt * ei for et, ei in zip(a[t], a[i])]
                row_i = [-v * et + u * ei for et, ei in zip(a[t], a[i])]
                a[t], a[i] = row_t, row_i
        return changed

    def clear_row(t: int) -> bool:
        changed = False
        for j in range(t + 1, n):
            if a[t][j] == 0:
                continue
            changed = True
            x, y = a[t][t], a[t][j]
            if y % x == 0:
                q = y // x
                for row in a:
                    row[j] -= q * row[t]
            else:
                g = math.gcd(x, y)
                s, tt = _bezout(x, y, g)
                u, v = x // g, y // g
                for row in a:
                    ct, cj = row[t], row[j]
                    row[t] = s * ct + tt * cj
                    row[j] = -v * ct + u * cj
        return changed

    for t in range(n):
        if a[t][t] == 0:
            found = False
            for i in range(t, n):
                for j in range(t, n):
                    if a[i][j] != 0:
                        a[t], a[i] = a[i], a[t]
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        found = True
                        break
                if found:
                    break
        while True:
            col_work = clear_col(t)
            row_work = clear_row(t)
            if not col_work and not row_work:
                # pivot must divide the remaining block, else absorb a bad row
                bad = next(
                    ((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                     if a[i][j] % a[t][t] != 0),
                    None,
                )
                if bad is None:
                    break
                a[t] = [et + ei for et, ei in zip(a[t], a[bad[0]])]
    divisors = tuple(abs(a[i][i]) for i in range(n))
    prod = 1
    for d in divisors:
        prod *= d
    if prod != abs(det):
        raise ArithmeticError("snf divisors do not multiply to |det|")
    return divisors


# ---------------------------------------------------------------------------
# norms and fractional parts


def norm_value(v: Vector, kind: NormKind):
    """Exact comparable value of a norm: sum |v_i| for L1, the *squared*
    euclidean norm for L2, and max |v_i| for LINF.

    All comparisons in this package use these values consistently, so the
    missing square root never matters.
    """
    if kind is NormKind.L1:
        return sum(abs(e) for e in v)
    if kind is NormKind.L2:
        return sum(e * e for e in v)
    return max(abs(e) for e in v)


def norm_degree(kind: NormKind) -> int:
    """Power a scale factor picks up in the value domain (2 for squared L2)."""
    return 2 if kind is NormKind.L2 else 1


def leq_with_factor(lhs, rhs, gamma: Fraction, kind: NormKind) -> bool:
    """Exact test lhs <= gamma^p * rhs in the value domain of `kind`.

    p = 2 for L2 because its values are squared; everything is compared by
    cross multiplication, no division.
    """
    a, b = gamma.numerator, gamma.denominator
    if kind is NormKind.L2:
        a, b = a * a, b * b
    lf, rf = Fraction(lhs), Fraction(rhs)
    return lf.numerator * rf.denominator * b <= rf.numerator * lf.denominator * a


def nearest_int(e) -> int:
    """Integer nearest to e; exact ties at half-integers round toward +inf."""
    return math.floor(Fraction(e) + Fraction(1, 2))


def centered_frac(v: Vector) -> Vector:
    """Entrywise v_i minus its nearest integer, results in [-1/2, 1/2).

    Ties at half-integers round up, so 1/2 maps to -1/2.  The difference
    v - centered_frac(v) is always an integer vector.
    """
    return Vector(Fraction(e) - nearest_int(e) for e in v)
