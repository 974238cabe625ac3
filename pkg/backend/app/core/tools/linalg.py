# backend/app/core/tools/linalg.py
"""
Exact Integer and Rational Linear Algebra

Row-style Hermite normal form (with its unimodular transform), Smith
invariant factors, and the lattice helpers every order and ideal computation
is expressed through. A lattice is always carried in one canonical shape:
a positive common denominator and an integer HNF numerator without zero rows.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from sympy import Matrix

from ..exceptions import InvalidInputError, NotFullRank, SingularMatrix

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major"""
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"IntMatrix expects {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged rows")
        return cls(len(rows), width, tuple(int(v) for r in rows for v in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in cols] for i in range(self.rows)],
            cols=other.cols,
        )

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(self[i, j] for i in range(self.rows))

    def det(self) -> int:
        if self.rows != self.cols:
            raise InvalidInputError("determinant of a non-square matrix")
        if self.rows == 0:
            return 1
        return int(Matrix(self.to_rows()).det(method="bareiss"))

    def is_upper_triangular(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(min(i, self.cols)))


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0"""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hnf(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """
    Row-style Hermite normal form.

    Returns (H, U) with H = U·M, U unimodular, H upper-triangular in profile with
    positive pivots, entries above each pivot reduced into [0, pivot) and zero
    rows at the bottom.
    """
    h = m.to_rows()
    n_rows, n_cols = m.rows, m.cols
    u = IntMatrix.identity(n_rows).to_rows()

    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        for i in range(r + 1, n_rows):
            b = h[i][c]
            if b == 0:
                continue
            a = h[r][c]
            g, x, y = _xgcd(a, b)
            a_g, b_g = a // g, b // g
            for mat in (h, u):
                row_r, row_i = mat[r], mat[i]
                mat[r] = [x * p + y * q for p, q in zip(row_r, row_i)]
                mat[i] = [-b_g * p + a_g * q for p, q in zip(row_r, row_i)]
        pivot = h[r][c]
        if pivot == 0:
            continue
        if pivot < 0:
            h[r] = [-v for v in h[r]]
            u[r] = [-v for v in u[r]]
            pivot = -pivot
        for i in range(r):
            q = h[i][c] // pivot
            if q:
                h[i] = [p - q * s for p, s in zip(h[i], h[r])]
                u[i] = [p - q * s for p, s in zip(u[i], u[r])]
        r += 1

    return IntMatrix.from_rows(h, cols=n_cols), IntMatrix.from_rows(u, cols=n_rows)


def hnf_rank(h: IntMatrix) -> int:
    """Number of nonzero rows of a matrix already in HNF"""
    return sum(1 for i in range(h.rows) if any(h.row(i)))


def snf_invariants(m: IntMatrix) -> List[int]:
    """
    Smith invariant factors d1 | d2 | ... | dr of a square nonsingular matrix.

    Entries equal to 1 are kept; the product equals |det M|.
    """
    if m.rows != m.cols:
        raise InvalidInputError("Smith normal form needs a square matrix")
    n = m.rows
    if n == 0:
        return []
    if m.det() == 0:
        raise SingularMatrix("matrix has zero determinant")

    a = m.to_rows()
    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                raise SingularMatrix("matrix has zero determinant")
            bi, bj = best
            a[t], a[bi] = a[bi], a[t]
            for row in a:
                row[t], row[bj] = row[bj], row[t]
            pivot = a[t][t]
            clean = True
            for i in range(t + 1, n):
                q = a[i][t] // pivot
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t] != 0:
                    clean = False
            for j in range(t + 1, n):
                q = a[t][j] // pivot
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j] != 0:
                    clean = False
            if clean:
                break

    diag = [abs(a[i][i]) for i in range(n)]
    # gcd/lcm sweeps turn any diagonal into the divisibility chain
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(diag[i], diag[j])
            diag[i], diag[j] = g, diag[i] // g * diag[j]
    logger.debug("snf invariants %s", diag)
    return diag


# Rational helpers

def rational_inverse(rows: Sequence[Sequence[Rational]]) -> List[List[Fraction]]:
    """Gauss-Jordan inverse over the rationals"""
    n = len(rows)
    a = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is not invertible")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def rational_det(rows: Sequence[Sequence[Rational]]) -> Fraction:
    n = len(rows)
    a = [[Fraction(v) for v in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def vec_mat(v: Sequence[Rational], rows: Sequence[Sequence[Rational]]) -> List[Fraction]:
    """Row vector times matrix"""
    width = len(rows[0]) if rows else 0
    out = [Fraction(0)] * width
    for coeff, row in zip(v, rows):
        if coeff:
            for j, x in enumerate(row):
                out[j] += coeff * x
    return out


def common_denominator(values: Sequence[Rational]) -> int:
    den = 1
    for v in values:
        d = Fraction(v).denominator
        den = den * d // gcd(den, d)
    return den


def canonical_lattice(rows: Sequence[Sequence[Rational]], dim: int) -> Tuple[int, IntMatrix]:
    """
    Canonical (den, HNF numerator) of the Z-span of rational row vectors.

    Zero rows are dropped; den and the numerator share no common factor.
    """
    rows = [list(r) for r in rows]
    den = common_denominator([v for r in rows for v in r])
    ints = [[int(Fraction(v) * den) for v in r] for r in rows]
    if not ints:
        return 1, IntMatrix(0, dim, ())
    h, _ = hnf(IntMatrix.from_rows(ints, cols=dim))
    kept = [list(h.row(i)) for i in range(h.rows) if any(h.row(i))]
    g = den
    for r in kept:
        for v in r:
            g = gcd(g, v)
    if g > 1:
        den //= g
        kept = [[v // g for v in r] for r in kept]
    return den, IntMatrix.from_rows(kept, cols=dim) if kept else IntMatrix(0, dim, ())


def full_rank_lattice(rows: Sequence[Sequence[Rational]], dim: int) -> Tuple[int, IntMatrix]:
    den, num = canonical_lattice(rows, dim)
    if num.rows != dim:
        raise NotFullRank(f"lattice has rank {num.rows}, expected {dim}")
    return den, num


def lattice_rows(den: int, num: IntMatrix) -> List[List[Fraction]]:
    return [[Fraction(v, den) for v in num.row(i)] for i in range(num.rows)]


def lattice_intersection(
    first: Tuple[int, IntMatrix], second: Tuple[int, IntMatrix], dim: int
) -> Tuple[int, IntMatrix]:
    """Intersection of two full-rank lattices given in canonical form"""
    a_rows = lattice_rows(*first)
    b_rows = lattice_rows(*second)
    den = common_denominator([v for r in a_rows + b_rows for v in r])
    a = [[int(v * den) for v in r] for r in a_rows]
    b = [[int(v * den) for v in r] for r in b_rows]
    block = [r + r for r in a] + [r + [0] * dim for r in b]
    h, _ = hnf(IntMatrix.from_rows(block, cols=2 * dim))
    meet = [
        [Fraction(v, den) for v in h.row(i)[dim:]]
        for i in range(h.rows)
        if not any(h.row(i)[:dim]) and any(h.row(i)[dim:])
    ]
    return full_rank_lattice(meet, dim)


def lattice_contains(outer: Tuple[int, IntMatrix], inner_rows: Sequence[Sequence[Rational]]) -> bool:
    """True when every given vector lies in the full-rank lattice ``outer``"""
    den, num = outer
    inv = rational_inverse(num.to_rows())
    for r in inner_rows:
        coords = vec_mat([Fraction(v) * den for v in r], inv)
        if any(c.denominator != 1 for c in coords):
            return False
    return True


def preimage_lattice(columns: Sequence[Sequence[Rational]], dim: int) -> Tuple[int, IntMatrix]:
    """
    Full-rank lattice {x in Q^dim : x·c is an integer for every column c}.

    The columns must span Q^dim. The column lattice is put in HNF; if its basis
    is the rows of T, the answer is spanned by the rows of (T^t)^-1.
    """
    den = common_denominator([v for c in columns for v in c])
    ints = [[int(Fraction(v) * den) for v in c] for c in columns]
    h, _ = hnf(IntMatrix.from_rows(ints, cols=dim))
    t = [list(h.row(i)) for i in range(h.rows) if any(h.row(i))]
    if len(t) != dim:
        raise SingularMatrix("columns do not span the space")
    t_transposed = [[t[j][i] for j in range(dim)] for i in range(dim)]
    inv = rational_inverse(t_transposed)
    return full_rank_lattice([[den * v for v in r] for r in inv], dim)
