"""Exact rational linear algebra plus a few double-precision helpers.

Rationals are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Matrices are immutable :class:`ExactMatrix` values.
Index sets are tuples of strictly increasing 0-based column (or row) indices.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, PreconditionError, RankError

IndexSet = tuple[int, ...]


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, "p/q" strings or floats (exactly) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(q: Fraction) -> str:
    """Serialize as "p/q" (or "p" for integers); parse back with ``Fraction``."""
    return str(q)


class ExactMatrix:
    """Dense immutable matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(to_fraction(e) for e in entries)
        if len(entries) != rows * cols:
            raise DimensionError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, itertools.chain.from_iterable(rows))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, (int(i == j) for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows,
                           (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols)
        return ExactMatrix(self.rows, other.cols, out)

    def __mul__(self, scalar) -> "ExactMatrix":
        s = to_fraction(scalar)
        return ExactMatrix(self.rows, self.cols, (s * e for e in self.entries))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExactMatrix) and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self[i, j] for i in range(self.rows))

    def select_columns(self, cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(self.rows, len(cols),
                           (self[i, j] for i in range(self.rows) for j in cols))

    def select_rows(self, rows: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(len(rows), self.cols,
                           itertools.chain.from_iterable(self.row(i) for i in rows))

    def is_integer(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def max_abs(self) -> Fraction:
        return max((abs(e) for e in self.entries), default=Fraction(0))

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(e) for e in self.row(i)] for i in range(self.rows)],
                        dtype=float).reshape(self.rows, self.cols)


def as_exact(M) -> ExactMatrix:
    """Coerce nested sequences / numpy arrays / ExactMatrix to ExactMatrix."""
    if isinstance(M, ExactMatrix):
        return M
    if hasattr(M, "entries") and hasattr(M, "m"):  # SensingMatrix-like
        return ExactMatrix.from_rows(M.entries)
    arr = M.tolist() if isinstance(M, np.ndarray) else M
    return ExactMatrix.from_rows(arr)


# ---------------------------------------------------------------- determinants

def _bareiss(rows: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination on a square integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [r[:] for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # division is exact (Sylvester's identity)
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _integer_rows(M: ExactMatrix) -> tuple[list[list[int]], int]:
    """Scale each row by the lcm of its denominators; return rows and total scale."""
    out, scale = [], 1
    for i in range(M.rows):
        r = M.row(i)
        lcm = math.lcm(*(e.denominator for e in r)) if r else 1
        out.append([int(e * lcm) for e in r])
        scale *= lcm
    return out, scale


def det_exact(M) -> Fraction:
    """Exact determinant of a square matrix via Bareiss elimination.

    Rational entries are cleared row by row before elimination, so every
    intermediate value is an integer.
    """
    M = as_exact(M)
    if M.rows != M.cols:
        raise DimensionError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    rows, scale = _integer_rows(M)
    return Fraction(_bareiss(rows), scale)


def minor_det(M, cols: Sequence[int]) -> Fraction:
    """Determinant of the square submatrix formed by ``cols`` (a Plücker coordinate)."""
    M = as_exact(M)
    if len(cols) != M.rows:
        raise DimensionError(f"need {M.rows} columns, got {len(cols)}")
    return det_exact(M.select_columns(cols))


def index_sets(d: int, m: int) -> Iterable[IndexSet]:
    """All m-subsets of range(d) in lexicographic order."""
    return itertools.combinations(range(d), m)


# ------------------------------------------------------------ solving/inverses

def rank_exact(M) -> int:
    M = as_exact(M)
    a = M.to_rows()
    rank, col = 0, 0
    nrows, ncols = M.rows, M.cols
    while rank < nrows and col < ncols:
        piv = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, nrows):
            f = a[i][col] / a[rank][col]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        col += 1
    return rank


def inverse_exact(M) -> ExactMatrix:
    """Gauss-Jordan inverse over the rationals."""
    M = as_exact(M)
    n = M.rows
    if n != M.cols:
        raise DimensionError("inverse of a non-square matrix")
    a = [list(M.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise RankError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv_p = 1 / a[c][c]
        a[c] = [x * inv_p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return ExactMatrix(n, n, itertools.chain.from_iterable(r[n:] for r in a))


def solve_exact(M, b: Sequence) -> list[Fraction]:
    """Solve M x = b for square nonsingular M."""
    inv = inverse_exact(M)
    bb = [to_fraction(v) for v in b]
    return [sum((inv[i, j] * bb[j] for j in range(len(bb))), Fraction(0))
            for i in range(inv.rows)]


def right_inverse(A) -> ExactMatrix:
    """Minimum-norm right inverse ``A.T @ inv(A @ A.T)`` of a full-row-rank A.

    The result A' is d x m with ``A @ A'`` equal to the identity exactly.
    """
    A = as_exact(A)
    if A.rows > A.cols:
        raise DimensionError("right inverse needs rows <= cols")
    G = A @ A.T
    if det_exact(G) == 0:
        raise RankError(f"rank of A is below {A.rows}")
    return A.T @ inverse_exact(G)


def completion_right_inverse(A, completion) -> ExactMatrix:
    """Right inverse read off a square completion of A.

    ``B`` stacks the rows of ``A`` on top of ``completion`` (d - m extra rows);
    the first m columns of ``inv(B)`` form a right inverse of A.  Different
    completions give different right inverses; only the row space of the
    completion matters.
    """
    A = as_exact(A)
    R = as_exact(completion)
    if R.cols != A.cols or A.rows + R.rows != A.cols:
        raise DimensionError(
            f"completion must be {A.cols - A.rows}x{A.cols}, got {R.rows}x{R.cols}")
    B = ExactMatrix(A.cols, A.cols, A.entries + R.entries)
    try:
        Binv = inverse_exact(B)
    except RankError:
        raise RankError("completed matrix is singular") from None
    return Binv.select_columns(range(A.rows))


def gram_det(M) -> Fraction:
    """Exact ``det(M.T @ M)`` for a tall d x m matrix (nonnegative)."""
    M = as_exact(M)
    if M.rows < M.cols:
        raise DimensionError("Gram determinant needs a tall matrix")
    return det_exact(M.T @ M)


class CauchyBinet(NamedTuple):
    holds: bool
    residual: Fraction


def cauchy_binet_check(A, Aprime) -> CauchyBinet:
    """Check both Cauchy-Binet expansions for a right-inverse pair exactly.

    Verifies ``1 == sum_J det(A_J) det(A'_J)`` and
    ``det(A'.T A') == sum_J det(A'_J)**2`` where J runs over all m-subsets of
    the d columns of A (rows of A').  The residual is the larger of the two
    absolute discrepancies.
    """
    A, Ap = as_exact(A), as_exact(Aprime)
    m, d = A.shape
    if Ap.shape != (d, m):
        raise DimensionError(f"A' must be {d}x{m}")
    if A @ Ap != ExactMatrix.identity(m):
        raise PreconditionError("A @ A' is not the identity")
    s_mixed = Fraction(0)
    s_square = Fraction(0)
    for J in index_sets(d, m):
        da = minor_det(A, J)
        dp = det_exact(Ap.select_rows(J))
        s_mixed += da * dp
        s_square += dp * dp
    residual = max(abs(1 - s_mixed), abs(gram_det(Ap) - s_square))
    return CauchyBinet(residual == 0, residual)


# ------------------------------------------------------------- floating point

def min_singular_value(M, normalize_rows: bool = False) -> float:
    """Smallest singular value from the eigenvalues of the smaller Gram matrix.

    For a wide m x d matrix this is the m-th singular value.  Complex input
    uses the conjugate transpose.  With ``normalize_rows`` every row is first
    scaled to unit Euclidean norm.
    """
    M = np.asarray(M.to_numpy() if isinstance(M, ExactMatrix) else M)
    if normalize_rows:
        M = M / np.linalg.norm(M, axis=1, keepdims=True)
    G = M @ M.conj().T if M.shape[0] <= M.shape[1] else M.conj().T @ M
    lam = np.linalg.eigvalsh(G)
    return float(np.sqrt(max(lam[0], 0.0)))


def row_norms(M) -> np.ndarray:
    M = np.asarray(M.to_numpy() if isinstance(M, ExactMatrix) else M)
    return np.linalg.norm(M, axis=1)
