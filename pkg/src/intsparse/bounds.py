"""Upper bounds on min ||Ax|| over nonzero m-sparse integer x.

The determinantal bound is sqrt(m) * det(A'^T A')^(-1/(2m)) for a right
inverse A' of A; the naive bound sqrt(m) |A| comes from a standard basis
vector.  The determinantal value depends on which right inverse is used:
completing A to a square matrix B and taking the first m columns of inv(B)
is one recipe, the minimum-norm right inverse is another (and gives the
largest value of all right inverses).  Exhaustive witness searches certify
individual instances.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .decoder import SparseIntSignal, enumerate_ball
from .errors import DimensionError, PreconditionError, RankError, ResourceCapError
from .exact import (ExactMatrix, IndexSet, as_exact, completion_right_inverse, gram_det,
                    inverse_exact, right_inverse, to_fraction)

WITNESS_MARGIN = 5
DEFAULT_NODE_CAP = 10**7


@dataclass(frozen=True)
class BoundReport:
    label: str
    m: int
    d: int
    minkowski_bound: float
    naive_bound: float
    gram_det: Fraction
    index_set: IndexSet
    right_inverse: ExactMatrix
    method: str  # "min_norm", "completion" or "given"

    def as_dict(self) -> dict:
        return {
            "label": self.label, "m": self.m, "d": self.d,
            "minkowski_bound": self.minkowski_bound, "naive_bound": self.naive_bound,
            "gram_det": str(self.gram_det), "index_set": list(self.index_set),
            "right_inverse_method": self.method,
            "right_inverse": [[str(v) for v in r] for r in self.right_inverse.to_rows()],
        }


def _root_bound(m: int, g: Fraction) -> float:
    """sqrt(m) * g^(-1/(2m)) evaluated in log space (g may have huge digits)."""
    if g <= 0:
        raise RankError("Gram determinant must be positive")
    log_g = math.log(g.numerator) - math.log(g.denominator)
    return math.sqrt(m) * math.exp(-log_g / (2 * m))


def naive_bound(A) -> float:
    """sqrt(m) * max |a_ij|."""
    M = as_exact(A) if not isinstance(A, np.ndarray) else None
    if M is not None:
        return math.sqrt(M.rows) * float(M.max_abs())
    A = np.atleast_2d(A)
    return math.sqrt(A.shape[0]) * float(np.abs(A).max())


def sparse_minkowski_bound(A, completion=None, right_inv=None, label: str = "") -> BoundReport:
    """Determinantal upper bound for a rank-m real (rational) matrix.

    With neither ``completion`` nor ``right_inv`` the minimum-norm right
    inverse is used.  ``completion`` gives d - m extra rows that make A
    square; ``right_inv`` passes a right inverse directly (it is checked).
    """
    M = as_exact(A)
    m, d = M.shape
    if right_inv is not None:
        Ap, method = as_exact(right_inv), "given"
        if Ap.shape != (d, m) or M @ Ap != ExactMatrix.identity(m):
            raise PreconditionError("supplied matrix is not a right inverse")
    elif completion is not None:
        Ap, method = completion_right_inverse(M, completion), "completion"
    else:
        Ap, method = right_inverse(M), "min_norm"
    g = gram_det(Ap)
    return BoundReport(label, m, d, _root_bound(m, g), naive_bound(M), g,
                       tuple(range(m)), Ap, method)


# ------------------------------------------------------------- linear forms

@dataclass(frozen=True)
class LinearFormsBox:
    """d linear forms (rows of B) with bounds c and a distinguished index set I."""

    B: ExactMatrix
    c: tuple
    I: IndexSet

    def __post_init__(self):
        B = as_exact(self.B)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "c", tuple(to_fraction(v) for v in self.c))
        if B.rows != B.cols or len(self.c) != B.rows:
            raise DimensionError("need square B and one bound per form")
        if any(v <= 0 for v in self.c):
            raise PreconditionError("bounds must be positive")
        if list(self.I) != sorted(set(self.I)) or not all(0 <= i < B.rows for i in self.I):
            raise PreconditionError("bad index set")


def linear_forms_feasible(box: LinearFormsBox) -> bool:
    """Exact test of prod_{j in I} c_j >= det(P^T P)^(-1/2), P = columns I of inv(B).

    Squared to stay rational: (prod c_j)^2 * det(P^T P) >= 1.
    """
    try:
        Binv = inverse_exact(box.B)
    except RankError:
        raise RankError("B is singular") from None
    D = gram_det(Binv.select_columns(box.I))
    prod = math.prod(box.c[j] for j in box.I)
    return prod * prod * D >= 1


# ---------------------------------------------------------------- witnesses

def default_witness_box(bound: float, right_inv) -> int:
    """ceil(bound * largest column norm of A') plus a fixed margin."""
    Ap = as_exact(right_inv).to_numpy()
    return int(math.ceil(bound * np.linalg.norm(Ap, axis=0).max())) + WITNESS_MARGIN


def _witness_key(x: tuple, norm2: float):
    nz = tuple(i for i, v in enumerate(x) if v)
    return (round(norm2, 9), nz, tuple(x[i] for i in nz))


def find_sparse_witness(A, bound: float, max_coeff: Optional[int] = None,
                        right_inv=None, node_cap: int = DEFAULT_NODE_CAP
                        ) -> Optional[SparseIntSignal]:
    """Nonzero m-sparse integer x with ||Ax|| <= bound (1 + 1e-9) and |x_i| <= max_coeff.

    Every support is searched.  Among all witnesses the one with the
    smallest ||Ax|| is returned, ties broken by the sorted list of nonzero
    positions and then by the values; x and -x are identified by making the
    first nonzero coordinate positive.  The default box is
    ``default_witness_box`` with the minimum-norm right inverse unless
    ``right_inv`` is given.
    """
    if bound <= 0:
        raise PreconditionError("bound must be positive")
    An = A if isinstance(A, np.ndarray) else as_exact(A).to_numpy()
    An = np.atleast_2d(np.asarray(An, dtype=float))
    m, d = An.shape
    if max_coeff is None:
        max_coeff = default_witness_box(bound, right_inv if right_inv is not None
                                        else right_inverse(as_exact(A)))
    r2 = (bound * (1 + 1e-9)) ** 2
    best = None
    for support in itertools.combinations(range(d), m):
        sub = An[:, list(support)]
        sv = np.linalg.svd(sub, compute_uv=False)
        if sv[-1] > 1e-12 * max(1.0, sv[0]):
            hits = _ellipsoid_points(sub, r2, max_coeff, node_cap)
        else:
            hits = _grid_points(sub, r2, max_coeff, node_cap)
        for c in hits:
            x = [0] * d
            for j, v in zip(support, c):
                x[j] = int(v)
            if next(v for v in x if v) < 0:
                x = [-v for v in x]
            key = _witness_key(tuple(x), float(np.sum((An @ np.array(x, dtype=float)) ** 2)))
            if best is None or key < best[0]:
                best = (key, x)
    return None if best is None else SparseIntSignal.from_dense(best[1])


def _ellipsoid_points(sub: np.ndarray, r2: float, box: int, cap: int):
    _, R = np.linalg.qr(sub)
    return [c for c, _ in enumerate_ball(R, np.zeros(R.shape[1]), r2, bound=box, node_cap=cap)
            if any(c)]


def _grid_points(sub: np.ndarray, r2: float, box: int, cap: int):
    k = sub.shape[1]
    if (2 * box + 1) ** k > cap:
        raise ResourceCapError("witness grid exceeds cap")
    rng = np.arange(-box, box + 1)
    grid = np.array(np.meshgrid(*[rng] * k, indexing="ij")).reshape(k, -1)
    norms2 = ((sub @ grid) ** 2).sum(axis=0)
    ok = (norms2 <= r2) & np.any(grid != 0, axis=0)
    return [tuple(int(v) for v in grid[:, i]) for i in np.flatnonzero(ok)]


# ----------------------------------------------------- parallelepiped sections

def coordinate_section_condition(A, I: Sequence[int]) -> bool:
    """Exact test of sqrt(det(A_I^T A_I)) >= 2^m for square nonsingular A.

    A_I are the columns of A indexed by I.  For diagonal A this is the same
    as ``section_volume_condition``; in general it is not, and on its own it
    does not guarantee a nonzero point of Z_m^d in A [-1/2, 1/2]^d (the
    tests carry a 3 x 3 counterexample).
    """
    M = as_exact(A)
    if M.rows != M.cols:
        raise DimensionError("A must be square")
    inverse_exact(M)  # raises RankError when singular
    return gram_det(M.select_columns(list(I))) >= 4 ** len(I)


def section_volume_condition(A, I: Sequence[int]) -> bool:
    """Exact test that the coordinate section P_A cap V_I has m-volume >= 2^m.

    P_A = A [-1/2, 1/2]^d and V_I is spanned by the unit vectors e_i, i in I.
    The section is the image under A of a central section of the unit cube,
    whose volume is at least 1, and A scales volume on that subspace by
    det(G)^(-1/2), G the Gram matrix of the columns I of inv(A).  The test
    det(G) <= 4^(-m) therefore implies a nonzero integer point of P_A
    supported on I.
    """
    M = as_exact(A)
    if M.rows != M.cols:
        raise DimensionError("A must be square")
    G = gram_det(inverse_exact(M).select_columns(list(I)))
    return G * 4 ** len(I) <= 1


def find_parallelepiped_point(A, m: int, max_coeff: Optional[int] = None,
                              cap: int = 10**7) -> Optional[SparseIntSignal]:
    """Nonzero x in Z_m^d with ||inv(A) x||_inf <= 1/2, checked exactly.

    The default box is the bounding box of the parallelepiped,
    |x_i| <= sum_j |a_ij| / 2.
    """
    M = as_exact(A)
    d = M.rows
    Ainv = inverse_exact(M)
    if max_coeff is None:
        max_coeff = int(max(sum(abs(v) for v in M.row(i)) for i in range(d)) / 2)
    if max_coeff < 1:
        return None
    if math.comb(d, m) * (2 * max_coeff + 1) ** m > cap:
        raise ResourceCapError("parallelepiped search exceeds cap")
    Ainv_np = Ainv.to_numpy()
    rng = np.arange(-max_coeff, max_coeff + 1)
    grid = np.array(np.meshgrid(*[rng] * m, indexing="ij")).reshape(m, -1)
    grid = grid[:, np.any(grid != 0, axis=0)]
    half = Fraction(1, 2)
    for support in itertools.combinations(range(d), m):
        vals = np.abs(Ainv_np[:, list(support)] @ grid).max(axis=0)
        for i in np.flatnonzero(vals <= 0.5 + 1e-9):
            x = [0] * d
            for j, v in zip(support, grid[:, i]):
                x[j] = int(v)
            # confirm in exact arithmetic
            exact = [sum((Ainv[r, j] * x[j] for j in support), Fraction(0)) for r in range(d)]
            if all(abs(v) <= half for v in exact):
                return SparseIntSignal.from_dense(x)
    return None
