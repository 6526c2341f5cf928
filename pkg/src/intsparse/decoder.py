"""Sparse integer decoding through closest-vector searches.

For every support I of size s the columns A_I span a lattice A_I Z^s; a
closest-vector search in each of these lattices, followed by a comparison
against the guarantee radius alpha/2, recovers s-sparse integer signals
whenever ||Az|| >= alpha holds on the relevant differences.
``brute_force_decode`` is the direct box search used as a reference.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import CertificateError, DimensionError, PreconditionError, ResourceCapError
from .exact import IndexSet, solve_exact

DEFAULT_NODE_CAP = 10**8
DEFAULT_SEARCH_CAP = 10**7
TIE_TOL = 1e-9
STATUSES = ("unique_within_radius", "best_effort", "no_candidate")


@dataclass(frozen=True)
class SparseIntSignal:
    dim: int
    support: IndexSet
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.support) != len(self.values):
            raise DimensionError("support and values differ in length")
        if any(v == 0 for v in self.values):
            raise PreconditionError("values on the support must be nonzero")
        if list(self.support) != sorted(set(self.support)):
            raise PreconditionError("support must be strictly increasing")
        if self.support and not (0 <= self.support[0] and self.support[-1] < self.dim):
            raise PreconditionError("support index out of range")

    @classmethod
    def from_dense(cls, x: Sequence[int]) -> "SparseIntSignal":
        x = [int(round(v)) for v in x]
        support = tuple(i for i, v in enumerate(x) if v != 0)
        return cls(len(x), support, tuple(x[i] for i in support))

    @property
    def sparsity(self) -> int:
        return len(self.support)

    def to_dense(self) -> np.ndarray:
        x = np.zeros(self.dim, dtype=np.int64)
        x[list(self.support)] = self.values
        return x


@dataclass(frozen=True)
class LatticeBasis:
    """Columns of ``basis`` generate the lattice; ``source`` records which columns of A."""

    basis: np.ndarray
    source: IndexSet = ()

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=float))
        object.__setattr__(self, "basis", b)
        n, k = b.shape
        if k > n:
            raise DimensionError("more basis vectors than ambient dimension")
        sv = np.linalg.svd(b, compute_uv=False)
        if sv.size == 0 or sv[-1] <= 1e-10 * max(1.0, sv[0]):
            raise CertificateError(f"basis from columns {self.source} is singular")

    @property
    def rank(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class DecodeResult:
    estimate: SparseIntSignal
    residual_norm: float
    lattice_used: Optional[IndexSet]
    status: str


# ------------------------------------------------------------ enumeration core

def enumerate_ball(R: np.ndarray, target: np.ndarray, radius2: float,
                   bound: Optional[int] = None, node_cap: int = DEFAULT_NODE_CAP
                   ) -> Iterator[tuple[tuple[int, ...], float]]:
    """All integer c with ||target - R c||^2 <= radius2, R upper triangular.

    Depth-first over coordinates from last to first with the usual
    Fincke-Pohst interval at each level.  ``bound`` additionally restricts
    |c_i| <= bound.  Yields (c, squared distance).
    """
    k = R.shape[1]
    c = [0] * k
    nodes = 0

    def rec(level: int, partial: float):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise ResourceCapError(f"enumeration exceeded {node_cap} nodes")
        rii = R[level, level]
        shift = sum(R[level, j] * c[j] for j in range(level + 1, k))
        center = (target[level] - shift) / rii
        rem = radius2 - partial
        if rem < 0:
            return
        half = math.sqrt(rem) / abs(rii)
        lo, hi = math.ceil(center - half - 1e-12), math.floor(center + half + 1e-12)
        if bound is not None:
            lo, hi = max(lo, -bound), min(hi, bound)
        for v in range(lo, hi + 1):
            c[level] = v
            dist = partial + (rii * (v - center)) ** 2
            if dist > radius2 * (1 + 1e-12) + 1e-300:
                continue
            if level == 0:
                yield tuple(c), dist
            else:
                yield from rec(level - 1, dist)
        c[level] = 0

    yield from rec(k - 1, 0.0)


def _triangular(basis: np.ndarray, y: np.ndarray):
    Q, R = np.linalg.qr(basis)
    ty = Q.T @ y
    off = float(y @ y - ty @ ty)
    return R, ty, max(off, 0.0)


def _babai(R: np.ndarray, ty: np.ndarray) -> list[int]:
    k = R.shape[1]
    c = [0] * k
    for i in range(k - 1, -1, -1):
        shift = sum(R[i, j] * c[j] for j in range(i + 1, k))
        c[i] = int(round((ty[i] - shift) / R[i, i]))
    return c


def cvp_enumerate(L: LatticeBasis, y, radius: Optional[float] = None,
                  node_cap: int = DEFAULT_NODE_CAP):
    """Closest lattice point to ``y`` within ``radius``.

    Returns ``(point, coefficients)`` or None when no point lies within the
    radius.  ``radius=None`` searches without a radius (the Babai point seeds
    the bound).  Distance ties are broken towards the lexicographically
    smallest coefficient vector.
    """
    y = np.asarray(y, dtype=float)
    if radius is not None and radius <= 0:
        raise PreconditionError("radius must be positive")
    R, ty, off = _triangular(L.basis, y)
    if radius is None:
        c0 = np.array(_babai(R, ty))
        r2 = float(np.sum((ty - R @ c0) ** 2)) * (1 + 1e-9) + 1e-12
    else:
        r2 = radius * radius - off
        if r2 < 0:
            return None
    best, best_c = math.inf, None
    for c, dist in enumerate_ball(R, ty, r2, node_cap=node_cap):
        if best_c is None:
            best, best_c = dist, c
            continue
        tol = TIE_TOL * max(1.0, best)
        if dist < best - tol or (abs(dist - best) <= tol and c < best_c):
            best, best_c = dist, c
    if best_c is None:
        return None
    coeffs = np.array(best_c, dtype=np.int64)
    return L.basis @ coeffs, coeffs


# ------------------------------------------------------------ reconstruction

def real_system(A, y=None):
    """Compact norm-preserving realification for complex sensing matrices."""
    A = np.asarray(A)
    if np.iscomplexobj(A):
        from .algebraic import realify, realify_measurement

        yr = None if y is None else realify_measurement(A, y, compact=True)
        return realify(A, compact=True), yr
    return A.astype(float), (None if y is None else np.asarray(y, dtype=float))


def submatrix_lattices(A, s: Optional[int] = None) -> list[LatticeBasis]:
    """Lattices A_I Z^s for every s-subset I of columns, lexicographic in I."""
    A, _ = real_system(A)
    m, d = A.shape
    s = m if s is None else s
    if not 1 <= s <= d:
        raise PreconditionError("need 1 <= s <= d")
    return [LatticeBasis(A[:, list(I)], I) for I in itertools.combinations(range(d), s)]


def _selection_key(dist: float, x: tuple[int, ...]):
    return (max((abs(v) for v in x), default=0), x)


def _pick(cands: list[tuple[float, tuple[int, ...]]]):
    """Smallest distance; distance ties go to smallest sup-norm, then lexicographic."""
    dmin = min(c[0] for c in cands)
    tied = [c for c in cands if c[0] <= dmin + TIE_TOL * max(1.0, dmin)]
    return min(tied, key=lambda c: _selection_key(*c))


def _integer_matrix(M: np.ndarray) -> Optional[np.ndarray]:
    Mi = np.rint(M)
    if np.array_equal(Mi, M) and np.abs(M).max() < 2**52:
        return Mi.astype(np.int64)
    return None


def _invert_step(A_I: np.ndarray, z: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Recover the signal block from the lattice point z = A_I x_I."""
    Ai = _integer_matrix(A_I)
    if Ai is not None and Ai.shape[0] == Ai.shape[1]:
        z_exact = [int(v) for v in Ai.astype(object) @ coeffs.astype(object)]
        x = solve_exact(Ai.tolist(), z_exact)
        if any(v.denominator != 1 for v in x):
            raise ArithmeticError("exact inverse produced a non-integer signal")
        return np.array([int(v) for v in x], dtype=np.int64)
    x, *_ = np.linalg.lstsq(A_I, z, rcond=None)
    xi = np.rint(x).astype(np.int64)
    if np.linalg.norm(A_I @ xi - z) > 1e-9 * max(1.0, np.linalg.norm(z)):
        raise ArithmeticError("floating-point inverse failed its residual check")
    return xi


def reconstruct_cvp(A, y, alpha: float, s: Optional[int] = None,
                    certified_sparsity: Optional[int] = None,
                    node_cap: int = DEFAULT_NODE_CAP) -> DecodeResult:
    """Decode an s-sparse integer signal from y = A x + e.

    One closest-vector search per lattice A_I Z^s; the candidate within
    alpha/2 of y is returned with status ``unique_within_radius``.  Without
    such a candidate the nearest one comes back as ``best_effort``.

    ``certified_sparsity`` (default m) is the sparsity on which
    ||Az|| >= alpha is known.  When 2s is within it, two distinct candidates
    inside alpha/2 contradict the certificate and raise CertificateError;
    otherwise they are broken by distance, then sup-norm, then
    lexicographic order, and reported as ``best_effort``.
    """
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    Ar, yr = real_system(A, y)
    m = np.asarray(A).shape[0]
    d = Ar.shape[1]
    s = m if s is None else s
    certified = m if certified_sparsity is None else certified_sparsity
    radius = alpha / 2

    found: dict[tuple[int, ...], tuple[float, IndexSet]] = {}
    for L in submatrix_lattices(Ar, s):
        hit = cvp_enumerate(L, yr, None, node_cap)
        if hit is None:
            continue
        z, coeffs = hit
        xI = _invert_step(L.basis, z, coeffs)
        if not np.array_equal(xI, coeffs):
            raise ArithmeticError("inverse step disagrees with the lattice coefficients")
        x = np.zeros(d, dtype=np.int64)
        x[list(L.source)] = xI
        key = tuple(int(v) for v in x)
        dist = float(np.linalg.norm(z - yr))
        if key not in found or dist < found[key][0]:
            found[key] = (dist, L.source)

    if not found:
        return DecodeResult(SparseIntSignal.from_dense([0] * d), float(np.linalg.norm(yr)),
                            None, "no_candidate")
    inside = [(dist, x) for x, (dist, _) in found.items() if dist < radius]
    if len(inside) == 1:
        status = "unique_within_radius"
        dist, x = inside[0]
    elif inside:
        if 2 * s <= certified:
            raise CertificateError(
                f"{len(inside)} distinct candidates within alpha/2 = {radius}")
        status = "best_effort"
        dist, x = _pick(inside)
    else:
        status = "best_effort"
        dist, x = _pick([(dist, x) for x, (dist, _) in found.items()])
    residual = float(np.linalg.norm(yr - Ar @ np.array(x, dtype=float)))
    return DecodeResult(SparseIntSignal.from_dense(x), residual, found[x][1], status)


def brute_force_decode(A, b, s: int, box: int, alpha: Optional[float] = None,
                       cap: int = DEFAULT_SEARCH_CAP) -> DecodeResult:
    """Minimize ||b - A y|| over y in Z_s^d with |y_i| <= box.

    Ties (within a relative 1e-9) go to the smallest sup-norm, then the
    lexicographically smallest vector.  With ``alpha`` given, a residual
    below alpha/2 is reported as ``unique_within_radius``.
    """
    Ar, br = real_system(A, b)
    d = Ar.shape[1]
    if not 1 <= s <= d:
        raise PreconditionError("need 1 <= s <= d")
    if box < 1:
        raise PreconditionError("need box >= 1")
    total = math.comb(d, s) * (2 * box + 1) ** s
    if total > cap:
        raise ResourceCapError(f"{total} candidates exceeds cap {cap}")
    rng = np.arange(-box, box + 1)
    grid = np.array(np.meshgrid(*[rng] * s, indexing="ij")).reshape(s, -1)
    cands: list[tuple[float, tuple[int, ...]]] = []
    best = math.inf
    for support in itertools.combinations(range(d), s):
        dists = np.linalg.norm(br[:, None] - Ar[:, list(support)] @ grid, axis=0)
        lo = float(dists.min())
        if lo > best + TIE_TOL * max(1.0, best):
            continue
        best = min(best, lo)
        for i in np.flatnonzero(dists <= lo + TIE_TOL * max(1.0, lo)):
            x = [0] * d
            for j, v in zip(support, grid[:, i]):
                x[j] = int(v)
            cands.append((float(dists[i]), tuple(x)))
    dist, x = _pick(cands)
    residual = float(np.linalg.norm(br - Ar @ np.array(x, dtype=float)))
    status = "unique_within_radius" if alpha is not None and residual < alpha / 2 else "best_effort"
    sig = SparseIntSignal.from_dense(x)
    return DecodeResult(sig, residual, sig.support or None, status)


def recovery_guarantee_radius(certificate_alpha: float) -> float:
    """Noise norm below which nearest-signal decoding is exact: alpha / 2."""
    if certificate_alpha <= 0:
        raise PreconditionError("alpha must be positive")
    return certificate_alpha / 2
