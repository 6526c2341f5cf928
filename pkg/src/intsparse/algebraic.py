"""Sensing matrices over number fields.

Given an integer d x m matrix B whose transpose has all maximal minors
nonzero and a degree-m algebraic integer theta, the entries
alpha = B (1, theta, ..., theta^(m-1)) are placed under every conjugate
embedding to form an m x d complex matrix A.  For nonzero x with at most m
nonzero integer entries, the product of the coordinates of Ax is the field
norm of a nonzero algebraic integer, hence ||Ax|| >= sqrt(m) by AM-GM.

Polynomials are coefficient tuples, highest degree first.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import CertificateError, DimensionError, PreconditionError, ResourceCapError
from .exact import det_exact
from .forge import DEFAULT_ENUMERATION_CAP, SensingMatrix, verify_plucker

DEFAULT_PRECISION = 1e-30
NORM_TOL = 1e-9
MAX_CHECKED_DEGREE = 6


# ------------------------------------------------------------ exact polynomials

def _strip(p: Sequence) -> list:
    p = list(p)
    while p and p[0] == 0:
        p.pop(0)
    return p


def _poly_rem(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a = [Fraction(x) for x in _strip(a)]
    b = [Fraction(x) for x in _strip(b)]
    while len(a) >= len(b) and a:
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a = _strip(a)
    return a


def poly_gcd(a: Sequence, b: Sequence) -> list[Fraction]:
    """Monic gcd over the rationals."""
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, _poly_rem(a, b)
    return [Fraction(x) / Fraction(a[0]) for x in a] if a else []


def poly_derivative(p: Sequence) -> list:
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])]


def is_squarefree(p: Sequence[int]) -> bool:
    return len(poly_gcd(p, poly_derivative(p))) == 1


def sylvester_matrix(f: Sequence[int], g: Sequence[int]) -> list[list[int]]:
    n, k = len(f) - 1, len(g) - 1
    size = n + k
    rows = [[0] * i + list(f) + [0] * (size - n - 1 - i) for i in range(k)]
    rows += [[0] * i + list(g) + [0] * (size - k - 1 - i) for i in range(n)]
    return rows


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) as the exact determinant of the Sylvester matrix.

    For monic f this equals the product of g over the roots of f.
    """
    f, g = _strip(f), _strip(g)
    if not f or not g:
        return 0
    if len(f) == 1 and len(g) == 1:
        return 1
    r = det_exact(sylvester_matrix(f, g))
    assert r.denominator == 1
    return int(r)


# ----------------------------------------------------------------------- types

@dataclass(frozen=True)
class NumberFieldSpec:
    """Q(theta) given by a monic irreducible integer minimal polynomial."""

    minpoly: tuple[int, ...]
    assume_irreducible: bool = field(default=False, compare=False)

    def __post_init__(self):
        coeffs = tuple(int(c) for c in _strip(self.minpoly))
        object.__setattr__(self, "minpoly", coeffs)
        if len(coeffs) < 2:
            raise PreconditionError("minimal polynomial must have degree >= 1")
        if coeffs[0] != 1:
            raise PreconditionError("minimal polynomial must be monic")
        if self.degree > MAX_CHECKED_DEGREE:
            if not self.assume_irreducible:
                raise PreconditionError(
                    f"irreducibility is only checked up to degree {MAX_CHECKED_DEGREE}; "
                    "pass assume_irreducible=True")
        elif not _is_irreducible(coeffs):
            raise PreconditionError(f"{coeffs} is reducible over the rationals")

    @classmethod
    def parse(cls, text: str) -> "NumberFieldSpec":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",")))

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1


def _is_irreducible(coeffs: tuple[int, ...]) -> bool:
    import sympy  # deferred: only needed for field validation

    t = sympy.Symbol("t")
    return sympy.Poly(list(coeffs), t, domain="ZZ").is_irreducible


@dataclass(frozen=True)
class ConjugateSystem:
    """All roots of the minimal polynomial; roots[0] is the identity embedding."""

    roots: tuple  # of mpmath.mpc
    precision: float

    def as_complex(self) -> np.ndarray:
        return np.array([complex(r) for r in self.roots])


def _order_roots(roots, tol):
    real = sorted((r for r in roots if abs(r.imag) < tol), key=lambda r: -r.real)
    upper = sorted((r for r in roots if r.imag >= tol), key=lambda r: (-r.real, r.imag))
    ordered = [mpmath.mpc(r.real, 0) for r in real]
    for r in upper:
        ordered += [r, mpmath.conj(r)]
    return ordered


def conjugate_roots(field: NumberFieldSpec, precision: float = DEFAULT_PRECISION) -> ConjugateSystem:
    """Roots of the minimal polynomial to within ``precision``.

    Companion-matrix eigenvalues seed a Newton polish in extended precision.
    Real roots come first (largest first), followed by complex-conjugate
    pairs with the positive imaginary part first.
    """
    f = field.minpoly
    if not is_squarefree(f):
        raise PreconditionError("minimal polynomial has repeated roots")
    digits = max(30, int(-math.log10(precision)) + 20)
    with mpmath.workdps(digits):
        fp = [mpmath.mpf(c) for c in f]
        dfp = [mpmath.mpf(c) for c in poly_derivative(list(f))] or [mpmath.mpf(0)]
        seeds = np.roots(np.array(f, dtype=float)) if len(f) > 2 else [-f[1] / f[0]]
        roots = []
        for z0 in seeds:
            z = mpmath.mpc(complex(z0))
            for _ in range(200):
                step = mpmath.polyval(fp, z) / mpmath.polyval(dfp, z)
                z -= step
                if abs(step) < mpmath.mpf(precision) * 1e-10:
                    break
            roots.append(z)
        roots = _order_roots(roots, precision)
        for r in roots:
            if abs(mpmath.polyval(fp, r)) > precision:
                raise ArithmeticError(f"root {r} not refined to {precision}")
        for a, b in itertools.combinations(roots, 2):
            if abs(a - b) < precision:
                raise PreconditionError("roots are not pairwise distinct")
    return ConjugateSystem(tuple(roots), precision)


@dataclass(frozen=True)
class AlgebraicSensingMatrix:
    """m x d complex matrix whose row i is the i-th embedding of B theta."""

    entries: np.ndarray = field(compare=False)
    B: tuple[tuple[int, ...], ...]
    field: NumberFieldSpec
    precision: float = DEFAULT_PRECISION

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[1]

    @property
    def entry_bound(self) -> float:
        return float(np.abs(self.entries).max())

    def realify(self, compact: bool = False) -> np.ndarray:
        return realify(self.entries, compact=compact)


def _compact_plan(A: np.ndarray) -> list[tuple[int, bool]]:
    """(row, is_conjugate_pair) entries; the partner row of a pair is dropped."""
    scale = max(1.0, float(np.abs(A).max()))
    used, plan = set(), []
    for i, row in enumerate(A):
        if i in used:
            continue
        used.add(i)
        if np.abs(row.imag).max() <= 1e-12 * scale:
            plan.append((i, False))
            continue
        partner = next((j for j in range(i + 1, len(A)) if j not in used
                        and np.abs(A[j] - row.conj()).max() <= 1e-9 * scale), None)
        if partner is None:
            raise PreconditionError(f"row {i} has no complex-conjugate partner")
        used.add(partner)
        plan.append((i, True))
    return plan


def _apply_plan(plan, A: np.ndarray) -> np.ndarray:
    out = []
    for i, pair in plan:
        if pair:
            out += [math.sqrt(2) * A[i].real, math.sqrt(2) * A[i].imag]
        else:
            out.append(A[i].real)
    return np.array(out)


def realify(A, compact: bool = False) -> np.ndarray:
    """Real matrix R with ||R x|| = ||A x|| for every real x.

    The default stacks real over imaginary parts (2m x d).  ``compact`` keeps
    one row per real embedding and two rows (sqrt(2) Re, sqrt(2) Im) per
    complex-conjugate pair, giving m x d for a full set of conjugates.
    """
    A = np.asarray(A)
    if not np.iscomplexobj(A):
        return A.astype(float)
    if not compact:
        return np.vstack([A.real, A.imag])
    return _apply_plan(_compact_plan(A), A)


def realify_measurement(A, y, compact: bool = False) -> np.ndarray:
    """Map a complex measurement with the same rows ``realify(A, compact)`` uses.

    For y = A x + e with conjugate-symmetric noise the norms of the
    residuals are preserved.
    """
    A, y = np.asarray(A), np.asarray(y, dtype=complex)
    if not compact:
        return np.concatenate([y.real, y.imag])
    return _apply_plan(_compact_plan(A), y[:, None])[:, 0]


def _as_B(B) -> np.ndarray:
    if isinstance(B, SensingMatrix):
        return np.array(B.entries, dtype=np.int64)
    return np.asarray(B, dtype=np.int64)


def build_algebraic_matrix(B, field: NumberFieldSpec,
                           precision: float = DEFAULT_PRECISION) -> AlgebraicSensingMatrix:
    """Transpose of ``B @ [theta_1 ... theta_m]`` with theta_i = (1, r_i, ..., r_i^(m-1)).

    ``B`` is d x m; its transpose must have every m x m minor nonzero.
    """
    Bi = _as_B(B)
    d, m = Bi.shape
    if field.degree != m:
        raise DimensionError(f"field degree {field.degree} != {m} columns of B")
    cert = verify_plucker(SensingMatrix.from_array(Bi.T))
    if not cert.all_nonzero:
        raise CertificateError(f"B^T has vanishing minors at {cert.singular_sets[:3]}...")
    conj = conjugate_roots(field, precision)
    with mpmath.workdps(max(30, int(-math.log10(precision)) + 20)):
        rows = []
        for r in conj.roots:
            powers = [r ** k for k in range(m)]
            rows.append([complex(mpmath.fsum(int(Bi[j, k]) * powers[k] for k in range(m)))
                         for j in range(d)])
    A = np.array(rows, dtype=complex)
    theta_max = max(abs(complex(r)) for r in conj.roots)
    limit = m * int(np.abs(Bi).max()) * theta_max ** (m - 1)
    if np.abs(A).max() > limit * (1 + 1e-12):
        raise ArithmeticError("entry bound m |B| max|theta|^(m-1) violated")
    return AlgebraicSensingMatrix(A, tuple(map(tuple, Bi.tolist())), field, precision)


def norm_form_value(B, field: NumberFieldSpec, x: Sequence[int]) -> int:
    """Exact field norm of L_1(x) = sum_j alpha_j x_j, as a resultant.

    L_1(x) = g(theta) with g(t) = sum_k (B^T x)_k t^k, so the norm is
    Res(minpoly, g).  Zero exactly when L_1(x) = 0.
    """
    Bi = _as_B(B)
    coeffs = [int(v) for v in Bi.T.astype(object) @ np.array([int(v) for v in x], dtype=object)]
    g = list(reversed(coeffs))  # highest degree first
    return resultant(field.minpoly, g)


def _sparse_grid(d: int, s: int, box: int, cap: int):
    """Yield (support, coefficient block) pairs covering all x in Z_s^d, |x_i| <= box."""
    s = min(s, d)
    total = math.comb(d, s) * (2 * box + 1) ** s
    if total > cap:
        raise ResourceCapError(f"{total} candidate vectors exceeds cap {cap}")
    rng = np.arange(-box, box + 1)
    grid = np.array(np.meshgrid(*[rng] * s, indexing="ij")).reshape(s, -1)
    grid = grid[:, np.any(grid != 0, axis=0)]
    for support in itertools.combinations(range(d), s):
        yield support, grid


@dataclass(frozen=True)
class NormCheck:
    min_norm: float
    witness: tuple[int, ...]
    guaranteed: float


def verify_norm_lower_bound(A: AlgebraicSensingMatrix | np.ndarray, s: int, box: int,
                            tol: float = NORM_TOL,
                            cap: int = DEFAULT_ENUMERATION_CAP) -> NormCheck:
    """Exhaustive minimum of ||Ax|| over nonzero x in Z_s^d with |x_i| <= box.

    Raises CertificateError if the minimum drops below sqrt(m) - tol.
    """
    M = A.entries if isinstance(A, AlgebraicSensingMatrix) else np.asarray(A)
    m, d = M.shape
    if s > m:
        raise PreconditionError("need s <= m")
    best, arg = math.inf, None
    for support, grid in _sparse_grid(d, s, box, cap):
        v = M[:, list(support)] @ grid
        norms = np.sqrt((np.abs(v) ** 2).sum(axis=0))
        i = int(norms.argmin())
        if norms[i] < best:
            best = float(norms[i])
            x = np.zeros(d, dtype=int)
            x[list(support)] = grid[:, i]
            arg = tuple(int(t) for t in x)
    if best < math.sqrt(m) - tol:
        raise CertificateError(f"||Ax|| = {best} < sqrt({m}) at x = {arg}")
    return NormCheck(best, arg, math.sqrt(m))


def nonzero_coordinates_check(A: AlgebraicSensingMatrix | np.ndarray, x: Sequence[int],
                              tol: float = NORM_TOL) -> bool:
    """True iff every coordinate of Ax has modulus above ``tol`` (False for x = 0)."""
    M = A.entries if isinstance(A, AlgebraicSensingMatrix) else np.asarray(A)
    xv = np.asarray(x, dtype=float)
    if not xv.any():
        return False
    return bool(np.all(np.abs(M @ xv) > tol))
