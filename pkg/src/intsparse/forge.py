"""Integer sensing matrices with all m x m minors nonzero.

Random generators follow the two entry models used in the existence
argument (ternary with P(0) = 1/2, and uniform on {-k..k}); ``verify_plucker``
certifies a draw by computing every maximal minor exactly.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import PreconditionError, ResourceCapError
from .exact import IndexSet, _bareiss, index_sets

DEFAULT_ENUMERATION_CAP = 10**7
MODELS = ("ternary", "uniform", "trivial")


@dataclass(frozen=True)
class PluckerCertificate:
    all_nonzero: bool
    singular_sets: tuple[IndexSet, ...] = ()


@dataclass(frozen=True)
class SensingMatrix:
    """m x d integer matrix with an optional Plücker certificate."""

    entries: tuple[tuple[int, ...], ...]
    certificate: Optional[PluckerCertificate] = field(default=None, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.entries)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise PreconditionError("entries must be a non-empty rectangular array")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_array(cls, a, certificate=None) -> "SensingMatrix":
        return cls(tuple(map(tuple, np.asarray(a, dtype=np.int64).tolist())), certificate)

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def d(self) -> int:
        return len(self.entries[0])

    @property
    def k(self) -> int:
        """Entry bound |A| = max |a_ij|."""
        return max(abs(v) for r in self.entries for v in r)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def column_rows(self, cols) -> list[list[int]]:
        return [[r[j] for j in cols] for r in self.entries]

    def certified(self, cap: int = DEFAULT_ENUMERATION_CAP) -> "SensingMatrix":
        """Return a copy carrying a (freshly computed if absent) certificate."""
        if self.certificate is not None:
            return self
        return replace(self, certificate=verify_plucker(self, cap))


@dataclass(frozen=True)
class GenSpec:
    m: int
    d: int
    k: int = 1
    distribution: str = "ternary"
    seed: int = 0

    def __post_init__(self):
        if self.distribution not in MODELS:
            raise PreconditionError(f"unknown model {self.distribution!r}")
        if self.m < 1 or self.m > self.d:
            raise PreconditionError("need 1 <= m <= d")
        if self.k < 1:
            raise PreconditionError("need k >= 1")


def derive_seed(master: int, *index: int) -> int:
    """Independent 64-bit child seed for (master, index...) via SeedSequence."""
    ss = np.random.SeedSequence([int(master) & (2**64 - 1), *map(int, index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _warn_if_over_bound(m: int, d: int, k: int) -> None:
    if m >= 3 and d > kbound_max_d(m, k):
        warnings.warn(
            f"d={d} exceeds {kbound_max_d(m, k)}, the largest width any {m}-row "
            f"matrix with entry bound {k} can have while keeping all minors nonzero",
            stacklevel=3)


def gen_ternary(m: int, d: int, seed: int) -> SensingMatrix:
    """Entries i.i.d. in {-1, 0, 1} with probabilities 1/4, 1/2, 1/4.

    Degenerate draws (even all-zero ones) are returned as-is; they simply
    fail verification.
    """
    if m > d:
        raise PreconditionError("need m <= d")
    _warn_if_over_bound(m, d, 1)
    rng = np.random.default_rng(seed)
    a = rng.choice(np.array([-1, 0, 1]), size=(m, d), p=[0.25, 0.5, 0.25])
    return SensingMatrix.from_array(a)


def gen_uniform_k(m: int, d: int, k: int, seed: int) -> SensingMatrix:
    """Entries i.i.d. uniform on {-k, ..., k}."""
    if k < 1:
        raise PreconditionError("need k >= 1")
    if m > d:
        raise PreconditionError("need m <= d")
    _warn_if_over_bound(m, d, k)
    rng = np.random.default_rng(seed)
    return SensingMatrix.from_array(rng.integers(-k, k + 1, size=(m, d)))


def trivial_construction(m: int) -> SensingMatrix:
    """The m x (m+1) matrix [I_m | 1]."""
    if m < 1:
        raise PreconditionError("need m >= 1")
    a = np.hstack([np.eye(m, dtype=np.int64), np.ones((m, 1), dtype=np.int64)])
    return SensingMatrix.from_array(a)


def generate(spec: GenSpec) -> SensingMatrix:
    if spec.distribution == "ternary":
        return gen_ternary(spec.m, spec.d, spec.seed)
    if spec.distribution == "uniform":
        return gen_uniform_k(spec.m, spec.d, spec.k, spec.seed)
    if spec.d != spec.m + 1:
        raise PreconditionError("trivial construction has d = m + 1")
    return trivial_construction(spec.m)


def verify_plucker(A: SensingMatrix, cap: int = DEFAULT_ENUMERATION_CAP) -> PluckerCertificate:
    """Compute all C(d, m) maximal minors exactly and list the vanishing ones."""
    m, d = A.m, A.d
    if m > d:
        raise PreconditionError("need m <= d")
    if math.comb(d, m) > cap:
        raise ResourceCapError(f"C({d},{m}) = {math.comb(d, m)} minors exceeds cap {cap}")
    singular = tuple(I for I in index_sets(d, m) if _bareiss(A.column_rows(I)) == 0)
    return PluckerCertificate(not singular, singular)


def norm_guarantee_holds(A: SensingMatrix, s: int) -> bool:
    """True iff ||Ax|| >= 1 is certified for every nonzero s-sparse integer x."""
    if s > A.m:
        raise PreconditionError("need s <= m")
    cert = A.certificate or verify_plucker(A)
    return cert.all_nonzero


@dataclass(frozen=True)
class GenReport:
    matrix: Optional[SensingMatrix]
    attempts: int
    successes: int

    @property
    def success_rate(self) -> float:
        return self.successes / self.attempts if self.attempts else 0.0


def gen_verified(spec: GenSpec, max_attempts: int = 100,
                 cap: int = DEFAULT_ENUMERATION_CAP) -> GenReport:
    """Rejection-sample ``spec`` until a draw passes ``verify_plucker``.

    Attempt i uses ``derive_seed(spec.seed, i)``.  Widths beyond
    ``kbound_max_d`` are refused outright since no draw could pass.
    """
    if spec.m >= 3 and spec.d > kbound_max_d(spec.m, spec.k):
        warnings.warn("requested width exceeds the entry-bound limit", stacklevel=2)
        raise PreconditionError(
            f"d={spec.d} > {kbound_max_d(spec.m, spec.k)}: no {spec.m}x{spec.d} matrix "
            f"with entries bounded by {spec.k} has all minors nonzero")
    for attempt in range(1, max_attempts + 1):
        A = generate(replace(spec, seed=derive_seed(spec.seed, attempt - 1)))
        cert = verify_plucker(A, cap)
        if cert.all_nonzero:
            return GenReport(replace(A, certificate=cert), attempt, 1)
    return GenReport(None, max_attempts, 0)


def certification_rate(spec: GenSpec, draws: int, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Fraction of ``draws`` independent draws from ``spec`` that pass verification."""
    ok = 0
    for i in range(draws):
        A = generate(replace(spec, seed=derive_seed(spec.seed, i)))
        ok += verify_plucker(A, cap).all_nonzero
    return ok / draws


# ---------------------------------------------------------------- calculators

def kbound_max_d(m: int, k: int) -> int:
    """Largest d for which an m x d matrix with |A| = k can have all minors nonzero."""
    if m < 3:
        raise PreconditionError("the width bound needs m >= 3")
    if k < 1:
        raise PreconditionError("need k >= 1")
    return (2 * k * k + 2) * (m - 1) + 1


def schwartz_zippel_entry_bound(m: int, d: int) -> Fraction:
    """Entry bound C(d-1, m-1)/2 at which a nonvanishing choice must exist."""
    if m > d:
        raise PreconditionError("need m <= d")
    return Fraction(math.comb(d - 1, m - 1), 2)


def union_bound_feasibility(m: int, d: int, k: int) -> float:
    """Main term C(d, m) * p**m of the union bound on singular m x m submatrices.

    p = 1/2 for the ternary model (k = 1) and 1/sqrt(2k) otherwise; the
    vanishing correction in p is dropped, so this is a heuristic at finite m.
    A value below 1 means a random draw avoids every singular minor with
    positive probability.
    """
    if m > d:
        raise PreconditionError("need m <= d")
    log_p = math.log(0.5) if k == 1 else -0.5 * math.log(2 * k)
    log_c = math.lgamma(d + 1) - math.lgamma(m + 1) - math.lgamma(d - m + 1)
    return math.exp(log_c + m * log_p)


def scale_matrix(A: SensingMatrix, ell: int) -> SensingMatrix:
    """Multiply by ell >= 1; minors scale by ell**m so the certificate carries over."""
    if ell < 1:
        raise PreconditionError("need ell >= 1")
    scaled = tuple(tuple(ell * v for v in r) for r in A.entries)
    return SensingMatrix(scaled, A.certificate)
