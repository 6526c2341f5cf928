"""Classical real-valued decoders used for comparison, plus integer rounding."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, RankError

METHODS = ("omp", "hard_threshold", "least_squares")
ALIASES = {"ht": "hard_threshold", "ls": "least_squares"}


class RankDeficientWarning(UserWarning):
    """Least squares on a rank-deficient support fell back to the pseudo-inverse."""


@dataclass(frozen=True)
class BaselineConfig:
    method: str
    s: int = 1
    round_to_integer: bool = False

    def __post_init__(self):
        method = ALIASES.get(self.method, self.method)
        if method not in METHODS:
            raise PreconditionError(f"unknown baseline {self.method!r}")
        object.__setattr__(self, "method", method)
        if method != "least_squares" and self.s < 1:
            raise PreconditionError("sparsity must be >= 1")


def round_to_integer(x) -> np.ndarray:
    """Nearest integer per coordinate, halves rounded away from zero."""
    x = np.asarray(x, dtype=float)
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)


def least_squares_min_norm(A, b) -> np.ndarray:
    """Minimum-norm solution A^T (A A^T)^{-1} b of a full-row-rank system."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.linalg.matrix_rank(A) < A.shape[0]:
        raise RankError("least squares needs full row rank")
    z = A.T @ np.linalg.solve(A @ A.T, b)
    r = b - A @ z
    # residual of a consistent full-row-rank system is orthogonal to everything
    assert np.linalg.norm(A.T @ r) <= 1e-8 * max(1.0, np.linalg.norm(A) * np.linalg.norm(b))
    return z


def _ls_on_support(A, b, support):
    sub = A[:, support]
    if np.linalg.matrix_rank(sub) < len(support):
        warnings.warn(f"support {list(support)} is rank deficient", RankDeficientWarning,
                      stacklevel=3)
    coef, *_ = np.linalg.lstsq(sub, b, rcond=None)
    return coef


def omp(A, b, s: int, round_result: bool = False) -> np.ndarray:
    """Orthogonal matching pursuit with s greedy steps.

    Each step picks the unused column maximizing |<a_j, r>| / ||a_j||
    (first index on ties), refits least squares on the chosen support and
    updates the residual r.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, d = A.shape
    if not 1 <= s <= m:
        raise PreconditionError("need 1 <= s <= m")
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = np.inf
    support: list[int] = []
    x = np.zeros(d)
    r = b.copy()
    for _ in range(s):
        if np.linalg.norm(r) <= 1e-12 * max(1.0, np.linalg.norm(b)):
            break
        score = np.abs(A.T @ r) / norms
        score[support] = -1.0
        support.append(int(np.argmax(score)))
        coef = _ls_on_support(A, b, support)
        x = np.zeros(d)
        x[support] = coef
        r = b - A @ x
    return round_to_integer(x) if round_result else x


def hard_threshold(A, b, s: int, round_result: bool = False) -> np.ndarray:
    """Least squares on the s largest entries of |A^T b| (smaller index on ties)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    d = A.shape[1]
    if not 1 <= s <= d:
        raise PreconditionError("need 1 <= s <= d")
    corr = np.abs(A.T @ b)
    support = sorted(np.argsort(-corr, kind="stable")[:s].tolist())
    x = np.zeros(d)
    x[support] = _ls_on_support(A, b, support)
    return round_to_integer(x) if round_result else x


def run_baseline(config: BaselineConfig, A, b) -> np.ndarray:
    if config.method == "omp":
        return omp(A, b, config.s, config.round_to_integer)
    if config.method == "hard_threshold":
        return hard_threshold(A, b, config.s, config.round_to_integer)
    z = least_squares_min_norm(A, b)
    return round_to_integer(z) if config.round_to_integer else z
