"""Noise-sweep experiments comparing the lattice decoder with classical baselines.

Every (trial, sigma) cell draws its signal and noise from seeds derived
from the master seed, so all methods see identical inputs and the output
does not depend on the number of worker processes.  Complex sensing
matrices are run in their compact real form, where norms are unchanged.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .algebraic import AlgebraicSensingMatrix, build_algebraic_matrix, NumberFieldSpec
from .baselines import BaselineConfig, run_baseline
from .decoder import (SparseIntSignal, brute_force_decode, real_system, reconstruct_cvp)
from .errors import CertificateError, PreconditionError
from .forge import GenSpec, derive_seed, gen_verified, verify_plucker

WORKERS_ENV = "INTSPARSE_WORKERS"
CSV_HEADER = ("trial", "method", "sigma", "noise_norm", "l2_error", "exact", "ms")
METHODS = ("cvp", "brute", "omp", "ht", "ls")
RESERVED_METHODS = ("l1",)
MAX_NOISE_REDRAWS = 100_000


# ------------------------------------------------------------ signal models

@dataclass(frozen=True)
class UniformInt:
    """Nonzero values drawn uniformly from {lo, ..., hi} minus zero."""

    lo: int = -1
    hi: int = 1
    kind: str = field(default="uniform_int", init=False)

    def __post_init__(self):
        if self.lo > self.hi or (self.lo == 0 and self.hi == 0):
            raise PreconditionError("value range must contain a nonzero integer")

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        choices = np.array([v for v in range(self.lo, self.hi + 1) if v != 0])
        return rng.choice(choices, size=n)


@dataclass(frozen=True)
class GaussianRounded:
    """N(0, sigma^2) rounded to the nearest integer; zeros are redrawn."""

    sigma: float = 5.0
    kind: str = field(default="gaussian_rounded", init=False)

    def __post_init__(self):
        if self.sigma <= 0:
            raise PreconditionError("sigma must be positive")

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=np.int64)
        for i in range(n):
            while out[i] == 0:
                v = rng.normal(0.0, self.sigma)
                out[i] = int(math.copysign(math.floor(abs(v) + 0.5), v))
        return out


SignalModel = Union[UniformInt, GaussianRounded]


def signal_model_from_dict(spec: dict) -> SignalModel:
    spec = dict(spec)
    kind = spec.pop("kind")
    if kind == "uniform_int":
        return UniformInt(**spec)
    if kind == "gaussian_rounded":
        return GaussianRounded(**spec)
    raise PreconditionError(f"unknown signal model {kind!r}")


def gen_signal(model: SignalModel, d: int, s: int, seed: int) -> SparseIntSignal:
    """Uniformly random support of size s with nonzero values from ``model``."""
    if not 1 <= s <= d:
        raise PreconditionError("need 1 <= s <= d")
    rng = np.random.default_rng(seed)
    support = np.sort(rng.choice(d, size=s, replace=False))
    values = model.draw(rng, s)
    return SparseIntSignal(d, tuple(int(i) for i in support), tuple(int(v) for v in values))


def add_noise(b, sigma: float, seed: int, max_norm: Optional[float] = None
              ) -> tuple[np.ndarray, float]:
    """b + e with e_i ~ N(0, sigma^2) i.i.d.; returns (noisy b, ||e||).

    With ``max_norm`` the noise vector is redrawn until ||e|| < max_norm.
    """
    if sigma < 0:
        raise PreconditionError("sigma must be nonnegative")
    b = np.asarray(b, dtype=float)
    if sigma == 0:
        return b.copy(), 0.0
    rng = np.random.default_rng(seed)
    for _ in range(MAX_NOISE_REDRAWS):
        e = rng.normal(0.0, sigma, size=b.shape)
        norm = float(np.linalg.norm(e))
        if max_norm is None or norm < max_norm:
            return b + e, norm
    raise PreconditionError(f"no noise draw below {max_norm} in {MAX_NOISE_REDRAWS} tries")


# ------------------------------------------------------------------- config

@dataclass(frozen=True)
class MatrixSource:
    """Where the sensing matrix comes from.

    kind is one of ``file`` (JSON matrix file), ``catalog`` (a name from
    ``intsparse.catalog``), ``gen`` (a GenSpec, rejection-sampled until
    certified) or ``algebraic`` (an integer d x m matrix B plus a minimal
    polynomial).
    """

    kind: str
    path: Optional[str] = None
    name: Optional[str] = None
    gen: Optional[dict] = None
    B: Optional[tuple] = None
    minpoly: Optional[tuple] = None

    def load(self):
        from . import catalog
        from .io import load_matrix

        if self.kind == "file":
            return load_matrix(self.path)
        if self.kind == "catalog":
            if self.name == "ternary_3x6":
                return catalog.TERNARY_3X6
            if self.name == "cube_root_two":
                return build_algebraic_matrix(catalog.CUBE_ROOT_TWO_B, catalog.CUBE_ROOT_TWO)
            raise PreconditionError(f"unknown catalog matrix {self.name!r}")
        if self.kind == "gen":
            try:
                spec = GenSpec(**self.gen)
            except TypeError as exc:
                raise PreconditionError(f"bad gen spec {self.gen!r}: {exc}") from None
            report = gen_verified(spec)
            if report.matrix is None:
                raise CertificateError("no certified draw within the attempt budget")
            return report.matrix
        if self.kind == "algebraic":
            return build_algebraic_matrix(self.B, NumberFieldSpec(tuple(self.minpoly)))
        raise PreconditionError(f"unknown matrix source {self.kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    matrix: MatrixSource
    signal: SignalModel = UniformInt(-1, 1)
    s: int = 1
    sigmas: tuple[float, ...] = (0.0,)
    methods: tuple[str, ...] = ("cvp",)
    trials: int = 100
    seed: int = 0
    alpha: Optional[float] = None  # default: 1 for integer, sqrt(m) for algebraic matrices
    box: int = 5                   # coefficient box of the brute-force decoder
    max_noise_norm: Optional[float] = None

    def __post_init__(self):
        if self.trials < 1:
            raise PreconditionError("trials must be >= 1")
        if self.s < 1:
            raise PreconditionError("s must be >= 1")
        if any(sg < 0 for sg in self.sigmas):
            raise PreconditionError("sigma must be >= 0")
        for m in self.methods:
            if m in RESERVED_METHODS:
                raise PreconditionError(f"method {m!r} needs an LP solver and is not provided")
            if m not in METHODS:
                raise PreconditionError(f"unknown method {m!r}")
        object.__setattr__(self, "sigmas", tuple(float(v) for v in self.sigmas))
        object.__setattr__(self, "methods", tuple(self.methods))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        src = dict(data.pop("matrix"))
        for key in ("B", "minpoly"):
            if src.get(key) is not None:
                src[key] = tuple(map(lambda r: tuple(r) if isinstance(r, list) else r, src[key]))
        data["matrix"] = MatrixSource(**src)
        if "signal" in data:
            data["signal"] = signal_model_from_dict(data["signal"])
        for key in ("sigmas", "methods"):
            if key in data:
                data[key] = tuple(data[key])
        return cls(**data)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["matrix"] = {k: v for k, v in out["matrix"].items() if v is not None}
        return out


# ------------------------------------------------------------------ records

@dataclass(frozen=True)
class TrialRecord:
    trial: int
    method: str
    sigma: float
    signal: tuple[int, ...]
    noise_norm: float
    estimate: tuple
    l2_error: float
    exact: bool
    ms: float
    status: str = ""

    def csv_row(self) -> tuple:
        return (self.trial, self.method, repr(self.sigma), repr(self.noise_norm),
                repr(self.l2_error), int(self.exact), f"{self.ms:.3f}")


@dataclass(frozen=True)
class CsvRow:
    trial: int
    method: str
    sigma: float
    noise_norm: float
    l2_error: float
    exact: bool
    ms: float

    @classmethod
    def of(cls, rec: TrialRecord) -> "CsvRow":
        return cls(rec.trial, rec.method, rec.sigma, rec.noise_norm, rec.l2_error, rec.exact,
                   round(rec.ms, 3))


@dataclass(frozen=True)
class CellSummary:
    method: str
    sigma: float
    trials: int
    exact_rate: float
    mean_l2_error: float
    max_noise_norm: float
    guaranteed_trials: int     # trials with ||e|| < alpha/2, counted only when 2s <= m
    guarantee_failures: int    # of those, cvp trials that did not recover exactly


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    alpha: float
    records: list[TrialRecord]
    summary: list[CellSummary]


# ------------------------------------------------------------------- engine

def _prepare(config: ExperimentConfig):
    """Load and certify the matrix; returns (real matrix, alpha)."""
    A = config.matrix.load()
    if isinstance(A, AlgebraicSensingMatrix):
        alpha = math.sqrt(A.m)
        Ar, _ = real_system(A.entries)
    else:
        cert = A.certificate or verify_plucker(A)
        if not cert.all_nonzero:
            raise CertificateError(f"sensing matrix has vanishing minors {cert.singular_sets[:3]}")
        alpha = 1.0
        Ar = A.array
    if config.alpha is not None:
        alpha = float(config.alpha)
    if config.s > Ar.shape[0]:
        raise PreconditionError("s must not exceed the number of measurements")
    return Ar, alpha


def _decode(method: str, Ar: np.ndarray, y: np.ndarray, s: int, alpha: float, box: int):
    if method == "cvp":
        res = reconstruct_cvp(Ar, y, alpha, s=s)
        return res.estimate.to_dense(), res.status
    if method == "brute":
        res = brute_force_decode(Ar, y, s, box, alpha=alpha)
        return res.estimate.to_dense(), res.status
    cfg = BaselineConfig(method, s=s, round_to_integer=True)
    return run_baseline(cfg, Ar, y), ""


def _run_trial(args) -> list[TrialRecord]:
    config, Ar, alpha, trial = args
    d = Ar.shape[1]
    signal = gen_signal(config.signal, d, config.s, derive_seed(config.seed, 0, trial))
    x = signal.to_dense()
    b = Ar @ x.astype(float)
    out = []
    for k, sigma in enumerate(config.sigmas):
        y, enorm = add_noise(b, sigma, derive_seed(config.seed, 1, k, trial),
                             config.max_noise_norm)
        for method in config.methods:
            t0 = time.perf_counter()
            est, status = _decode(method, Ar, y, config.s, alpha, config.box)
            ms = (time.perf_counter() - t0) * 1000.0
            err = float(np.linalg.norm(np.asarray(est, dtype=float) - x))
            out.append(TrialRecord(trial, method, sigma, tuple(int(v) for v in x), enorm,
                                   tuple(int(v) for v in est), err,
                                   bool(np.array_equal(est, x)), ms, status))
    return out


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def summarize(records: Sequence[TrialRecord], alpha: float,
              guarantee_applies: bool = True) -> list[CellSummary]:
    """Per (method, sigma) aggregates.

    ``guarantee_applies`` says whether ||Az|| >= alpha is certified on
    differences of two signals (2s <= m); only then do trials inside the
    radius count towards ``guaranteed_trials``.
    """
    cells: dict[tuple[str, float], list[TrialRecord]] = {}
    for r in records:
        cells.setdefault((r.method, r.sigma), []).append(r)
    out = []
    for (method, sigma), recs in sorted(cells.items()):
        inside = [r for r in recs if guarantee_applies and r.noise_norm < alpha / 2]
        fails = sum(1 for r in inside if method == "cvp" and not r.exact)
        out.append(CellSummary(
            method, sigma, len(recs),
            sum(r.exact for r in recs) / len(recs),
            float(np.mean([r.l2_error for r in recs])),
            max(r.noise_norm for r in recs), len(inside), fails))
    return out


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    """Full sweep over trials x sigmas x methods.

    The matrix is certified before any trial runs.  Records come back
    sorted by (trial, sigma, method order) regardless of ``workers``.
    """
    Ar, alpha = _prepare(config)
    workers = default_workers() if workers is None else workers
    jobs = [(config, Ar, alpha, t) for t in range(config.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [_run_trial(j) for j in jobs]
    records = [r for chunk in chunks for r in chunk]
    return ExperimentResult(config, alpha, records,
                            summarize(records, alpha, 2 * config.s <= Ar.shape[0]))


# ---------------------------------------------------------------------- CSV

def _write_rows(rows, header, path) -> None:
    p = Path(path)
    with p.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def emit_csv(records: Sequence[TrialRecord], path) -> None:
    _write_rows((r.csv_row() for r in records), CSV_HEADER, path)


def read_csv(path) -> list[CsvRow]:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected header {header}")
        return [CsvRow(int(t), m, float(sg), float(nn), float(err), ex == "1", float(ms))
                for t, m, sg, nn, err, ex, ms in reader]


def emit_plot_data(summary: Sequence[CellSummary], path) -> None:
    """One curve point per (method, sigma): exact-recovery rate and mean error."""
    _write_rows(((c.method, repr(c.sigma), repr(c.exact_rate), repr(c.mean_l2_error),
                  repr(c.max_noise_norm)) for c in summary),
                ("method", "sigma", "exact_rate", "mean_l2_error", "max_noise_norm"), path)


def csv_digest(path) -> str:
    """SHA-256 of a records CSV with the timing column dropped."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    with Path(path).open(newline="") as fh:
        for row in csv.reader(fh):
            w.writerow(row[:-1])
    return hashlib.sha256(buf.getvalue().encode()).hexdigest()


def format_summary(result: ExperimentResult) -> str:
    lines = [f"alpha = {result.alpha:.6g}, guarantee radius = {result.alpha / 2:.6g}",
             f"{'method':<8}{'sigma':>8}{'trials':>8}{'exact':>8}{'mean_l2':>10}"
             f"{'max|e|':>9}{'in_rad':>8}{'fails':>7}"]
    for c in result.summary:
        lines.append(f"{c.method:<8}{c.sigma:>8.3g}{c.trials:>8}{c.exact_rate:>8.3f}"
                     f"{c.mean_l2_error:>10.4g}{c.max_noise_norm:>9.4g}"
                     f"{c.guaranteed_trials:>8}{c.guarantee_failures:>7}")
    return "\n".join(lines)
