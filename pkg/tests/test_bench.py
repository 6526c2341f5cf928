import math

import numpy as np
import pytest

from intsparse.bench import (CSV_HEADER, CsvRow, ExperimentConfig, GaussianRounded, MatrixSource,
                             TrialRecord, UniformInt, add_noise, csv_digest, emit_csv,
                             emit_plot_data, gen_signal, read_csv, run_experiment, summarize)
from intsparse.errors import CertificateError, PreconditionError
from intsparse.io import save_matrix
from intsparse.forge import SensingMatrix

CUBE = MatrixSource("catalog", name="cube_root_two")
TERNARY = MatrixSource("catalog", name="ternary_3x6")


def test_uniform_signal_values_are_nonzero():
    for seed in range(50):
        x = gen_signal(UniformInt(-1, 1), 6, 1, seed)
        assert x.sparsity == 1 and x.values[0] in (-1, 1)


def test_gaussian_rounded_signal():
    for seed in range(50):
        x = gen_signal(GaussianRounded(5.0), 10, 2, seed)
        assert x.sparsity == 2 and all(isinstance(v, int) and v != 0 for v in x.values)


def test_signal_preconditions():
    with pytest.raises(PreconditionError):
        gen_signal(UniformInt(-1, 1), 6, 0, 0)
    with pytest.raises(PreconditionError):
        gen_signal(UniformInt(-1, 1), 3, 4, 0)
    with pytest.raises(PreconditionError):
        UniformInt(0, 0)


def test_support_is_uniform():
    counts = np.zeros(6)
    for seed in range(3000):
        counts[list(gen_signal(UniformInt(-1, 1), 6, 2, seed).support)] += 1
    assert np.allclose(counts / counts.sum(), 1 / 6, atol=0.02)


def test_noise_moments_and_determinism():
    b = np.zeros(3)
    y, n = add_noise(b, 0.0, 1)
    assert n == 0 and np.array_equal(y, b)
    sq = [add_noise(b, 0.5, s)[1] ** 2 for s in range(4000)]
    assert np.mean(sq) == pytest.approx(0.75, rel=0.05)
    assert np.array_equal(add_noise(b, 0.5, 9)[0], add_noise(b, 0.5, 9)[0])
    y, n = add_noise(b, 1.0, 3, max_norm=0.5)
    assert n < 0.5 and np.linalg.norm(y) == pytest.approx(n)
    with pytest.raises(PreconditionError):
        add_noise(b, -1, 0)


def _rec(trial, method="cvp", exact=True):
    return TrialRecord(trial, method, 0.25, (0, 1), 0.125, (0, 1 if exact else 2),
                       0.0 if exact else 1.0, exact, 1.5)


def test_csv_header_only(tmp_path):
    p = tmp_path / "r.csv"
    emit_csv([], p)
    assert p.read_text() == ",".join(CSV_HEADER) + "\n"
    assert read_csv(p) == []


def test_csv_two_records_round_trip(tmp_path):
    p = tmp_path / "r.csv"
    recs = [_rec(0), _rec(1, "omp", exact=False)]
    emit_csv(recs, p)
    assert len(p.read_text().splitlines()) == 3
    assert read_csv(p) == [CsvRow.of(r) for r in recs]


def test_csv_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        emit_csv([_rec(0)], tmp_path / "missing" / "r.csv")


def test_noiseless_sweep_recovers_everything():
    cfg = ExperimentConfig(TERNARY, UniformInt(-3, 3), s=1, sigmas=(0.0,),
                           methods=("cvp", "brute"), trials=40, seed=3)
    res = run_experiment(cfg, workers=1)
    assert len(res.records) == 80
    for cell in res.summary:
        assert cell.exact_rate == 1.0 and cell.mean_l2_error == 0.0


def test_guarantee_cell_has_no_failures():
    cfg = ExperimentConfig(CUBE, UniformInt(-5, 5), s=1, sigmas=(0.3, 0.6),
                           methods=("cvp",), trials=100, seed=11, max_noise_norm=0.86)
    res = run_experiment(cfg, workers=1)
    assert res.alpha == pytest.approx(math.sqrt(3))
    for rec in res.records:
        assert rec.noise_norm < 0.86 and rec.exact
    assert all(c.guarantee_failures == 0 for c in res.summary)
    assert all(c.guaranteed_trials == c.trials for c in res.summary)


def test_methods_see_identical_inputs():
    cfg = ExperimentConfig(CUBE, UniformInt(-5, 5), s=1, sigmas=(1.0,),
                           methods=("cvp", "omp", "ls"), trials=20, seed=5)
    res = run_experiment(cfg, workers=1)
    by_trial = {}
    for r in res.records:
        by_trial.setdefault(r.trial, set()).add((r.signal, r.noise_norm))
    assert all(len(v) == 1 for v in by_trial.values())


def test_aggregate_is_mean_of_booleans(tmp_path):
    cfg = ExperimentConfig(CUBE, UniformInt(-5, 5), s=1, sigmas=(1.2,),
                           methods=("cvp", "ht"), trials=60, seed=2)
    res = run_experiment(cfg, workers=1)
    p = tmp_path / "r.csv"
    emit_csv(res.records, p)
    rows = read_csv(p)
    for cell in res.summary:
        flags = [r.exact for r in rows if r.method == cell.method and r.sigma == cell.sigma]
        assert cell.exact_rate == sum(flags) / len(flags)
    emit_plot_data(res.summary, tmp_path / "plot.csv")
    assert (tmp_path / "plot.csv").read_text().startswith("method,sigma,exact_rate")


def test_determinism_across_workers(tmp_path):
    cfg = ExperimentConfig(CUBE, GaussianRounded(2.0), s=1, sigmas=(0.2, 0.9),
                           methods=("cvp", "omp"), trials=24, seed=99)
    digests = []
    for i, workers in enumerate((1, 1, 2)):
        p = tmp_path / f"r{i}.csv"
        emit_csv(run_experiment(cfg, workers=workers).records, p)
        digests.append(csv_digest(p))
    assert len(set(digests)) == 1


def test_uncertified_matrix_aborts_before_trials(tmp_path):
    path = tmp_path / "bad.json"
    save_matrix(SensingMatrix(((1, 1, 0), (0, 0, 1))), path)
    cfg = ExperimentConfig(MatrixSource("file", path=str(path)), trials=5)
    with pytest.raises(CertificateError):
        run_experiment(cfg)


def test_config_validation_and_round_trip():
    with pytest.raises(PreconditionError):
        ExperimentConfig(CUBE, trials=0)
    with pytest.raises(PreconditionError):
        ExperimentConfig(CUBE, sigmas=(-1.0,))
    with pytest.raises(PreconditionError):
        ExperimentConfig(CUBE, methods=("l1",))
    cfg = ExperimentConfig(CUBE, GaussianRounded(5.0), 1, (0.1, 0.5), ("cvp", "ht"), 7, 4)
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


def test_summarize_counts_guarantee_only_when_certified():
    recs = [_rec(0, exact=False)]
    assert summarize(recs, 1.0, True)[0].guarantee_failures == 1
    assert summarize(recs, 1.0, False)[0].guaranteed_trials == 0


def test_bad_gen_spec_is_a_precondition_error():
    cfg = ExperimentConfig(MatrixSource("gen", gen={"m": 3, "d": 6, "model": "uniform"}))
    with pytest.raises(PreconditionError):
        run_experiment(cfg)
