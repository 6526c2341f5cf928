import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intsparse.baselines import (BaselineConfig, RankDeficientWarning, hard_threshold,
                                 least_squares_min_norm, omp, round_to_integer, run_baseline)
from intsparse.catalog import TERNARY_3X6
from intsparse.errors import PreconditionError, RankError


def test_rounding_half_away_from_zero():
    assert list(round_to_integer([0.5, -0.5, 1.5, -2.5, 0.49, 2.51])) == [1, -1, 2, -3, 0, 3]


def test_omp_recovers_one_sparse_noiseless():
    A = TERNARY_3X6.array
    for j in range(6):
        x = np.zeros(6)
        x[j] = -3
        assert np.allclose(omp(A, A @ x, 1), x)


def test_omp_stops_on_zero_residual():
    A = np.eye(3)
    x = omp(A, np.array([0.0, 2.0, 0.0]), 3)
    assert np.allclose(x, [0, 2, 0])


def test_omp_tie_takes_first_index():
    A = np.array([[1.0, 1.0], [0.0, 0.0]])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RankDeficientWarning)
        x = omp(A, np.array([1.0, 0.0]), 1)
    assert np.allclose(x, [1, 0])


def test_least_squares_min_norm():
    A = TERNARY_3X6.array
    b = np.array([1.0, -2.0, 0.5])
    z = least_squares_min_norm(A, b)
    assert np.allclose(A @ z, b)
    assert np.allclose(z, np.linalg.pinv(A) @ b)
    with pytest.raises(RankError):
        least_squares_min_norm(np.array([[1.0, 2.0], [2.0, 4.0]]), [1.0, 2.0])


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3))
@settings(max_examples=50, deadline=None)
def test_hard_threshold_full_support_is_least_squares(b):
    A = TERNARY_3X6.array
    b = np.array(b)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RankDeficientWarning)
        x = hard_threshold(A, b, 6)
    ref, *_ = np.linalg.lstsq(A, b, rcond=None)
    assert np.allclose(x, ref, atol=1e-9)


def test_hard_threshold_picks_largest_correlations():
    A = np.eye(4)
    x = hard_threshold(A, np.array([0.1, -3.0, 2.0, 0.0]), 2)
    assert np.allclose(x, [0, -3, 2, 0])


def test_rank_deficient_support_warns():
    A = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    with pytest.warns(RankDeficientWarning):
        hard_threshold(A, np.array([1.0, 0.0]), 2)


def test_config_and_dispatch():
    assert BaselineConfig("ht").method == "hard_threshold"
    assert BaselineConfig("ls").method == "least_squares"
    with pytest.raises(PreconditionError):
        BaselineConfig("cosamp")
    with pytest.raises(PreconditionError):
        BaselineConfig("omp", s=0)
    A = TERNARY_3X6.array
    x = np.array([0, 0, 2, 0, 0, 0])
    out = run_baseline(BaselineConfig("omp", 1, True), A, A @ x + 0.1)
    assert out.dtype.kind == "i" and list(out) == list(x)


def test_omp_sparsity_bounds():
    with pytest.raises(PreconditionError):
        omp(TERNARY_3X6.array, np.zeros(3), 4)
