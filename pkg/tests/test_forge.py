import itertools
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intsparse.catalog import TERNARY_3X6
from intsparse.errors import PreconditionError, ResourceCapError
from intsparse.exact import minor_det
from intsparse.forge import (GenSpec, SensingMatrix, certification_rate, derive_seed, gen_ternary,
                             gen_uniform_k, gen_verified, generate, kbound_max_d,
                             norm_guarantee_holds, scale_matrix, schwartz_zippel_entry_bound,
                             trivial_construction, union_bound_feasibility, verify_plucker)


def sparse_vectors(d, s, box):
    rng = np.arange(-box, box + 1)
    grid = np.array(np.meshgrid(*[rng] * s, indexing="ij")).reshape(s, -1)
    grid = grid[:, np.any(grid != 0, axis=0)]
    for support in itertools.combinations(range(d), s):
        X = np.zeros((d, grid.shape[1]), dtype=np.int64)
        X[list(support)] = grid
        yield X


def test_ternary_3x6_is_certified():
    cert = verify_plucker(TERNARY_3X6)
    assert cert.all_nonzero and cert.singular_sets == ()
    assert TERNARY_3X6.k == 1
    assert math.comb(6, 3) == 20


def test_repeated_column_is_detected():
    A = SensingMatrix(((1, 1, 0), (0, 0, 1)))
    cert = verify_plucker(A)
    assert not cert.all_nonzero
    assert cert.singular_sets == ((0, 1),)


def test_verify_cap():
    with pytest.raises(ResourceCapError):
        verify_plucker(TERNARY_3X6, cap=19)
    assert verify_plucker(TERNARY_3X6, cap=20).all_nonzero


def test_norm_at_least_one_on_sparse_integer_vectors():
    # every nonzero 3-sparse integer x with |x_i| <= 3: ||Ax||^2 is a positive integer
    A = np.array(TERNARY_3X6.entries)
    for s in (1, 2, 3):
        for X in sparse_vectors(6, s, 3):
            sq = ((A @ X) ** 2).sum(axis=0)
            assert sq.min() >= 1
    assert norm_guarantee_holds(TERNARY_3X6, 3)


def test_uncertified_matrix_has_short_vector():
    A = np.array([[1, 1, 0], [0, 0, 1]])
    x = np.array([1, -1, 0])
    assert np.linalg.norm(A @ x) == 0
    assert not norm_guarantee_holds(SensingMatrix.from_array(A), 2)


@pytest.mark.parametrize("m", range(1, 7))
def test_trivial_construction(m):
    A = trivial_construction(m)
    assert (A.m, A.d, A.k) == (m, m + 1, 1)
    assert verify_plucker(A).all_nonzero


def test_ternary_entry_frequencies():
    A = np.array(gen_ternary(100, 100, seed=7).entries)
    freq = {v: np.mean(A == v) for v in (-1, 0, 1)}
    # 10000 draws: standard error of a frequency is below 0.005
    assert freq[0] == pytest.approx(0.5, abs=0.02)
    assert freq[1] == pytest.approx(0.25, abs=0.02)
    assert freq[-1] == pytest.approx(0.25, abs=0.02)


def test_uniform_entries_cover_range():
    A = np.array(gen_uniform_k(20, 100, 3, seed=1).entries)
    assert set(np.unique(A)) == set(range(-3, 4))
    counts = np.array([np.sum(A == v) for v in range(-3, 4)]) / A.size
    assert np.allclose(counts, 1 / 7, atol=0.02)


def test_generation_is_deterministic():
    assert gen_ternary(4, 7, 11) == gen_ternary(4, 7, 11)
    assert gen_uniform_k(4, 7, 2, 11) == gen_uniform_k(4, 7, 2, 11)
    assert generate(GenSpec(3, 6, 1, "ternary", 5)) == gen_ternary(3, 6, 5)


def test_derive_seed():
    assert derive_seed(1, 2) == derive_seed(1, 2)
    assert len({derive_seed(0, i) for i in range(1000)}) == 1000
    assert derive_seed(0, 1, 2) != derive_seed(0, 2, 1)


def test_gen_verified_returns_certified_matrix():
    rep = gen_verified(GenSpec(3, 6, 2, "uniform", 3))
    assert rep.matrix is not None
    assert rep.matrix.certificate.all_nonzero
    assert verify_plucker(rep.matrix).all_nonzero
    assert rep.matrix.d <= kbound_max_d(3, 2)
    assert 1 <= rep.attempts <= 100


def test_ternary_3x6_draws_rarely_certify():
    # certified 3 x 6 ternary matrices exist but random draws almost never hit one
    rep = gen_verified(GenSpec(3, 6, 1, "ternary", 0), max_attempts=50)
    assert rep.matrix is None and rep.success_rate == 0.0


def test_gen_verified_refuses_impossible_width():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        with pytest.raises(PreconditionError):
            gen_verified(GenSpec(3, 10, 1))
    assert caught


def test_generators_warn_beyond_width_limit():
    with pytest.warns(UserWarning):
        gen_ternary(3, 10, seed=0)


def test_kbound_values():
    assert kbound_max_d(3, 1) == 9
    assert kbound_max_d(3, 2) == 21
    assert kbound_max_d(8, 1) == 29
    with pytest.raises(PreconditionError):
        kbound_max_d(2, 1)


def test_union_bound():
    assert union_bound_feasibility(100, 129, 1) < 1
    assert union_bound_feasibility(3, 6, 1) == pytest.approx(20 / 8)
    assert union_bound_feasibility(2, 4, 2) == pytest.approx(6 / 4)
    # log-space evaluation survives astronomically large binomials
    assert 0 <= union_bound_feasibility(2000, 2500, 1) < math.inf


def test_schwartz_zippel_bound():
    assert schwartz_zippel_entry_bound(3, 6) == Fraction(10, 2)
    assert schwartz_zippel_entry_bound(1, 5) == Fraction(1, 2)


@given(st.integers(1, 4), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_scaling_scales_minors(ell, seed):
    A = gen_uniform_k(3, 5, 2, seed)
    S = scale_matrix(A.certified(), ell)
    assert S.k == ell * A.k
    for I in itertools.combinations(range(5), 3):
        assert minor_det(S, I) == ell ** 3 * minor_det(A, I)
    assert S.certificate == A.certified().certificate


def test_certification_rate_is_positive_for_8x10():
    rate = certification_rate(GenSpec(8, 10, 1, "ternary", 0), draws=200)
    assert 0 < rate < 1


def test_genspec_validation():
    with pytest.raises(PreconditionError):
        GenSpec(4, 3)
    with pytest.raises(PreconditionError):
        GenSpec(2, 3, distribution="gaussian")
    with pytest.raises(PreconditionError):
        generate(GenSpec(2, 4, distribution="trivial"))
