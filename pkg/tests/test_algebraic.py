import math

import numpy as np
import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import given, settings, strategies as st

from intsparse.algebraic import (NumberFieldSpec, build_algebraic_matrix, conjugate_roots,
                                 is_squarefree, nonzero_coordinates_check, norm_form_value,
                                 poly_gcd, realify, realify_measurement, resultant,
                                 sylvester_matrix, verify_norm_lower_bound)
from intsparse.catalog import CUBE_ROOT_TWO, CUBE_ROOT_TWO_B
from intsparse.errors import CertificateError, DimensionError, PreconditionError

t = sympy.Symbol("t")


@pytest.fixture(scope="module")
def cube_matrix():
    return build_algebraic_matrix(CUBE_ROOT_TWO_B, CUBE_ROOT_TWO)


polys = st.lists(st.integers(-6, 6), min_size=1, max_size=5).filter(lambda p: p[0] != 0)


@given(polys, polys)
@settings(max_examples=150, deadline=None)
def test_resultant_matches_sympy(f, g):
    # sympy.resultant itself gets the sign wrong on some inputs (e.g. t + 1, t^3),
    # so the reference is the determinant of sympy's own Sylvester matrix
    if len(f) == 1 and len(g) == 1:
        assert resultant(f, g) == 1
        return
    F, G = sympy.Poly(f, t).as_expr(), sympy.Poly(g, t).as_expr()
    assert resultant(f, g) == int(sylvester(F, G, t).det())


def test_resultant_is_product_over_roots():
    # monic f: Res(f, g) = prod g(r) over the roots r of f
    assert resultant([1, 1], [1, 0, 0, 0]) == -1
    assert resultant([1, 0, -2], [1, 1]) == -1
    assert resultant([1, 0, 0, -2], [1, 0, 0]) == 4


def test_sylvester_shape():
    S = sylvester_matrix([1, 0, 0, -2], [1, 1])
    assert len(S) == 4 and all(len(r) == 4 for r in S)


def test_poly_gcd_and_squarefree():
    assert poly_gcd([1, 0, -1], [1, -1]) == [1, -1]
    assert is_squarefree([1, 0, 0, -2])
    assert not is_squarefree([1, -2, 1])


def test_field_validation():
    assert NumberFieldSpec.parse("1,0,0,-2") == CUBE_ROOT_TWO
    assert CUBE_ROOT_TWO.degree == 3
    with pytest.raises(PreconditionError):
        NumberFieldSpec((2, 0, -1))          # not monic
    with pytest.raises(PreconditionError):
        NumberFieldSpec((1, 0, -1))          # (t - 1)(t + 1)
    with pytest.raises(PreconditionError):
        NumberFieldSpec((1, 0, 0, 0, 0, 0, 0, 0, -2))   # degree 8 needs an explicit promise
    assert NumberFieldSpec((1, 0, 0, 0, 0, 0, 0, 0, -2), assume_irreducible=True).degree == 8


def test_conjugate_roots_of_cube_root_two():
    roots = conjugate_roots(CUBE_ROOT_TWO).as_complex()
    c = 2 ** (1 / 3)
    xi = np.exp(2j * np.pi / 3)
    assert roots[0] == pytest.approx(c, abs=1e-14)
    assert sorted([roots[1].imag, roots[2].imag]) == pytest.approx(sorted([(c * xi).imag,
                                                                            (c * xi ** 2).imag]))
    assert np.allclose(roots ** 3, 2, atol=1e-12)
    assert roots[1].imag > 0 and roots[2] == pytest.approx(np.conj(roots[1]))


def test_matrix_entries_are_embeddings(cube_matrix):
    A = cube_matrix.entries
    theta = conjugate_roots(CUBE_ROOT_TWO).as_complex()
    B = np.array(CUBE_ROOT_TWO_B)
    expected = np.array([[B[j] @ np.array([1, r, r * r]) for j in range(6)] for r in theta])
    assert np.allclose(A, expected, atol=1e-13)
    assert A[0, 0] == pytest.approx(1 + 2 ** (1 / 3) + 2 ** (2 / 3))


def test_entry_bound(cube_matrix):
    # |1 + theta + theta^2| over the real embedding is the largest entry
    assert cube_matrix.entry_bound == pytest.approx(1 + 2 ** (1 / 3) + 2 ** (2 / 3), abs=1e-12)
    assert cube_matrix.entry_bound <= 3 * 2 ** (2 / 3)
    assert cube_matrix.entry_bound > 3 * 2 ** (1 / 3)


def test_build_rejects_singular_B():
    B = [[1, 0, 0], [2, 0, 0], [0, 1, 0], [0, 0, 1]]
    with pytest.raises(CertificateError):
        build_algebraic_matrix(B, CUBE_ROOT_TWO)
    with pytest.raises(DimensionError):
        build_algebraic_matrix([[1, 0], [0, 1], [1, 1]], CUBE_ROOT_TWO)


@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6))
@settings(max_examples=150, deadline=None)
def test_norm_form_is_product_of_coordinates(x):
    A = build_algebraic_matrix(CUBE_ROOT_TWO_B, CUBE_ROOT_TWO).entries
    N = norm_form_value(CUBE_ROOT_TWO_B, CUBE_ROOT_TWO, x)
    prod = np.prod(A @ np.array(x, dtype=float))
    assert prod.real == pytest.approx(N, abs=1e-8 * max(1, abs(N)))
    assert abs(prod.imag) < 1e-8 * max(1, abs(N))


@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6).filter(
    lambda x: 0 < sum(v != 0 for v in x) <= 3))
@settings(max_examples=200, deadline=None)
def test_am_gm_lower_bound(x):
    A = build_algebraic_matrix(CUBE_ROOT_TWO_B, CUBE_ROOT_TWO).entries
    y = A @ np.array(x, dtype=float)
    N = norm_form_value(CUBE_ROOT_TWO_B, CUBE_ROOT_TWO, x)
    assert N != 0
    assert np.all(np.abs(y) > 1e-9)
    # ||y||^2 / 3 >= (prod |y_i|^2)^(1/3) = |N|^(2/3) >= 1
    assert np.sum(np.abs(y) ** 2) / 3 >= abs(N) ** (2 / 3) * (1 - 1e-12)
    assert np.linalg.norm(y) >= math.sqrt(3) - 1e-9


@given(st.lists(st.integers(-10, 10), min_size=6, max_size=6))
@settings(max_examples=100, deadline=None)
def test_realification_preserves_norms(x):
    A = build_algebraic_matrix(CUBE_ROOT_TWO_B, CUBE_ROOT_TWO).entries
    xv = np.array(x, dtype=float)
    ref = np.linalg.norm(A @ xv)
    for compact in (False, True):
        R = realify(A, compact=compact)
        assert np.isrealobj(R)
        assert np.linalg.norm(R @ xv) == pytest.approx(ref, abs=1e-12 * max(1, ref))
        assert np.allclose(realify_measurement(A, A @ xv, compact=compact), R @ xv, atol=1e-12)


def test_compact_realification_shape(cube_matrix):
    assert realify(cube_matrix.entries).shape == (6, 6)
    assert realify(cube_matrix.entries, compact=True).shape == (3, 6)
    with pytest.raises(PreconditionError):
        realify(cube_matrix.entries[:2], compact=True)   # conjugate partner missing


def test_exhaustive_norm_check(cube_matrix):
    check = verify_norm_lower_bound(cube_matrix, s=3, box=4)
    assert check.min_norm >= math.sqrt(3) - 1e-9
    assert check.min_norm == pytest.approx(math.sqrt(3), abs=1e-9)
    assert np.linalg.norm(cube_matrix.entries @ np.array(check.witness)) == pytest.approx(
        check.min_norm)


def test_norm_check_flags_bad_matrix():
    bad = np.array([[1.0, 1.0], [0.1, 0.2]])
    with pytest.raises(CertificateError):
        verify_norm_lower_bound(bad, s=2, box=2)


def test_nonzero_coordinates(cube_matrix):
    assert nonzero_coordinates_check(cube_matrix, [1, 0, 0, 0, -2, 3])
    assert not nonzero_coordinates_check(cube_matrix, [0] * 6)
    assert not nonzero_coordinates_check(np.array([[1.0, -1.0]]), [1, 1])
