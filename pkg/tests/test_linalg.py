import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from linalg_module import (  # noqa: E402
    GF2,
    SingularMatrixError,
    Subspace,
    SubspaceError,
    _rref_table,
    as_matrix,
    field_spec,
    identity,
    inverse,
    is_invertible,
    kernel,
    matrix_power,
    multiply,
    quotient,
    quotient_map,
    random_invertible,
    random_matrix,
    random_subspace,
    rank,
    rref,
    solve,
    spin,
)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def test_field_tables():
    gf8 = field_spec(3)
    assert gf8.order == 8 and not gf8.is_prime
    for a in range(1, 8):
        assert gf8.mul(a, gf8.inv(a)) == 1
    assert str(gf8) == "GF(8)"
    assert field_spec(3) is gf8


def test_field_degree_out_of_range():
    with pytest.raises(ValueError):
        field_spec(9)


def test_transvection_squares_to_identity():
    A = as_matrix([[1, 1], [0, 1]])
    assert np.array_equal(multiply(A, A), identity(2))
    assert np.array_equal(matrix_power(A, 5), A)


def test_gf4_product_matches_scalar_tables(rng):
    gf4 = field_spec(2)
    A = random_matrix(5, 4, rng, gf4)
    B = random_matrix(4, 3, rng, gf4)
    expected = np.zeros((5, 3), dtype=np.uint8)
    for i in range(5):
        for j in range(3):
            acc = 0
            for k in range(4):
                acc ^= gf4.mul(int(A[i, k]), int(B[k, j]))
            expected[i, j] = acc
    assert np.array_equal(multiply(A, B, gf4), expected)


def test_rref_tracks_transform(rng):
    A = random_matrix(12, 20, rng)
    R, r, T = rref(A)
    assert np.array_equal(multiply(T, A), R)
    assert r == rank(A)
    assert not R[r:].any()


def test_packed_rref_agrees_with_table_rref_on_wide_matrices(rng):
    A = random_matrix(70, 150, rng)
    R1, r1, _ = rref(A)
    R2, r2, _ = _rref_table(A, GF2, False)
    assert r1 == r2
    assert np.array_equal(R1[:r1], R2[:r2])


def test_kernel_vectors_are_annihilated(rng):
    A = random_matrix(6, 10, rng)
    K = kernel(A)
    assert K.dim == 10 - rank(A)
    assert not multiply(A, K.basis.T.copy()).any()


def test_solve_consistent_and_inconsistent():
    A = as_matrix([[1, 0], [0, 1], [1, 1]])
    x = solve(A, np.array([1, 0, 1], dtype=np.uint8))
    assert x is not None and list(x) == [1, 0]
    assert solve(A, np.array([1, 1, 1], dtype=np.uint8)) is None


def test_inverse_and_singular(rng):
    A = random_invertible(9, rng)
    assert is_invertible(A)
    assert np.array_equal(multiply(A, inverse(A)), identity(9))
    with pytest.raises(SingularMatrixError):
        inverse(as_matrix([[1, 1], [1, 1]]))


def test_subspace_dimension_formula(rng):
    U = random_subspace(12, 7, rng)
    W = random_subspace(12, 8, rng)
    assert U.sum(W).dim + U.intersection(W).dim == U.dim + W.dim
    assert U.sum(W).contains(U)
    assert U.contains(U.intersection(W))


def test_subspace_canonical_basis_is_equality(rng):
    U = random_subspace(10, 4, rng)
    shuffled = Subspace.from_rows(multiply(random_invertible(4, rng), U.basis), 10)
    assert shuffled == U


def test_quotient_dimension_and_kernel():
    rng = np.random.default_rng(2024)
    for trial in range(50):
        n = int(rng.integers(2, 14))
        dv = int(rng.integers(1, n + 1))
        V = random_subspace(n, dv, rng)
        du = int(rng.integers(0, dv))
        U = Subspace.from_rows(multiply(random_matrix(du, dv, rng), V.basis), n) if du else Subspace.zero(n)
        projection, dim = quotient_map(V, U)
        assert dim == V.dim - U.dim, trial
        assert projection.shape == (dim, n)
        if U.dim:
            assert not multiply(projection, U.basis.T.copy()).any(), trial
        assert rank(multiply(projection, V.basis.T.copy())) == dim, trial
        K = kernel(multiply(projection, V.basis.T.copy()))
        assert K.dim == U.dim, trial
        if K.dim:
            assert Subspace.from_rows(multiply(K.basis, V.basis), n) == U, trial


def test_quotient_by_line_in_plane():
    V = Subspace.from_rows(as_matrix([[1, 0], [0, 1]]), 2)
    U = Subspace.from_rows(as_matrix([[1, 1]]), 2)
    q = quotient(V, U)
    assert q.dimension == 1
    assert not multiply(q.projection, U.basis.T.copy()).any()


def test_quotient_over_gf4():
    gf4 = field_spec(2)
    rng = np.random.default_rng(5)
    V = random_subspace(8, 5, rng, gf4)
    U = Subspace.from_rows(V.basis[1:3], 8, gf4)
    q = quotient(V, U)
    assert q.dimension == 3
    assert not multiply(q.projection, U.basis.T.copy(), gf4).any()


def test_quotient_requires_containment():
    V = Subspace.from_rows(as_matrix([[1, 0, 0]]), 3)
    U = Subspace.from_rows(as_matrix([[0, 1, 0]]), 3)
    with pytest.raises(SubspaceError):
        quotient(V, U)


def test_spin_under_cyclic_shift():
    shift = np.roll(identity(5), 1, axis=0)
    e0 = np.zeros(5, dtype=np.uint8)
    e0[0] = 1
    assert spin([e0], [shift]).dim == 5
    ones = np.ones(5, dtype=np.uint8)
    assert spin([ones], [shift]).dim == 1


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_inverse_over_many_trials(degree):
    fld = field_spec(degree)
    rng = np.random.default_rng(100 + degree)
    for trial in range(100):
        n = int(rng.integers(1, 12))
        A = random_invertible(n, rng, fld)
        assert np.array_equal(multiply(A, inverse(A, fld), fld), identity(n)), trial


def test_rref_is_idempotent_and_rank_nullity():
    rng = np.random.default_rng(31)
    for trial in range(40):
        rows, cols = (int(v) for v in rng.integers(1, 40, size=2))
        A = random_matrix(rows, cols, rng)
        R, r, _ = rref(A)
        R2, r2, _ = rref(R)
        assert r2 == r and np.array_equal(R2, R), trial
        assert rank(A) + kernel(A).dim == cols, trial


def test_subspace_equality_is_double_inclusion():
    rng = np.random.default_rng(17)
    for trial in range(30):
        U = random_subspace(9, int(rng.integers(1, 10)), rng)
        W = random_subspace(9, int(rng.integers(1, 10)), rng)
        assert (U == W) == (U.contains(W) and W.contains(U)), trial
        mixed = Subspace.from_rows(multiply(random_invertible(U.dim, rng), U.basis), 9)
        assert mixed.contains(U) and U.contains(mixed)
        assert mixed == U
