import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment
from hypothesis import given, settings
from hypothesis import strategies as st

from hcyclic.matrix_core import (
    RootsOfUnity, as_matrix, circulant, circulant_rotation_matrix, cycle_matrix,
    direct_sum, hadamard, inf_norm, jordan_block, omega, orbit_jordan_form,
)


@pytest.mark.parametrize("h", range(2, 13))
def test_roots_of_unity_invariants(h):
    R = RootsOfUnity(h)
    assert abs(R.omega - np.exp(2j * np.pi / h)) < 1e-15
    assert np.all(np.abs(np.abs(R.powers) - 1) < 1e-14)
    assert abs(R.omega**h - 1) < 1e-14
    for ell in range(1, h):
        assert abs(np.sum(R.powers**ell)) < 1e-12
    assert R.power(h + 1) == R.power(1)
    assert R.power(-1) == R.power(h - 1)
    np.testing.assert_array_equal(R.nu, R.powers)


def test_roots_of_unity_rejects_small_h():
    with pytest.raises(ValueError):
        RootsOfUnity(1)
    with pytest.raises(ValueError):
        RootsOfUnity(2.5)


def test_as_matrix_and_norm():
    M = as_matrix([[1, -2], [3, 4]])
    assert M.dtype == np.complex128
    assert inf_norm(M) == 7.0
    assert inf_norm(np.array([1, -5, 2])) == 5.0
    with pytest.raises(ValueError):
        as_matrix([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(ValueError):
        as_matrix([1, 2])
    assert as_matrix([[1, 2, 3]], square=False).shape == (1, 3)


def test_hadamard_examples(rng):
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    np.testing.assert_array_equal(hadamard(A, np.ones((4, 4))), A)
    np.testing.assert_array_equal(hadamard(A, np.zeros((4, 4))), 0)
    K = cycle_matrix(3)
    np.testing.assert_array_equal(hadamard(K, K), K)
    with pytest.raises(ValueError):
        hadamard(np.ones((2, 2)), np.ones((3, 3)))


def test_circulant_orientation():
    np.testing.assert_array_equal(circulant([0, 1, 0]), [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    np.testing.assert_array_equal(circulant([5]), [[5]])
    C = circulant([1, 2, 3, 4])
    # row 2 starts with the last entry of c
    np.testing.assert_array_equal(C[1], [4, 1, 2, 3])
    with pytest.raises(ValueError):
        circulant([])


def test_circulant_is_transposed_scipy():
    from scipy.linalg import circulant as sp_circulant
    c = np.arange(1, 6)
    np.testing.assert_array_equal(circulant(c), sp_circulant(c).T)


def test_cycle_matrix():
    K3 = cycle_matrix(3)
    assert {tuple(ij + 1) for ij in np.argwhere(K3 != 0)} == {(1, 2), (2, 3), (3, 1)}
    np.testing.assert_array_equal(np.linalg.matrix_power(K3, 3), np.eye(3))
    with pytest.raises(ValueError):
        cycle_matrix(1)


def test_direct_sum_examples():
    np.testing.assert_array_equal(direct_sum([[[7]]]), [[7]])
    np.testing.assert_array_equal(direct_sum([np.eye(2), np.eye(3)]), np.eye(5))
    w = omega(3)
    D = direct_sum([jordan_block(1, 1), jordan_block(w, 1), jordan_block(w**2, 1)])
    np.testing.assert_allclose(D, np.diag([1, w, w**2]), atol=1e-15)
    with pytest.raises(ValueError):
        direct_sum([np.ones((2, 3))])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.integers(0, 2**31))
def test_direct_sum_dimension_and_spectrum(sizes, seed):
    r = np.random.default_rng(seed)
    blocks = [r.standard_normal((m, m)) for m in sizes]
    D = direct_sum(blocks)
    assert D.shape == (sum(sizes),) * 2
    want = np.concatenate([np.linalg.eigvals(B) for B in blocks])
    got = np.linalg.eigvals(D)
    cost = np.abs(got[:, None] - want[None, :])
    r, c = linear_sum_assignment(cost)
    assert cost[r, c].max() < 1e-9


def test_jordan_block():
    np.testing.assert_array_equal(jordan_block(4, 1), [[4]])
    np.testing.assert_array_equal(jordan_block(0, 2), [[0, 1], [0, 0]])
    J = jordan_block(2, 3)
    assert np.allclose(np.linalg.eigvals(J), 2)
    assert np.linalg.matrix_rank(J - 2 * np.eye(3)) == 2     # geometric multiplicity 1
    with pytest.raises(ValueError):
        jordan_block(1, 0)


def test_orbit_jordan_form():
    w = omega(3)
    np.testing.assert_allclose(orbit_jordan_form(1, 1, 3), np.diag([1, w, w**2]), atol=1e-15)
    np.testing.assert_array_equal(orbit_jordan_form(0, 1, 2), np.zeros((2, 2)))
    J = orbit_jordan_form(2, 2, 2)
    np.testing.assert_allclose(J, direct_sum([jordan_block(2, 2), jordan_block(-2, 2)]), atol=1e-15)


def test_circulant_rotation_matrix_examples():
    w = omega(3)
    np.testing.assert_allclose(circulant_rotation_matrix(0, 3), np.ones((3, 3)), atol=1e-15)
    np.testing.assert_allclose(circulant_rotation_matrix(1, 3), circulant([w, 1, w**2]), atol=1e-15)
    S = sum(circulant_rotation_matrix(k, 3) for k in range(3))
    np.testing.assert_allclose(S, 3 * cycle_matrix(3), atol=1e-12)
    with pytest.raises(ValueError):
        circulant_rotation_matrix(3, 3)
    with pytest.raises(ValueError):
        circulant_rotation_matrix(-1, 3)


@pytest.mark.parametrize("h", range(2, 9))
def test_circulant_rotation_entry_formula(h):
    w = omega(h)
    for k in range(h):
        C = circulant_rotation_matrix(k, h)
        i, j = np.indices((h, h))
        np.testing.assert_allclose(C, w ** (k * ((i - j + 1) % h)), atol=1e-13)
