import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hcyclic.chain_rotation import (
    JordanChain, alpha, chain_residuals, default_chain_tol, rotate_all, rotate_chain,
    rotate_left_chain, rotate_right_chain, verify_chain,
)
from hcyclic.generators import planted_cyclic, random_planted
from hcyclic.graph_structure import OrderedPartition, PartitionError
from hcyclic.matrix_core import inf_norm, omega
from hcyclic.spectral_decomposition import eigen_clusters

EX2_P = OrderedPartition.consecutive([2, 2, 2])


# --- alpha ------------------------------------------------------------------

def test_alpha_examples():
    assert alpha(1, 1, 3) == 0
    assert alpha(2, 1, 3) == 1
    assert alpha(1, 2, 3) == 2
    with pytest.raises(ValueError):
        alpha(1, 2, 1)


@pytest.mark.parametrize("h", range(2, 9))
def test_alpha_identities_exhaustive(h):
    rng = range(-2 * h, 2 * h + 1)
    for i in rng:
        for j in rng:
            a = alpha(i, j, h)
            assert 0 <= a < h
            assert a == alpha(i + 1, j + 1, h)
            assert alpha(i + 1, j, h) == alpha(i, j - 1, h) == (a + 1) % h
            for ell in rng:
                assert a == (alpha(i, ell, h) + alpha(ell, j, h)) % h


# --- chains and verification -------------------------------------------------

def test_jordan_chain_validation():
    with pytest.raises(ValueError):
        JordanChain("up", 1, [[1, 0]])
    with pytest.raises(ValueError):
        JordanChain("right", 1, [])
    with pytest.raises(ValueError):
        JordanChain("right", 1, [[1, 0], [1, 0, 0]])
    c = JordanChain("right", 2, [[1, 0], [0, 1]])
    assert c.length == 2 and c.dim == 2
    with pytest.raises(ValueError):
        c.vectors[0][0] = 5     # stored read-only
    np.testing.assert_array_equal(c.scaled(2).as_columns(), 2 * np.eye(2))


def test_verify_chain_examples(ex2, ex2_Z):
    assert verify_chain(np.eye(3), JordanChain("right", 1, [[1, 0, 0]])).max_residual == 0
    res = verify_chain(ex2, JordanChain("right", 1, [ex2_Z[:, 0]]), 1e-12)
    assert res.passed
    bad = JordanChain("right", 1, [ex2_Z[:, 0] + np.eye(6)[0]])
    res = verify_chain(ex2, bad, 1e-9)
    assert not res.passed and not res
    with pytest.raises(ValueError):
        verify_chain(np.eye(2), JordanChain("right", 1, [[1, 0, 0]]))


def test_chain_residuals_left_and_right():
    J = np.array([[5.0, 1.0], [0.0, 5.0]])
    right = JordanChain("right", 5, [[1, 0], [0, 1]])
    left = JordanChain("left", 5, [[1, 0], [0, 1]])
    assert chain_residuals(J, right) == [0.0, 0.0]
    assert chain_residuals(J, left) == [0.0, 0.0]
    # the reversed order is not a chain
    assert max(chain_residuals(J, JordanChain("right", 5, [[0, 1], [1, 0]]))) > 0.5


def test_default_chain_tol_scales():
    A = 100 * np.eye(2)
    c = JordanChain("right", 100, [[10, 0]])
    assert default_chain_tol(A, c) == pytest.approx(1e-9 * 100 * 10)


# --- rotation ---------------------------------------------------------------

def test_rotate_example2_perron_chain(ex2, ex2_Z):
    x = JordanChain("right", 1, [np.ones(6)])
    x1 = rotate_right_chain(x, 1, EX2_P)
    np.testing.assert_allclose(x1.vectors[0], ex2_Z[:, 1], atol=1e-15)
    assert abs(x1.eigenvalue - omega(3)) < 1e-15
    assert verify_chain(ex2, x1, 1e-12).passed


def test_rotate_example2_left_chain(ex2, ex2_Z):
    Zi = np.linalg.inv(ex2_Z)
    y = JordanChain("left", 1, [Zi[0]])
    assert verify_chain(ex2, y, 1e-10).passed
    for k in range(3):
        yk = rotate_left_chain(y, k, EX2_P)
        assert verify_chain(ex2, yk, 1e-10).passed
        assert abs(yk.eigenvalue - omega(3) ** k) < 1e-15


def test_rotate_all_example2_matches_Z_columns(ex2, ex2_Z):
    chains = rotate_all(JordanChain("right", 1, [np.ones(6)]), EX2_P)
    assert len(chains) == 3
    for k, c in enumerate(chains):
        np.testing.assert_allclose(c.vectors[0], ex2_Z[:, k], atol=1e-15)


def test_k_zero_is_identity(rng):
    c = JordanChain("right", 1 + 2j, [rng.standard_normal(4), rng.standard_normal(4)])
    P = OrderedPartition.consecutive([2, 2])
    assert rotate_chain(c, 0, P) is c


def test_h2_rotation_flips_alternating_blocks():
    P = OrderedPartition.consecutive([2, 3])
    v = np.arange(1.0, 6.0)
    r = rotate_chain(JordanChain("left", 2.0, [v]), 1, P)
    np.testing.assert_allclose(r.vectors[0], [1, 2, -3, -4, -5], atol=1e-15)
    assert r.eigenvalue == pytest.approx(-2.0)


def test_rotate_argument_errors():
    c = JordanChain("right", 1, [np.ones(4)])
    P = OrderedPartition.consecutive([2, 2])
    with pytest.raises(ValueError, match="k must lie in 0..1"):
        rotate_chain(c, 2, P)
    with pytest.raises(ValueError):
        rotate_chain(c, -1, P)
    with pytest.raises(ValueError):
        rotate_chain(JordanChain("right", 1, [np.ones(5)]), 1, P)
    with pytest.raises(PartitionError):
        rotate_chain(c, 1, OrderedPartition(((1, 3), (2, 4))))
    with pytest.raises(ValueError):
        rotate_right_chain(JordanChain("left", 1, [np.ones(4)]), 1, P)
    with pytest.raises(ValueError):
        rotate_left_chain(c, 1, P)


def test_rotate_length_two_chain_on_2cyclic_6x6():
    rng = np.random.default_rng(5)
    inst = planted_cyclic(rng, 2, [(0.9 + 0.3j, 2), (0.4, 1)])
    assert inst.A.shape == (6, 6)
    x = inst.right_chains[0]
    x1 = rotate_chain(x, 1, inst.partition)
    assert abs(x1.eigenvalue + x.eigenvalue) < 1e-15
    assert verify_chain(inst.A, x1, 1e-9 * inf_norm(inst.A)).passed


def test_zero_eigenvalue_chain_rotates():
    rng = np.random.default_rng(11)
    inst = planted_cyclic(rng, 2, [(1.0, 1)], class_sizes=[2, 2])
    A = inst.A
    w, V = np.linalg.eig(A)
    v0 = V[:, np.argmin(np.abs(w))]
    chains = rotate_all(JordanChain("right", 0.0, [v0]), inst.partition)
    for c in chains:
        assert c.eigenvalue == 0
        assert verify_chain(A, c, 1e-10).passed


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_rotated_chains_verify_and_compose(seed):
    r = np.random.default_rng(seed)
    inst = random_planted(r, hs=(2, 3, 4, 5), max_n=24, max_len=3, singular=bool(seed % 2))
    P, A = inst.partition, inst.A
    tol = 1e-9 * inf_norm(A)
    h = P.h
    for chain in inst.right_chains + inst.left_chains:
        rot = rotate_all(chain, P)
        for k, c in enumerate(rot):
            assert abs(c.eigenvalue - chain.eigenvalue * omega(h) ** k) < 1e-14
            assert verify_chain(A, c, tol).passed
        for k1 in range(h):
            for k2 in range(h):
                twice = rotate_chain(rot[k1], k2, P)
                direct = rot[(k1 + k2) % h]
                for a, b in zip(twice.vectors, direct.vectors):
                    assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, inf_norm(a))


def _jordan_blocks(J):
    """(eigenvalue, size) of each block of an upper bidiagonal Jordan matrix."""
    d, sup = np.diag(J), np.diag(J, 1)
    out, start = [], 0
    for i in range(len(d)):
        if i == len(d) - 1 or sup[i] == 0:
            out.append((d[start], i - start + 1))
            start = i + 1
    return out


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_orbit_closure_and_block_replication(seed):
    r = np.random.default_rng(seed)
    inst = random_planted(r, hs=(2, 3, 4), max_n=18, max_len=2)
    A, h = inst.A, inst.h
    # cluster means are accurate even where a defective eigenvalue splits
    means = np.array([c.value for c in eigen_clusters(A)])
    blocks = _jordan_blocks(inst.J)
    for lam, _ in inst.orbits:
        sizes0 = sorted(s for mu, s in blocks if abs(mu - lam) < 1e-12)
        for k in range(h):
            mu_k = lam * omega(h) ** k
            assert np.min(np.abs(means - mu_k)) <= 1e-8 * inf_norm(A)
            assert sorted(s for mu, s in blocks if abs(mu - mu_k) < 1e-12) == sizes0
