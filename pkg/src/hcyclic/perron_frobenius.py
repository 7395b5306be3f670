"""
Perron-Frobenius checks for nonnegative irreducible (possibly imprimitive)
matrices, and the nonnegative Perron component ``A_1``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph_structure import build_digraph, default_zero_tol, is_strongly_connected
from .matrix_core import RootsOfUnity, as_matrix, inf_norm
from .spectral_decomposition import Check, ComponentMatrix, eigen_clusters


class ConvergenceError(RuntimeError):
    pass


@dataclass
class PerronData:
    spectral_radius: float
    right: np.ndarray       # positive, ||x||_1 = 1
    left: np.ndarray        # positive, y^T x = 1
    cyclic_index: int
    iterations: int
    right_residual: float
    left_residual: float


def is_nonnegative_irreducible(A, zero_tol=None):
    """True iff ``A`` is (numerically) real, entrywise >= 0 and irreducible."""
    M = as_matrix(A)
    tol = default_zero_tol(M) if zero_tol is None else zero_tol
    if np.max(np.abs(M.imag), initial=0.0) > tol:
        raise ValueError("matrix has complex entries beyond zero_tol")
    if np.min(M.real, initial=0.0) < -tol:
        return False
    return is_strongly_connected(build_digraph(M.real, tol))


def _power_vector(B, shift, tol, max_iter):
    n = B.shape[0]
    v = np.full(n, 1.0 / n)
    C = B + shift * np.eye(n)
    rho = 0.0
    for it in range(1, max_iter + 1):
        w = C @ v
        w /= w.sum()
        # shifted matrix is positive-diagonal irreducible, so w stays positive
        rho = float((B @ w).sum() / w.sum())
        if np.max(np.abs(B @ w - rho * w)) <= tol * max(rho, 1.0) * np.max(w):
            return rho, w, it
        v = w
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def _polish(B, rho, v, steps=2):
    """A couple of inverse-iteration steps at the converged shift."""
    n = B.shape[0]
    shift = rho * (1 + 1e-13) + 1e-300
    for _ in range(steps):
        try:
            w = np.linalg.solve(B - shift * np.eye(n), v)
        except np.linalg.LinAlgError:
            break
        w = w / w.sum()
        if not np.all(w > 0):
            break
        v = w
    rho = float((B @ v).sum() / v.sum())
    return rho, v


def perron_data(A, tol=1e-10, max_iter=100000, cyclic_index=None):
    """Spectral radius with positive right/left Perron vectors.

    Power iteration runs on ``A + ||A||_inf I``: for irreducible ``A >= 0``
    that shift leaves ``rho + ||A||_inf`` as the only eigenvalue of maximal
    modulus, which the plain iteration lacks when ``A`` is imprimitive.
    ``x`` is scaled to unit 1-norm and ``y`` so that ``y^T x = 1``.
    """
    M = as_matrix(A)
    if not is_nonnegative_irreducible(M):
        raise ValueError("perron_data needs a nonnegative irreducible matrix")
    B = M.real.copy()
    s = inf_norm(B)
    rho, x, it_r = _power_vector(B, s, tol, max_iter)
    rho, x = _polish(B, rho, x)
    _, y, it_l = _power_vector(B.T, s, tol, max_iter)
    _, y = _polish(B.T, rho, y)
    x = x / x.sum()
    y = y / (y @ x)
    return PerronData(
        spectral_radius=rho, right=x, left=y,
        cyclic_index=cyclic_index if cyclic_index is not None else 0,
        iterations=it_r + it_l,
        right_residual=float(np.max(np.abs(B @ x - rho * x))),
        left_residual=float(np.max(np.abs(y @ B - rho * y))),
    )


def _match_multisets(a, b):
    """Largest distance in the optimal pairing of two equal-size point sets."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.size != b.size:
        return np.inf
    if a.size == 0:
        return 0.0
    D = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(D)
    return float(D[r, c].max())


@dataclass
class PeripheralReport:
    spectral_radius: float
    peripheral: list
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def check_peripheral_rotation(A, h, tol=1e-8, cluster_tol=1e-4):
    """Peripheral spectrum equals ``rho * Omega_h`` and ``w * sigma(A) = sigma(A)``.

    Eigenvalues are taken as cluster means with multiplicity; both
    comparisons are multiset matchings (optimal assignment) with the largest
    paired distance checked against ``tol * max(1, rho)``.  Also
    checks ``rho > 0`` and that ``rho`` is a simple eigenvalue.
    """
    M = as_matrix(A)
    clusters = eigen_clusters(M, cluster_tol)
    # cluster means are accurate even where a defective eigenvalue scatters
    ev = np.concatenate([np.full(c.multiplicity, c.value) for c in clusters])
    rho = float(np.max(np.abs(ev)))
    atol = tol * max(1.0, rho)
    peripheral = ev[np.abs(np.abs(ev) - rho) <= max(atol, cluster_tol * rho)]
    checks = [Check("rho_positive", rho, 0.0, rho > 0)]
    target = rho * RootsOfUnity(h).powers if h >= 2 else np.array([rho])
    d = _match_multisets(peripheral, target)
    checks.append(Check("peripheral_spectrum", d, atol, d <= atol,
                        f"{peripheral.size} peripheral eigenvalues vs rho*Omega_{h}"))
    d = _match_multisets(RootsOfUnity(h).omega * ev, ev) if h >= 2 else 0.0
    checks.append(Check("spectrum_rotation", d, atol, d <= atol, "omega*sigma(A) vs sigma(A)"))
    mult = sum(c.multiplicity for c in clusters if abs(c.value - rho) <= max(atol, cluster_tol * rho))
    checks.append(Check("rho_simple", float(mult), 1.0, mult == 1, "algebraic multiplicity of rho"))
    return PeripheralReport(rho, [complex(z) for z in peripheral], checks)


def perron_component(A, pd, S, rho_tol=1e-8):
    """``A_1 = h [x_l y_(l+1)^T]`` in cyclic block positions, for ``rho = 1``.

    Blocks are indexed by the partition classes directly, so no consecutive
    permutation is needed; the returned component carries one anyway for
    consistency with the spectral routes.
    """
    if abs(pd.spectral_radius - 1.0) > rho_tol:
        raise ValueError(f"perron_component needs rho = 1, got {pd.spectral_radius!r}; scale A first")
    h = S.h
    n = S.partition.n
    x = pd.right.astype(np.complex128)
    y = pd.left.astype(np.complex128)
    classes = [np.asarray(c) - 1 for c in S.partition.classes]
    M = np.zeros((n, n), dtype=np.complex128)
    for ell in range(h):
        a, b = classes[ell], classes[(ell + 1) % h]
        M[np.ix_(a, b)] = h * np.outer(x[a], y[b])
    perm = np.asarray(S.consecutive_permutation)
    P = S.consecutive_partition()
    Mc = M[np.ix_(perm, perm)]
    sl = P.slices()
    blocks = [Mc[sl[ell], sl[(ell + 1) % h]].copy() for ell in range(h)]
    return ComponentMatrix(1.0 + 0j, Mc, blocks, P, perm)
