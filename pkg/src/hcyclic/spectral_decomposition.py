"""
Eigenstructure of small dense h-cyclic matrices and the component matrices
``A_lam``.

The pipeline is: cluster the spectrum, group clusters into orbits
``{lam w^k}``, compute Jordan chains only for one base eigenvalue per orbit,
rotate them to fill ``Z``, and read the left chains from the rows of
``Z^-1``.  Each orbit then yields a component matrix, built either as
``Z diag(0, .., J(lam nu_h, r), .., 0) Z^-1`` or directly from the base
chains with the block formula; the two routes are compared in the tests.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.sparse.csgraph import connected_components

from .chain_rotation import JordanChain, rotate_all
from .graph_structure import (
    CyclicStructure, OrderedPartition, build_digraph, cyclic_characteristic_matrix,
    detect_cyclic_structure,
    digraph_contained_in, permute, unpermute,
)
from .matrix_core import as_matrix, direct_sum, inf_norm, jordan_block, orbit_jordan_form, RootsOfUnity


class DecompositionError(RuntimeError):
    """Eigenstructure could not be determined reliably."""


class OrbitPairingError(DecompositionError):
    """Some eigenvalue has no partner ``lam w^k`` in the computed spectrum."""


class AmbiguousRankError(DecompositionError):
    """A singular value sits too close to the rank threshold to decide."""


class RankGapWarning(UserWarning):
    """Singular values near a rank decision are within 10^3 of the threshold."""


class SingularInputWarning(UserWarning):
    """Zero eigenvalues present; components cover the nonzero orbits only."""


class IllConditionedWarning(UserWarning):
    pass


@dataclass(eq=False)
class EigenCluster:
    value: complex          # mean of the members
    multiplicity: int
    members: np.ndarray = field(repr=False)


def _norm_scale(A):
    return max(inf_norm(A), np.finfo(float).tiny)


def eigen_clusters(A, tol=1e-4):
    """Raw eigenvalues grouped by single linkage at distance ``tol * ||A||_inf``.

    The loose default accommodates the ``eps**(1/r)`` spread of a perturbed
    Jordan block of size ``r``; the cluster mean is accurate to ``O(eps)``.
    """
    A = as_matrix(A)
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"eigensolver failed: {exc}") from exc
    radius = tol * _norm_scale(A)
    close = np.abs(ev[:, None] - ev[None, :]) <= radius
    ncomp, labels = connected_components(close, directed=False)
    clusters = []
    for c in range(ncomp):
        mem = ev[labels == c]
        clusters.append(EigenCluster(complex(mem.mean()), int(mem.size), mem))
    clusters.sort(key=lambda c: (-round(abs(c.value), 8), round(np.angle(c.value) % (2 * np.pi), 8)))
    return clusters


def eigendecompose(A, tol=1e-4):
    """Distinct eigenvalues with algebraic multiplicities, as ``(value, mult)`` pairs."""
    return [(c.value, c.multiplicity) for c in eigen_clusters(A, tol)]


def _invariant_subspace(A, cluster, radius):
    """Orthonormal basis of the invariant subspace for one eigenvalue cluster."""
    m = cluster.multiplicity
    spread = float(np.max(np.abs(cluster.members - cluster.value)))
    for r in (2.0 * spread + 1e-3 * radius, radius):
        T, Q, sdim = sla.schur(A, output="complex",
                               sort=lambda z, c=cluster.value, r=r: abs(z - c) <= r)
        if sdim == m:
            return Q[:, :m], T[:m, :m]
    raise DecompositionError(
        f"reordered Schur form isolated {sdim} eigenvalues near {cluster.value:.6g}, expected {m}")


def _check_rank_band(s, thr):
    near = s[(s > thr / 10.0) & (s < thr * 10.0)]
    if near.size:
        raise AmbiguousRankError(
            f"singular value {near[0]:.3e} within a factor 10 of rank threshold {thr:.3e}")
    if np.any((s >= thr * 10.0) & (s < thr * 1e3)):
        warnings.warn(f"singular-value gap near rank threshold {thr:.3e} is below 10^3",
                      RankGapWarning, stacklevel=3)


def _nullspace_ladder(M, thr):
    """Nested orthonormal bases of ``null(M^k)``, ``k = 1..p``."""
    m = M.shape[0]
    levels = []
    basis = np.zeros((m, 0), dtype=np.complex128)
    while basis.shape[1] < m:
        B = M - basis @ (basis.conj().T @ M)
        _, s, Vh = np.linalg.svd(B)
        _check_rank_band(s, thr)
        N = Vh[s <= thr].conj().T
        if N.shape[1] <= basis.shape[1] or len(levels) >= m:
            raise DecompositionError("generalized eigenspace ladder did not terminate")
        levels.append(N)
        basis = N
    return levels


def _orth(V):
    if V.shape[1] == 0:
        return V
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    keep = s > 1e-10 * max(s[0], 1e-300)
    return U[:, keep]


def _chains_from_nilpotent(M, thr):
    """Jordan chains (as m-vectors, bottom first) of a numerically nilpotent ``M``."""
    levels = _nullspace_ladder(M, thr)
    dims = [0] + [L.shape[1] for L in levels]
    p = len(levels)
    tops = []  # (length, top vector)
    for k in range(p, 0, -1):
        longer = [(s, t) for s, t in tops if s > k]
        count = (dims[k] - dims[k - 1]) - len(longer)
        if count <= 0:
            continue
        span = [levels[k - 2]] if k >= 2 else []
        for s, t in longer:
            span.append(np.linalg.matrix_power(M, s - k) @ t[:, None])
        W = _orth(np.hstack(span)) if span else np.zeros((M.shape[0], 0), dtype=np.complex128)
        K = levels[k - 1]
        C = K - W @ (W.conj().T @ K)
        _, _, Vh = np.linalg.svd(C)
        for q in range(count):
            v = K @ Vh[q].conj()
            tops.append((k, v / np.linalg.norm(v)))
    chains = []
    for k, t in sorted(tops, key=lambda st: -st[0]):
        vecs = [t]
        for _ in range(k - 1):
            vecs.append(M @ vecs[-1])
        chains.append(vecs[::-1])
    return chains


def jordan_chains_for(A, lam, tol=1e-8, cluster_tol=1e-4):
    """Maximal set of right Jordan chains for the eigenvalue cluster nearest ``lam``.

    Works in the invariant subspace from a reordered Schur form, where the
    cluster block ``T11`` minus its mean is nilpotent up to rounding; the
    nullspace ladder of that block decides the chain lengths with singular
    value threshold ``tol * ||A - lam I||_2``.  All chains carry the cluster
    mean as eigenvalue.
    """
    A = as_matrix(A)
    clusters = eigen_clusters(A, cluster_tol)
    radius = cluster_tol * _norm_scale(A)
    best = min(clusters, key=lambda c: abs(c.value - lam))
    if abs(best.value - lam) > radius:
        raise DecompositionError(f"{lam} is not within tolerance of the spectrum")
    Q1, T11 = _invariant_subspace(A, best, radius)
    m = best.multiplicity
    mu = complex(np.trace(T11) / m)
    M = T11 - mu * np.eye(m)
    thr = tol * max(np.linalg.norm(A - mu * np.eye(A.shape[0]), 2), np.finfo(float).tiny)
    out = []
    for vecs in _chains_from_nilpotent(M, thr):
        out.append(JordanChain("right", mu, [Q1 @ v for v in vecs]))
    return out


@dataclass
class SpectralOrbit:
    """One base chain and its ``h`` rotations, with matching left chains."""

    base_eigenvalue: complex
    chain_length: int
    right_chains: list
    left_chains: list = field(default_factory=list)
    offset: int = 0         # first column of this orbit in Z

    @property
    def h(self):
        return len(self.right_chains)

    @property
    def eigenvalues(self):
        return [c.eigenvalue for c in self.right_chains]

    @property
    def size(self):
        return self.h * self.chain_length


@dataclass
class OrbitBasis:
    """``Z^-1 A Z = J`` in the consecutive frame of ``A``.

    ``perm`` is the 0-based ordering that brings ``A`` into consecutive form;
    ``Z``, ``J`` and every chain live in that frame.
    """

    Z: np.ndarray
    Zinv: np.ndarray
    J: np.ndarray
    orbits: list
    zero_chains: list
    partition: OrderedPartition
    perm: np.ndarray
    residual: float
    condition: float

    @property
    def block_count(self):
        """Number of Jordan blocks of nonzero eigenvalues."""
        return sum(o.h for o in self.orbits)

    @property
    def orbit_count(self):
        return len(self.orbits)


def _base_choice(values, h):
    """Orbit member with argument in ``[0, 2 pi / h)``."""
    def key(z):
        a = np.angle(z) % (2 * np.pi)
        return 0.0 if a > 2 * np.pi - 1e-9 else a
    return min(values, key=key)


def _pair_orbits(clusters, h, tol):
    roots = RootsOfUnity(h)
    free = list(clusters)
    groups = []
    while free:
        lead = max(free, key=lambda c: abs(c.value))
        group = []
        for w in roots.powers:
            target = lead.value * w
            cand = min(free, key=lambda c: abs(c.value - target))
            if abs(cand.value - target) > tol or cand in group or cand.multiplicity != lead.multiplicity:
                raise OrbitPairingError(
                    f"eigenvalue {lead.value:.6g} (multiplicity {lead.multiplicity}) has no "
                    f"partner near {target:.6g}")
            group.append(cand)
        for c in group:
            free.remove(c)
        groups.append(group)
    return groups


def build_orbit_basis(A, S, tol=1e-8, cluster_tol=1e-4, orbit_tol=1e-8):
    """Assemble ``Z`` and ``J`` organised by eigenvalue orbits.

    Parameters
    ----------
    A : array_like
        Square matrix, h-cyclic with the structure ``S``.
    S : CyclicStructure
        From :func:`detect_cyclic_structure`; ``S.h >= 2``.
    tol : float
        Rank threshold for chain computation and the ``AZ = ZJ`` residual test.
    cluster_tol, orbit_tol : float
        Relative tolerances for eigenvalue clustering and orbit pairing.

    Raises
    ------
    OrbitPairingError, DecompositionError
    """
    A = as_matrix(A)
    if S.h < 2:
        raise ValueError("build_orbit_basis needs an h-cyclic structure with h >= 2")
    h = S.h
    perm = np.asarray(S.consecutive_permutation)
    B = permute(A, perm)
    P = S.consecutive_partition()
    scale = _norm_scale(B)

    clusters = eigen_clusters(B, cluster_tol)
    zero = [c for c in clusters if abs(c.value) <= orbit_tol * scale]
    nonzero = [c for c in clusters if abs(c.value) > orbit_tol * scale]
    groups = _pair_orbits(nonzero, h, orbit_tol * scale)
    groups.sort(key=lambda g: (-abs(g[0].value), np.angle(_base_choice([c.value for c in g], h)) % (2 * np.pi)))

    orbits = []
    cols, blocks = [], []
    for g in groups:
        base = _base_choice([c.value for c in g], h)
        for chain in jordan_chains_for(B, base, tol, cluster_tol):
            rotated = rotate_all(chain, P)
            orbit = SpectralOrbit(chain.eigenvalue, chain.length, rotated, offset=len(cols))
            for c in rotated:
                cols.extend(c.vectors)
            blocks.append(orbit_jordan_form(chain.eigenvalue, chain.length, h))
            orbits.append(orbit)

    zero_chains = []
    if zero:
        warnings.warn("matrix is singular; components are built for nonzero orbits only",
                      SingularInputWarning, stacklevel=2)
        for chain in jordan_chains_for(B, 0.0, tol, cluster_tol):
            zero_chains.append(chain)
            cols.extend(chain.vectors)
            blocks.append(jordan_block(chain.eigenvalue, chain.length))

    n = B.shape[0]
    if len(cols) != n:
        raise DecompositionError(f"found {len(cols)} chain vectors for a {n}x{n} matrix")
    Z = np.column_stack(cols)
    J = direct_sum(blocks)
    cond = float(np.linalg.cond(Z))
    if not np.isfinite(cond) or cond > 1e12:
        raise DecompositionError(f"Z is numerically singular (condition {cond:.3e})")
    if cond > 1.0 / tol:
        warnings.warn(f"Z is ill-conditioned (condition {cond:.3e})", IllConditionedWarning, stacklevel=2)
    Zinv = np.linalg.inv(Z)
    residual = inf_norm(B @ Z - Z @ J)
    if residual > tol * scale * inf_norm(Z):
        raise DecompositionError(f"||AZ - ZJ|| = {residual:.3e} exceeds tolerance")

    for o in orbits:
        r = o.chain_length
        for k in range(h):
            c0 = o.offset + k * r
            rows = [Zinv[c0 + j, :] for j in range(r)]
            o.left_chains.append(JordanChain("left", o.right_chains[k].eigenvalue, rows))
    return OrbitBasis(Z, Zinv, J, orbits, zero_chains, P, perm, residual, cond)


@dataclass
class ComponentMatrix:
    """Component ``A_lam`` of one orbit, in the consecutive frame.

    ``blocks[l]`` is the ``(l, l+1 mod h)`` block.  ``matrix_original``
    undoes the consecutive permutation.
    """

    base_eigenvalue: complex
    matrix: np.ndarray
    blocks: list
    partition: OrderedPartition
    perm: np.ndarray
    orbit: SpectralOrbit = field(default=None, repr=False)

    @property
    def matrix_original(self):
        return unpermute(self.matrix, self.perm)

    @property
    def h(self):
        return self.partition.h

    def reassemble(self):
        """Matrix rebuilt from ``blocks`` alone."""
        n = self.partition.n
        out = np.zeros((n, n), dtype=np.complex128)
        sl = self.partition.slices()
        for ell, blk in enumerate(self.blocks):
            out[sl[ell], sl[(ell + 1) % self.h]] = blk
        return out


def _cyclic_blocks(M, P):
    sl = P.slices()
    return [M[sl[ell], sl[(ell + 1) % P.h]].copy() for ell in range(P.h)]


def component_via_similarity(basis, i):
    """``Z diag(0, .., J(lam_i nu_h, r_i), .., 0) Z^-1`` for orbit ``i``."""
    if not 0 <= i < len(basis.orbits):
        raise IndexError(f"orbit index {i} out of range 0..{len(basis.orbits) - 1}")
    o = basis.orbits[i]
    a, b = o.offset, o.offset + o.size
    M = basis.Z[:, a:b] @ basis.J[a:b, a:b] @ basis.Zinv[a:b, :]
    return ComponentMatrix(o.base_eigenvalue, M, _cyclic_blocks(M, basis.partition),
                           basis.partition, basis.perm, o)


def component_via_blocks(orbit, P, perm=None):
    """Component of ``orbit`` from its base right and left chains.

    Block ``(l, l+1)`` is
    ``lam h sum_j x_lj y_j(l+1)^T + h sum_(j<r) x_lj y_(j+1)(l+1)^T``.
    The left chain must be biorthogonal to the right one (rows of ``Z^-1``).
    """
    x = orbit.right_chains[0]
    y = orbit.left_chains[0]
    if x.length != y.length:
        raise ValueError(f"right chain length {x.length} != left chain length {y.length}")
    h, r, lam = P.h, x.length, x.eigenvalue
    sl = P.slices()
    blocks = []
    for ell in range(h):
        a, b = sl[ell], sl[(ell + 1) % h]
        blk = lam * h * sum(np.outer(x.vectors[j][a], y.vectors[j][b]) for j in range(r))
        for j in range(r - 1):
            blk = blk + h * np.outer(x.vectors[j][a], y.vectors[j + 1][b])
        blocks.append(blk)
    if perm is None:
        perm = np.arange(P.n)
    comp = ComponentMatrix(lam, None, blocks, P, np.asarray(perm), orbit)
    comp.matrix = comp.reassemble()
    return comp


@dataclass
class Check:
    """One numeric claim with the tolerance it was checked against."""

    name: str
    value: float
    tol: float
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "value": self.value, "tol": self.tol,
                "passed": self.passed, "detail": self.detail}


@dataclass
class ComponentReport:
    checks: list
    orbit_count: int
    block_count: int

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]


def eigen_label(z, digits=6):
    """Short text form of an eigenvalue with rounding noise dropped."""
    z = complex(z)
    small = 10.0 ** -(digits + 4) * max(1.0, abs(z))
    re = 0.0 if abs(z.real) < small else z.real
    im = 0.0 if abs(z.imag) < small else z.imag
    return f"{re:.{digits}g}" if im == 0 else f"{re:.{digits}g}{im:+.{digits}g}i"


def verify_component_properties(A, components, S, tol=1e-9, containment_tol=1e-10,
                                block_count=None):
    """Check containment, commutation, annihilation, reconstruction, cyclic index.

    ``A`` and ``S`` are in the original frame; components are mapped back
    through their stored permutation.
    """
    A = as_matrix(A)
    nA = inf_norm(A)
    mats = [c.matrix_original for c in components]
    checks = []
    for c, M in zip(components, mats):
        label = eigen_label(c.base_eigenvalue)
        nM = inf_norm(M)
        ztol = containment_tol * nM
        off = float(np.max(np.abs(M[S.characteristic == 0]), initial=0.0))
        checks.append(Check(f"containment[{label}]", off, ztol,
                            digraph_contained_in(M, S.characteristic, ztol),
                            "max |entry| outside dg(chi_Pi)"))
        comm = inf_norm(A @ M - M @ A)
        checks.append(Check(f"commutation[{label}]", comm, tol * nA * nM, comm <= tol * nA * nM))
        pattern = cyclic_characteristic_matrix(c.partition, c.partition.n)
        blocks_ok = np.array_equal(c.reassemble(), c.matrix * pattern)
        checks.append(Check(f"blocks_reassemble[{label}]", 0.0 if blocks_ok else 1.0, 0.0, blocks_ok,
                            "blocks rebuild the on-pattern part exactly"))
    for i in range(len(mats)):
        for j in range(len(mats)):
            if i == j:
                continue
            v = inf_norm(mats[i] @ mats[j])
            t = tol * inf_norm(mats[i]) * inf_norm(mats[j])
            checks.append(Check(f"annihilation[{i},{j}]", v, t, v <= t))
    if mats:
        rec = inf_norm(sum(mats) - A)
        checks.append(Check("reconstruction", rec, tol * nA, rec <= tol * nA,
                            "||sum A_lam - A||_inf"))
    for c, M in zip(components, mats):
        o = c.orbit
        if o is None or o.chain_length != 1 or not o.left_chains:
            continue
        x = o.right_chains[0].vectors[0]
        y = o.left_chains[0].vectors[0]
        if np.min(np.abs(x)) <= 1e-8 * np.max(np.abs(x)) or np.min(np.abs(y)) <= 1e-8 * np.max(np.abs(y)):
            continue
        ztol = containment_tol * inf_norm(M)
        T = detect_cyclic_structure(M, ztol)
        same = build_digraph(M, ztol) == build_digraph(S.characteristic, 0.0)
        checks.append(Check(f"cyclic_index[{eigen_label(c.base_eigenvalue)}]", float(T.h), 0.0,
                            T.h == S.h and same, f"expected h={S.h} and dg(A_lam) = dg(chi_Pi)"))
    if block_count is None:
        block_count = sum(c.orbit.h for c in components if c.orbit is not None)
    return ComponentReport(checks, len(components), block_count)


def components(basis, route="similarity"):
    """All components of ``basis`` by the chosen route."""
    if route == "similarity":
        return [component_via_similarity(basis, i) for i in range(len(basis.orbits))]
    if route == "blocks":
        return [component_via_blocks(o, basis.partition, basis.perm) for o in basis.orbits]
    raise ValueError(f"unknown route {route!r}")


def group_by_eigenvalue(comps, h, tol=1e-8):
    """Sum components whose base eigenvalues share an orbit.

    Components for one eigenvalue with several chains are individually
    gauge dependent; their sum is not.
    """
    roots = RootsOfUnity(h)
    out = []
    for c in comps:
        for entry in out:
            if np.min(np.abs(entry[0] * roots.powers - c.base_eigenvalue)) <= tol * max(1.0, abs(entry[0])):
                entry[1] = entry[1] + c.matrix_original
                break
        else:
            out.append([c.base_eigenvalue, c.matrix_original.copy()])
    return [(lam, M) for lam, M in out]


def orbit_members(lam, h):
    return [lam * w for w in RootsOfUnity(h).powers]


__all__ = [
    "AmbiguousRankError", "Check", "ComponentMatrix", "ComponentReport", "CyclicStructure",
    "DecompositionError", "EigenCluster", "IllConditionedWarning", "OrbitBasis",
    "OrbitPairingError", "RankGapWarning", "SingularInputWarning", "SpectralOrbit",
    "build_orbit_basis", "component_via_blocks", "component_via_similarity", "components",
    "eigen_clusters", "eigendecompose", "group_by_eigenvalue", "jordan_chains_for",
    "orbit_members", "verify_component_properties",
]
