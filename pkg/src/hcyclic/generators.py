"""
Random test instances with known structure.

``planted_cyclic`` builds an h-cyclic matrix together with its exact Jordan
chains: pick, for every class of a consecutive partition, a well-conditioned
matrix whose columns are the class blocks of the base right chains, rotate
each chain around its orbit to fill ``Z``, and set ``A = Z J Z^-1``.  The
construction forces ``A`` into block-cyclic form up to rounding, and the
rounding is removed by zeroing the off-pattern entries.
"""

from dataclasses import dataclass

import numpy as np

from .chain_rotation import JordanChain, alpha
from .graph_structure import (
    OrderedPartition, build_digraph, cyclic_characteristic_matrix,
    index_of_imprimitivity, is_strongly_connected,
)
from .matrix_core import RootsOfUnity, direct_sum, orbit_jordan_form


@dataclass
class PlantedInstance:
    A: np.ndarray
    partition: OrderedPartition
    Z: np.ndarray
    J: np.ndarray
    orbits: list            # [(base eigenvalue, chain length)], in Z order
    right_chains: list      # base (k = 0) right chain per orbit
    left_chains: list       # base (k = 0) left chain per orbit, from Z^-1

    @property
    def h(self):
        return self.partition.h

    @property
    def n(self):
        return self.A.shape[0]


def random_well_conditioned(rng, m, cond=10.0, complex_=True):
    """``U diag(s) V^H`` with singular values log-uniform in ``[1, cond]``."""
    def unitary():
        G = rng.standard_normal((m, m))
        if complex_:
            G = G + 1j * rng.standard_normal((m, m))
        Q, R = np.linalg.qr(G)
        return Q * (np.diag(R) / np.abs(np.diag(R)))

    s = np.exp(rng.uniform(0.0, np.log(cond), m))
    return (unitary() * s) @ unitary().conj().T


def random_orbit_bases(rng, count, h, *, modulus=(0.5, 1.5), sep=0.15, max_tries=1000):
    """``count`` base eigenvalues whose h-orbits are pairwise ``sep`` apart."""
    roots = RootsOfUnity(h)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("could not place well-separated orbits")
        lam = rng.uniform(*modulus) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        orbit = lam * roots.powers
        if np.min(np.abs(orbit[:, None] - orbit[None, :]) + np.eye(h) * 1e9) < sep:
            continue
        if all(np.min(np.abs(orbit[:, None] - mu * roots.powers[None, :])) >= sep for mu in out):
            out.append(complex(lam))
    return out


def random_chain_lengths(rng, m, max_len=3):
    """Random composition of ``m`` into parts of size at most ``max_len``."""
    parts = []
    while m > 0:
        r = int(rng.integers(1, min(max_len, m) + 1))
        parts.append(r)
        m -= r
    return parts


def planted_cyclic(rng, h, orbits, *, class_sizes=None, cond=10.0):
    """h-cyclic matrix with planted Jordan structure.

    Parameters
    ----------
    rng : numpy.random.Generator
    h : int
        Number of classes, ``h >= 2``.
    orbits : list of (complex, int)
        Base eigenvalue and chain length of each planted orbit; the orbit
        contributes ``J_r(lam w^k)`` for ``k = 0..h-1``.
    class_sizes : sequence of int, optional
        Class sizes, each at least ``m = sum(r)``.  Sizes above ``m`` embed
        the nonsingular core through full-rank maps, adding zero eigenvalues.
    cond : float
        Condition bound for the per-class chain matrices.
    """
    roots = RootsOfUnity(h)
    m = sum(r for _, r in orbits)
    X = [random_well_conditioned(rng, m, cond) for _ in range(h)]

    cols, blocks = [], []
    start = 0
    for lam, r in orbits:
        for k in range(h):
            for j in range(1, r + 1):
                col = np.concatenate([
                    roots.power(k * alpha(ell, j, h)) * X[ell - 1][:, start + j - 1]
                    for ell in range(1, h + 1)
                ])
                cols.append(col)
        blocks.append(orbit_jordan_form(lam, r, h))
        start += r
    Z = np.column_stack(cols)
    J = direct_sum(blocks)
    Zinv = np.linalg.inv(Z)
    P0 = OrderedPartition.consecutive([m] * h)

    A = Z @ J @ Zinv
    A = A * cyclic_characteristic_matrix(P0, h * m)

    if class_sizes is not None:
        if len(class_sizes) != h or min(class_sizes) < m:
            raise ValueError(f"need {h} class sizes, each >= {m}")
        E_blocks, L_blocks = [], []
        for size in class_sizes:
            E = random_well_conditioned(rng, size, cond)[:, :m]
            E_blocks.append(E)
            L_blocks.append(np.linalg.pinv(E))
        E = _block_diag_rect(E_blocks)
        L = _block_diag_rect(L_blocks)
        A = E @ A @ L
        P = OrderedPartition.consecutive(class_sizes)
        A = A * cyclic_characteristic_matrix(P, P.n)
        Zr = E @ Z
        Zl = Zinv @ L
    else:
        P = P0
        Zr, Zl = Z, Zinv

    right, left = [], []
    c = 0
    for lam, r in orbits:
        right.append(JordanChain("right", lam, [Zr[:, c + j] for j in range(r)]))
        left.append(JordanChain("left", lam, [Zl[c + j, :] for j in range(r)]))
        c += h * r
    return PlantedInstance(A, P, Zr, J, list(orbits), right, left)


def _block_diag_rect(blocks):
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.complex128)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def random_planted(rng, *, hs=(2, 3, 4), max_n=24, max_len=3, singular=False, cond=10.0):
    """Random :func:`planted_cyclic` instance within the given limits."""
    h = int(rng.choice(hs))
    m_max = max_n // h
    if singular:
        m_max = max(1, m_max - 1)
    m = int(rng.integers(1, m_max + 1))
    lengths = random_chain_lengths(rng, m, max_len)
    bases = random_orbit_bases(rng, len(lengths), h)
    sizes = None
    if singular:
        extra = rng.integers(0, 2, size=h)
        extra[rng.integers(h)] = 1
        sizes = [int(m + e) for e in extra]
        if sum(sizes) > max_n:
            sizes = None
    return planted_cyclic(rng, h, list(zip(bases, lengths)), class_sizes=sizes, cond=cond)


def random_nonnegative_cyclic(rng, h, sizes, density=0.7, max_tries=200):
    """Real nonnegative irreducible matrix with cyclic index exactly ``h``.

    Blocks ``(l, l+1)`` get uniform entries kept with probability
    ``density``, topped up so no row or column of a block is empty.  Draws
    are repeated until the digraph is strongly connected with period ``h``.
    """
    P = OrderedPartition.consecutive(sizes)
    n = P.n
    chi = cyclic_characteristic_matrix(P, n).real
    sl = P.slices()
    for _ in range(max_tries):
        mask = (rng.random((n, n)) < density) & (chi > 0)
        # every row and column of each block gets at least one arc
        for ell in range(h):
            a, b = sl[ell], sl[(ell + 1) % h]
            blk = mask[a, b]
            for i in np.flatnonzero(~blk.any(axis=1)):
                blk[i, rng.integers(blk.shape[1])] = True
            for j in np.flatnonzero(~blk.any(axis=0)):
                blk[rng.integers(blk.shape[0]), j] = True
            mask[a, b] = blk
        A = rng.uniform(0.1, 1.0, (n, n)) * mask
        G = build_digraph(A, 0.0)
        if is_strongly_connected(G) and index_of_imprimitivity(G) == h:
            return A, P
    raise RuntimeError("failed to draw an irreducible matrix with the requested period")


def random_strong_digraph_matrix(rng, n, max_tries=1000):
    """0/1 matrix of a random strongly connected digraph on ``n`` vertices.

    Half the draws are cyclically partitioned (arcs only between consecutive
    classes of a random partition) so that periods above 1 show up often.
    """
    for _ in range(max_tries):
        if n > 1 and rng.random() < 0.5:
            h = int(rng.integers(2, n + 1))
            cls = rng.permutation(np.arange(n) % h)
            allowed = (cls[None, :] == (cls[:, None] + 1) % h)
        else:
            allowed = np.ones((n, n), dtype=bool)
        p = rng.uniform(0.15, 0.7)
        M = (allowed & (rng.random((n, n)) < p)).astype(np.int64)
        if n == 1 and M[0, 0] == 0:
            continue
        if is_strongly_connected(build_digraph(M, 0.0)):
            return M
    raise RuntimeError("failed to draw a strongly connected digraph")
