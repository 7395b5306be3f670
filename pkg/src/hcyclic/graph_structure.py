"""
Combinatorial structure of a square matrix: its digraph, strong
connectivity, index of imprimitivity (period), cyclic partitions and the
cyclic characteristic matrix.

Vertices are 1-based throughout the public API to match the usual matrix
indexing; internally everything is converted to 0-based numpy indices.
"""

from collections import deque
from dataclasses import dataclass
from math import gcd

import numpy as np

from .matrix_core import as_matrix


class NotStronglyConnectedError(ValueError):
    """The digraph is not strongly connected (the matrix is reducible)."""


class AperiodicUndefinedError(ValueError):
    """The digraph has no closed walk, so its period is undefined."""


class PartitionError(ValueError):
    """An ordered partition is malformed or does not fit the digraph."""


@dataclass(frozen=True)
class Digraph:
    vertex_count: int
    arcs: frozenset

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("a digraph needs at least one vertex")
        arcs = frozenset((int(i), int(j)) for i, j in self.arcs)
        for i, j in arcs:
            if not (1 <= i <= self.vertex_count and 1 <= j <= self.vertex_count):
                raise ValueError(f"arc {(i, j)} outside 1..{self.vertex_count}")
        object.__setattr__(self, "arcs", arcs)

    def successors(self):
        """0-based adjacency lists."""
        adj = [[] for _ in range(self.vertex_count)]
        for i, j in sorted(self.arcs):
            adj[i - 1].append(j - 1)
        return adj

    def adjacency(self):
        """0/1 integer adjacency matrix."""
        M = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int64)
        for i, j in self.arcs:
            M[i - 1, j - 1] = 1
        return M


@dataclass(frozen=True)
class OrderedPartition:
    """Ordered list of disjoint, nonempty, 1-based index classes."""

    classes: tuple

    def __post_init__(self):
        classes = tuple(tuple(sorted(int(v) for v in c)) for c in self.classes)
        if not classes:
            raise PartitionError("partition has no classes")
        seen = set()
        for c in classes:
            if not c:
                raise PartitionError("partition classes must be nonempty")
            if seen.intersection(c):
                raise PartitionError("partition classes overlap")
            seen.update(c)
        object.__setattr__(self, "classes", classes)

    @property
    def h(self):
        return len(self.classes)

    @property
    def n(self):
        return sum(len(c) for c in self.classes)

    @property
    def sizes(self):
        return tuple(len(c) for c in self.classes)

    def check_covers(self, n):
        allv = sorted(v for c in self.classes for v in c)
        if allv != list(range(1, n + 1)):
            raise PartitionError(f"partition does not cover 1..{n} exactly")

    def is_consecutive(self):
        start = 1
        for c in self.classes:
            if c != tuple(range(start, start + len(c))):
                return False
            start += len(c)
        return True

    def class_of(self):
        """0-based array mapping vertex index to 0-based class index."""
        out = np.empty(self.n, dtype=np.int64)
        for ell, c in enumerate(self.classes):
            out[np.asarray(c) - 1] = ell
        return out

    def slices(self):
        """Row ranges of each class, for a consecutive partition."""
        if not self.is_consecutive():
            raise PartitionError("partition is not consecutive")
        out, start = [], 0
        for size in self.sizes:
            out.append(slice(start, start + size))
            start += size
        return out

    @classmethod
    def consecutive(cls, sizes):
        """Consecutive partition with the given class sizes."""
        classes, start = [], 1
        for s in sizes:
            classes.append(range(start, start + s))
            start += s
        return cls(tuple(tuple(c) for c in classes))

    def to_list(self):
        return [list(c) for c in self.classes]


@dataclass(frozen=True)
class CyclicStructure:
    """Detected cyclic structure of an irreducible matrix.

    ``h == 1`` encodes the primitive outcome, with a single-class partition.
    ``consecutive_permutation`` is 0-based: ``A[np.ix_(p, p)]`` is in
    consecutive block-cyclic form.
    """

    h: int
    partition: OrderedPartition
    consecutive_permutation: np.ndarray
    characteristic: np.ndarray

    @property
    def primitive(self):
        return self.h == 1

    def consecutive_partition(self):
        return OrderedPartition.consecutive(self.partition.sizes)


def default_zero_tol(A):
    """0 for integer-valued input, else ``1e-12 * max|a_ij|``."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    if np.issubdtype(A.dtype, np.integer) or np.issubdtype(A.dtype, np.bool_):
        return 0.0
    if np.all(A == np.round(A.real)):
        return 0.0
    return 1e-12 * float(np.max(np.abs(A)))


def _resolve_tol(A, zero_tol):
    if zero_tol is None:
        return default_zero_tol(A)
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    return float(zero_tol)


def build_digraph(A, zero_tol=None):
    """Digraph with an arc ``(i, j)`` wherever ``|a_ij| > zero_tol``."""
    M = as_matrix(A)
    tol = _resolve_tol(M, zero_tol)
    rows, cols = np.nonzero(np.abs(M) > tol)
    return Digraph(M.shape[0], frozenset(zip((rows + 1).tolist(), (cols + 1).tolist())))


def _bfs_distances(adj, root=0):
    dist = [-1] * len(adj)
    dist[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def is_strongly_connected(G):
    """True iff every vertex reaches every other; one vertex always counts."""
    if G.vertex_count == 1:
        return True
    adj = G.successors()
    if min(_bfs_distances(adj)) < 0:
        return False
    radj = [[] for _ in range(G.vertex_count)]
    for u, succ in enumerate(adj):
        for v in succ:
            radj[v].append(u)
    return min(_bfs_distances(radj)) >= 0


def _period_and_levels(G):
    if not is_strongly_connected(G):
        raise NotStronglyConnectedError("digraph is not strongly connected")
    adj = G.successors()
    dist = _bfs_distances(adj, 0)
    g = 0
    for u, succ in enumerate(adj):
        for v in succ:
            g = gcd(g, abs(dist[u] + 1 - dist[v]))
    if g == 0:
        # only possible for one vertex without a loop
        raise AperiodicUndefinedError("digraph has no closed walk; period undefined")
    return g, dist


def index_of_imprimitivity(G):
    """gcd of all closed-walk lengths of a strongly connected digraph.

    Uses BFS levels ``d`` from vertex 1: the period is the gcd over arcs
    ``(u, v)`` of ``|d(u) + 1 - d(v)|``.
    """
    return _period_and_levels(G)[0]


def find_cyclic_partition(G, h):
    """Ordered partition ``pi_l = {v : d(v) = l - 1 (mod h)}`` anchored at vertex 1."""
    if int(h) != h or h < 2:
        raise PartitionError(f"h must be an integer >= 2, got {h!r}")
    period, dist = _period_and_levels(G)
    if period % h:
        raise PartitionError(f"h={h} does not divide the index of imprimitivity {period}")
    classes = [[] for _ in range(h)]
    for v, d in enumerate(dist):
        classes[d % h].append(v + 1)
    return OrderedPartition(tuple(tuple(c) for c in classes))


def cyclic_characteristic_matrix(P, n):
    """0/1 matrix with ones exactly at ``(i, j)``, ``i in pi_l``, ``j in pi_(l+1)``."""
    P.check_covers(n)
    cls = P.class_of()
    target = (cls + 1) % P.h
    chi = (cls[None, :] == target[:, None]).astype(np.complex128)
    return chi


def digraph_contained_in(A, chi, zero_tol=None):
    """True iff every entry of ``A`` above ``zero_tol`` sits on a 1 of ``chi``."""
    A = as_matrix(A)
    chi = as_matrix(chi, name="chi")
    if A.shape != chi.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {chi.shape}")
    tol = _resolve_tol(A, zero_tol)
    support = np.abs(A) > tol
    return bool(np.all(chi[support] != 0))


def consecutive_permutation(P):
    """0-based ordering listing pi_1 (ascending), then pi_2, and so on."""
    return np.array([v - 1 for c in P.classes for v in c], dtype=np.int64)


def permute(A, perm):
    """``P^T A P`` for the permutation given as a 0-based index order."""
    A = np.asarray(A)
    return A[np.ix_(perm, perm)]


def unpermute(A, perm):
    """Inverse of :func:`permute`."""
    inv = np.argsort(perm)
    return np.asarray(A)[np.ix_(inv, inv)]


def is_block_cyclic(A, P, zero_tol=0.0):
    """Check consecutive block form: nonzeros only in blocks (l, l+1 mod h)."""
    chi = cyclic_characteristic_matrix(OrderedPartition.consecutive(P.sizes), P.n)
    return digraph_contained_in(A, chi, zero_tol)


def detect_cyclic_structure(A, zero_tol=None):
    """Cyclic index, partition, consecutive permutation and ``chi`` of ``A``.

    Raises :class:`NotStronglyConnectedError` for reducible input.  A
    primitive matrix yields ``h == 1`` rather than an error.
    """
    M = as_matrix(A)
    G = build_digraph(M, zero_tol)
    if not is_strongly_connected(G):
        raise NotStronglyConnectedError("matrix is reducible (digraph not strongly connected)")
    h = index_of_imprimitivity(G)
    n = M.shape[0]
    if h == 1:
        P = OrderedPartition((tuple(range(1, n + 1)),))
        return CyclicStructure(1, P, np.arange(n), np.ones((n, n), dtype=np.complex128))
    P = find_cyclic_partition(G, h)
    return CyclicStructure(h, P, consecutive_permutation(P), cyclic_characteristic_matrix(P, n))
