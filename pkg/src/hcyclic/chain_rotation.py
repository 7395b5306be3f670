"""
Rotation of Jordan chains of an h-cyclic matrix around the eigenvalue orbit.

If ``x_1, ..., x_r`` is a right Jordan chain of a block-cyclic matrix for
``lam``, scaling block ``l`` of ``x_j`` by ``(w^k)^alpha(l, j)`` gives a right
chain for ``lam * w^k``.  Left chains rotate the same way with the index
order of ``alpha`` swapped.
"""

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .graph_structure import PartitionError
from .matrix_core import RootsOfUnity, as_matrix, inf_norm

Side = Literal["right", "left"]


def alpha(i, j, h):
    """``(i - j) mod h`` with the nonnegative representative."""
    if int(h) != h or h < 2:
        raise ValueError(f"h must be an integer >= 2, got {h!r}")
    return (int(i) - int(j)) % int(h)


@dataclass(frozen=True)
class JordanChain:
    side: Side
    eigenvalue: complex
    vectors: tuple = field(repr=False)

    def __post_init__(self):
        if self.side not in ("right", "left"):
            raise ValueError(f"side must be 'right' or 'left', got {self.side!r}")
        vecs = tuple(np.array(v, dtype=np.complex128).reshape(-1) for v in self.vectors)
        if not vecs:
            raise ValueError("a Jordan chain needs at least one vector")
        if len({v.size for v in vecs}) != 1:
            raise ValueError("chain vectors must share one dimension")
        for v in vecs:
            v.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "eigenvalue", complex(self.eigenvalue))

    @property
    def length(self):
        return len(self.vectors)

    @property
    def dim(self):
        return self.vectors[0].size

    def as_columns(self):
        """Vectors stacked as columns, ``n x r``."""
        return np.column_stack(self.vectors)

    def scaled(self, c):
        """Chain with every vector multiplied by ``c`` (still a valid chain)."""
        return JordanChain(self.side, self.eigenvalue, [c * v for v in self.vectors])


@dataclass
class ChainResidual:
    """Per-link residuals of a chain check (infinity norms)."""

    residuals: list
    tol: float

    @property
    def max_residual(self):
        return max(self.residuals)

    @property
    def passed(self):
        return self.max_residual <= self.tol

    def __bool__(self):
        return self.passed


def chain_residuals(A, chain):
    """Residual of each defining relation of ``chain`` against ``A``.

    Right: ``A x_1 - lam x_1`` and ``A x_j - x_(j-1) - lam x_j``.
    Left:  ``y_r^T A - lam y_r^T`` and ``y_j^T A - lam y_j^T - y_(j+1)^T``.
    """
    A = as_matrix(A)
    if chain.dim != A.shape[0]:
        raise ValueError(f"chain dimension {chain.dim} does not match matrix {A.shape}")
    lam = chain.eigenvalue
    V = chain.as_columns()
    r = chain.length
    if chain.side == "right":
        R = A @ V - lam * V
        R[:, 1:] -= V[:, :-1]
    else:
        R = A.T @ V - lam * V
        R[:, :-1] -= V[:, 1:]
    return [float(np.max(np.abs(R[:, j]))) for j in range(r)]


def default_chain_tol(A, chain, rtol=1e-9):
    """``rtol * max(1, ||A||_inf) * max(1, max ||v||_inf)``."""
    vnorm = max(inf_norm(v) for v in chain.vectors)
    return rtol * max(1.0, inf_norm(as_matrix(A))) * max(1.0, vnorm)


def verify_chain(A, chain, tol=None):
    """Check the chain relations; returns a :class:`ChainResidual`."""
    res = chain_residuals(A, chain)
    if tol is None:
        tol = default_chain_tol(A, chain)
    return ChainResidual(res, float(tol))


def _block_factors(chain, k, P, alpha_fn):
    if not P.is_consecutive():
        raise PartitionError("chains rotate against a consecutive partition only; "
                             "apply consecutive_permutation first")
    if chain.dim != P.n:
        raise ValueError(f"chain dimension {chain.dim} != partition size {P.n}")
    h = P.h
    if int(k) != k or not 0 <= k < h:
        raise ValueError(f"k must lie in 0..{h - 1}, got {k!r}")
    roots = RootsOfUnity(h)
    cls = P.class_of() + 1  # 1-based block index for every row
    factors = []
    for j in range(1, chain.length + 1):
        if chain.side == "right":
            e = np.array([alpha_fn(l, j, h) for l in range(1, h + 1)])
        else:
            e = np.array([alpha_fn(j, l, h) for l in range(1, h + 1)])
        factors.append(roots.powers[(k * e[cls - 1]) % h])
    return roots, factors


def rotate_chain(chain, k, P, *, alpha_fn=alpha):
    """Rotate a right or left chain to eigenvalue ``lam * w^k``.

    ``k == 0`` returns ``chain`` itself, untouched.
    """
    roots, factors = _block_factors(chain, k, P, alpha_fn)
    if k == 0:
        return chain
    vecs = [f * v for f, v in zip(factors, chain.vectors)]
    return JordanChain(chain.side, chain.eigenvalue * roots.powers[k], vecs)


def rotate_right_chain(chain, k, P, *, alpha_fn=alpha):
    if chain.side != "right":
        raise ValueError("expected a right chain")
    return rotate_chain(chain, k, P, alpha_fn=alpha_fn)


def rotate_left_chain(chain, k, P, *, alpha_fn=alpha):
    if chain.side != "left":
        raise ValueError("expected a left chain")
    return rotate_chain(chain, k, P, alpha_fn=alpha_fn)


def rotate_all(chain, P, *, alpha_fn=alpha):
    """The ``h`` chains for ``lam * w^k``, ``k = 0..h-1``."""
    return [rotate_chain(chain, k, P, alpha_fn=alpha_fn) for k in range(P.h)]

