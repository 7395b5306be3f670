"""
Dense complex matrix constructions used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; nothing here
wraps them.  The helpers cover roots of unity, circulants, the basic cycle
``K_n``, Hadamard products, direct sums, Jordan blocks, the orbit Jordan
form ``J(lambda nu_h, r)`` and the circulants ``C_k``.
"""

from dataclasses import dataclass, field

import numpy as np


def as_matrix(A, *, square=True, name="A"):
    """Return ``A`` as a 2-D complex128 array, optionally checking squareness."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    return M


def inf_norm(A):
    """Max absolute row sum (``||A||_inf``); works for vectors too."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    if A.ndim == 1:
        return float(np.max(np.abs(A)))
    return float(np.max(np.sum(np.abs(A), axis=1)))


@dataclass(frozen=True)
class RootsOfUnity:
    """The h-th roots of unity ``omega**0 .. omega**(h-1)``."""

    h: int
    omega: complex = field(init=False)
    powers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.h) != self.h or self.h < 2:
            raise ValueError(f"h must be an integer >= 2, got {self.h!r}")
        k = np.arange(self.h)
        # exact angles per power, rather than repeated multiplication
        powers = np.exp(2j * np.pi * k / self.h)
        powers.setflags(write=False)
        object.__setattr__(self, "omega", complex(powers[1]))
        object.__setattr__(self, "powers", powers)

    def power(self, e):
        """``omega**e`` for any integer ``e``, reduced mod h."""
        return complex(self.powers[int(e) % self.h])

    @property
    def nu(self):
        """The vector ``(1, omega, ..., omega**(h-1))``."""
        return self.powers.copy()


def omega(h):
    """Primitive h-th root of unity ``exp(2 pi i / h)``."""
    return RootsOfUnity(h).omega


def hadamard(A, B):
    """Entrywise product; shapes must agree."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return A * B


def circulant(c):
    """Circulant whose first row is ``c``.

    Each row is the previous one shifted right by one place, so row 2 starts
    with ``c[-1]``.  Note this is the transpose of ``scipy.linalg.circulant``,
    which takes the first *column*.
    """
    c = np.asarray(c, dtype=np.complex128).reshape(-1)
    n = c.size
    if n == 0:
        raise ValueError("circulant needs at least one entry")
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return c[idx]


def cycle_matrix(n):
    """The basic cycle ``K_n = circ(0, 1, 0, ..., 0)`` for ``n >= 2``."""
    if int(n) != n or n < 2:
        raise ValueError(f"cycle_matrix requires n >= 2, got {n!r}")
    c = np.zeros(n, dtype=np.complex128)
    c[1] = 1.0
    return circulant(c)


def direct_sum(blocks):
    """Block-diagonal assembly of square blocks."""
    mats = [as_matrix(B, name="block") for B in blocks]
    n = sum(M.shape[0] for M in mats)
    out = np.zeros((n, n), dtype=np.complex128)
    i = 0
    for M in mats:
        m = M.shape[0]
        out[i:i + m, i:i + m] = M
        i += m
    return out


def jordan_block(lam, r):
    """``r x r`` Jordan block with ``lam`` on the diagonal."""
    if int(r) != r or r < 1:
        raise ValueError(f"Jordan block size must be >= 1, got {r!r}")
    J = np.diag(np.full(r, lam, dtype=np.complex128))
    if r > 1:
        J += np.diag(np.ones(r - 1, dtype=np.complex128), 1)
    return J


def orbit_jordan_form(lam, r, h):
    """``J_r(lam) + J_r(lam w) + ... + J_r(lam w**(h-1))`` as a direct sum."""
    roots = RootsOfUnity(h)
    return direct_sum([jordan_block(lam * w, r) for w in roots.powers])


def circulant_rotation_matrix(k, h):
    """The ``h x h`` circulant ``C_k = circ(w^k, 1, (w^k)^(h-1), ..., (w^k)^2)``.

    Entry ``(i, j)`` equals ``(w^k)^((i - j + 1) mod h)``.
    """
    roots = RootsOfUnity(h)
    if int(k) != k or not 0 <= k < h:
        raise ValueError(f"k must lie in 0..{h - 1}, got {k!r}")
    # first row: exponents 1, 0, h-1, h-2, ..., 2
    exps = (1 - np.arange(h)) % h
    return circulant(roots.powers[(k * exps) % h])
