"""
Randomized property suites, reproducible from a single seed.

Each instance draws from ``default_rng([seed, suite_id, index])``, so any
failure can be replayed from the triple printed with it.
"""

import time
import warnings
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .chain_rotation import alpha, rotate_chain, verify_chain
from .generators import (
    random_nonnegative_cyclic, random_planted, random_strong_digraph_matrix,
)
from .graph_structure import build_digraph, detect_cyclic_structure, index_of_imprimitivity
from .matrix_core import inf_norm
from .perron_frobenius import check_peripheral_rotation, perron_component, perron_data
from .spectral_decomposition import (
    SingularInputWarning, build_orbit_basis, component_via_blocks, component_via_similarity,
)

SUITES = ("rotation", "components", "perron", "period")
_SUITE_ID = {name: i for i, name in enumerate(SUITES)}


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    worst: float = 0.0      # largest relative residual seen


@dataclass
class SelftestResult:
    seed: int
    suites: list

    @property
    def passed(self):
        return all(s.failed == 0 for s in self.suites)

    def render(self):
        lines = [f"selftest seed={self.seed}"]
        for s in self.suites:
            lines.append(f"  {s.name:<11} pass={s.passed:<4} fail={s.failed:<4} "
                         f"worst={s.worst:.2e} time={s.seconds:.2f}s")
            for f in s.failures[:10]:
                lines.append(f"    replay: seed={self.seed} suite={s.name} index={f['index']} {f['params']} "
                             f"-> {f['reason']}")
        lines.append("ALL PASS" if self.passed else "FAILURES")
        return "\n".join(lines)


def instance_rng(seed, suite, index):
    return np.random.default_rng([seed, _SUITE_ID[suite], index])


def _composition_gap(chain, P, k1, k2, alpha_fn):
    once = rotate_chain(rotate_chain(chain, k1, P, alpha_fn=alpha_fn), k2, P, alpha_fn=alpha_fn)
    direct = rotate_chain(chain, (k1 + k2) % P.h, P, alpha_fn=alpha_fn)
    return max(float(np.max(np.abs(a - b))) for a, b in zip(once.vectors, direct.vectors))


def rotation_case(rng, *, max_n=24, alpha_fn=alpha, rtol=1e-9):
    """One planted instance; returns (ok, worst relative residual, params, reason)."""
    inst = random_planted(rng, hs=(2, 3, 4, 5), max_n=max_n, max_len=3,
                          singular=bool(rng.integers(2)))
    P, A = inst.partition, inst.A
    tol = rtol * inf_norm(A)
    params = {"h": inst.h, "n": inst.n, "orbits": [(complex(l), r) for l, r in inst.orbits]}
    worst = 0.0
    for chain in inst.right_chains + inst.left_chains:
        if rotate_chain(chain, 0, P, alpha_fn=alpha_fn) is not chain:
            return False, worst, params, "k=0 rotation is not the identity"
        for k in range(P.h):
            rc = rotate_chain(chain, k, P, alpha_fn=alpha_fn)
            res = verify_chain(A, rc, tol)
            worst = max(worst, res.max_residual / max(inf_norm(A), 1e-300))
            if not res.passed:
                return False, worst, params, f"{chain.side} chain k={k} residual {res.max_residual:.2e}"
        k1, k2 = (int(v) for v in rng.integers(0, P.h, size=2))
        gap = _composition_gap(chain, P, k1, k2, alpha_fn)
        if gap > 1e-12 * max(1.0, max(inf_norm(v) for v in chain.vectors)):
            return False, worst, params, f"composition k={k1}+{k2} off by {gap:.2e}"
    return True, worst, params, ""


def component_case(rng, *, max_n=24, rtol=1e-9, route_rtol=1e-8):
    inst = random_planted(rng, hs=(2, 3, 4), max_n=max_n, max_len=3)
    A = inst.A
    nA = inf_norm(A)
    params = {"h": inst.h, "n": inst.n, "orbits": [(complex(l), r) for l, r in inst.orbits]}
    S = detect_cyclic_structure(A)
    if S.h != inst.h:
        return False, 0.0, params, f"detected h={S.h}"
    basis = build_orbit_basis(A, S)
    sims = [component_via_similarity(basis, i) for i in range(len(basis.orbits))]
    blks = [component_via_blocks(o, basis.partition, basis.perm) for o in basis.orbits]
    rec = inf_norm(sum(c.matrix_original for c in sims) - A)
    route = max(float(np.max(np.abs(a.matrix - b.matrix))) for a, b in zip(sims, blks))
    worst = max(rec, route) / nA
    if rec > rtol * nA:
        return False, worst, params, f"reconstruction {rec:.2e}"
    if route > route_rtol * nA:
        return False, worst, params, f"route mismatch {route:.2e}"
    for c in sims:
        M = c.matrix_original
        nM = inf_norm(M)
        if inf_norm(A @ M - M @ A) > rtol * nA * nM:
            return False, worst, params, "commutation"
        if np.max(np.abs(M[S.characteristic == 0]), initial=0.0) > 1e-10 * nM:
            return False, worst, params, "containment"
    for i, a in enumerate(sims):
        for j, b in enumerate(sims):
            if i != j:
                Ma, Mb = a.matrix_original, b.matrix_original
                if inf_norm(Ma @ Mb) > rtol * inf_norm(Ma) * inf_norm(Mb):
                    return False, worst, params, f"annihilation {i},{j}"
    return True, worst, params, ""


def perron_case(rng, *, max_n=24, tol=1e-8):
    h = int(rng.integers(2, 5))
    sizes = [int(s) for s in rng.integers(1, max_n // h + 1, size=h)]
    A, _ = random_nonnegative_cyclic(rng, h, sizes)
    params = {"h": h, "sizes": sizes}
    S = detect_cyclic_structure(A)
    pd = perron_data(A, cyclic_index=S.h)
    if not (pd.spectral_radius > 0 and pd.right.min() > 0 and pd.left.min() > 0):
        return False, 0.0, params, "rho or Perron vectors not positive"
    rep = check_peripheral_rotation(A, S.h, tol)
    worst = max(c.value for c in rep.checks if c.name in ("peripheral_spectrum", "spectrum_rotation"))
    if not rep.passed:
        return False, worst, params, ", ".join(c.name for c in rep.checks if not c.passed)
    B = A / pd.spectral_radius
    pc = perron_component(B, perron_data(B), S)
    if pc.matrix.real.min() < -1e-10:
        return False, worst, params, "Perron component has negative entries"
    return True, worst, params, ""


def closed_walk_gcd(M):
    """gcd of the lengths L <= 2n with a nonzero diagonal entry in ``M^L``."""
    n = M.shape[0]
    B = (np.asarray(M) != 0).astype(np.int64)
    P = np.eye(n, dtype=np.int64)
    g = 0
    for L in range(1, 2 * n + 1):
        P = np.minimum(P @ B, 1)
        if np.any(np.diag(P)):
            g = gcd(g, L)
    return g


def period_case(rng, *, max_n=8):
    n = int(rng.integers(1, max_n + 1))
    M = random_strong_digraph_matrix(rng, n)
    got = index_of_imprimitivity(build_digraph(M, 0.0))
    want = closed_walk_gcd(M)
    return got == want, 0.0, {"n": n, "arcs": int(M.sum())}, "" if got == want else f"{got} != {want}"


_CASES = {
    "rotation": rotation_case,
    "components": component_case,
    "perron": perron_case,
    "period": period_case,
}


def run_suite(name, seed, count, **kwargs):
    res = SuiteResult(name)
    t0 = time.perf_counter()
    for index in range(count):
        rng = instance_rng(seed, name, index)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SingularInputWarning)
                ok, worst, params, reason = _CASES[name](rng, **kwargs)
        except Exception as exc:  # a crash is a failed instance, not a crashed run
            ok, worst, params, reason = False, 0.0, {}, f"{type(exc).__name__}: {exc}"
        res.worst = max(res.worst, worst)
        if ok:
            res.passed += 1
        else:
            res.failed += 1
            res.failures.append({"index": index, "params": params, "reason": reason})
    res.seconds = time.perf_counter() - t0
    return res


DEFAULT_COUNTS = {"rotation": 500, "components": 200, "perron": 100, "period": 500}


def run_selftest(seed=0, max_n=24, counts=None, suites=SUITES, alpha_fn=alpha):
    counts = {**DEFAULT_COUNTS, **(counts or {})}
    out = []
    for name in suites:
        kwargs = {}
        if name == "rotation":
            kwargs = {"max_n": max_n, "alpha_fn": alpha_fn}
        elif name in ("components", "perron"):
            kwargs = {"max_n": max_n}
        elif name == "period":
            kwargs = {"max_n": min(max_n, 8)}
        out.append(run_suite(name, seed, counts[name], **kwargs))
    return SelftestResult(seed, out)
