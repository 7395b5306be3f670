"""
End-to-end analysis: detect the cyclic structure, decompose, build and
verify the components, and run the Perron-Frobenius checks when the input is
nonnegative.  Produces an :class:`AnalysisReport` that renders as text or
as versioned JSON.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .chain_rotation import verify_chain
from .graph_structure import (
    AperiodicUndefinedError, NotStronglyConnectedError, default_zero_tol,
    detect_cyclic_structure,
)
from .matrix_core import as_matrix, inf_norm
from .matrix_io import cpair, matrix_to_json
from .perron_frobenius import (
    ConvergenceError, check_peripheral_rotation, is_nonnegative_irreducible,
    perron_component, perron_data,
)
from .spectral_decomposition import (
    Check, DecompositionError, build_orbit_basis, component_via_blocks,
    component_via_similarity, eigendecompose, verify_component_properties,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_REDUCIBLE = 3
EXIT_DECOMPOSITION = 4
EXIT_VERIFICATION = 5


@dataclass
class Tolerances:
    zero_tol: float = None      # None: 0 for integer input, else 1e-12 max|a_ij|
    chain_tol: float = 1e-9     # relative, for chain residuals and component checks
    orbit_tol: float = 1e-8     # relative, orbit pairing
    rank_tol: float = 1e-8      # relative, rank decisions in the chain ladder
    cluster_tol: float = 1e-4   # relative, eigenvalue clustering
    route_tol: float = 1e-8     # relative, similarity vs block formula

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class AnalysisReport:
    source: str
    n: int
    tolerances: Tolerances
    h: int = None
    partition: list = None
    permutation: list = None
    spectrum: list = field(default_factory=list)
    orbits: list = field(default_factory=list)
    components: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    perron: dict = None
    notes: list = field(default_factory=list)
    error: str = None
    exit_code: int = EXIT_OK

    @property
    def passed(self):
        return self.exit_code == EXIT_OK

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "source": self.source,
            "n": self.n,
            "h": self.h,
            "partition": self.partition,
            "consecutive_permutation": self.permutation,
            "spectrum": self.spectrum,
            "orbits": self.orbits,
            "components": self.components,
            "checks": [c.to_dict() for c in self.checks],
            "perron": self.perron,
            "tolerances": self.tolerances.to_dict(),
            "notes": self.notes,
            "error": self.error,
            "exit_code": self.exit_code,
            "passed": self.passed,
        }

    def render_text(self):
        out = [f"source: {self.source}  (n = {self.n})"]
        if self.h is not None:
            out.append(f"cyclic index h = {self.h}" + ("  (primitive)" if self.h == 1 else ""))
        if self.partition is not None:
            out.append("partition: " + "  ".join("{" + ",".join(map(str, c)) + "}" for c in self.partition))
        if self.spectrum:
            out.append("spectrum (value, multiplicity):")
            for s in self.spectrum:
                out.append(f"  {_fmt(complex(*s['value']))}  x{s['multiplicity']}")
        for i, o in enumerate(self.orbits):
            members = ", ".join(_fmt(complex(*z)) for z in o["members"])
            out.append(f"orbit {i}: base {_fmt(complex(*o['base']))}, r = {o['chain_length']}; {{{members}}}")
            out.append(f"  max right-chain residual {o['right_residual']:.2e}, "
                       f"left {o['left_residual']:.2e} (tol {o['residual_tol']:.2e})")
        for c in self.components:
            out.append(f"component A[{_fmt(complex(*c['base']))}]:")
            M = np.array([complex(*z) for z in c["matrix"]["entries"]]).reshape(c["matrix"]["rows"], -1)
            out.extend("  " + line for line in _fmt_matrix(M))
        if self.perron:
            p = self.perron
            out.append(f"perron: rho = {p['spectral_radius']:.15g}")
            out.append("  x = " + " ".join(f"{v:.6g}" for v in p["right"]))
            out.append("  y = " + " ".join(f"{v:.6g}" for v in p["left"]))
        if self.checks:
            out.append("checks:")
            for c in self.checks:
                flag = "PASS" if c.passed else "FAIL"
                out.append(f"  [{flag}] {c.name}: {c.value:.3e} (tol {c.tol:.3e}) {c.detail}".rstrip())
        out.extend(f"note: {n}" for n in self.notes)
        if self.error:
            out.append(f"error: {self.error}")
        out.append(f"status: {'ok' if self.passed else 'FAILED'} (exit {self.exit_code})")
        return "\n".join(out)


def _fmt(z, digits=6):
    z = complex(z)
    re = 0.0 if abs(z.real) < 10 ** -(digits + 6) else z.real
    im = 0.0 if abs(z.imag) < 10 ** -(digits + 6) else z.imag
    if im == 0:
        return f"{re:.{digits}g}"
    return f"{re:.{digits}g}{im:+.{digits}g}i"


def _fmt_matrix(M, digits=5):
    cells = [[_fmt(z, digits) for z in row] for row in M]
    width = max(len(c) for row in cells for c in row)
    return [" ".join(c.rjust(width) for c in row) for row in cells]


def _chain_tol(A, chain, rtol):
    return rtol * max(1.0, inf_norm(A)) * max(1.0, max(inf_norm(v) for v in chain.vectors))


def analyze(A, source="<matrix>", tol=None, allow_primitive=False, perron=True):
    """Run the full pipeline on ``A`` and return an :class:`AnalysisReport`.

    Never raises for bad input; failures are reported through ``exit_code``
    (3 reducible or primitive, 4 decomposition failure, 5 failed check).
    """
    tol = tol or Tolerances()
    A = as_matrix(A)
    zero_tol = default_zero_tol(A) if tol.zero_tol is None else tol.zero_tol
    tol = Tolerances(**{**tol.to_dict(), "zero_tol": zero_tol})
    rep = AnalysisReport(source, A.shape[0], tol)

    try:
        S = detect_cyclic_structure(A, zero_tol)
    except (NotStronglyConnectedError, AperiodicUndefinedError) as exc:
        rep.error = str(exc)
        rep.exit_code = EXIT_REDUCIBLE
        return rep
    rep.h = S.h
    rep.partition = S.partition.to_list()
    rep.permutation = [int(i) + 1 for i in S.consecutive_permutation]
    rep.spectrum = [{"value": cpair(v), "multiplicity": m}
                    for v, m in eigendecompose(A, tol.cluster_tol)]

    if S.primitive:
        if not allow_primitive:
            rep.error = "primitive matrix: no cyclic structure with h >= 2"
            rep.exit_code = EXIT_REDUCIBLE
            return rep
        rep.notes.append("primitive matrix (h = 1); components not built")
    else:
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                basis = build_orbit_basis(A, S, tol.rank_tol, tol.cluster_tol, tol.orbit_tol)
            rep.notes.extend(str(w.message) for w in caught)
        except DecompositionError as exc:
            rep.error = f"{type(exc).__name__}: {exc}"
            rep.exit_code = EXIT_DECOMPOSITION
            return rep
        if basis.zero_chains:
            rep.notes.append("zero eigenvalue present: outside the nonsingular setting; "
                             "components cover nonzero orbits only")
        _fill_components(rep, A, S, basis, tol)

    if perron and _nonnegative(A, zero_tol):
        try:
            _fill_perron(rep, A, S, tol)
        except ConvergenceError as exc:
            rep.notes.append(f"perron: {exc}")
            rep.checks.append(Check("perron_convergence", 1.0, 0.0, False, str(exc)))

    if not all(c.passed for c in rep.checks):
        rep.exit_code = EXIT_VERIFICATION
    return rep


def _nonnegative(A, zero_tol):
    try:
        return is_nonnegative_irreducible(A, zero_tol)
    except ValueError:
        return False


def _fill_components(rep, A, S, basis, tol):
    B = A[np.ix_(basis.perm, basis.perm)]
    nA = inf_norm(A)
    sims, blocks = [], []
    for i, o in enumerate(basis.orbits):
        rres = [verify_chain(B, c, _chain_tol(B, c, tol.chain_tol)) for c in o.right_chains]
        lres = [verify_chain(B, c, _chain_tol(B, c, tol.chain_tol)) for c in o.left_chains]
        worst_tol = max(r.tol for r in rres + lres)
        rep.orbits.append({
            "base": cpair(o.base_eigenvalue),
            "members": [cpair(z) for z in o.eigenvalues],
            "chain_length": o.chain_length,
            "right_residual": max(r.max_residual for r in rres),
            "left_residual": max(r.max_residual for r in lres),
            "residual_tol": worst_tol,
        })
        ok = all(rres) and all(lres)
        rep.checks.append(Check(f"chains[{i}]", max(r.max_residual for r in rres + lres), worst_tol, ok,
                                "rotated right/left chain residuals"))
        sims.append(component_via_similarity(basis, i))
        blocks.append(component_via_blocks(o, basis.partition, basis.perm))
    for i, (s, b) in enumerate(zip(sims, blocks)):
        d = float(np.max(np.abs(s.matrix - b.matrix)))
        rep.checks.append(Check(f"route_equivalence[{i}]", d, tol.route_tol * nA,
                                d <= tol.route_tol * nA, "similarity vs block formula, entrywise"))
        rep.components.append({
            "base": cpair(s.base_eigenvalue),
            "members": rep.orbits[i]["members"],
            "matrix": matrix_to_json(s.matrix_original),
        })
    crep = verify_component_properties(A, sims, S, tol.chain_tol)
    rep.checks.extend(crep.checks)
    rep.notes.append(f"{crep.block_count} Jordan blocks in {crep.orbit_count} orbits "
                     f"(orbit count divides block count: {crep.block_count % max(crep.orbit_count, 1) == 0})")


def _fill_perron(rep, A, S, tol):
    pd = perron_data(A.real, cyclic_index=S.h)
    peri = check_peripheral_rotation(A.real, S.h, tol.orbit_tol, tol.cluster_tol)
    rho = pd.spectral_radius
    section = {
        "spectral_radius": rho,
        "right": pd.right.tolist(),
        "left": pd.left.tolist(),
        "cyclic_index": S.h,
        "peripheral": [cpair(z) for z in peri.peripheral],
    }
    rep.checks.append(Check("perron_right_positive", float(pd.right.min()), 0.0, bool(pd.right.min() > 0)))
    rep.checks.append(Check("perron_left_positive", float(pd.left.min()), 0.0, bool(pd.left.min() > 0)))
    res_tol = tol.chain_tol * max(1.0, inf_norm(A))
    rep.checks.append(Check("perron_residual", max(pd.right_residual, pd.left_residual), res_tol,
                            max(pd.right_residual, pd.left_residual) <= res_tol))
    rep.checks.extend(peri.checks)
    if S.h >= 2:
        scaled = A.real / rho
        pc = perron_component(scaled, perron_data(scaled, cyclic_index=S.h), S)
        M = pc.matrix_original
        section["component"] = matrix_to_json(M)
        section["component_scale"] = rho
        rep.checks.append(Check("perron_component_nonnegative", float(M.real.min()), -1e-10,
                                bool(M.real.min() >= -1e-10), "A_1 of A/rho, entrywise"))
    rep.perron = section
