"""
Spectral structure of h-cyclic matrices.

Detect the cyclic index and partition of an irreducible matrix, rotate
Jordan chains around eigenvalue orbits, build the orbit component matrices
two independent ways, and check the Perron-Frobenius peripheral structure
of nonnegative input.
"""

__version__ = "0.1.0"

from .matrix_core import (
    RootsOfUnity, as_matrix, circulant, circulant_rotation_matrix, cycle_matrix,
    direct_sum, hadamard, inf_norm, jordan_block, omega, orbit_jordan_form,
)
from .graph_structure import (
    AperiodicUndefinedError, CyclicStructure, Digraph, NotStronglyConnectedError,
    OrderedPartition, PartitionError, build_digraph, consecutive_permutation,
    cyclic_characteristic_matrix, detect_cyclic_structure, digraph_contained_in,
    find_cyclic_partition, index_of_imprimitivity, is_block_cyclic,
    is_strongly_connected, permute, unpermute,
)
from .chain_rotation import (
    ChainResidual, JordanChain, alpha, chain_residuals, rotate_all, rotate_chain,
    rotate_left_chain, rotate_right_chain, verify_chain,
)
from .spectral_decomposition import (
    AmbiguousRankError, ComponentMatrix, DecompositionError, IllConditionedWarning,
    OrbitBasis, OrbitPairingError, RankGapWarning, SingularInputWarning, SpectralOrbit,
    build_orbit_basis, component_via_blocks, component_via_similarity, eigendecompose,
    jordan_chains_for, verify_component_properties,
)
from .perron_frobenius import (
    ConvergenceError, PerronData, check_peripheral_rotation, is_nonnegative_irreducible,
    perron_component, perron_data,
)
from .matrix_io import MatrixParseError, read_chain, read_matrix, write_matrix_market
from .analysis import Tolerances, analyze
