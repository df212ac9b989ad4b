"""Entanglement dynamics of a two-level atom exchanging l photons with a
thermal cavity mode, with optional atomic center-of-mass motion.

The closed-form evolution and negativity live in :mod:`mpjcm.model`,
:mod:`mpjcm.density` and :mod:`mpjcm.negativity`; :mod:`mpjcm.oracle` holds
the independent brute-force cross-checks; :mod:`mpjcm.sweep` and
:mod:`mpjcm.cli` drive parameter studies from the command line.
"""

__version__ = "0.1.0"

from .density import (
    JointDensityMatrix,
    apply_propagator,
    assemble_density,
    basis_index,
    build_propagator,
    dump_density,
    evolve_excited_block,
    evolve_ground_block,
    sector_labels,
)
from .model import (
    DressedQuantities,
    ModelParams,
    ThermalDistribution,
    dressed,
    effective_coupling,
    fock_factor,
    mean_from_temperature,
    theta,
    thermal_weight,
    truncated_thermal,
    truncation_level,
)
from .negativity import (
    BlockCoefficients,
    NegativitySeries,
    block_coefficients,
    negativity,
    negativity_series,
    trace_norm_closed,
)
from .oracle import (
    HermitianSpectrum,
    converged_propagator,
    hermitian_eigenvalues,
    negativity_brute,
    partial_transpose_atom,
    time_ordered_propagator,
)

__all__ = [
    "__version__",
    "ModelParams",
    "ThermalDistribution",
    "DressedQuantities",
    "thermal_weight",
    "mean_from_temperature",
    "truncation_level",
    "truncated_thermal",
    "fock_factor",
    "theta",
    "effective_coupling",
    "dressed",
    "JointDensityMatrix",
    "basis_index",
    "sector_labels",
    "evolve_ground_block",
    "evolve_excited_block",
    "assemble_density",
    "apply_propagator",
    "build_propagator",
    "dump_density",
    "BlockCoefficients",
    "NegativitySeries",
    "block_coefficients",
    "trace_norm_closed",
    "negativity",
    "negativity_series",
    "HermitianSpectrum",
    "partial_transpose_atom",
    "hermitian_eigenvalues",
    "negativity_brute",
    "time_ordered_propagator",
    "converged_propagator",
]
