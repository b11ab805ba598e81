"""Band structure and rotation-induced splitting of patterned-mirror cavity arrays."""

from ._core import (
    BandEdges,
    ConfigError,
    DerivedParams,
    ExperimentConfig,
    KpModel,
    LatticeSpec,
    NumericalError,
    OpwSolver,
    ValidationError,
    analyze,
    band_edges,
    consistency_ratio,
    derive_params,
    effective_index,
    effective_mass,
    fourier_coefficient,
    kp_bands,
    kp_model,
    load_config,
    load_config_file,
    m_closed_form,
    solve_bands,
    splittings,
    validate,
    zeeman_splittings,
)

__all__ = [
    "BandEdges",
    "ConfigError",
    "DerivedParams",
    "ExperimentConfig",
    "KpModel",
    "LatticeSpec",
    "NumericalError",
    "OpwSolver",
    "ValidationError",
    "analyze",
    "band_edges",
    "consistency_ratio",
    "derive_params",
    "effective_index",
    "effective_mass",
    "fourier_coefficient",
    "kp_bands",
    "kp_model",
    "load_config",
    "load_config_file",
    "m_closed_form",
    "solve_bands",
    "splittings",
    "validate",
    "zeeman_splittings",
]
