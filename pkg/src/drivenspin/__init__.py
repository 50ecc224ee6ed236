"""Exact dynamics of a driven central spin-1/2 in an antiferromagnetic magnon bath."""

__version__ = "0.1.0"

from .dynamics import (
    DensityMatrix2,
    TimeSeries,
    evolve_series,
    long_time_average_sz,
    reduced_density,
    sector_amplitudes,
    spin_inversion,
)
from .entropy import bloch_grid, density_eigenvalues, entropy_series, pointer_scan, von_neumann
from .model import BathSpec, ModelParams, QubitState, derive_omega, eigenbasis, state_from_label
from .partition import (
    DifferenceWeights,
    LambdaTable,
    build_lambda_table,
    difference_weights,
    mean_occupation,
    partition_function,
)
from .spectrum import frequency_spectrum, spectrum_summary

__all__ = [
    "BathSpec",
    "DensityMatrix2",
    "DifferenceWeights",
    "LambdaTable",
    "ModelParams",
    "QubitState",
    "TimeSeries",
    "bloch_grid",
    "build_lambda_table",
    "density_eigenvalues",
    "derive_omega",
    "difference_weights",
    "eigenbasis",
    "entropy_series",
    "evolve_series",
    "frequency_spectrum",
    "long_time_average_sz",
    "mean_occupation",
    "partition_function",
    "pointer_scan",
    "reduced_density",
    "sector_amplitudes",
    "spectrum_summary",
    "spin_inversion",
    "state_from_label",
    "von_neumann",
]
