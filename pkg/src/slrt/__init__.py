"""Heating of driven near-integrable billiards: Kubo vs resistor-network
(semi-linear) response.

The pipeline: quantize a rectangular box with a Gaussian bump
(:mod:`slrt.billiard`), collect near-diagonal statistics of the squared
wall coupling (:mod:`slrt.matrixstats`), average it over the transition
network in energy space (:mod:`slrt.network`), compare with matched
log-normal ensembles (:mod:`slrt.rmt`) and with hopping-style analytic
estimates (:mod:`slrt.vrh`).  :mod:`slrt.cli` drives parameter sweeps.
"""

__version__ = "0.1.0"

from .billiard import (
    BasisSpec,
    BoxSpec,
    BumpSpec,
    ModeIndex,
    PerturbedSystem,
    box_energy,
    build_perturbed_system,
    bump_matrix_element,
    dos,
    random_bump_position,
    wall_matrix_element,
)
from .matrixstats import (
    AveragesReport,
    BandSelection,
    LogHistogram,
    algebraic_average,
    averages_report,
    default_stats_window,
    geometric_average,
    harmonic_average,
    log_histogram,
    select_band,
    sparsity,
    untexture,
)
from .network import (
    BondNetwork,
    DriveSpec,
    NetworkResult,
    assemble_bonds,
    g_lrt_kubo,
    g_slrt,
    network_average,
    slrt_average,
    two_point_resistance,
)
from .rmt import LogNormalSpec, match_moments, rmt_twin, sample_matrix
from .vrh import (
    AnalyticEstimates,
    HeatingPrediction,
    VrhEstimate,
    analytic_estimates,
    experiment_estimate,
    predict_heating,
    velocity_at,
    vrh_estimate,
    vrh_exponential,
    vrh_ratio,
    vrh_x_omega,
    wall_formula,
)

__all__ = [
    "BasisSpec", "BoxSpec", "BumpSpec", "ModeIndex", "PerturbedSystem",
    "box_energy", "build_perturbed_system", "bump_matrix_element", "dos",
    "random_bump_position", "wall_matrix_element",
    "AveragesReport", "BandSelection", "LogHistogram", "algebraic_average",
    "averages_report", "default_stats_window", "geometric_average",
    "harmonic_average", "log_histogram", "select_band", "sparsity", "untexture",
    "BondNetwork", "DriveSpec", "NetworkResult", "assemble_bonds",
    "g_lrt_kubo", "g_slrt", "network_average", "slrt_average",
    "two_point_resistance",
    "LogNormalSpec", "match_moments", "rmt_twin", "sample_matrix",
    "AnalyticEstimates", "HeatingPrediction", "VrhEstimate",
    "analytic_estimates", "experiment_estimate", "predict_heating",
    "velocity_at", "vrh_estimate", "vrh_exponential", "vrh_ratio",
    "vrh_x_omega", "wall_formula",
]
