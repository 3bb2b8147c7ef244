"""Closed-form estimates: wall formula, element averages, hopping picture.

All semiclassical expressions are evaluated at a reference energy through
the velocity v_E = sqrt(2E/m).  They carry order-unity prefactors, so
comparisons against measured band statistics are multiplicative (factors,
not absolute tolerances).

The hopping (variable-range) estimate treats the log-normal element
distribution as a percolation problem in energy space: within a hopping
range omega the typical connected element is boosted above the geometric
average by exp[2 sqrt(-ln q^alpha)] with alpha = ln(rho * omega_c).  The
formulas are implemented literally; they are meaningful in the sparse
regime -ln q >= 4 alpha, outside of which the ratio estimate exceeds the
linear-response bound of 1 (a known limitation of hopping estimates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar as HBAR_SI
from scipy.constants import k as KB_SI
from scipy.optimize import minimize_scalar

from .billiard import BoxSpec, BumpSpec
from .network import DriveSpec

__all__ = [
    "AnalyticEstimates",
    "VrhEstimate",
    "HeatingPrediction",
    "velocity_at",
    "wall_formula",
    "analytic_estimates",
    "vrh_x_omega",
    "vrh_ratio",
    "vrh_estimate",
    "vrh_exponential",
    "predict_heating",
    "experiment_estimate",
]


def velocity_at(energy: float, mass: float = 1.0) -> float:
    """v_E = sqrt(2E/m)."""
    if energy <= 0:
        raise ValueError("reference energy must be positive")
    return math.sqrt(2.0 * energy / mass)


def wall_formula(mass: float, velocity: float, length_x: float) -> float:
    """2D wall-friction absorption coefficient (4/3pi) m^2 v^3 / L_x.

    Dimensionally consistent without hbar, so it serves both the hbar = 1
    units and SI inputs.
    """
    return 4.0 / (3.0 * math.pi) * mass**2 * velocity**3 / length_x


@dataclass(frozen=True)
class AnalyticEstimates:
    """Semiclassical band statistics at a reference energy."""

    reference_energy: float
    v_e: float
    p0: float  # fraction of non-zero elements in the near-diagonal band
    alg_estimate: float
    geo_estimate: float
    q_estimate: float
    g_lrt: float

    @property
    def p0_valid(self) -> bool:
        return 0.0 < self.p0 < 1.0


def analytic_estimates(
    box: BoxSpec, bump: BumpSpec, reference_energy: float
) -> AnalyticEstimates:
    """Estimates for the algebraic/geometric averages, sparsity and Kubo
    coefficient of the wall coupling at the given energy.

    The geometric average scales as u^2 (first-order mode mixing) and is
    Gaussian-suppressed for smooth bumps.
    """
    m = box.mass
    v = velocity_at(reference_energy, m)
    u = bump.strength
    p0 = 1.0 / (2.0 * math.pi * m * v * box.length_y)
    alg = m * v**3 / (2.0 * math.pi * box.length_y * box.length_x**2)
    geo = (
        (m**2 * v**2 / (2.0 * math.pi * box.length_x)) ** 2
        * math.exp(-2.0 * m**2 * v**2 * (bump.sigma_x**2 + bump.sigma_y**2))
        * u**2
    )
    return AnalyticEstimates(
        reference_energy=reference_energy,
        v_e=v,
        p0=p0,
        alg_estimate=alg,
        geo_estimate=geo,
        q_estimate=geo / alg,
        g_lrt=wall_formula(m, v, box.length_x),
    )


def _check_q_alpha(q: float, alpha: float) -> None:
    if not (0.0 < q <= 1.0):
        raise ValueError("sparsity q must lie in (0, 1]")
    if alpha < 0.0:
        raise ValueError("alpha = ln(rho * omega_c) must be >= 0")


def _enhancement(q: float, alpha: float) -> float:
    """exp[2 sqrt(alpha * (-ln q))]."""
    return math.exp(2.0 * math.sqrt(alpha * (-math.log(q))))


def vrh_x_omega(q: float, alpha: float, geometric: float) -> float:
    """Typical element of a connected transition sequence:
    geo * exp[2 sqrt(-ln q^alpha)]."""
    _check_q_alpha(q, alpha)
    return geometric * _enhancement(q, alpha)


def vrh_ratio(q: float, alpha: float) -> float:
    """Hopping estimate of G_SLRT / G_LRT = q * exp[2 sqrt(-ln q^alpha)].

    Exceeds 1 once -ln q < 4 alpha; there the matrix is only mildly
    sparse, hopping is irrelevant, and the estimate should be read as
    "no suppression".
    """
    _check_q_alpha(q, alpha)
    return q * _enhancement(q, alpha)


@dataclass(frozen=True)
class VrhEstimate:
    """Sparsity inputs and the resulting hopping estimate."""

    q: float
    alpha: float
    x_omega: float
    ratio: float


def vrh_estimate(q: float, alpha: float, geometric: float) -> VrhEstimate:
    return VrhEstimate(
        q=q,
        alpha=alpha,
        x_omega=vrh_x_omega(q, alpha, geometric),
        ratio=vrh_ratio(q, alpha),
    )


def vrh_exponential(q: float, alpha: float, drive: DriveSpec) -> float:
    """Hopping estimate for the exponential line shape.

    Maximizes the hop gain 2 sqrt(-ln q * ln w) minus the spectral cost
    (w - 1)/(rho omega_c) over the hop size w = rho * omega >= 1; the
    minimal hop (w = 1) is free, anchoring the q -> 1 limit at 1.
    """
    if drive.shape != "exponential":
        raise ValueError("vrh_exponential requires an exponential drive shape")
    _check_q_alpha(q, alpha)
    t = -math.log(q)
    w_c = math.exp(alpha)

    def neg_gain(w):
        return -(2.0 * math.sqrt(t * math.log(w)) - (w - 1.0) / w_c)

    if t == 0.0:
        return 1.0
    w_hi = w_c * (t + 50.0)
    res = minimize_scalar(neg_gain, bounds=(1.0, w_hi), method="bounded")
    gain = max(0.0, -float(res.fun))
    return q * math.exp(gain)


@dataclass(frozen=True)
class HeatingPrediction:
    """Diffusion and heating rate produced by an absorption coefficient."""

    g_coefficient: float
    drive: DriveSpec
    temperature: float
    diffusion: float
    heating_rate: float


def predict_heating(g: float, drive: DriveSpec, temperature: float) -> HeatingPrediction:
    """D = G * RMS(Rdot)^2 and Edot = D / T.

    Unit-agnostic: consistent hbar = 1 inputs give hbar = 1 outputs, SI
    inputs (G in J^2 s/m^2, T in J) give SI outputs.
    """
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    d = g * drive.rms_velocity**2
    return HeatingPrediction(
        g_coefficient=g,
        drive=drive,
        temperature=temperature,
        diffusion=d,
        heating_rate=d / temperature,
    )


def experiment_estimate(
    mass_kg: float = 1.4e-25,
    temperature_k: float = 10e-6,
    length_x_m: float = 200e-6,
    length_y_m: float = 10e-6,
    rms_velocity_m_s: float = 0.015,
    cutoff_over_spacing: float = 1000.0,
) -> dict:
    """Cold-atom scenario in SI units (hbar restored).

    The reference velocity is the thermal one, v = sqrt(kB T / m).  The
    defaults describe a laser-cooled Rb-85 cloud in a 200 um x 10 um
    optical billiard with a vibrating wall.
    """
    v = math.sqrt(KB_SI * temperature_k / mass_kg)
    g_lrt = wall_formula(mass_kg, v, length_x_m)
    rho = mass_kg * length_x_m * length_y_m / (2.0 * math.pi * HBAR_SI**2)
    spacing = 1.0 / rho
    drive = DriveSpec(
        shape="rectangular",
        cutoff=cutoff_over_spacing * spacing,
        rms_velocity=rms_velocity_m_s,
    )
    temperature_j = KB_SI * temperature_k
    heat = predict_heating(g_lrt, drive, temperature_j)
    return {
        "mass_kg": mass_kg,
        "temperature_K": temperature_k,
        "length_x_m": length_x_m,
        "length_y_m": length_y_m,
        "thermal_velocity_m_s": v,
        "g_lrt_si": g_lrt,  # J^2 s / m^2 per (m/s)^2 of drive
        "mean_spacing_J": spacing,
        "mean_spacing_over_hbar_hz": spacing / HBAR_SI,
        "cutoff_J": drive.cutoff,
        "rms_velocity_m_s": rms_velocity_m_s,
        "diffusion_J2_s": heat.diffusion,
        "heating_rate_J_s": heat.heating_rate,
        "heating_rate_mK_s": heat.heating_rate / KB_SI * 1e3,
        # the same scenario in the internal units (hbar = 1, energies in J)
        "natural_units": {
            "hbar": 1.0,
            "velocity": v,
            "g_lrt": g_lrt,
        },
    }
