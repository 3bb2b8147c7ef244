"""Log-normal banded random matrices matched to physical band moments.

A wide log(x) distribution is summarized by two numbers: the geometric
average fixes the mean of ln x, and the sparsity q = geo/alg fixes its
variance through Var(ln x) = -2 ln q.  Sampling such a matrix over the
physical band gives an untextured twin whose network average isolates
what the element distribution alone predicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .billiard import PerturbedSystem
from .matrixstats import algebraic_average, geometric_average, select_band
from .network import DriveSpec

__all__ = ["LogNormalSpec", "match_moments", "sample_matrix", "rmt_twin"]


@dataclass(frozen=True)
class LogNormalSpec:
    """Ensemble parameters: ln x ~ Normal(mu, sigma2) on the banded support."""

    mu: float
    sigma2: float
    size: int
    band_cutoff: float
    seed: int

    def __post_init__(self):
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be >= 0")
        if self.size < 2:
            raise ValueError("size must be >= 2")
        if self.band_cutoff <= 0:
            raise ValueError("band_cutoff must be positive")

    @property
    def geometric(self) -> float:
        return math.exp(self.mu)

    @property
    def algebraic(self) -> float:
        return math.exp(self.mu + 0.5 * self.sigma2)

    @property
    def sparsity_q(self) -> float:
        return math.exp(-0.5 * self.sigma2)


def match_moments(algebraic: float, geometric: float) -> tuple[float, float]:
    """(mu, sigma2) of ln x reproducing the two averages.

    mu = ln(geo), sigma2 = 2 ln(alg/geo) = -2 ln q.
    """
    if geometric <= 0:
        raise ValueError("geometric average must be positive")
    if geometric > algebraic:
        raise ValueError("geometric average cannot exceed the algebraic one")
    return math.log(geometric), 2.0 * math.log(algebraic / geometric)


def sample_matrix(spec: LogNormalSpec, energies: np.ndarray) -> np.ndarray:
    """Symmetric non-negative matrix with iid log-normal in-band elements.

    The band is |E_n - E_m| <= band_cutoff, diagonal excluded; elements
    outside it are zero.  Fixed seed gives a bit-identical matrix.
    """
    energies = np.asarray(energies, dtype=float)
    if energies.size != spec.size:
        raise ValueError("energies length does not match spec.size")
    rng = np.random.default_rng(np.random.SeedSequence([int(spec.seed), 0x726D74]))
    n = spec.size
    gap = np.abs(energies[None, :] - energies[:, None])
    mask = np.triu(gap <= spec.band_cutoff, k=1)
    out = np.zeros((n, n))
    count = int(mask.sum())
    draws = np.exp(rng.normal(spec.mu, math.sqrt(spec.sigma2), size=count))
    out[mask] = draws
    out += out.T
    return out


def rmt_twin(
    system: PerturbedSystem,
    drive: DriveSpec,
    window: tuple[float, float],
    seed: int,
) -> PerturbedSystem:
    """Synthetic system with the physical spectrum and a log-normal matrix
    matched to the physical band's algebraic and geometric averages."""
    band = select_band(system, window, drive.cutoff)
    a = algebraic_average(band)
    g = geometric_average(band)
    if g <= 0:
        raise ValueError("physical band has zero geometric average (q = 0)")
    mu, sigma2 = match_moments(a, g)
    spec = LogNormalSpec(
        mu=mu,
        sigma2=sigma2,
        size=system.n_levels,
        band_cutoff=drive.cutoff,
        seed=seed,
    )
    return PerturbedSystem(
        energies=system.energies.copy(),
        v_squared=sample_matrix(spec, system.energies),
        dos=system.dos,
        window=system.window,
        deformation=system.deformation,
        modes=None,
        dominant_mode=None,
        overlap=None,
    )
