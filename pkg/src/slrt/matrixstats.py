"""Band selection and element statistics of the squared coupling matrix.

The near-diagonal band collects every unordered level pair inside an
energy window whose gap does not exceed the drive cutoff.  Averages over
the band follow the conventions used throughout:

* algebraic  ``<x>``           -- plain mean, zeros included,
* geometric  ``exp<ln x>``     -- 0 as soon as any element is exactly 0,
* harmonic   ``[<1/x>]^-1``    -- likewise 0 when any element is 0,
* sparsity   ``q = geo/alg``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .billiard import PerturbedSystem
from .errors import EmptyBandError

__all__ = [
    "BandSelection",
    "AveragesReport",
    "LogHistogram",
    "select_band",
    "algebraic_average",
    "geometric_average",
    "harmonic_average",
    "sparsity",
    "averages_report",
    "log_histogram",
    "untexture",
    "default_stats_window",
    "largest_gap",
]


@dataclass
class BandSelection:
    """Near-diagonal elements: level pairs (n < m) with 0 < E_m - E_n <= cutoff."""

    n: np.ndarray
    m: np.ndarray
    x: np.ndarray
    omega: np.ndarray
    window: tuple[float, float]
    cutoff: float

    def __len__(self) -> int:
        return self.x.size

    @property
    def zero_count(self) -> int:
        return int(np.count_nonzero(self.x == 0.0))


def select_band(
    system: PerturbedSystem, window: tuple[float, float], cutoff: float
) -> BandSelection:
    """All unordered in-window pairs with positive gap at most ``cutoff``."""
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    idx = system.levels_in(window)
    if idx.size < 2:
        raise EmptyBandError("window holds fewer than two levels")
    e = system.energies[idx]
    gap = e[None, :] - e[:, None]
    pair = np.triu(gap > 0.0, k=0) & (gap <= cutoff)
    ii, jj = np.nonzero(pair)
    if ii.size == 0:
        raise EmptyBandError("no level pair falls within the cutoff")
    ni, mi = idx[ii], idx[jj]
    return BandSelection(
        n=ni,
        m=mi,
        x=system.v_squared[ni, mi],
        omega=system.energies[mi] - system.energies[ni],
        window=(float(window[0]), float(window[1])),
        cutoff=float(cutoff),
    )


def algebraic_average(band: BandSelection) -> float:
    """Arithmetic mean of the band, zeros included."""
    _require_nonempty(band)
    return float(np.mean(band.x))


def geometric_average(band: BandSelection) -> float:
    """exp of the mean log; exactly 0 if any element is 0."""
    _require_nonempty(band)
    if np.any(band.x == 0.0):
        return 0.0
    return float(np.exp(np.mean(np.log(band.x))))


def harmonic_average(band: BandSelection) -> float:
    """Reciprocal of the mean reciprocal; 0 if any element is 0."""
    _require_nonempty(band)
    if np.any(band.x == 0.0):
        return 0.0
    return float(1.0 / np.mean(1.0 / band.x))


def sparsity(band: BandSelection) -> float:
    """q = geometric / algebraic, in [0, 1]."""
    a = algebraic_average(band)
    if a <= 0.0:
        raise ValueError("sparsity undefined: band has no positive elements")
    return geometric_average(band) / a


def _require_nonempty(band: BandSelection) -> None:
    if len(band) == 0:
        raise EmptyBandError("band is empty")


@dataclass
class AveragesReport:
    """All band averages plus the network (resistor) value when available."""

    algebraic: float
    geometric: float
    harmonic: float
    sparsity_q: float
    element_count: int
    zero_count: int
    network: float | None = None


def averages_report(band: BandSelection, network: float | None = None) -> AveragesReport:
    return AveragesReport(
        algebraic=algebraic_average(band),
        geometric=geometric_average(band),
        harmonic=harmonic_average(band),
        sparsity_q=sparsity(band),
        element_count=len(band),
        zero_count=band.zero_count,
        network=network,
    )


@dataclass
class LogHistogram:
    """Histogram of ln(x) over the positive band elements."""

    bin_edges: np.ndarray  # length bins + 1, in ln x
    counts: np.ndarray
    markers: dict[str, float] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def log_histogram(
    band: BandSelection, bins: int, markers: dict[str, float] | None = None
) -> LogHistogram:
    """Bin ln(x) over the strictly positive elements.

    ``markers`` records reference values (algebraic / geometric / network
    averages) alongside the counts; by default the band's own algebraic
    and geometric averages are attached.
    """
    pos = band.x[band.x > 0.0]
    if pos.size == 0:
        raise EmptyBandError("histogram needs at least one positive element")
    counts, edges = np.histogram(np.log(pos), bins=bins)
    mk = {
        "algebraic": algebraic_average(band),
        "geometric": geometric_average(band),
    }
    if markers:
        mk.update(markers)
    return LogHistogram(bin_edges=edges, counts=counts, markers=mk)


def untexture(system: PerturbedSystem, seed: int) -> PerturbedSystem:
    """Randomly permute each diagonal of |V_nm|^2, keeping the spectrum.

    The per-diagonal element multisets (hence the band profile and the
    size distribution) are preserved; only the arrangement is scrambled.
    The permuted upper triangle is mirrored to keep the matrix symmetric.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x756E7478]))
    n = system.n_levels
    v2 = system.v_squared.copy()
    for d in range(1, n):
        vals = np.diagonal(v2, offset=d).copy()
        rng.shuffle(vals)
        idx = np.arange(n - d)
        v2[idx, idx + d] = vals
        v2[idx + d, idx] = vals
    return PerturbedSystem(
        energies=system.energies.copy(),
        v_squared=v2,
        dos=system.dos,
        window=system.window,
        deformation=system.deformation,
        modes=None if system.modes is None else system.modes.copy(),
        dominant_mode=None,
        overlap=None,
    )


def default_stats_window(
    system: PerturbedSystem, lo_frac: float = 0.5, hi_frac: float = 0.8
) -> tuple[float, float]:
    """Energy window spanning the [lo_frac, hi_frac] slice (by index) of
    the converged levels."""
    idx = system.levels_in(system.window)
    if idx.size < 4:
        raise ValueError("too few converged levels for a statistics window")
    lo = system.energies[idx[int(lo_frac * (idx.size - 1))]]
    hi = system.energies[idx[int(hi_frac * (idx.size - 1))]]
    return float(lo), float(hi)


def largest_gap(system: PerturbedSystem, window: tuple[float, float]) -> float:
    """Largest nearest-neighbor gap inside the window, in units of the
    mean level spacing.  Gaps beyond the drive cutoff disconnect the
    transition network, so preset windows are vetted with this."""
    idx = system.levels_in(window)
    if idx.size < 2:
        raise ValueError("window holds fewer than two levels")
    return float(np.max(np.diff(system.energies[idx])) / system.mean_spacing)
