"""Rectangular billiard with a Gaussian bump: spectra and coupling matrices.

The model is a particle of mass ``m`` in a hard-wall box ``L_x x L_y``
(hbar = 1).  Two operators matter downstream:

* ``U`` -- a normalized Gaussian potential bump of strength ``u`` that
  weakly breaks integrability and mixes the transverse modes,
* ``V`` -- the coupling to a displacement of the vertical wall, which is
  diagonal in the transverse mode index and therefore sparse.

``build_perturbed_system`` diagonalizes ``H0 + u*U`` and transforms ``V``
into the perturbed eigenbasis; everything else consumes the resulting
squared elements ``|V_nm|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import BasisCoverageError, QuadratureError

__all__ = [
    "BoxSpec",
    "ModeIndex",
    "BumpSpec",
    "BasisSpec",
    "PerturbedSystem",
    "box_energy",
    "dos",
    "wall_matrix_element",
    "bump_matrix_element",
    "eigenfunction",
    "enumerate_modes",
    "wall_matrix",
    "bump_matrix",
    "build_perturbed_system",
    "random_bump_position",
]


@dataclass(frozen=True)
class BoxSpec:
    """Geometry and mass of the rectangular box (hbar = 1)."""

    length_x: float
    length_y: float
    mass: float = 1.0

    def __post_init__(self):
        if self.length_x <= 0 or self.length_y <= 0:
            raise ValueError("box lengths must be positive")
        if self.mass <= 0:
            raise ValueError("mass must be positive")

    @property
    def aspect_ratio(self) -> float:
        return self.length_x / self.length_y

    @property
    def area(self) -> float:
        return self.length_x * self.length_y


@dataclass(frozen=True)
class ModeIndex:
    """Quantum numbers (n_x, n_y) of a box eigenstate, both >= 1."""

    n_x: int
    n_y: int

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("mode indices must be >= 1")


def _mode(mode) -> tuple[int, int]:
    """Accept ModeIndex or a plain (n_x, n_y) pair."""
    if isinstance(mode, ModeIndex):
        return mode.n_x, mode.n_y
    nx, ny = mode
    if nx < 1 or ny < 1:
        raise ValueError("mode indices must be >= 1")
    return int(nx), int(ny)


@dataclass(frozen=True)
class BumpSpec:
    """Normalized Gaussian deformation potential.

    ``strength`` is the prefactor u multiplying the unit-normalized
    Gaussian; ``sigma_x = sigma_y = 0`` is the point-scatterer limit.
    """

    strength: float
    sigma_x: float
    sigma_y: float
    center_x: float
    center_y: float

    def __post_init__(self):
        if self.sigma_x < 0 or self.sigma_y < 0:
            raise ValueError("Gaussian widths must be >= 0")

    def validate_in_box(self, box: BoxSpec) -> None:
        if not (0 < self.center_x < box.length_x and 0 < self.center_y < box.length_y):
            raise ValueError("bump center must lie strictly inside the box")


@dataclass(frozen=True)
class BasisSpec:
    """Truncated mode basis with an energy window that must converge.

    All modes with energy up to ``buffer_factor * energy_window[1]`` are
    retained (subject to the hard mode caps), so that levels inside the
    window are insensitive to the truncation.
    """

    max_mode_x: int
    max_mode_y: int
    energy_window: tuple[float, float]
    buffer_factor: float = 1.5

    def __post_init__(self):
        if self.max_mode_x < 1 or self.max_mode_y < 1:
            raise ValueError("mode caps must be >= 1")
        lo, hi = self.energy_window
        if not (0 <= lo < hi):
            raise ValueError("energy window must satisfy 0 <= E_lo < E_hi")
        if self.buffer_factor < 1.0:
            raise ValueError("buffer_factor must be >= 1")

    @property
    def retain_below(self) -> float:
        return self.buffer_factor * self.energy_window[1]

    @classmethod
    def for_window(
        cls, box: BoxSpec, window: tuple[float, float], buffer_factor: float = 1.5
    ) -> "BasisSpec":
        """Mode caps just large enough to hold every mode below the buffer."""
        e_cut = buffer_factor * window[1]
        k = math.sqrt(2.0 * box.mass * e_cut)
        return cls(
            max_mode_x=max(1, int(box.length_x * k / math.pi) + 1),
            max_mode_y=max(1, int(box.length_y * k / math.pi) + 1),
            energy_window=(float(window[0]), float(window[1])),
            buffer_factor=buffer_factor,
        )


def box_energy(mode, box: BoxSpec) -> float:
    """Energy (pi^2/2m)(n_x^2/L_x^2 + n_y^2/L_y^2) of a box mode."""
    nx, ny = _mode(mode)
    return (math.pi**2 / (2.0 * box.mass)) * (
        nx**2 / box.length_x**2 + ny**2 / box.length_y**2
    )


def dos(box: BoxSpec) -> float:
    """Mean 2D density of states m L_x L_y / (2 pi), energy independent."""
    return box.mass * box.length_x * box.length_y / (2.0 * math.pi)


def wall_matrix_element(n, m, box: BoxSpec) -> float:
    """Coupling to a displacement of the wall at x = L_x.

    Zero unless the transverse indices match; otherwise
    ``-pi^2 n_x m_x / (m L_x^3)``.
    """
    nx, ny = _mode(n)
    mx, my = _mode(m)
    if ny != my:
        return 0.0
    return -(math.pi**2) * nx * mx / (box.mass * box.length_x**3)


def eigenfunction(mode, box: BoxSpec, x: float, y: float) -> float:
    """Normalized box eigenfunction (2/sqrt(Lx Ly)) sin(..) sin(..)."""
    nx, ny = _mode(mode)
    return (
        2.0
        / math.sqrt(box.area)
        * math.sin(nx * math.pi * x / box.length_x)
        * math.sin(ny * math.pi * y / box.length_y)
    )


# Tolerance for the 1D sine-sine-Gaussian integrals.
_QUAD_ABS_TOL = 1e-12


def _sine_gauss_overlap_1d(n: int, m: int, length: float, center: float, sigma: float) -> float:
    """(2/L) * integral of sin(n pi x/L) sin(m pi x/L) N(x; center, sigma) dx.

    N is the unit-normalized Gaussian; the integral runs over the box, so
    tails leaking past the walls are clipped.  sigma = 0 reduces to the
    product of the two sine factors at the center.
    """
    if sigma == 0.0:
        return (
            2.0
            / length
            * math.sin(n * math.pi * center / length)
            * math.sin(m * math.pi * center / length)
        )
    kn = n * math.pi / length
    km = m * math.pi / length
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))

    def integrand(x):
        return math.sin(kn * x) * math.sin(km * x) * math.exp(
            -0.5 * ((x - center) / sigma) ** 2
        )

    # The Gaussian support is effectively +-12 sigma; restricting the range
    # keeps the adaptive rule away from irrelevant oscillations.
    lo = max(0.0, center - 12.0 * sigma)
    hi = min(length, center + 12.0 * sigma)
    val, err = quad(integrand, lo, hi, epsabs=_QUAD_ABS_TOL, epsrel=1e-11, limit=400)
    if err > 1e-9:
        raise QuadratureError("sine-Gaussian overlap did not converge", err)
    return 2.0 / length * norm * val


def bump_matrix_element(n, m, bump: BumpSpec, box: BoxSpec) -> float:
    """Matrix element <n|U|m> of the unit-normalized Gaussian bump.

    Separable in x and y; the point limit sigma -> 0 gives the product of
    eigenfunctions at the bump position.
    """
    bump.validate_in_box(box)
    nx, ny = _mode(n)
    mx, my = _mode(m)
    ix = _sine_gauss_overlap_1d(nx, mx, box.length_x, bump.center_x, bump.sigma_x)
    iy = _sine_gauss_overlap_1d(ny, my, box.length_y, bump.center_y, bump.sigma_y)
    return ix * iy


def enumerate_modes(box: BoxSpec, basis: BasisSpec):
    """Retained modes sorted by (energy, n_x, n_y).

    Returns ``(nx, ny, energies)`` integer/float arrays.  The lexicographic
    tie-break makes degenerate levels (square box) deterministic.
    """
    nx = np.arange(1, basis.max_mode_x + 1)
    ny = np.arange(1, basis.max_mode_y + 1)
    nxg, nyg = np.meshgrid(nx, ny, indexing="ij")
    energy = (np.pi**2 / (2.0 * box.mass)) * (
        nxg**2 / box.length_x**2 + nyg**2 / box.length_y**2
    )
    keep = energy <= basis.retain_below
    nxk, nyk, ek = nxg[keep], nyg[keep], energy[keep]
    order = np.lexsort((nyk, nxk, ek))
    nxk, nyk, ek = nxk[order], nyk[order], ek[order]
    # the mode caps must not clip states below the retention cutoff,
    # otherwise window levels would be under-converged
    e_x_next = box_energy((basis.max_mode_x + 1, 1), box)
    e_y_next = box_energy((1, basis.max_mode_y + 1), box)
    if ek.size == 0 or min(e_x_next, e_y_next) <= basis.retain_below:
        raise BasisCoverageError(
            "mode caps truncate the basis below the retention cutoff"
        )
    return nxk, nyk, ek


def wall_matrix(box: BoxSpec, nx: np.ndarray, ny: np.ndarray) -> np.ndarray:
    """Dense wall-displacement matrix over the given mode list."""
    same_ny = ny[:, None] == ny[None, :]
    v = -(np.pi**2) / (box.mass * box.length_x**3) * np.outer(nx, nx)
    return np.where(same_ny, v, 0.0)


def _overlap_table(n_max: int, length: float, center: float, sigma: float) -> np.ndarray:
    """Symmetric table of 1D overlaps for all index pairs up to n_max."""
    table = np.empty((n_max, n_max))
    if sigma == 0.0:
        s = np.sin(np.arange(1, n_max + 1) * np.pi * center / length)
        table = 2.0 / length * np.outer(s, s)
        return table
    for i in range(1, n_max + 1):
        for j in range(i, n_max + 1):
            val = _sine_gauss_overlap_1d(i, j, length, center, sigma)
            table[i - 1, j - 1] = val
            table[j - 1, i - 1] = val
    return table


def bump_matrix(box: BoxSpec, bump: BumpSpec, nx: np.ndarray, ny: np.ndarray) -> np.ndarray:
    """Dense bump matrix <n|U|m> over the given mode list."""
    bump.validate_in_box(box)
    tx = _overlap_table(int(nx.max()), box.length_x, bump.center_x, bump.sigma_x)
    ty = _overlap_table(int(ny.max()), box.length_y, bump.center_y, bump.sigma_y)
    return tx[np.ix_(nx - 1, nx - 1)] * ty[np.ix_(ny - 1, ny - 1)]


@dataclass
class PerturbedSystem:
    """Spectrum and squared wall couplings after diagonalizing H0 + u*U.

    ``energies`` ascend (degenerate values keep the deterministic mode
    order), ``v_squared`` is symmetric and element-wise >= 0, and ``dos``
    is the mean density of states of the generating box.  ``window`` is
    the energy range whose levels are converged with respect to basis
    truncation.
    """

    energies: np.ndarray
    v_squared: np.ndarray
    dos: float
    window: tuple[float, float]
    deformation: float
    modes: np.ndarray | None = None  # (N, 2) quantum numbers of basis modes
    dominant_mode: np.ndarray | None = None  # (N, 2) per perturbed level
    overlap: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.energies = np.asarray(self.energies, dtype=float)
        self.v_squared = np.asarray(self.v_squared, dtype=float)
        n = self.energies.size
        if self.v_squared.shape != (n, n):
            raise ValueError("v_squared shape does not match energies")
        if np.any(np.diff(self.energies) < 0):
            raise ValueError("energies must be sorted ascending")
        if np.any(self.v_squared < 0):
            raise ValueError("v_squared must be non-negative")

    @property
    def n_levels(self) -> int:
        return self.energies.size

    @property
    def mean_spacing(self) -> float:
        return 1.0 / self.dos

    @property
    def overlap_matrix_available(self) -> bool:
        return self.overlap is not None

    def levels_in(self, window: tuple[float, float]) -> np.ndarray:
        """Indices of levels inside a closed energy window."""
        lo, hi = window
        return np.where((self.energies >= lo) & (self.energies <= hi))[0]


def build_perturbed_system(
    box: BoxSpec,
    bump: BumpSpec,
    basis: BasisSpec,
    deformation: float | None = None,
    keep_overlap: bool = False,
    operators: tuple[np.ndarray, ...] | None = None,
) -> PerturbedSystem:
    """Diagonalize H0 + u*U and transform the wall coupling.

    ``deformation`` overrides ``bump.strength`` when given.  At u = 0 the
    diagonalization is bypassed: the transform is the identity on the
    (energy, n_x, n_y)-sorted modes, so the selection-rule zeros of the
    wall matrix survive exactly.

    ``operators`` may carry precomputed ``(nx, ny, e0, umat, vmat)`` from
    :func:`prepare_operators` to amortize sweeps over the deformation.
    """
    u = bump.strength if deformation is None else float(deformation)
    if operators is None:
        operators = prepare_operators(box, bump, basis)
    nx, ny, e0, umat, vmat = operators

    if u == 0.0:
        energies = e0.copy()
        v2 = vmat**2
        transform = np.eye(e0.size) if keep_overlap else None
        dom = np.stack([nx, ny], axis=1)
    else:
        h = np.diag(e0) + u * umat
        energies, transform = np.linalg.eigh(h)
        vt = transform.T @ vmat @ transform
        vt = 0.5 * (vt + vt.T)  # enforce exact symmetry
        v2 = vt**2
        dom_idx = np.argmax(transform**2, axis=0)
        dom = np.stack([nx[dom_idx], ny[dom_idx]], axis=1)
        if not keep_overlap:
            transform = None

    return PerturbedSystem(
        energies=energies,
        v_squared=v2,
        dos=dos(box),
        window=basis.energy_window,
        deformation=u,
        modes=np.stack([nx, ny], axis=1),
        dominant_mode=dom,
        overlap=transform,
    )


def prepare_operators(box: BoxSpec, bump: BumpSpec, basis: BasisSpec):
    """Mode list plus dense U and V matrices, reusable across deformations."""
    nx, ny, e0 = enumerate_modes(box, basis)
    umat = bump_matrix(box, bump, nx, ny)
    vmat = wall_matrix(box, nx, ny)
    return nx, ny, e0, umat, vmat


def random_bump_position(box: BoxSpec, seed: int) -> tuple[float, float]:
    """Seeded bump position, uniform in the central [0.4, 0.6] patch."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x62756D70]))
    fx, fy = rng.uniform(0.4, 0.6, size=2)
    return fx * box.length_x, fy * box.length_y
