"""Resistor network in energy space and the calibrated SLRT average.

Energy levels are nodes; golden-rule transition rates are bondinverse
resistances

    g_nm = 2 rho^-3 * |V_nm|^2 / (E_n - E_m)^2 * F(E_m - E_n)

with F the normalized drive line shape.  The SLRT average <<x>> is the
ratio R_ref / R_actual of two-point resistances, where the reference
network is built identically with every in-band |V_nm|^2 set to 1.  That
calibration reproduces c exactly for a uniform matrix |V|^2 = c and drops
out of all G_SLRT / G_LRT ratios.

Terminals sit a buffer of ceil(cutoff/spacing) levels inside the window
ends; the buffered edge levels stay in the network as parallel paths, so
the measurement keeps the variational (Dirichlet) structure that makes it
monotone and superadditive in the bond conductances.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import cg

from .billiard import PerturbedSystem
from .errors import EmptyBandError, SolverConvergenceError
from .matrixstats import algebraic_average, select_band

__all__ = [
    "DriveSpec",
    "BondNetwork",
    "NetworkResult",
    "assemble_bonds",
    "two_point_resistance",
    "slrt_average",
    "network_average",
    "g_slrt",
    "g_lrt_kubo",
]

log = logging.getLogger(__name__)

_DENSE_BELOW = 500  # direct solve below this node count
_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class DriveSpec:
    """Normalized drive power spectrum F(omega) and its intensity.

    ``rectangular``: F = 1 for |omega| < cutoff, else 0.
    ``exponential``: F = exp(-|omega/cutoff|).
    """

    shape: str
    cutoff: float
    rms_velocity: float = 0.0

    def __post_init__(self):
        if self.shape not in ("rectangular", "exponential"):
            raise ValueError(f"unknown drive shape {self.shape!r}")
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        if self.rms_velocity < 0:
            raise ValueError("rms_velocity must be >= 0")

    def spectral_shape(self, omega):
        """F(omega), vectorized."""
        w = np.abs(np.asarray(omega, dtype=float))
        if self.shape == "rectangular":
            return (w < self.cutoff).astype(float)
        return np.exp(-w / self.cutoff)

    def power_spectrum(self, omega):
        """S(omega) = RMS^2 * F(omega)."""
        return self.rms_velocity**2 * self.spectral_shape(omega)


@dataclass
class BondNetwork:
    """Weighted graph over the window levels.

    ``source``/``sink`` are node positions (not level indices) of the
    measurement terminals; ``buffer`` edge levels at each end lie behind
    them and only contribute parallel conduction paths.
    """

    node_energies: np.ndarray
    node_levels: np.ndarray
    bond_n: np.ndarray
    bond_m: np.ndarray
    bond_g: np.ndarray
    source: int
    sink: int
    buffer: int

    @property
    def n_nodes(self) -> int:
        return self.node_energies.size

    @property
    def n_bonds(self) -> int:
        return self.bond_g.size

    def adjacency(self) -> sp.csr_matrix:
        n = self.n_nodes
        a = sp.coo_matrix(
            (
                np.concatenate([self.bond_g, self.bond_g]),
                (
                    np.concatenate([self.bond_n, self.bond_m]),
                    np.concatenate([self.bond_m, self.bond_n]),
                ),
            ),
            shape=(n, n),
        )
        return a.tocsr()

    def laplacian(self) -> sp.csr_matrix:
        a = self.adjacency()
        d = np.asarray(a.sum(axis=1)).ravel()
        return (sp.diags(d) - a).tocsr()


def _bond_conductances(energies, v_squared, dos, drive, ii, jj):
    omega = energies[jj] - energies[ii]
    f = drive.spectral_shape(omega)
    return 2.0 * dos ** (-3) * v_squared[ii, jj] / omega**2 * f


def assemble_bonds(
    system: PerturbedSystem,
    drive: DriveSpec,
    window: tuple[float, float],
    buffer: int | None = None,
    matrix: np.ndarray | None = None,
) -> BondNetwork:
    """Build the transition network over the window levels.

    Bonds with zero conductance (selection-rule zeros, or gaps beyond a
    rectangular cutoff) are omitted.  ``matrix`` overrides the system's
    |V|^2, which is how the uniform reference network is built.
    """
    levels = system.levels_in(window)
    n = levels.size
    if n < 2:
        raise EmptyBandError("window holds fewer than two levels")
    e = system.energies[levels]
    v2 = system.v_squared if matrix is None else matrix

    gap = e[None, :] - e[:, None]
    pair = np.triu(gap > 0.0, k=0)
    if drive.shape == "rectangular":
        pair &= gap < drive.cutoff
    ii, jj = np.nonzero(pair)
    g = _bond_conductances(system.energies, v2, system.dos, drive, levels[ii], levels[jj])
    keep = g > 0.0
    ii, jj, g = ii[keep], jj[keep], g[keep]
    if g.size == 0:
        raise EmptyBandError("network has no bonds")

    if buffer is None:
        buffer = int(math.ceil(drive.cutoff / system.mean_spacing))
    if 2 * buffer >= n - 1:
        raise ValueError(
            f"window with {n} levels is too small for a buffer of {buffer}"
        )
    return BondNetwork(
        node_energies=e,
        node_levels=levels,
        bond_n=ii,
        bond_m=jj,
        bond_g=g,
        source=buffer,
        sink=n - 1 - buffer,
        buffer=buffer,
    )


def _refine_dense(mat: np.ndarray, rhs: np.ndarray, rhs_norm: float):
    """Direct solve with iterative refinement until the residual settles.

    Extreme conductance contrast (near-degenerate level pairs act as
    shorts) can push the condition number past 1e10; a few refinement
    passes recover a backward-stable solution.
    """
    y = np.linalg.solve(mat, rhs)
    rel = np.inf
    for _ in range(6):
        res = rhs - mat @ y
        rel = float(np.linalg.norm(res) / rhs_norm)
        if rel <= _RESIDUAL_TOL:
            break
        y += np.linalg.solve(mat, res)
    return y, rel


def _solve_pinned(lap: np.ndarray | sp.spmatrix, b: np.ndarray, dense: bool) -> np.ndarray:
    """Solve the Laplacian system with the last row/col pinned to ground.

    Jacobi-symmetrized to tame the conductance dynamic range; the
    residual is checked after refinement and failure is reported with
    the achieved value.
    """
    if sp.issparse(lap):
        red = lap[:-1, :-1].tocsr()
    else:
        red = lap[:-1, :-1]
    rhs = b[:-1]
    d = red.diagonal() if sp.issparse(red) else np.diag(red).copy()
    s = 1.0 / np.sqrt(d)
    if sp.issparse(red):
        scaled = sp.diags(s) @ red @ sp.diags(s)
    else:
        scaled = red * np.outer(s, s)
    rhs_s = rhs * s
    rhs_norm = float(np.linalg.norm(rhs_s))

    rel = np.inf
    y = None
    if not dense:
        y, info = cg(
            scaled,
            rhs_s,
            rtol=_RESIDUAL_TOL,
            atol=0.0,
            maxiter=50 * rhs_s.size,
        )
        if info == 0:
            rel = float(np.linalg.norm(scaled @ y - rhs_s) / rhs_norm)
        else:
            y = None
    if y is None or rel > _RESIDUAL_TOL:
        mat = scaled.toarray() if sp.issparse(scaled) else scaled
        y, rel = _refine_dense(mat, rhs_s, rhs_norm)
    if rel > _RESIDUAL_TOL:
        raise SolverConvergenceError("Kirchhoff solve failed", rel)
    phi = np.append(y * s, 0.0)
    return phi


# Bonds this many times above the median conductance are near-shorts from
# quasi-degenerate level pairs; they are contracted exactly (their residual
# resistance is below any other scale in the network) instead of being fed
# to the linear solver, whose conditioning they would destroy.  Later
# factors kick in when the residual floor of the double-precision solve is
# still above tolerance; the measured resistance is insensitive to the
# choice because wide networks are bottleneck dominated (the contracted
# resistance is bounded by n_bonds / (factor * median conductance)).
_SHORT_FACTORS = (1e9, 1e6, 1e4, 1e3)


def _contract_shorts(n: int, ii, jj, g, factor: float):
    """Merge nodes joined by near-short bonds; parallel bonds add."""
    if not math.isfinite(factor):
        return n, ii, jj, g, np.arange(n)
    g_cut = factor * np.median(g)
    shorts = g >= g_cut
    if not shorts.any():
        return n, ii, jj, g, np.arange(n)

    parent = np.arange(n)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in zip(ii[shorts], jj[shorts]):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    roots = np.array([find(a) for a in range(n)])
    uniq, mapping = np.unique(roots, return_inverse=True)
    keep = ~shorts
    mi, mj, mg = mapping[ii[keep]], mapping[jj[keep]], g[keep]
    outer = mi != mj  # bonds inside a supernode vanish
    return uniq.size, mi[outer], mj[outer], mg[outer], mapping


class _TerminalsMerged(Exception):
    """Contraction collapsed source and sink into one supernode."""


def _resistance_once(net: BondNetwork, factor: float) -> float:
    n, ii, jj, g, mapping = _contract_shorts(
        net.n_nodes, net.bond_n, net.bond_m, net.bond_g, factor
    )
    source, sink = int(mapping[net.source]), int(mapping[net.sink])
    if source == sink:
        raise _TerminalsMerged
    adj = sp.coo_matrix(
        (np.concatenate([g, g]), (np.concatenate([ii, jj]), np.concatenate([jj, ii]))),
        shape=(n, n),
    ).tocsr()
    ncomp, labels = connected_components(adj, directed=False)
    if labels[source] != labels[sink]:
        return math.inf

    comp = labels == labels[source]
    nodes = np.where(comp)[0]
    pos = -np.ones(n, dtype=int)
    pos[nodes] = np.arange(nodes.size)
    sub = adj[np.ix_(nodes, nodes)]
    deg = np.asarray(sub.sum(axis=1)).ravel()
    lap = sp.diags(deg) - sub

    # reorder so the sink is the pinned (last) node
    order = np.concatenate(
        [np.delete(np.arange(nodes.size), pos[sink]), [pos[sink]]]
    )
    lap = lap.tocsr()[order][:, order]
    b = np.zeros(nodes.size)
    src = np.where(order == pos[source])[0][0]
    b[src] = 1.0
    b[-1] = -1.0

    phi = _solve_pinned(lap, b, dense=nodes.size < _DENSE_BELOW)
    return float(phi[src])


def two_point_resistance(net: BondNetwork) -> float:
    """R = V/I between source and sink for unit injected current.

    Returns ``inf`` when the terminals are disconnected.
    """
    last: SolverConvergenceError | None = None
    for factor in _SHORT_FACTORS:
        try:
            return _resistance_once(net, factor)
        except _TerminalsMerged:
            # a chain of near-shorts spans the terminals: stronger
            # contraction only merges more, so solve uncontracted
            return _resistance_once(net, math.inf)
        except SolverConvergenceError as exc:
            last = exc
            log.warning(
                "Kirchhoff solve at contraction factor %.0e failed (%s); retrying",
                factor,
                exc,
            )
    raise last


@dataclass
class NetworkResult:
    """SLRT network average with its diagnostics."""

    value: float
    r_actual: float
    r_reference: float
    connected: bool
    component_sizes: list[int]
    n_nodes: int
    n_bonds: int


def network_average(
    system: PerturbedSystem,
    drive: DriveSpec,
    window: tuple[float, float],
    buffer: int | None = None,
) -> NetworkResult:
    """Calibrated resistor-network average of |V|^2 over the window.

    A disconnected network means the absorption channel percolation
    fails; the value is then 0 with the component sizes reported.
    """
    ref = assemble_bonds(
        system,
        drive,
        window,
        buffer=buffer,
        matrix=np.ones_like(system.v_squared),
    )
    try:
        net = assemble_bonds(system, drive, window, buffer=buffer)
    except EmptyBandError:
        sizes = [1] * ref.n_nodes
        return NetworkResult(0.0, math.inf, two_point_resistance(ref), False, sizes, ref.n_nodes, 0)

    r_act = two_point_resistance(net)
    r_ref = two_point_resistance(ref)
    if not math.isfinite(r_act):
        _, labels = connected_components(net.adjacency(), directed=False)
        sizes = sorted(np.bincount(labels).tolist(), reverse=True)
        log.warning(
            "percolation failure: terminals disconnected (components %s)", sizes[:6]
        )
        return NetworkResult(0.0, r_act, r_ref, False, sizes, net.n_nodes, net.n_bonds)
    return NetworkResult(
        r_ref / r_act, r_act, r_ref, True, [net.n_nodes], net.n_nodes, net.n_bonds
    )


def slrt_average(
    system: PerturbedSystem,
    drive: DriveSpec,
    window: tuple[float, float],
    buffer: int | None = None,
) -> float:
    """<<x>> = R_ref / R_actual; 0 on percolation failure."""
    return network_average(system, drive, window, buffer=buffer).value


def g_slrt(
    system: PerturbedSystem,
    drive: DriveSpec,
    window: tuple[float, float],
    buffer: int | None = None,
) -> float:
    """Absorption coefficient pi * rho * <<x>>."""
    return math.pi * system.dos * slrt_average(system, drive, window, buffer=buffer)


def g_lrt_kubo(
    system: PerturbedSystem, window: tuple[float, float], cutoff: float
) -> float:
    """Kubo coefficient pi * rho * <x>_a over the near-diagonal band."""
    band = select_band(system, window, cutoff)
    return math.pi * system.dos * algebraic_average(band)
