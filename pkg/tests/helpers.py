"""Shared oracles and synthetic builders for the test suite.

Everything here is deliberately independent of the implementation paths
it checks: brute-force pseudo-inverse resistances, fixed-order
Gauss-Legendre quadrature, and direct moment formulas.
"""

import math

import numpy as np

from slrt import BondNetwork, PerturbedSystem


def pinv_resistance(n_nodes, bonds, a, b, inject_a=None, inject_b=None):
    """Two-point (or transfer) resistance through the Laplacian pseudo-inverse.

    ``bonds`` is an iterable of (i, j, g).  Current enters at inject_a and
    leaves at inject_b (defaulting to the measurement pair a, b).
    """
    lap = np.zeros((n_nodes, n_nodes))
    for i, j, g in bonds:
        lap[i, i] += g
        lap[j, j] += g
        lap[i, j] -= g
        lap[j, i] -= g
    pinv = np.linalg.pinv(lap)
    ia = a if inject_a is None else inject_a
    ib = b if inject_b is None else inject_b
    e_meas = np.zeros(n_nodes)
    e_meas[a], e_meas[b] = 1.0, -1.0
    e_inj = np.zeros(n_nodes)
    e_inj[ia], e_inj[ib] = 1.0, -1.0
    return float(e_meas @ pinv @ e_inj)


def gauss_legendre_overlap(n, m, length, center, sigma, order=4000):
    """(2/L) * int sin sin * normalized Gaussian via fixed-order quadrature."""
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * length * (x + 1.0)
    w = 0.5 * length * w
    kn, km = n * math.pi / length, m * math.pi / length
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    f = np.sin(kn * x) * np.sin(km * x) * norm * np.exp(-0.5 * ((x - center) / sigma) ** 2)
    return 2.0 / length * float(np.sum(w * f))


def synthetic_system(n, spacing=1.0, matrix=None, dos=None):
    """Equally spaced levels with a caller-supplied coupling matrix."""
    energies = np.arange(n, dtype=float) * spacing
    if matrix is None:
        matrix = np.zeros((n, n))
    if dos is None:
        dos = 1.0 / spacing
    return PerturbedSystem(
        energies=energies,
        v_squared=np.asarray(matrix, dtype=float),
        dos=dos,
        window=(0.0, energies[-1]),
        deformation=0.0,
    )


def uniform_band_matrix(n, cutoff, value, spacing=1.0):
    """Symmetric matrix equal to ``value`` on the band, 0 on the diagonal."""
    energies = np.arange(n, dtype=float) * spacing
    gap = np.abs(energies[None, :] - energies[:, None])
    mat = np.where((gap > 0) & (gap <= cutoff), float(value), 0.0)
    return mat


def chain_network(conductances):
    """BondNetwork for a simple chain with the given bond conductances."""
    g = np.asarray(conductances, dtype=float)
    n = g.size + 1
    return BondNetwork(
        node_energies=np.arange(n, dtype=float),
        node_levels=np.arange(n),
        bond_n=np.arange(n - 1),
        bond_m=np.arange(1, n),
        bond_g=g,
        source=0,
        sink=n - 1,
        buffer=0,
    )


def random_network(rng, n_nodes, p_edge=0.45, log_g_span=4.0):
    """Random connected-ish weighted graph as a BondNetwork (buffer 0)."""
    ii, jj, gg = [], [], []
    for i in range(n_nodes - 1):  # spanning path keeps it connected
        ii.append(i)
        jj.append(i + 1)
        gg.append(10.0 ** rng.uniform(-log_g_span / 2, log_g_span / 2))
    for i in range(n_nodes):
        for j in range(i + 2, n_nodes):
            if rng.random() < p_edge:
                ii.append(i)
                jj.append(j)
                gg.append(10.0 ** rng.uniform(-log_g_span / 2, log_g_span / 2))
    return BondNetwork(
        node_energies=np.arange(n_nodes, dtype=float),
        node_levels=np.arange(n_nodes),
        bond_n=np.array(ii),
        bond_m=np.array(jj),
        bond_g=np.array(gg),
        source=0,
        sink=n_nodes - 1,
        buffer=0,
    )


def restrict_to_window(system, window):
    """Sub-system holding only the levels inside the window."""
    idx = system.levels_in(window)
    return PerturbedSystem(
        energies=system.energies[idx].copy(),
        v_squared=system.v_squared[np.ix_(idx, idx)].copy(),
        dos=system.dos,
        window=(float(window[0]), float(window[1])),
        deformation=system.deformation,
    )


def lognormal_mean_se(sigma2, n):
    """Standard error of the sample mean of exp(N(mu, sigma2)), relative."""
    return math.sqrt((math.exp(sigma2) - 1.0) / n)
