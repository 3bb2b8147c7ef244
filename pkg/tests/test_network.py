import math

import numpy as np
import pytest

from slrt import (
    BasisSpec,
    BoxSpec,
    BumpSpec,
    DriveSpec,
    algebraic_average,
    assemble_bonds,
    build_perturbed_system,
    g_lrt_kubo,
    g_slrt,
    harmonic_average,
    network_average,
    select_band,
    slrt_average,
    two_point_resistance,
)
from slrt.errors import EmptyBandError

from helpers import (
    chain_network,
    pinv_resistance,
    random_network,
    synthetic_system,
    uniform_band_matrix,
)


def test_drive_spec_shapes():
    rect = DriveSpec("rectangular", 2.0, rms_velocity=0.5)
    assert rect.spectral_shape(1.99) == 1.0
    assert rect.spectral_shape(2.0) == 0.0
    assert rect.spectral_shape(-1.0) == 1.0
    expo = DriveSpec("exponential", 2.0)
    assert expo.spectral_shape(2.0) == pytest.approx(math.exp(-1.0))
    assert rect.power_spectrum(0.5) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        DriveSpec("triangle", 1.0)
    with pytest.raises(ValueError):
        DriveSpec("rectangular", -1.0)


def test_assemble_bonds_value():
    # rho = 1, |V|^2 = 1, gap = 1, F = 1  ->  g = 2
    system = synthetic_system(4, matrix=uniform_band_matrix(4, 1.1, 1.0))
    net = assemble_bonds(system, DriveSpec("rectangular", 1.5), (0.0, 3.0), buffer=0)
    assert np.all(net.bond_g == pytest.approx(2.0))


def test_assemble_bonds_linearity_and_omission():
    mat = uniform_band_matrix(5, 1.1, 3.0)
    mat[0, 1] = mat[1, 0] = 0.0  # zero element -> bond absent
    system = synthetic_system(5, matrix=mat)
    net = assemble_bonds(system, DriveSpec("rectangular", 1.5), (0.0, 4.0), buffer=0)
    assert len(net.bond_g) == 3
    system2 = synthetic_system(5, matrix=2 * mat)
    net2 = assemble_bonds(system2, DriveSpec("rectangular", 1.5), (0.0, 4.0), buffer=0)
    assert net2.bond_g == pytest.approx(2 * net.bond_g)


def test_assemble_bonds_respects_rectangular_cutoff():
    system = synthetic_system(8, matrix=np.ones((8, 8)))
    net = assemble_bonds(system, DriveSpec("rectangular", 2.5), (0.0, 7.0), buffer=0)
    gaps = net.node_energies[net.bond_m] - net.node_energies[net.bond_n]
    assert gaps.max() <= 2.0  # integer spacing: gaps of 1 and 2 only


def test_two_point_single_and_series():
    assert two_point_resistance(chain_network([4.0])) == pytest.approx(0.25)
    assert two_point_resistance(chain_network([3.0, 3.0])) == pytest.approx(2 / 3.0)


def test_two_point_disconnected_is_infinite():
    net = chain_network([1.0, 1.0])
    net = net.__class__(
        node_energies=net.node_energies,
        node_levels=net.node_levels,
        bond_n=np.array([0]),
        bond_m=np.array([1]),
        bond_g=np.array([1.0]),
        source=0,
        sink=2,
        buffer=0,
    )
    assert two_point_resistance(net) == math.inf


def test_two_point_matches_pinv_oracle_12_nodes():
    rng = np.random.default_rng(21)
    net = random_network(rng, 12)
    want = pinv_resistance(12, zip(net.bond_n, net.bond_m, net.bond_g), 0, 11)
    assert two_point_resistance(net) == pytest.approx(want, rel=1e-8)


def test_calibration_uniform_matrix():
    drive = DriveSpec("rectangular", 5.5)
    for c in (1e-6, 1.0, 1e6):
        system = synthetic_system(80, matrix=uniform_band_matrix(80, 5.5, c))
        got = slrt_average(system, drive, (0.0, 79.0))
        assert got == pytest.approx(c, rel=1e-8)


def test_slrt_homogeneity():
    rng = np.random.default_rng(2)
    mat = uniform_band_matrix(50, 4.5, 1.0) * np.exp(rng.normal(0, 2, (50, 50)))
    mat = np.triu(mat, 1)
    mat = mat + mat.T
    drive = DriveSpec("rectangular", 4.5)
    base = slrt_average(synthetic_system(50, matrix=mat), drive, (0.0, 49.0))
    lam = 3.7e-4
    scaled = slrt_average(synthetic_system(50, matrix=lam * mat), drive, (0.0, 49.0))
    assert scaled == pytest.approx(lam * base, rel=1e-8)


def test_slrt_sandwich_on_lognormal_band():
    rng = np.random.default_rng(8)
    drive = DriveSpec("rectangular", 6.5)
    for sigma in (0.5, 2.0, 3.5):
        raw = np.exp(rng.normal(0.0, sigma, (70, 70)))
        mat = np.triu(uniform_band_matrix(70, 6.5, 1.0) * raw, 1)
        mat = mat + mat.T
        system = synthetic_system(70, matrix=mat)
        band = select_band(system, (0.0, 69.0), 6.5)
        val = slrt_average(system, drive, (0.0, 69.0))
        assert harmonic_average(band) <= val <= algebraic_average(band)


def test_slrt_rayleigh_monotonicity():
    rng = np.random.default_rng(17)
    mat = np.triu(uniform_band_matrix(40, 4.5, 1.0) * np.exp(rng.normal(0, 1.5, (40, 40))), 1)
    mat = mat + mat.T
    drive = DriveSpec("rectangular", 4.5)
    base = slrt_average(synthetic_system(40, matrix=mat), drive, (0.0, 39.0))
    bumped = mat.copy()
    bumped[20, 22] *= 10.0
    bumped[22, 20] *= 10.0
    up = slrt_average(synthetic_system(40, matrix=bumped), drive, (0.0, 39.0))
    assert up >= base * (1 - 1e-9)


def test_percolation_failure_returns_zero():
    mat = uniform_band_matrix(30, 2.5, 1.0)
    mat[14:16, :] = 0.0
    mat[:, 14:16] = 0.0  # sever the chain
    system = synthetic_system(30, matrix=mat)
    res = network_average(system, DriveSpec("rectangular", 2.5), (0.0, 29.0))
    assert res.value == 0.0
    assert not res.connected
    assert len(res.component_sizes) > 1


def test_empty_network_raises():
    system = synthetic_system(10)  # all-zero matrix
    with pytest.raises(EmptyBandError):
        assemble_bonds(system, DriveSpec("rectangular", 2.5), (0.0, 9.0))


def test_buffer_default_and_window_guard():
    system = synthetic_system(40, matrix=uniform_band_matrix(40, 5.5, 1.0))
    net = assemble_bonds(system, DriveSpec("rectangular", 5.5), (0.0, 39.0))
    assert net.buffer == 6  # ceil(5.5 / 1.0)
    assert net.source == 6 and net.sink == 33
    with pytest.raises(ValueError):
        assemble_bonds(system, DriveSpec("rectangular", 5.5), (0.0, 12.0))


def test_g_coefficients_uniform():
    c = 2.5
    system = synthetic_system(60, matrix=uniform_band_matrix(60, 5.5, c))
    drive = DriveSpec("rectangular", 5.5)
    window = (0.0, 59.0)
    assert g_slrt(system, drive, window) == pytest.approx(math.pi * 1.0 * c, rel=1e-8)
    assert g_lrt_kubo(system, window, drive.cutoff) == pytest.approx(
        math.pi * 1.0 * c, rel=1e-12
    )


def test_exponential_drive_network():
    rng = np.random.default_rng(4)
    mat = np.triu(np.exp(rng.normal(0, 1.0, (30, 30))), 1)
    mat = mat + mat.T
    system = synthetic_system(30, matrix=mat)
    drive = DriveSpec("exponential", 3.0)
    val = slrt_average(system, drive, (0.0, 29.0))
    band = select_band(system, (0.0, 29.0), 29.0)
    assert 0 < val <= algebraic_average(band) * 1.001


@pytest.fixture(scope="module")
def physical_small():
    box = BoxSpec(40.0, 39.0)
    basis = BasisSpec.for_window(box, (0.0, 1.05), 1.5)
    bump = BumpSpec(1e-3, 0.0, 0.0, 21.12, 18.7)
    system = build_perturbed_system(box, bump, basis)
    drive = DriveSpec("rectangular", 7 * system.mean_spacing)
    return system, drive


def test_sandwich_on_physical_band(physical_small):
    system, drive = physical_small
    window = (0.5, 1.0)
    band = select_band(system, window, drive.cutoff)
    val = slrt_average(system, drive, window)
    assert harmonic_average(band) <= val <= algebraic_average(band)


def test_network_dump_fields(physical_small):
    system, drive = physical_small
    net = assemble_bonds(system, drive, (0.5, 1.0))
    assert net.n_bonds > 0
    assert np.all(net.bond_g > 0)
    gaps = net.node_energies[net.bond_m] - net.node_energies[net.bond_n]
    assert np.all(gaps > 0) and np.all(gaps < drive.cutoff)


def test_iterative_path_above_dense_threshold():
    # 620 nodes exercises the conjugate-gradient branch
    n = 620
    system = synthetic_system(n, matrix=uniform_band_matrix(n, 3.5, 2.0))
    drive = DriveSpec("rectangular", 3.5)
    got = slrt_average(system, drive, (0.0, float(n - 1)))
    assert got == pytest.approx(2.0, rel=1e-8)
