import math

import numpy as np
import pytest

from slrt import (
    BasisSpec,
    BoxSpec,
    BumpSpec,
    algebraic_average,
    averages_report,
    build_perturbed_system,
    default_stats_window,
    dos,
    geometric_average,
    harmonic_average,
    log_histogram,
    select_band,
    sparsity,
    untexture,
)
from slrt.errors import EmptyBandError
from slrt.matrixstats import largest_gap

from helpers import synthetic_system, uniform_band_matrix


def band_from_values(values):
    """Synthetic band holding exactly the given element values."""
    n = len(values) + 1
    mat = np.zeros((n, n))
    for k, v in enumerate(values):
        mat[k, k + 1] = mat[k + 1, k] = v
    system = synthetic_system(n, matrix=mat)
    return select_band(system, (0.0, n - 1.0), 1.5)


def test_select_band_poisson_count():
    rng = np.random.default_rng(7)
    gaps = rng.exponential(1.0, size=140)
    energies = np.concatenate([[0.0], np.cumsum(gaps)])
    system = synthetic_system(energies.size)
    system.energies = energies
    lo, hi = energies[20], energies[119]  # window of exactly 100 levels
    band = select_band(system, (lo, hi), 7.0)
    assert 0.8 * 700 <= len(band) <= 1.2 * 700


def test_select_band_small_cases():
    system = synthetic_system(4, matrix=np.ones((4, 4)) - np.eye(4))
    band = select_band(system, (0.0, 1.0), 1.5)  # exactly two levels
    assert len(band) == 1
    with pytest.raises(EmptyBandError):
        select_band(system, (0.0, 3.0), 0.5)  # cutoff below the smallest gap


def test_select_band_excludes_diagonal_and_duplicates():
    system = synthetic_system(6, matrix=uniform_band_matrix(6, 2.5, 3.0))
    band = select_band(system, (0.0, 5.0), 2.5)
    pairs = set(zip(band.n.tolist(), band.m.tolist()))
    assert len(pairs) == len(band)
    assert all(n < m for n, m in pairs)


def test_averages_on_known_values():
    band = band_from_values([1.0, 3.0])
    assert algebraic_average(band) == pytest.approx(2.0)
    band = band_from_values([1.0, 100.0])
    assert geometric_average(band) == pytest.approx(10.0)
    band = band_from_values([1.0, 1.0 / 3.0])
    assert harmonic_average(band) == pytest.approx(0.5)


def test_averages_constant_band():
    band = band_from_values([2.5, 2.5, 2.5])
    assert algebraic_average(band) == pytest.approx(2.5)
    assert geometric_average(band) == pytest.approx(2.5)
    assert harmonic_average(band) == pytest.approx(2.5)
    assert sparsity(band) == pytest.approx(1.0)


def test_zero_elements_zero_means():
    band = band_from_values([1.0, 0.0, 4.0])
    assert geometric_average(band) == 0.0
    assert harmonic_average(band) == 0.0
    assert sparsity(band) == 0.0
    assert band.zero_count == 1


def test_mean_inequality_chain_random_bands():
    rng = np.random.default_rng(3)
    for _ in range(25):
        vals = np.exp(rng.normal(0.0, rng.uniform(0.1, 4.0), size=60))
        band = band_from_values(vals.tolist())
        h, g, a = harmonic_average(band), geometric_average(band), algebraic_average(band)
        assert h <= g <= a


def test_scaling_equivariance():
    rng = np.random.default_rng(11)
    vals = np.exp(rng.normal(0.0, 2.0, size=40))
    band = band_from_values(vals.tolist())
    scaled = band_from_values((137.0 * vals).tolist())
    assert algebraic_average(scaled) == pytest.approx(137.0 * algebraic_average(band))
    assert geometric_average(scaled) == pytest.approx(137.0 * geometric_average(band))
    assert harmonic_average(scaled) == pytest.approx(137.0 * harmonic_average(band))
    assert sparsity(scaled) == pytest.approx(sparsity(band))


def test_averages_report_fields():
    band = band_from_values([1.0, 4.0, 0.0])
    rep = averages_report(band, network=0.7)
    assert rep.element_count == 3
    assert rep.zero_count == 1
    assert rep.network == 0.7
    assert rep.sparsity_q == 0.0


def test_log_histogram_counts_and_moments():
    rng = np.random.default_rng(5)
    mu, sig = -3.0, 1.5
    vals = np.exp(rng.normal(mu, sig, size=4000))
    band = band_from_values(vals.tolist())
    hist = log_histogram(band, bins=60)
    assert hist.total == len(band)
    centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    w = hist.counts / hist.counts.sum()
    mean = float(np.sum(w * centers))
    var = float(np.sum(w * (centers - mean) ** 2))
    assert mean == pytest.approx(mu, abs=4 * sig / math.sqrt(len(vals)) + 0.05)
    assert var == pytest.approx(sig**2, rel=0.15)
    assert "algebraic" in hist.markers and "geometric" in hist.markers


def test_log_histogram_single_bin_for_constant():
    band = band_from_values([2.0] * 10)
    hist = log_histogram(band, bins=7)
    assert np.count_nonzero(hist.counts) == 1


@pytest.fixture(scope="module")
def physical_system():
    box = BoxSpec(40.0, 39.0)
    basis = BasisSpec.for_window(box, (0.0, 1.05), 1.5)
    bump = BumpSpec(1e-3, 0.0, 0.0, 21.12, 18.7)
    return box, build_perturbed_system(box, bump, basis)


def test_untexture_preserves_diagonal_multisets(physical_system):
    _, system = physical_system
    scrambled = untexture(system, seed=99)
    n = system.n_levels
    for d in (1, 3, 10):
        before = np.sort(np.diagonal(system.v_squared, offset=d))
        after = np.sort(np.diagonal(scrambled.v_squared, offset=d))
        assert np.array_equal(before, after)
    assert np.array_equal(system.energies, scrambled.energies)
    assert np.array_equal(scrambled.v_squared, scrambled.v_squared.T)


def test_untexture_constant_matrix_fixed_point():
    mat = uniform_band_matrix(12, 3.5, 2.0)
    system = synthetic_system(12, matrix=mat)
    assert np.array_equal(untexture(system, 5).v_squared, mat)


def test_untexture_energy_band_stats_close(physical_system):
    _, system = physical_system
    window = (0.5, 1.0)
    cutoff = 7 * system.mean_spacing
    band0 = select_band(system, window, cutoff)
    band1 = select_band(untexture(system, 4), window, cutoff)
    assert len(band1) == len(band0)  # pair set depends only on energies
    m0 = np.mean(np.log(band0.x[band0.x > 0]))
    m1 = np.mean(np.log(band1.x[band1.x > 0]))
    assert abs(m1 - m0) < 0.5


def test_untexture_keeps_sparsity_of_full_matrix(physical_system):
    _, system = physical_system
    scrambled = untexture(system, seed=2)
    # whole-matrix multiset is unchanged, so global moments match exactly
    assert np.sort(system.v_squared.ravel()) == pytest.approx(
        np.sort(scrambled.v_squared.ravel())
    )


def test_algebraic_average_vs_estimate_as20():
    # zero-deformation band average against the semiclassical estimate at
    # the window velocity; the estimate carries an order-unity prefactor
    # (continuum counting gives 16/3 above it, desk scale lands near 3).
    box = BoxSpec(200.0, 10.05)
    basis = BasisSpec.for_window(box, (0.0, 1.0), 1.5)
    bump = BumpSpec(0.0, 0.0, 0.0, 100.5, 5.2)
    system = build_perturbed_system(box, bump, basis)
    window = (0.40, 0.95)
    band = select_band(system, window, 7 * system.mean_spacing)
    a = algebraic_average(band)
    v = math.sqrt(2 * 0.5 * (window[0] + window[1]) / box.mass)
    estimate = box.mass * v**3 / (2 * math.pi * box.length_y * box.length_x**2)
    assert estimate / 6 < a < estimate * 6


def test_default_stats_window_and_gap(physical_system):
    _, system = physical_system
    lo, hi = default_stats_window(system)
    assert system.window[0] < lo < hi < system.window[1]
    assert largest_gap(system, (0.5, 1.0)) < 7.0


def test_small_element_peak_shifts_two_decades_squared(physical_system):
    # u^2 scaling: two decades in u move the typical element four in x
    box, _ = physical_system
    basis = BasisSpec.for_window(box, (0.0, 1.05), 1.5)
    window, cutoff = (0.5, 1.0), 7.0 / dos(box)
    medians = {}
    for u in (1e-4, 1e-2):
        bump = BumpSpec(u, 0.0, 0.0, 21.12, 18.7)
        system = build_perturbed_system(box, bump, basis)
        band = select_band(system, window, cutoff)
        medians[u] = np.median(band.x[band.x > 0])
    shift = math.log10(medians[1e-2] / medians[1e-4])
    assert 3.0 <= shift <= 5.0


def test_bimodal_histogram_peak_near_geometric(physical_system):
    _, system = physical_system
    band = select_band(system, (0.5, 1.0), 7.0 / system.dos)
    hist = log_histogram(band, bins=30)
    peak = int(np.argmax(hist.counts))
    center = 0.5 * (hist.bin_edges[peak] + hist.bin_edges[peak + 1])
    assert abs(center - math.log(hist.markers["geometric"])) < 3.0
