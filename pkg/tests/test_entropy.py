import math

import numpy as np
import pytest

from drivenspin.dynamics import DensityMatrix2
from drivenspin.entropy import (
    bloch_angles,
    bloch_grid,
    density_eigenvalues,
    entropy_series,
    pointer_scan,
    von_neumann,
)
from drivenspin.errors import NumericalValidityError, UsageError
from drivenspin.model import ModelParams, QubitState, state_from_label
from drivenspin.partition import build_lambda_table


def _random_density(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix2(rho[0, 0].real, rho[1, 1].real, rho[0, 1])


def test_pure_and_maximally_mixed():
    assert density_eigenvalues(DensityMatrix2(1.0, 0.0, 0j)) == (1.0, 0.0)
    assert von_neumann(DensityMatrix2(1.0, 0.0, 0j)) == 0.0
    assert density_eigenvalues(DensityMatrix2(0.5, 0.5, 0j)) == (0.5, 0.5)
    assert von_neumann(DensityMatrix2(0.5, 0.5, 0j)) == pytest.approx(math.log(2), rel=1e-15)
    assert von_neumann(DensityMatrix2(0.5, 0.5, 0.5 + 0j)) == pytest.approx(0.0, abs=1e-15)


def test_eigenvalues_against_characteristic_polynomial():
    rng = np.random.default_rng(11)
    for _ in range(200):
        rho = _random_density(rng)
        det = rho.rho11 * rho.rho22 - abs(rho.rho12) ** 2
        roots = np.sort(np.roots([1.0, -(rho.rho11 + rho.rho22), det]).real)[::-1]
        p1, p2 = density_eigenvalues(rho)
        assert p1 >= p2
        assert p1 + p2 == pytest.approx(1.0, abs=1e-12)
        assert np.allclose([p1, p2], roots, atol=1e-12)
        e = von_neumann(rho)
        assert 0 <= e <= math.log(2) + 1e-9


def test_clamping_and_validity_error():
    # eigenvalue -1e-13: roundoff, clamped to 0
    p1, p2 = density_eigenvalues(DensityMatrix2(1.0 + 1e-13, -1e-13, 0j))
    assert p2 == 0.0 and p1 == 1.0
    with pytest.raises(NumericalValidityError):
        density_eigenvalues(DensityMatrix2(1.0 + 1e-8, -1e-8, 0j))
    with pytest.raises(NumericalValidityError):
        density_eigenvalues(DensityMatrix2(0.5, 0.5, 0.6 + 0j))


def test_entropy_starts_at_zero(table_20):
    params = ModelParams(1.0, 1.0, 0.01)
    for label in ("up", "phi1", "phi-super"):
        es = entropy_series(params, state_from_label(label, 1.0, 1.0), table_20, np.linspace(0, 30, 31))
        assert es.entropy[0] == pytest.approx(0.0, abs=1e-12)
        assert np.all(es.p1 + es.p2 == pytest.approx(1.0, abs=1e-10))
        assert np.all(es.p1 >= es.p2)
        assert es[0].entropy == es.entropy[0]
        assert len(list(es)) == 31


def test_entropy_grows_with_coupling_and_bath(table_20):
    t = np.linspace(0, 300, 301)
    t40 = build_lambda_table(40.0)
    for eps in (0.0, 1.0, 3.0):
        state = state_from_label("phi1", eps, 1.0)

        def avg(table, j0):
            return float(np.mean(entropy_series(ModelParams(eps, 1.0, j0), state, table, t).entropy))

        base = avg(table_20, 0.01)
        assert avg(t40, 0.01) >= base
        assert avg(table_20, 0.02) >= base


def test_bloch_grid_and_angles():
    thetas, phis = bloch_grid(64, 64)
    assert thetas[0] == 0.0 and thetas[-1] == math.pi and len(thetas) == 64
    assert phis[0] == 0.0 and phis[-1] < 2 * math.pi
    with pytest.raises(UsageError):
        bloch_grid(0, 4)
    theta, phi = bloch_angles(QubitState.from_bloch(1.2, 2.5))
    assert (theta, phi) == pytest.approx((1.2, 2.5))
    with pytest.raises(UsageError):
        bloch_angles(QubitState.mixed(0.5, 0.5))


def test_pointer_scan_without_coupling_ties_to_first_point():
    table = build_lambda_table(5.0)
    scan = pointer_scan(ModelParams(0.5, 1.0, 0.0), table, bloch_grid(8, 8), np.linspace(0, 50, 51))
    assert np.all(np.abs(scan.landscape) < 1e-12)
    assert (scan.best_theta, scan.best_phi) == (0.0, 0.0)


def test_pointer_scan_resonance_prefers_x_eigenstates(table_20):
    thetas, phis = bloch_grid(33, 16)
    scan = pointer_scan(ModelParams(0.0, 1.0, 0.01), table_20, (thetas, phis), np.linspace(0, 200, 201))
    assert scan.best_theta == pytest.approx(math.pi / 2, abs=thetas[1])
    assert min(abs(scan.best_phi), abs(scan.best_phi - math.pi)) <= phis[1]
    assert scan.landscape.shape == (33, 16)
    assert scan.entropy_score == pytest.approx(scan.landscape.min())


def test_pointer_scan_landscape_matches_direct_evaluation(table_20):
    params = ModelParams(1.0, 1.0, 0.01)
    t = np.linspace(0, 100, 101)
    thetas, phis = np.array([0.3, 1.9]), np.array([0.0, 2.0])
    scan = pointer_scan(params, table_20, (thetas, phis), t)
    for i, th in enumerate(thetas):
        for j, ph in enumerate(phis):
            direct = np.mean(entropy_series(params, QubitState.from_bloch(th, ph), table_20, t).entropy)
            assert scan.landscape[i, j] == pytest.approx(direct, abs=1e-13)
