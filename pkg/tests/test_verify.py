import numpy as np

from drivenspin.dynamics import amplitude_arrays
from drivenspin.verify import (
    DEFAULT_SEED,
    check_amplitude_oracle,
    check_trace,
    check_unitarity,
    format_report,
    run_checks,
)


def _real_b(params, d, t):
    # drops the factor i in B
    chi, kappa, a, b = amplitude_arrays(params, d, t)
    return chi, kappa, a, 1j * b


def _flipped_b(params, d, t):
    chi, kappa, a, b = amplitude_arrays(params, d, t)
    return chi, kappa, a, -b


def test_quick_level_passes():
    results = run_checks("quick")
    assert all(r.passed for r in results), format_report(results, "quick", DEFAULT_SEED)


def test_full_level_passes():
    results = run_checks("full")
    assert all(r.passed for r in results), format_report(results, "full", DEFAULT_SEED)
    names = " ".join(r.name for r in results)
    assert "discrete-mode" in names and "Omega=30" in names


def test_missing_i_in_b_breaks_trace():
    result = check_trace(DEFAULT_SEED, 500, _real_b)
    assert not result.passed
    assert result.max_deviation > 1e-3


def test_sign_error_in_b_is_caught_by_oracle():
    assert not check_amplitude_oracle(DEFAULT_SEED, 200, _flipped_b).passed
    # a sign flip keeps B imaginary, so unitarity and the per-sector trace still hold
    assert check_unitarity(DEFAULT_SEED, 200, _flipped_b).passed
    assert check_trace(DEFAULT_SEED, 200, _flipped_b).passed


def test_mutated_run_reports_failure():
    results = run_checks("quick", amplitudes=_flipped_b)
    report = format_report(results, "quick", DEFAULT_SEED)
    assert "FAIL closed-form vs matrix-exponential amplitudes" in report
    assert "check(s) failed" in report


def test_seed_reproducibility():
    a = check_unitarity(5, 300)
    b = check_unitarity(5, 300)
    assert a.max_deviation == b.max_deviation
    assert np.isfinite(a.max_deviation)
