"""Self-verification suite run by ``drivenspin verify``.

``quick`` covers amplitude unitarity, trace preservation, the amplitude and
Lambda oracles at small Omega and the quadrature check; ``full`` adds the
Omega = 30 series check, the discrete-mode enumeration and spectrum
bookkeeping.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .dynamics import (
    SectorMoments,
    amplitude_arrays,
    density_from_moments,
    evolve_series,
    moments_from_amplitudes,
)
from .model import ModelParams, QubitState
from .oracle import (
    amplitudes_by_matrix_exponential,
    default_discrete_bath,
    discrete_mode_reference,
    lambda_by_series_exponentiation,
    quadrature_partition,
)
from .partition import build_lambda_table, difference_weights, partition_function
from .spectrum import frequency_spectrum

DEFAULT_SEED = 20240611
LEVELS = ("quick", "full")


@dataclass
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    seconds: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" [{self.detail}]" if self.detail else ""
        return (
            f"{status} {self.name}: max deviation {self.max_deviation:.3e} "
            f"(tolerance {self.tolerance:.1e}, {self.seconds:.2f} s){extra}"
        )


def random_sweep(rng: np.random.Generator, n: int, d_range: int = 200, t_max: float = 500.0, j0_max: float = 0.5):
    """Random ``(epsilon, g, j0, d, t)`` samples as arrays."""
    return (
        rng.uniform(-3.0, 3.0, n),
        rng.uniform(0.0, 3.0, n),
        rng.uniform(0.0, j0_max, n),
        rng.integers(-d_range, d_range + 1, n),
        rng.uniform(0.0, t_max, n),
    )


def _per_sample(amplitudes, eps, g, j0, d, t):
    a = np.empty(len(eps), dtype=complex)
    b = np.empty(len(eps), dtype=complex)
    # parameters differ per sample, so group nothing and evaluate one by one
    for i in range(len(eps)):
        _, _, a[i], b[i] = amplitudes(ModelParams(eps[i], g[i], j0[i]), d[i], t[i])
    return a, b


def _random_states(rng: np.random.Generator, n: int):
    theta = np.arccos(rng.uniform(-1.0, 1.0, n))
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    return [QubitState.from_bloch(th, ph) for th, ph in zip(theta, phi)]


def check_unitarity(seed: int, n: int = 10_000, amplitudes: Callable = amplitude_arrays) -> CheckResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    a, b = _per_sample(amplitudes, *random_sweep(rng, n))
    dev = float(np.max(np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1.0)))
    return CheckResult("unitarity |A|^2+|B|^2", dev, 1e-12, time.perf_counter() - start, f"n={n} seed={seed}")


def check_imaginary_b(seed: int, n: int = 10_000, amplitudes: Callable = amplitude_arrays) -> CheckResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed + 1)
    _, b = _per_sample(amplitudes, *random_sweep(rng, n))
    dev = float(np.max(np.abs(b.real)))
    return CheckResult("B purely imaginary", dev, 1e-14, time.perf_counter() - start, f"n={n} seed={seed + 1}")


def sector_traces(a: np.ndarray, b: np.ndarray, states) -> np.ndarray:
    """Trace of the single-sector reduced state for each (A, B, state) triple."""
    traces = np.empty(len(a))
    one = np.ones(1)
    for i, state in enumerate(states):
        m = SectorMoments(np.zeros(1), *moments_from_amplitudes(a[i : i + 1, None], b[i : i + 1, None], one))
        r11, r22, _ = density_from_moments(state, m)
        traces[i] = r11[0] + r22[0]
    return traces


def check_trace(seed: int, n: int = 10_000, amplitudes: Callable = amplitude_arrays) -> CheckResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed + 2)
    a, b = _per_sample(amplitudes, *random_sweep(rng, n))
    traces = sector_traces(a, b, _random_states(rng, n))
    dev = float(np.max(np.abs(traces - 1.0)))
    return CheckResult("trace preservation per sector", dev, 1e-10, time.perf_counter() - start, f"n={n} seed={seed + 2}")


def check_assembled_trace(seed: int, omega: float = 2.0) -> CheckResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed + 3)
    weights = difference_weights(build_lambda_table(omega))
    times = np.linspace(0.0, 100.0, 201)
    dev = 0.0
    for state in _random_states(rng, 8):
        params = ModelParams(rng.uniform(-2, 2), rng.uniform(0.1, 2), rng.uniform(0, 0.3))
        s = evolve_series(params, state, weights, times)
        dev = max(dev, float(np.max(np.abs(s.rho11 + s.rho22 - 1.0))))
    return CheckResult(f"trace of bath-averaged rho (Omega={omega:g})", dev, 1e-10, time.perf_counter() - start)


def check_amplitude_oracle(seed: int, n: int = 2_000, amplitudes: Callable = amplitude_arrays) -> CheckResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed + 4)
    eps, g, j0, d, t = random_sweep(rng, n, d_range=50, t_max=100.0, j0_max=0.2)
    a, b = _per_sample(amplitudes, eps, g, j0, d, t)
    dev = 0.0
    for i in range(n):
        a_ref, b_ref = amplitudes_by_matrix_exponential(ModelParams(eps[i], g[i], j0[i]), d[i], t[i])
        dev = max(dev, abs(a[i] - a_ref), abs(b[i] - b_ref))
    return CheckResult("closed-form vs matrix-exponential amplitudes", float(dev), 1e-12, time.perf_counter() - start, f"n={n} seed={seed + 4}")


def check_lambda_series(omega: float, p_cut: int = 50) -> CheckResult:
    start = time.perf_counter()
    table = build_lambda_table(omega)
    upto = min(p_cut, table.p_max)
    ref = lambda_by_series_exponentiation(omega, upto)
    rec = table.entries[: upto + 1]
    dev = float(np.max(np.abs(rec / ref - 1.0)))
    return CheckResult(f"Lambda recursion vs series (Omega={omega:g}, P<={upto})", dev, 1e-10, time.perf_counter() - start)


def check_table_mass(omega: float, tol: float = 1e-10) -> CheckResult:
    start = time.perf_counter()
    table = build_lambda_table(omega, tol)
    mass = float(np.sum(table.entries))
    # distance outside the allowed band [1 - tol, 1 + 1e-12]
    dev = max(0.0, (1.0 - tol) - mass, mass - (1.0 + 1e-12))
    return CheckResult(f"table mass (Omega={omega:g})", dev, 0.0, time.perf_counter() - start, f"mass={mass!r}")


def check_quadrature() -> CheckResult:
    start = time.perf_counter()
    dev = 0.0
    for omega in (0.1, 1.0, 10.0):
        exact = partition_function(omega, log=True)
        dev = max(dev, abs(quadrature_partition(omega) / exact - 1.0))
    return CheckResult("quadrature log Z vs closed form", dev, 1e-8, time.perf_counter() - start)


def check_discrete_modes(seed: int, points: int = 50) -> CheckResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed + 5)
    bath = default_discrete_bath(3, 3)
    params = ModelParams(0.3, 1.0, 0.2)
    state = _random_states(rng, 1)[0]
    ref = discrete_mode_reference(bath, params, state, np.linspace(0.0, 40.0, points))
    return CheckResult(
        "discrete-mode enumeration vs sector formula",
        ref.max_deviation,
        1e-10,
        time.perf_counter() - start,
        f"modes=3 n_max=3 configurations={bath.configurations}",
    )


def check_spectrum_completeness(omega: float = 5.0) -> CheckResult:
    start = time.perf_counter()
    weights = difference_weights(build_lambda_table(omega))
    dev = 0.0
    for eps in (0.0, 0.5, 0.37):
        lines = frequency_spectrum(ModelParams(eps, 1.0, 0.05), weights)
        dev = max(dev, abs(math.fsum(line.weight for line in lines) - math.fsum(weights.weights)))
    return CheckResult("spectrum weight completeness", dev, 1e-12, time.perf_counter() - start)


def run_checks(level: str = "quick", seed: int = DEFAULT_SEED, amplitudes: Optional[Callable] = None) -> List[CheckResult]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    amps = amplitudes or amplitude_arrays
    n = 2_000 if level == "quick" else 10_000
    results = [
        check_unitarity(seed, n, amps),
        check_imaginary_b(seed, n, amps),
        check_trace(seed, n, amps),
        check_amplitude_oracle(seed, 500 if level == "quick" else 2_000, amps),
        check_lambda_series(0.5),
        check_lambda_series(2.0),
        check_table_mass(2.0),
        check_quadrature(),
    ]
    if level == "full":
        results += [
            check_lambda_series(30.0),
            check_table_mass(200.0),
            check_assembled_trace(seed),
            check_discrete_modes(seed),
            check_spectrum_completeness(),
        ]
    return results


def format_report(results: List[CheckResult], level: str, seed: int) -> str:
    lines = [f"verify level={level} seed={seed}"]
    lines += [r.line() for r in results]
    failed = [r.name for r in results if not r.passed]
    lines.append("all checks passed" if not failed else f"{len(failed)} check(s) failed: {', '.join(failed)}")
    return "\n".join(lines)
