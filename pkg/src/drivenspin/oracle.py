"""Independent reference computations.

None of these routines reuse the closed forms they are meant to check:

* sector amplitudes from a scaling-and-squaring Taylor matrix exponential,
* ``Lambda(P)`` from truncated power-series exponentiation of ``log G``,
* ``log Z`` from adaptive quadrature of the Bose integral,
* full thermal averages from brute-force enumeration of a few discrete modes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import OracleError, UsageError
from .model import ModelParams, QubitState
from .partition import OMEGA_MAX, ZETA4

MAX_CONFIGURATIONS = 10**7
MAX_SERIES_TERMS = 500
_TAYLOR_ORDER = 18


def expm_taylor(m: np.ndarray) -> np.ndarray:
    """Matrix exponential of a stack of square matrices ``(..., n, n)``.

    Each matrix is scaled by ``2^-s`` so that its 1-norm is at most 1/2,
    exponentiated with an order-18 Taylor polynomial (Horner form), then
    squared ``s`` times.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[-1]
    norms = np.max(np.sum(np.abs(m), axis=-2), axis=-1)
    s = np.maximum(0, np.ceil(np.log2(np.maximum(norms, 1e-300) / 0.5))).astype(int)
    scaled = m / (2.0 ** s)[..., None, None]
    eye = np.broadcast_to(np.eye(n, dtype=complex), m.shape)
    result = eye.copy()
    for k in range(_TAYLOR_ORDER, 0, -1):
        result = eye + (scaled @ result) / k
    for step in range(int(s.max()) if s.size else 0):
        squared = result @ result
        result = np.where((s > step)[..., None, None], squared, result)
    return result


def sector_generator(params: ModelParams, d) -> np.ndarray:
    """``H = [[-chi/2, g/2], [g/2, chi/2]]`` for each ``d`` (shape ``(..., 2, 2)``)."""
    chi = params.j0 * np.asarray(d, dtype=float) - params.epsilon
    h = np.empty(chi.shape + (2, 2))
    h[..., 0, 0] = -0.5 * chi
    h[..., 1, 1] = 0.5 * chi
    h[..., 0, 1] = h[..., 1, 0] = 0.5 * params.g
    return h


def amplitudes_by_matrix_exponential(params: ModelParams, d, t):
    """``(A, B)`` as the first column of ``exp(-i H t)``; broadcasts over ``d`` and ``t``."""
    d, t = np.broadcast_arrays(np.asarray(d, dtype=float), np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise UsageError("t must be >= 0")
    u = expm_taylor(-1j * sector_generator(params, d) * t[..., None, None])
    a, b = u[..., 0, 0], u[..., 1, 0]
    if a.ndim == 0:
        return complex(a), complex(b)
    return a, b


def lambda_by_series_exponentiation(omega: float, p_max: int) -> np.ndarray:
    """Normalised ``Lambda_hat(0..p_max)`` from ``exp(H)``, ``H = 2 Omega sum lam^n / n^4``.

    Terms ``e^{-H(1)} H^k / k!`` are accumulated as truncated power series;
    the prefactor is applied up front so no partial sum overflows.
    """
    if not (0 < omega <= OMEGA_MAX):
        raise UsageError(f"Omega must lie in (0, {OMEGA_MAX}], got {omega!r}")
    if not (0 <= p_max <= 1000):
        raise UsageError(f"p_max must lie in [0, 1000], got {p_max!r}")
    n = p_max + 1
    h = np.zeros(n)
    h[1:] = 2.0 * omega / np.arange(1, n, dtype=float) ** 4
    term = np.zeros(n)
    term[0] = math.exp(-2.0 * omega * ZETA4)
    total = term.copy()
    for k in range(1, MAX_SERIES_TERMS + 1):
        term = np.convolve(term, h)[:n] / k
        total += term
        # H has no constant part, so H^k starts at lam^k
        if k >= p_max or not np.any(term > 1e-17 * total):
            return total
    raise OracleError(f"series exponentiation did not converge within {MAX_SERIES_TERMS} terms")


def bose_log_integral() -> float:
    """``int_0^inf x^2 ln(1 - e^-x) dx`` by adaptive quadrature (exact: -pi^4/45)."""

    def f(x):
        return x * x * math.log(-math.expm1(-x))

    # near 0: x^2 ln(1 - e^-x) ~ x^2 (ln x - x/2 + x^2/24)
    a = 1e-3
    head = (a**3 / 3) * (math.log(a) - 1.0 / 3) - a**4 / 8 + a**5 / 120
    body, err1 = integrate.quad(f, a, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)
    tail, err2 = integrate.quad(f, 1.0, math.inf, epsabs=1e-15, epsrel=1e-13, limit=200)
    value = head + body + tail
    if err1 + err2 > 1e-11 * abs(value):
        raise OracleError(f"quadrature error estimate {err1 + err2:.3g} too large")
    return value


def quadrature_partition(omega: float) -> float:
    """``log Z = -2 Omega int_0^inf x^2 ln(1 - e^-x) dx``."""
    if omega < 0:
        raise UsageError(f"Omega must be >= 0, got {omega!r}")
    return -2.0 * omega * bose_log_integral()


def mean_occupation_by_quadrature(omega: float) -> float:
    """``Omega int_0^inf x^2 / (e^x - 1) dx``, the mean magnon number (exact: 2 zeta(3) Omega)."""

    def f(x):
        # x^2 e^-x / (1 - e^-x), finite for large x
        return x * x * math.exp(-x) / -math.expm1(-x) if x > 0 else 0.0

    value, _ = integrate.quad(f, 0, math.inf, epsabs=1e-14)
    return omega * value


def magnon_dispersion(k, coordination: float, exchange: float, cell_length: float = 1.0):
    """Small-k antiferromagnetic magnon frequency ``sqrt(2M) J k l``."""
    return math.sqrt(2.0 * coordination) * exchange * np.asarray(k, dtype=float) * cell_length


@dataclass(frozen=True)
class DiscreteBath:
    """A finite set of magnon modes shared by both branches, truncated at ``n_max``."""

    mode_freqs: tuple
    n_max: int
    temperature: float

    def __post_init__(self):
        object.__setattr__(self, "mode_freqs", tuple(float(w) for w in self.mode_freqs))
        if any(w <= 0 for w in self.mode_freqs):
            raise UsageError("mode frequencies must be positive")
        if self.n_max < 1:
            raise UsageError("n_max must be >= 1")
        if not self.temperature > 0:
            raise UsageError("temperature must be positive")
        if self.configurations > MAX_CONFIGURATIONS:
            raise UsageError(f"{self.configurations} configurations exceed cap {MAX_CONFIGURATIONS}")

    @property
    def n_modes(self) -> int:
        return len(self.mode_freqs)

    @property
    def configurations(self) -> int:
        return (self.n_max + 1) ** (2 * self.n_modes)

    def branch_occupations(self):
        """All occupation vectors of one branch, shape ``(count, n_modes)``."""
        if self.n_modes == 0:
            return np.zeros((1, 0))
        return np.array(list(itertools.product(range(self.n_max + 1), repeat=self.n_modes)), dtype=float)

    def lambda_by_counting(self) -> np.ndarray:
        """``Lambda(P)``: Boltzmann weight of one branch summed over states with total ``P``."""
        occ = self.branch_occupations()
        energy = occ @ np.array(self.mode_freqs)
        totals = occ.sum(axis=1).astype(int)
        lam = np.zeros(self.n_modes * self.n_max + 1)
        np.add.at(lam, totals, np.exp(-energy / self.temperature))
        return lam


@dataclass(frozen=True, eq=False)
class ReferenceResult:
    times: np.ndarray
    sz: np.ndarray  # brute-force enumeration
    rho: np.ndarray  # (times, 2, 2)
    sz_sector: np.ndarray  # sector formula with counted Lambda
    rho_sector: np.ndarray

    @property
    def max_deviation(self) -> float:
        return float(max(np.max(np.abs(self.sz - self.sz_sector)), np.max(np.abs(self.rho - self.rho_sector))))


def _enumerated_density(bath: DiscreteBath, params: ModelParams, state: QubitState, times: np.ndarray):
    occ = bath.branch_occupations()
    freqs = np.array(bath.mode_freqs)
    energy = occ @ freqs
    number = occ.sum(axis=1)
    rho0 = state.density_matrix()
    rho = np.zeros((len(times), 2, 2), dtype=complex)
    z = 0.0
    # loop over alpha configurations; beta configurations are vectorised
    for e_a, n_a in zip(energy, number):
        boltz = np.exp(-(e_a + energy) / bath.temperature)
        z += boltz.sum()
        d = number - n_a
        h = sector_generator(params, d)  # (n_beta, 2, 2)
        u = expm_taylor(-1j * h[None, :, :, :] * times[:, None, None, None])  # (t, n_beta, 2, 2)
        evolved = u @ rho0 @ np.conj(np.swapaxes(u, -1, -2))
        rho += np.einsum("b,tbij->tij", boltz, evolved)
    return rho / z


def discrete_mode_reference(bath: DiscreteBath, params: ModelParams, state: QubitState, times) -> ReferenceResult:
    """Exact thermal average over every occupation configuration, alongside the
    sector formula evaluated with ``Lambda(P)`` counted on the same bath."""
    from .dynamics import density_from_moments, sector_moments, sz_from_moments
    from .partition import weights_from_lambda

    times = np.atleast_1d(np.asarray(times, dtype=float))
    rho = _enumerated_density(bath, params, state, times)
    sz = 0.5 * (rho[:, 0, 0] - rho[:, 1, 1]).real

    weights = weights_from_lambda(bath.lambda_by_counting())
    m = sector_moments(params, weights, times)
    r11, r22, r12 = density_from_moments(state, m)
    rho_sector = np.empty_like(rho)
    rho_sector[:, 0, 0] = r11
    rho_sector[:, 1, 1] = r22
    rho_sector[:, 0, 1] = r12
    rho_sector[:, 1, 0] = np.conj(r12)
    return ReferenceResult(times, sz, rho, sz_from_moments(state, m), rho_sector)


def default_discrete_bath(n_modes: int = 3, n_max: int = 3) -> DiscreteBath:
    """Modes ``k_j = 2 pi j / L`` with ``L = 4 pi l`` on the cubic dispersion
    (``M = 6``, ``J = 1``), at ``T = omega_1``."""
    k = 2.0 * math.pi * np.arange(1, n_modes + 1) / (4.0 * math.pi)
    freqs = magnon_dispersion(k, coordination=6, exchange=1.0)
    temperature = float(freqs[0]) if n_modes else 1.0
    return DiscreteBath(tuple(freqs), n_max, temperature)


__all__: Sequence[str] = [
    "expm_taylor",
    "amplitudes_by_matrix_exponential",
    "lambda_by_series_exponentiation",
    "quadrature_partition",
    "bose_log_integral",
    "mean_occupation_by_quadrature",
    "magnon_dispersion",
    "DiscreteBath",
    "ReferenceResult",
    "discrete_mode_reference",
    "default_discrete_bath",
]
