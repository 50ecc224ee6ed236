"""Sector amplitudes and the bath-averaged qubit observables.

In the sector where the two magnon branches hold ``P1`` and ``P2`` quanta the
qubit sees ``H = -chi S^z + g S^x`` with ``chi = J0 (P2 - P1) - eps``, so

    exp(-iHt)|1> = A|1> + B|0>,    exp(-iHt)|0> = B|1> + conj(A)|0>,
    A = cos(kappa t/2) + i (chi/kappa) sin(kappa t/2),
    B = -i (g/kappa) sin(kappa t/2),   kappa = sqrt(chi^2 + g^2).

Everything depends on ``(P1, P2)`` only through ``d = P2 - P1``, so the
thermal double sum collapses onto the difference weights ``w(d)``.  Every
matrix element of the reduced state is a linear combination of the five
moments ``sum_d w(d) X(d, t)`` with ``X`` in ``{|A|^2, |B|^2, A B*, A A, A B}``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .model import ModelParams, QubitState
from .partition import DifferenceWeights, LambdaTable, difference_weights

# elements per (time x d) block; bounds peak memory of one chunk
_BLOCK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class SectorAmplitude:
    d: int
    chi: float
    kappa: float
    a: complex
    b: complex


@dataclass(frozen=True)
class DensityMatrix2:
    """2x2 reduced density matrix; ``rho21`` is ``conj(rho12)`` by construction."""

    rho11: float
    rho22: float
    rho12: complex

    @property
    def rho21(self) -> complex:
        return self.rho12.conjugate()

    @property
    def trace(self) -> float:
        return self.rho11 + self.rho22

    def as_array(self) -> np.ndarray:
        return np.array([[self.rho11, self.rho12], [self.rho21, self.rho22]], dtype=complex)


@dataclass(frozen=True, eq=False)
class SectorMoments:
    """Weighted sums over ``d`` of amplitude products, one entry per time."""

    times: np.ndarray
    aa: np.ndarray  # sum w |A|^2
    bb: np.ndarray  # sum w |B|^2
    ab_conj: np.ndarray  # sum w A B*
    a_sq: np.ndarray  # sum w A A
    ab: np.ndarray  # sum w A B


@dataclass(eq=False)
class TimeSeries:
    times: np.ndarray
    sz: np.ndarray
    rho11: np.ndarray
    rho22: np.ndarray
    rho12: np.ndarray
    entropy: Optional[np.ndarray] = None
    p1: Optional[np.ndarray] = field(default=None, repr=False)
    p2: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self):
        return len(self.times)

    def rho(self, i: int) -> DensityMatrix2:
        return DensityMatrix2(float(self.rho11[i]), float(self.rho22[i]), complex(self.rho12[i]))


def amplitude_arrays(params: ModelParams, d, t):
    """Vectorised ``(chi, kappa, A, B)`` broadcast over ``d`` and ``t``.

    ``sin(phase) / kappa`` is formed from the same ``sin`` call that pairs
    with ``cos(phase)`` so that unitarity holds at large phases; the
    ``kappa -> 0`` corner (``g = 0``, ``chi = 0``) falls back to ``t / 2``.
    """
    d = np.asarray(d, dtype=float)
    t = np.asarray(t, dtype=float)
    chi = params.j0 * d - params.epsilon
    kappa = np.hypot(chi, params.g)
    half_t = 0.5 * t
    phase = kappa * half_t
    kappa, phase, half_t = np.broadcast_arrays(kappa, phase, half_t)
    safe = kappa > 0
    sin_over_kappa = np.where(safe, np.sin(phase) / np.where(safe, kappa, 1.0), half_t)
    a = np.cos(phase) + 1j * (chi * sin_over_kappa)
    b = -1j * (params.g * sin_over_kappa)
    return chi, kappa, a, b


def sector_amplitudes(params: ModelParams, d: int, t: float) -> SectorAmplitude:
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    chi, kappa, a, b = amplitude_arrays(params, d, t)
    return SectorAmplitude(int(d), float(chi), float(kappa), complex(a), complex(b))


def moments_from_amplitudes(a: np.ndarray, b: np.ndarray, w: np.ndarray):
    """Contract amplitude arrays of shape ``(times, d)`` against ``w(d)``.

    Row-wise pairwise summation keeps each time point independent of its
    neighbours in the block, so results are bit-stable under regridding.
    """
    a_conj = np.conj(a)
    b_conj = np.conj(b)
    aa = np.sum((a * a_conj).real * w, axis=-1)
    bb = np.sum((b * b_conj).real * w, axis=-1)
    ab_conj = np.sum(a * b_conj * w, axis=-1)
    a_sq = np.sum(a * a * w, axis=-1)
    ab = np.sum(a * b * w, axis=-1)
    return aa, bb, ab_conj, a_sq, ab


def _moments_block(params: ModelParams, d: np.ndarray, w: np.ndarray, times: np.ndarray):
    _, _, a, b = amplitude_arrays(params, d[None, :], times[:, None])
    return moments_from_amplitudes(a, b, w)


def sector_moments(
    params: ModelParams, weights: DifferenceWeights, times, workers: int = 1
) -> SectorMoments:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise DomainError("times must be >= 0")
    d = weights.offsets.astype(float)
    w = np.asarray(weights.weights)
    block = max(1, _BLOCK_ELEMENTS // max(1, len(d)))
    chunks = [times[i : i + block] for i in range(0, len(times), block)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _moments_block(params, d, w, c), chunks))
    else:
        parts = [_moments_block(params, d, w, c) for c in chunks]
    if not parts:
        empty_r = np.zeros(0)
        empty_c = np.zeros(0, dtype=complex)
        return SectorMoments(times, empty_r, empty_r, empty_c, empty_c, empty_c)
    cols = [np.concatenate(p) for p in zip(*parts)]
    return SectorMoments(times, *cols)


def density_from_moments(state: QubitState, m: SectorMoments):
    """``(rho11, rho22, rho12)`` arrays for one initial state."""
    pu = state.population_up
    pd = state.population_down
    rho11 = pu * m.aa + pd * m.bb
    rho22 = pu * m.bb + pd * m.aa
    rho12 = pu * m.ab_conj + pd * m.ab
    if state.is_pure:
        c = state.coherence
        rho11 = rho11 + 2.0 * np.real(c * m.ab_conj)
        rho22 = rho22 + 2.0 * np.real(c * m.ab)
        rho12 = rho12 + c * m.a_sq + np.conj(c) * m.bb
    return rho11, rho22, rho12


def sz_from_moments(state: QubitState, m: SectorMoments) -> np.ndarray:
    """``(1/2) sum_d w(d) [f1 + f2]`` with ``f1 = (|delta|^2-|gamma|^2)(|A|^2-|B|^2)``
    and ``f2 = 4 Re(delta gamma* A B*)``."""
    f1 = (state.population_up - state.population_down) * (m.aa - m.bb)
    if not state.is_pure:
        return 0.5 * f1
    f2 = 4.0 * np.real(state.coherence * m.ab_conj)
    return 0.5 * (f1 + f2)


def spin_inversion(params: ModelParams, state: QubitState, weights: DifferenceWeights, t):
    """``<S0^z(t)>``; scalar in, scalar out, array in, array out."""
    m = sector_moments(params, weights, t)
    sz = sz_from_moments(state, m)
    return float(sz[0]) if np.ndim(t) == 0 else sz


def reduced_density(params: ModelParams, state: QubitState, weights: DifferenceWeights, t: float) -> DensityMatrix2:
    m = sector_moments(params, weights, t)
    r11, r22, r12 = density_from_moments(state, m)
    return DensityMatrix2(float(r11[0]), float(r22[0]), complex(r12[0]))


def _as_weights(table_or_weights) -> DifferenceWeights:
    if isinstance(table_or_weights, DifferenceWeights):
        return table_or_weights
    if isinstance(table_or_weights, LambdaTable):
        return difference_weights(table_or_weights)
    raise TypeError(f"expected LambdaTable or DifferenceWeights, got {type(table_or_weights).__name__}")


def check_time_grid(time_grid) -> np.ndarray:
    times = np.asarray(time_grid, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise DomainError("time grid must be a nonempty 1-D sequence")
    if np.any(times < 0):
        raise DomainError("time grid values must be >= 0")
    if np.any(np.diff(times) <= 0):
        raise DomainError("time grid must be strictly increasing")
    return times


def evolve_series(
    params: ModelParams, state: QubitState, table, time_grid: Sequence[float], workers: int = 1
) -> TimeSeries:
    """Spin inversion and reduced density matrix over a time grid.

    ``table`` may be a :class:`LambdaTable` or precomputed
    :class:`DifferenceWeights`.
    """
    times = check_time_grid(time_grid)
    weights = _as_weights(table)
    m = sector_moments(params, weights, times, workers=workers)
    r11, r22, r12 = density_from_moments(state, m)
    return TimeSeries(times=times, sz=sz_from_moments(state, m), rho11=r11, rho22=r22, rho12=r12)


def long_time_average_sz(params: ModelParams, state: QubitState, weights: DifferenceWeights) -> float:
    """Infinite-time mean of ``<S0^z>``.

    Per sector ``<|A|^2 - |B|^2> = chi^2/kappa^2`` and
    ``<A B*> = -chi g / (2 kappa^2)``; a frozen sector (``kappa = 0``)
    keeps ``|A|^2 - |B|^2 = 1``.
    """
    chi = params.j0 * weights.offsets.astype(float) - params.epsilon
    k2 = chi**2 + params.g**2
    frozen = k2 == 0.0
    safe = np.where(frozen, 1.0, k2)
    ratio = np.where(frozen, 1.0, chi**2 / safe)
    cross = np.where(frozen, 0.0, chi * params.g / safe)
    w = weights.weights
    inversion = state.population_up - state.population_down
    value = 0.5 * inversion * np.sum(w * ratio)
    if state.is_pure:
        value -= state.coherence.real * np.sum(w * cross)
    return float(value)


def rabi_frequencies(params: ModelParams, d) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    return np.hypot(params.j0 * d - params.epsilon, params.g)


def local_amplitude(times: np.ndarray, values: np.ndarray, start: float, stop: float) -> float:
    """Half the peak-to-peak excursion of ``values`` inside ``[start, stop]``."""
    mask = (times >= start) & (times <= stop)
    if not np.any(mask):
        raise DomainError(f"no samples in [{start}, {stop}]")
    window = values[mask]
    return 0.5 * float(window.max() - window.min())


__all__ = [
    "SectorAmplitude",
    "DensityMatrix2",
    "SectorMoments",
    "TimeSeries",
    "amplitude_arrays",
    "sector_amplitudes",
    "moments_from_amplitudes",
    "sector_moments",
    "density_from_moments",
    "sz_from_moments",
    "spin_inversion",
    "reduced_density",
    "evolve_series",
    "long_time_average_sz",
    "rabi_frequencies",
    "local_amplitude",
    "check_time_grid",
]

