"""Von Neumann entropy of the reduced qubit state and pointer-state search."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from .dynamics import (
    DensityMatrix2,
    TimeSeries,
    _as_weights,
    check_time_grid,
    density_from_moments,
    evolve_series,
    sector_moments,
)
from .errors import NumericalValidityError, UsageError
from .model import ModelParams, QubitState

CLAMP_TOL = 1e-12
ERROR_TOL = 1e-9
TIE_TOL = 1e-12


@dataclass(frozen=True)
class EntropyPoint:
    time: float
    p1: float
    p2: float
    entropy: float


@dataclass(frozen=True, eq=False)
class EntropySeries:
    times: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    entropy: np.ndarray

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i: int) -> EntropyPoint:
        return EntropyPoint(float(self.times[i]), float(self.p1[i]), float(self.p2[i]), float(self.entropy[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))


@dataclass(frozen=True, eq=False)
class PointerScan:
    best_state: QubitState
    best_theta: float
    best_phi: float
    entropy_score: float
    thetas: np.ndarray
    phis: np.ndarray
    landscape: np.ndarray  # shape (len(thetas), len(phis))


def _eigenvalue_arrays(rho11, rho22, rho12):
    rho11 = np.asarray(rho11, dtype=float)
    rho22 = np.asarray(rho22, dtype=float)
    rho12 = np.asarray(rho12, dtype=complex)
    trace = rho11 + rho22
    # 4 rho12 rho21 = 4 |rho12|^2
    disc = np.sqrt((rho11 - rho22) ** 2 + 4.0 * (rho12.real**2 + rho12.imag**2))
    p1 = 0.5 * (trace + disc)
    p2 = 0.5 * (trace - disc)
    lowest = np.min(p2) if p2.size else 0.0
    highest = np.max(p1) if p1.size else 0.0
    if lowest < -ERROR_TOL or highest > 1.0 + ERROR_TOL:
        raise NumericalValidityError(
            f"density-matrix eigenvalue outside [0, 1] beyond roundoff (min {lowest!r}, max {highest!r})"
        )
    # roundoff below CLAMP_TOL is expected; between that and ERROR_TOL it is tolerated
    return np.clip(p1, 0.0, 1.0), np.clip(p2, 0.0, 1.0)


def density_eigenvalues(rho: DensityMatrix2):
    """Eigenvalues ``(p1, p2)`` with ``p1 >= p2``, clamped to ``[0, 1]``."""
    p1, p2 = _eigenvalue_arrays(rho.rho11, rho.rho22, rho.rho12)
    return float(p1), float(p2)


def _entropy_arrays(p1, p2):
    return entr(p1) + entr(p2)


def von_neumann(rho: DensityMatrix2) -> float:
    """Entropy in nats, with ``0 ln 0 = 0``."""
    p1, p2 = density_eigenvalues(rho)
    return float(_entropy_arrays(p1, p2))


def attach_entropy(series: TimeSeries) -> TimeSeries:
    """Fill ``entropy``, ``p1`` and ``p2`` of a :class:`TimeSeries` in place."""
    p1, p2 = _eigenvalue_arrays(series.rho11, series.rho22, series.rho12)
    series.p1 = p1
    series.p2 = p2
    series.entropy = _entropy_arrays(p1, p2)
    return series


def entropy_series(params: ModelParams, state: QubitState, table, time_grid, workers: int = 1) -> EntropySeries:
    series = attach_entropy(evolve_series(params, state, table, time_grid, workers=workers))
    return EntropySeries(series.times, series.p1, series.p2, series.entropy)


def bloch_grid(n_theta: int = 64, n_phi: int = 64):
    """Polar angles spanning ``[0, pi]`` inclusive and azimuths ``2 pi k / n_phi``."""
    if n_theta < 1 or n_phi < 1:
        raise UsageError("Bloch grid needs at least one point per axis")
    thetas = np.linspace(0.0, math.pi, n_theta) if n_theta > 1 else np.array([0.0])
    phis = 2.0 * math.pi * np.arange(n_phi) / n_phi
    return thetas, phis


def pointer_scan(params: ModelParams, table, bloch, time_grid) -> PointerScan:
    """Score every pure state on a Bloch grid by its time-averaged entropy.

    The reduced state is linear in the initial density matrix, so the bath
    moments are computed once and reused for every grid state.  Scores
    within ``TIE_TOL`` of the minimum count as ties; the first in grid
    order (theta-major) wins.
    """
    thetas, phis = (np.asarray(x, dtype=float) for x in bloch)
    if thetas.size == 0 or phis.size == 0:
        raise UsageError("Bloch grid is empty")
    times = check_time_grid(time_grid)
    m = sector_moments(params, _as_weights(table), times)

    landscape = np.empty((len(thetas), len(phis)))
    for i, theta in enumerate(thetas):
        for j, phi in enumerate(phis):
            state = QubitState.from_bloch(theta, phi)
            p1, p2 = _eigenvalue_arrays(*density_from_moments(state, m))
            landscape[i, j] = float(np.mean(_entropy_arrays(p1, p2)))

    flat = landscape.ravel()
    best = int(np.argmax(flat <= flat.min() + TIE_TOL))
    i, j = divmod(best, len(phis))
    return PointerScan(
        best_state=QubitState.from_bloch(thetas[i], phis[j]),
        best_theta=float(thetas[i]),
        best_phi=float(phis[j]),
        entropy_score=float(flat[best]),
        thetas=thetas,
        phis=phis,
        landscape=landscape,
    )


def bloch_angles(state: QubitState):
    """``(theta, phi)`` of a pure state, with the global phase removed."""
    if not state.is_pure:
        raise UsageError("only pure states have Bloch angles on the sphere surface")
    theta = 2.0 * math.atan2(abs(state.gamma), abs(state.delta))
    if abs(state.gamma) == 0.0 or abs(state.delta) == 0.0:
        return theta, 0.0
    phi = (np.angle(state.gamma) - np.angle(state.delta)) % (2.0 * math.pi)
    return theta, float(phi)
