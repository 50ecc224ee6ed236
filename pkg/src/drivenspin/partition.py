"""Conditional partition functions of one magnon branch and their correlations.

For a single branch the generating function is

    G(lam) = sum_P lam^P Lambda(P) = exp(2 Omega sum_n lam^n / n^4),

so ``G(1) = exp(2 Omega zeta(4))`` and the full two-branch partition function
is ``Z = G(1)^2``.  Coefficients are generated in the normalised form
``Lambda_hat(P) = Lambda(P) / G(1)`` by

    Lambda_hat(P) = (2 Omega / P) sum_{i<P} Lambda_hat(i) / (P - i)^3,

which never overflows and sums to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError, TruncationError

ZETA3 = 1.2020569031595942853997381615114499907649862923405
ZETA4 = math.pi**4 / 90.0

OMEGA_MAX = 325.0
P_MAX_CAP = 1_000_000
DEFAULT_TOL = 1e-10

# exp() overflows above this in float64
_LOG_MAX = 709.78


@dataclass(frozen=True, eq=False)
class LambdaTable:
    """Normalised conditional-partition weights ``Lambda_hat(0..p_max)``."""

    omega: float
    tol: float
    entries: np.ndarray
    cumulative_mass: float

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def p_max(self) -> int:
        return len(self.entries) - 1

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True, eq=False)
class DifferenceWeights:
    """Distribution of the branch-occupation difference ``d = P2 - P1``.

    ``weights[k]`` is the probability of ``d = k - d_max``.  The retained
    weights are renormalised to sum to one; ``mass`` keeps the raw sum
    ``sum_{|d| <= d_max} w(d)`` so the truncation defect stays visible.
    """

    d_max: int
    weights: np.ndarray
    mass: float

    def __post_init__(self):
        self.weights.setflags(write=False)

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.d_max, self.d_max + 1)

    def __getitem__(self, d: int) -> float:
        if abs(d) > self.d_max:
            return 0.0
        return float(self.weights[d + self.d_max])


def mean_occupation(omega: float) -> float:
    """Thermal mean of the total magnon number of one branch, ``2 zeta(3) Omega``."""
    if omega < 0:
        raise DomainError(f"Omega must be >= 0, got {omega!r}")
    return 2.0 * ZETA3 * omega


def initial_p_max(omega: float) -> int:
    """Starting guess for the table length: mean + 10 sigma-ish + slack."""
    return math.ceil(mean_occupation(omega) + 10.0 * math.sqrt(omega) + 20.0)


def _check_omega(omega: float):
    if not (omega > 0 and math.isfinite(omega)):
        raise RangeError(f"Omega must be positive and finite, got {omega!r}")
    if omega > OMEGA_MAX:
        raise RangeError(
            f"Omega={omega!r} exceeds {OMEGA_MAX}: exp(-2 Omega zeta(4)) underflows in float64"
        )


def build_lambda_table(omega: float, tol: float = DEFAULT_TOL) -> LambdaTable:
    """Run the normalised recursion until the retained mass reaches ``1 - tol``."""
    _check_omega(omega)
    if not 0 < tol < 1:
        raise DomainError(f"tol must lie in (0, 1), got {tol!r}")

    size = initial_p_max(omega) + 1
    lam = np.zeros(size)
    # inv_cubes[j] = 1/j^3; reversed slices pair Lambda_hat(i) with 1/(P-i)^3
    inv_cubes = np.zeros(size + 1)
    inv_cubes[1:] = 1.0 / np.arange(1, size + 1, dtype=float) ** 3

    lam[0] = math.exp(-2.0 * omega * ZETA4)
    mass = lam[0]
    target = 1.0 - tol
    p = 0
    while mass < target:
        p += 1
        if p > P_MAX_CAP:
            raise TruncationError(
                f"mass {mass!r} < 1 - tol after {P_MAX_CAP} terms (Omega={omega!r}, tol={tol!r})"
            )
        if p >= size:
            size = min(2 * size, P_MAX_CAP + 1)
            lam = np.concatenate([lam, np.zeros(size - len(lam))])
            inv_cubes = np.zeros(size + 1)
            inv_cubes[1:] = 1.0 / np.arange(1, size + 1, dtype=float) ** 3
        lam[p] = (2.0 * omega / p) * np.dot(lam[:p], inv_cubes[p:0:-1])
        mass += lam[p]

    entries = lam[: p + 1].copy()
    return LambdaTable(omega=float(omega), tol=float(tol), entries=entries, cumulative_mass=float(mass))


def partition_function(omega: float, log: bool = False) -> float:
    """``Z = exp(2 pi^4 Omega / 45) = G(1)^2``; pass ``log=True`` for ``log Z``."""
    if not (omega >= 0 and math.isfinite(omega)):
        raise DomainError(f"Omega must be >= 0, got {omega!r}")
    log_z = 4.0 * ZETA4 * omega
    if log:
        return log_z
    if log_z > _LOG_MAX:
        raise RangeError(f"Z = exp({log_z:.6g}) overflows; use log=True")
    return math.exp(log_z)


def _weights_from_correlation(corr: np.ndarray, tol: float) -> DifferenceWeights:
    """Trim the one-sided correlation ``corr[d] = w(d), d >= 0`` and mirror it."""
    # two-sided tail beyond d: 2 * sum_{k > d} corr[k]
    tail = np.zeros(len(corr))
    tail[:-1] = 2.0 * np.cumsum(corr[::-1])[::-1][1:]
    d_max = int(np.argmax(tail < tol)) if np.any(tail < tol) else len(corr) - 1
    half = corr[: d_max + 1]
    w = np.concatenate([half[:0:-1], half])
    mass = float(np.sum(w))
    if not mass > 0:
        raise DomainError("difference weights have no mass")
    return DifferenceWeights(d_max=d_max, weights=w / mass, mass=mass)


def difference_weights(table: LambdaTable) -> DifferenceWeights:
    """``w(d) = sum_P Lambda_hat(P + |d|) Lambda_hat(P)``, cut where the tail drops below ``tol``."""
    lam = table.entries
    n = len(lam)
    corr = np.correlate(lam, lam, mode="full")[n - 1 :]
    return _weights_from_correlation(corr, table.tol)


def weights_from_lambda(lam, tol: float = 0.0) -> DifferenceWeights:
    """Difference weights from an arbitrary (unnormalised) ``Lambda(P)`` sequence.

    With ``tol=0`` nothing is trimmed beyond exact zeros.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or len(lam) == 0 or np.any(lam < 0):
        raise DomainError("Lambda must be a nonempty nonnegative 1-D sequence")
    lam = lam / np.sum(lam)
    n = len(lam)
    corr = np.correlate(lam, lam, mode="full")[n - 1 :]
    if tol == 0.0:
        nz = np.nonzero(corr)[0]
        d_max = int(nz[-1]) if len(nz) else 0
        half = corr[: d_max + 1]
        w = np.concatenate([half[:0:-1], half])
        mass = float(np.sum(w))
        return DifferenceWeights(d_max=d_max, weights=w / mass, mass=mass)
    return _weights_from_correlation(corr, tol)
