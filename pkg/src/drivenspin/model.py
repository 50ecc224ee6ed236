"""Model parameters, qubit initial states and the self-Hamiltonian eigenbasis.

Conventions
-----------
* The qubit basis is ``{|1>, |0>}`` with ``S^z|1> = +|1>/2``.
* The self-Hamiltonian in the rotating frame is ``H_S = eps*S^z + g*S^x``.
* All energies share one arbitrary unit; the command-line tools use ``g = 1``
  so that times are the dimensionless product ``g*t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateBasisError, DomainError, UsageError

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Detuning ``epsilon``, drive strength ``g`` and scaled coupling ``j0``."""

    epsilon: float
    g: float
    j0: float

    def __post_init__(self):
        for name in ("epsilon", "g", "j0"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.g < 0:
            raise DomainError(f"drive strength g must be >= 0, got {self.g!r}")

    @property
    def rabi_frequency(self) -> float:
        """Bare (bath-free) Rabi frequency sqrt(eps^2 + g^2)."""
        return math.hypot(self.epsilon, self.g)

    def scaled(self, factor: float) -> "ModelParams":
        """Parameters for a bath with ``factor`` times more atoms (J0 ~ 1/sqrt(N))."""
        return ModelParams(self.epsilon, self.g, self.j0 / math.sqrt(factor))


def derive_omega(n_atoms: float, temperature: float, coordination: float, exchange: float) -> float:
    """Dimensionless bath factor from the microscopic antiferromagnet parameters.

    ``Omega = N T^3 / (4 sqrt(2) pi^2 M^(3/2) J^3)``
    """
    for name, value in (
        ("n_atoms", n_atoms),
        ("temperature", temperature),
        ("coordination", coordination),
        ("exchange", exchange),
    ):
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return n_atoms * temperature**3 / (
        4.0 * math.sqrt(2.0) * math.pi**2 * coordination**1.5 * exchange**3
    )


@dataclass(frozen=True)
class BathSpec:
    """Bath described either by Omega directly or by (N, T, M, J)."""

    omega: float
    n_atoms: Optional[float] = None
    temperature: Optional[float] = None
    coordination: Optional[float] = None
    exchange: Optional[float] = None

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise DomainError(f"Omega must be positive and finite, got {self.omega!r}")
        micro = self.microscopic
        if micro is not None:
            expected = derive_omega(*micro)
            if not math.isclose(self.omega, expected, rel_tol=1e-12):
                raise DomainError(
                    f"Omega={self.omega!r} disagrees with microscopic value {expected!r}"
                )

    @property
    def microscopic(self):
        fields = (self.n_atoms, self.temperature, self.coordination, self.exchange)
        if all(f is None for f in fields):
            return None
        if any(f is None for f in fields):
            raise DomainError("microscopic bath needs all of n_atoms, temperature, coordination, exchange")
        return fields

    @classmethod
    def from_microscopic(cls, n_atoms, temperature, coordination, exchange) -> "BathSpec":
        omega = derive_omega(n_atoms, temperature, coordination, exchange)
        return cls(omega, n_atoms, temperature, coordination, exchange)


@dataclass(frozen=True)
class QubitState:
    """Initial qubit state: a pure amplitude pair or a diagonal mixture.

    Use :meth:`pure` or :meth:`mixed` rather than the raw constructor.
    For mixed states ``delta``/``gamma`` are unused and the cross terms of
    the reduced density matrix are dropped structurally.
    """

    kind: str
    delta: complex = 1.0
    gamma: complex = 0.0
    p_up: float = 1.0
    p_down: float = 0.0

    def __post_init__(self):
        if self.kind == "pure":
            norm = abs(self.delta) ** 2 + abs(self.gamma) ** 2
            if abs(norm - 1.0) > _NORM_TOL:
                raise DomainError(f"|delta|^2 + |gamma|^2 = {norm!r}, expected 1")
        elif self.kind == "mixed":
            if self.p_up < 0 or self.p_down < 0 or abs(self.p_up + self.p_down - 1.0) > _NORM_TOL:
                raise DomainError(f"invalid mixture p_up={self.p_up!r}, p_down={self.p_down!r}")
        else:
            raise DomainError(f"unknown state kind {self.kind!r}")

    @classmethod
    def pure(cls, delta: complex, gamma: complex) -> "QubitState":
        return cls("pure", delta=complex(delta), gamma=complex(gamma))

    @classmethod
    def mixed(cls, p_up: float, p_down: float) -> "QubitState":
        return cls("mixed", p_up=float(p_up), p_down=float(p_down))

    @classmethod
    def from_bloch(cls, theta: float, phi: float) -> "QubitState":
        """``cos(theta/2)|1> + exp(i phi) sin(theta/2)|0>``."""
        return cls.pure(math.cos(theta / 2), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2))

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    @property
    def population_up(self) -> float:
        return abs(self.delta) ** 2 if self.is_pure else self.p_up

    @property
    def population_down(self) -> float:
        return abs(self.gamma) ** 2 if self.is_pure else self.p_down

    @property
    def coherence(self) -> complex:
        """``delta * conj(gamma)``; zero for diagonal mixtures."""
        if not self.is_pure:
            return 0j
        return self.delta * self.gamma.conjugate()

    def density_matrix(self) -> np.ndarray:
        c = self.coherence
        return np.array(
            [[self.population_up, c], [c.conjugate(), self.population_down]], dtype=complex
        )


@dataclass(frozen=True)
class EigenbasisU:
    """Real orthogonal map from ``(|1>, |0>)`` to ``(|phi1>, |phi2>)``.

    Row 1 is the eigenvector of ``H_S`` with eigenvalue ``+kappa/2``,
    row 2 the one with ``-kappa/2``.
    """

    u11: float
    u12: float
    u21: float
    u22: float

    def as_array(self) -> np.ndarray:
        return np.array([[self.u11, self.u12], [self.u21, self.u22]])

    def phi1(self) -> QubitState:
        return QubitState.pure(self.u11, self.u12)

    def phi2(self) -> QubitState:
        return QubitState.pure(self.u21, self.u22)


def eigenbasis(epsilon: float, g: float) -> EigenbasisU:
    """Eigenvectors of ``eps*S^z + g*S^x`` with the printed phase convention.

    The textbook entries, e.g. ``g / sqrt(2 (k^2 - eps k))``, are rewritten as
    ``sqrt((k +/- eps) / 2k)`` (equal for ``g >= 0``) and ``k - eps`` is taken
    as ``g^2 / (k + eps)`` when ``eps > 0`` to avoid cancellation.
    """
    if g < 0:
        raise DomainError(f"g must be >= 0, got {g!r}")
    kappa = math.hypot(epsilon, g)
    if kappa == 0.0:
        raise DegenerateBasisError("epsilon = g = 0: H_S vanishes and has no preferred basis")
    if epsilon >= 0:
        k_plus = kappa + epsilon
        k_minus = g * g / k_plus
    else:
        k_minus = kappa - epsilon
        k_plus = g * g / k_minus
    c = math.sqrt(k_plus / (2 * kappa))
    s = math.sqrt(k_minus / (2 * kappa))
    return EigenbasisU(c, s, s, -c)


STATE_LABELS = ("up", "down", "phi1", "phi2", "phi-super")


def state_from_label(label: str, epsilon: float = 0.0, g: float = 1.0) -> QubitState:
    """Named initial states: ``up`` = |1>, ``down`` = |0>, ``phi1``, ``phi2``
    (self-Hamiltonian eigenstates) and ``phi-super`` = (|phi1> + |phi2>)/sqrt(2)."""
    if label == "up":
        return QubitState.pure(1.0, 0.0)
    if label == "down":
        return QubitState.pure(0.0, 1.0)
    if label in ("phi1", "phi2", "phi-super"):
        u = eigenbasis(epsilon, g)
        if label == "phi1":
            return u.phi1()
        if label == "phi2":
            return u.phi2()
        r = 1.0 / math.sqrt(2.0)
        return QubitState.pure(r * (u.u11 + u.u21), r * (u.u12 + u.u22))
    raise UsageError(f"unknown state label {label!r}; expected one of {', '.join(STATE_LABELS)}")


def self_hamiltonian(epsilon: float, g: float) -> np.ndarray:
    """``H_S`` as a 2x2 matrix in the ``{|1>, |0>}`` basis."""
    return 0.5 * np.array([[epsilon, g], [g, -epsilon]], dtype=float)
