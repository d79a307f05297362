"""Generalized GHZ and maximal-slice state families, and their n-tangle."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import asin, cos, pi, sin, sqrt

import numpy as np

from .qcore import PAULI_Y, StateVector, apply_matrix


class Family(str, enum.Enum):
    GGHZ = "gghz"
    MS = "ms"


MIN_QUBITS = {Family.GGHZ: 2, Family.MS: 3}


def _check_alpha(alpha: float) -> None:
    if not (0.0 <= alpha <= pi / 2):
        raise ValueError(f"alpha must lie in [0, pi/2], got {alpha}")


def _check_n(family: Family, n: int) -> None:
    if int(n) != n or n < MIN_QUBITS[family]:
        raise ValueError(f"{family.value} needs an integer N >= {MIN_QUBITS[family]}, got {n}")


@dataclass(frozen=True)
class FamilyParameter:
    family: Family
    num_qubits: int
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        _check_n(self.family, self.num_qubits)
        _check_alpha(self.alpha)

    @classmethod
    def gghz_from_tangle(cls, num_qubits: int, tau: float) -> FamilyParameter:
        """GGHZ parameter with n-tangle ``tau``, taking alpha in [0, pi/4]."""
        return cls(Family.GGHZ, num_qubits, alpha_from_gghz_tangle(tau))

    def state(self) -> StateVector:
        if self.family is Family.GGHZ:
            return gghz(self.num_qubits, self.alpha)
        return ms(self.num_qubits, self.alpha)

    def tangle(self) -> float | None:
        """Family n-tangle, or None where it is undefined (MS with odd N > 3)."""
        if self.family is Family.GGHZ:
            return gghz_tangle(self.alpha)
        if self.num_qubits % 2 and self.num_qubits > 3:
            return None
        return ms_tangle(self.num_qubits, self.alpha)


def gghz(n: int, alpha: float) -> StateVector:
    """cos(alpha)|0...0> + sin(alpha)|1...1>."""
    _check_n(Family.GGHZ, n)
    _check_alpha(alpha)
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = cos(alpha)
    amps[-1] = sin(alpha)
    return StateVector(n, amps).normalized()


def ms(n: int, alpha: float) -> StateVector:
    """Maximal-slice state (|0...0> + |1...1>(cos(alpha)|0> + sin(alpha)|1>)) / sqrt(2)."""
    _check_n(Family.MS, n)
    _check_alpha(alpha)
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    amps[-2] = cos(alpha)
    amps[-1] = sin(alpha)
    return StateVector(n, amps / sqrt(2)).normalized()


def _tangle_defined(n: int) -> bool:
    return n % 2 == 0 or n == 3


def n_tangle_even(state: StateVector) -> float:
    """n-tangle of a pure state with even N, or the three-tangle for N = 3.

    Even N uses |<psi| sigma_y^{xN} |psi*>|^2. That overlap vanishes
    identically for odd N, so N = 3 uses the hyperdeterminant form of the
    residual tangle instead (valid for any three-qubit pure state).
    """
    n = state.num_qubits
    if not _tangle_defined(n):
        raise ValueError(f"n-tangle is only defined here for even N or N = 3, got N = {n}")
    if n == 3:
        return three_tangle(state)
    flipped = state.amplitudes.conj()
    for q in range(1, n + 1):
        flipped = apply_matrix(flipped, n, q, PAULI_Y)
    return float(abs(np.vdot(state.amplitudes, flipped)) ** 2)


def three_tangle(state: StateVector) -> float:
    """4 |Det| with Det the Cayley hyperdeterminant of the amplitude cube."""
    if state.num_qubits != 3:
        raise ValueError("three_tangle needs exactly three qubits")
    a = state.amplitudes.reshape(2, 2, 2)
    d1 = (a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
          + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2)
    d2 = (a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
          + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1])
    d3 = (a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
          + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0])
    return float(4 * abs(d1 - 2 * d2 + 4 * d3))


def gghz_tangle(alpha: float) -> float:
    """sin^2(2 alpha); used for every N, odd N > 3 included."""
    _check_alpha(alpha)
    return sin(2 * alpha) ** 2


def ms_tangle(n: int, alpha: float) -> float:
    if not _tangle_defined(n):
        raise ValueError(f"MS n-tangle is only known for N = 3 or even N, got N = {n}")
    _check_alpha(alpha)
    return sin(alpha) ** 2


def alpha_from_gghz_tangle(tau: float) -> float:
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    return 0.5 * asin(sqrt(tau))
