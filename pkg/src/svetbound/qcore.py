"""Small complex linear algebra kernel for N-qubit pure states.

Basis index convention: qubit 1 is the most significant bit, so the
amplitude of |b_1 b_2 ... b_N> sits at index sum_i b_i 2^(N-i).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, sin

import numpy as np

NORM_TOL = 1e-12
DENSE_MAX_QUBITS = 8

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([PAULI_X, PAULI_Y, PAULI_Z])
IDENTITY = np.eye(2, dtype=complex)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitudes of an N-qubit vector (immutable).

    Construction only checks the length; use :meth:`normalized` or
    :meth:`is_normalized` where a physical state is required. Operator
    application may legitimately produce unnormalized vectors.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be positive, got {self.num_qubits}")
        amps = _frozen(self.amplitudes).reshape(-1)
        if amps.size != 2**self.num_qubits:
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes for {self.num_qubits} qubits, got {amps.size}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> StateVector:
        """Build a normalized state, inferring N from the amplitude count."""
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size != 2**n:
            raise ValueError(f"amplitude count {amps.size} is not a power of two")
        return cls(n, amps).normalized()

    @classmethod
    def basis(cls, bits: str) -> StateVector:
        """Computational basis state from a bit string such as ``"010"``."""
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(len(bits), amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> StateVector:
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.num_qubits, self.amplitudes / nrm)

    def __len__(self):
        return self.amplitudes.size


@dataclass(frozen=True)
class BlochDirection:
    """Measurement direction on the Bloch sphere, angles in radians."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not (0.0 <= self.phi < 2 * pi):
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")

    @classmethod
    def wrapped(cls, theta: float, phi: float) -> BlochDirection:
        """Canonical (theta, phi) for an arbitrary pair of angles."""
        return cls.from_vector(_unit_vector(theta, phi))

    @classmethod
    def from_vector(cls, vec) -> BlochDirection:
        x, y, z = np.asarray(vec, dtype=float) / np.linalg.norm(vec)
        theta = float(np.arctan2(np.hypot(x, y), z))
        phi = float(np.arctan2(y, x)) % (2 * pi)
        if phi >= 2 * pi:  # -0.0 % 2pi rounds up to 2pi
            phi = 0.0
        return cls(theta, phi)

    def vector(self) -> np.ndarray:
        return _unit_vector(self.theta, self.phi)


def _unit_vector(theta: float, phi: float) -> np.ndarray:
    return np.array([sin(theta) * cos(phi), sin(theta) * sin(phi), cos(theta)])


@dataclass(frozen=True, eq=False)
class SingleQubitOperator:
    entries: np.ndarray

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.shape != (2, 2):
            raise ValueError(f"single-qubit operator must be 2x2, got shape {m.shape}")
        object.__setattr__(self, "entries", m)

    def __matmul__(self, other: SingleQubitOperator) -> SingleQubitOperator:
        return SingleQubitOperator(self.entries @ other.entries)

    def is_hermitian(self, tol: float = NORM_TOL) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, atol=tol, rtol=0))


def bloch_operator(direction: BlochDirection) -> SingleQubitOperator:
    """Return v . sigma for the unit vector v of ``direction``."""
    return SingleQubitOperator(np.tensordot(direction.vector(), PAULIS, axes=1))


def apply_matrix(amplitudes: np.ndarray, num_qubits: int, qubit_index: int, matrix: np.ndarray) -> np.ndarray:
    """Apply a 2x2 matrix to one qubit of a raw amplitude array (1-based index).

    ``amplitudes`` may carry leading batch axes; the last axis is the
    2^N amplitude axis.
    """
    if not 1 <= qubit_index <= num_qubits:
        raise IndexError(f"qubit index {qubit_index} out of range 1..{num_qubits}")
    batch = amplitudes.shape[:-1]
    left = 2 ** (qubit_index - 1)
    right = 2 ** (num_qubits - qubit_index)
    view = amplitudes.reshape(batch + (left, 2, right))
    return apply_2x2(view, matrix).reshape(batch + (2**num_qubits,))


def apply_2x2(view: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """Contract ``mats`` (..., 2, 2) with axis -2 of ``view`` (..., x, 2, y)."""
    m = mats[..., None, None, None]  # entries broadcast over (x, 2, y)
    v0, v1 = view[..., 0:1, :], view[..., 1:2, :]
    return np.concatenate(
        [m[..., 0, 0, :, :, :] * v0 + m[..., 0, 1, :, :, :] * v1,
         m[..., 1, 0, :, :, :] * v0 + m[..., 1, 1, :, :, :] * v1],
        axis=-2,
    )


def apply_single_qubit(state: StateVector, qubit_index: int, op: SingleQubitOperator) -> StateVector:
    """Return (I x ... x op x ... x I)|state> with ``op`` on ``qubit_index`` (1-based)."""
    out = apply_matrix(state.amplitudes, state.num_qubits, qubit_index, op.entries)
    return StateVector(state.num_qubits, out)


def inner_product(a: StateVector, b: StateVector) -> complex:
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def dense_operator(ops: list[SingleQubitOperator]) -> np.ndarray:
    """Kronecker product of ``ops`` in qubit order 1..N. Oracle path only."""
    if not ops:
        raise ValueError("need at least one operator")
    if len(ops) > DENSE_MAX_QUBITS:
        raise ValueError(f"dense oracle is limited to {DENSE_MAX_QUBITS} qubits, got {len(ops)}")
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op.entries)
    return out
