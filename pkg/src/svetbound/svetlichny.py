"""Svetlichny operator S_N^{+/-} and its expectation value.

S_N^{+/-} = sum_x nu^{+/-}(x) A_1^{x_1} x ... x A_N^{x_N}, with
nu^{+/-}(x) = (-1)^{w(w +/- 1)/2} and w the Hamming weight of x.

Three independent evaluation routes are provided:

* :func:`expectation_bruteforce` sums all 2^N correlators,
* :func:`expectation_fast` uses nu(w) = Re[(1 +/- i) i^w] to collapse the
  sum into a single product operator, costing O(N 2^N),
* :func:`expectation_dense` builds the 2^N x 2^N matrix (small N only).

:func:`gghz_expectation_closed` evaluates the trigonometric closed form for
generalized GHZ states.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import cos, pi, sin

import numpy as np

from .qcore import (
    DENSE_MAX_QUBITS,
    PAULIS,
    BlochDirection,
    StateVector,
    apply_2x2,
    apply_matrix,
    bloch_operator,
    dense_operator,
)

BRUTEFORCE_MAX_QUBITS = 16
CLOSED_FORM_MAX_QUBITS = 22
IMAG_TOL = 1e-9


class Variant(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Variant.PLUS else -1

    @property
    def other(self) -> Variant:
        return Variant.MINUS if self is Variant.PLUS else Variant.PLUS


def _variant(v) -> Variant:
    return v if isinstance(v, Variant) else Variant(v)


@dataclass(frozen=True, eq=False)
class MeasurementSettings:
    """Two measurement directions per qubit.

    ``angles[i, l]`` holds (theta, phi) of setting ``l`` on qubit ``i + 1``.
    Angles are canonicalized on construction: theta in [0, pi], phi in
    [0, 2pi).
    """

    angles: np.ndarray

    def __post_init__(self):
        raw = np.array(self.angles, dtype=float)
        if raw.ndim != 3 or raw.shape[1:] != (2, 2) or raw.shape[0] < 1:
            raise ValueError(f"angles must have shape (N, 2, 2), got {raw.shape}")
        canon = canonical_angles(raw)
        canon.setflags(write=False)
        object.__setattr__(self, "angles", canon)

    @classmethod
    def from_directions(cls, pairs) -> MeasurementSettings:
        return cls(np.array([[[d.theta, d.phi] for d in pair] for pair in pairs]))

    @classmethod
    def from_vectors(cls, vectors) -> MeasurementSettings:
        """From Bloch vectors of shape (N, 2, 3); rows need not be unit length."""
        return cls(_angles_from_vectors(np.asarray(vectors, dtype=float)))

    @property
    def num_qubits(self) -> int:
        return self.angles.shape[0]

    @property
    def theta(self) -> np.ndarray:
        return self.angles[..., 0]

    @property
    def phi(self) -> np.ndarray:
        return self.angles[..., 1]

    def direction(self, qubit: int, setting: int) -> BlochDirection:
        """Direction of ``setting`` (0 or 1) on ``qubit`` (1-based)."""
        theta, phi = self.angles[qubit - 1, setting]
        return BlochDirection(float(theta), float(phi))

    def vectors(self) -> np.ndarray:
        return bloch_vectors(self.angles)

    def to_records(self) -> list[dict]:
        return [
            {"theta0": float(q[0, 0]), "phi0": float(q[0, 1]), "theta1": float(q[1, 0]), "phi1": float(q[1, 1])}
            for q in self.angles
        ]

    @classmethod
    def from_records(cls, records) -> MeasurementSettings:
        return cls(np.array([[[r["theta0"], r["phi0"]], [r["theta1"], r["phi1"]]] for r in records]))


def bloch_vectors(angles: np.ndarray) -> np.ndarray:
    theta, phi = angles[..., 0], angles[..., 1]
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _angles_from_vectors(vec: np.ndarray) -> np.ndarray:
    # atan2 keeps full precision near the poles, where arccos(z) does not
    theta = np.arctan2(np.hypot(vec[..., 0], vec[..., 1]), vec[..., 2])
    phi = np.mod(np.arctan2(vec[..., 1], vec[..., 0]), 2 * pi)
    phi = np.where(phi >= 2 * pi, 0.0, phi)
    return np.stack([theta, phi], axis=-1)


def canonical_angles(angles: np.ndarray) -> np.ndarray:
    """Map arbitrary (theta, phi) pairs to theta in [0, pi], phi in [0, 2pi).

    Pairs already in range are returned bit-for-bit unchanged.
    """
    angles = np.array(angles, dtype=float)
    theta, phi = angles[..., 0], angles[..., 1]
    ok = (theta >= 0) & (theta <= pi) & (phi >= 0) & (phi < 2 * pi)
    if np.all(ok):
        return angles
    fixed = _angles_from_vectors(bloch_vectors(angles))
    return np.where(ok[..., None], angles, fixed)


def _check_dims(state: StateVector, settings: MeasurementSettings) -> None:
    if state.num_qubits != settings.num_qubits:
        raise ValueError(
            f"dimension mismatch: state has {state.num_qubits} qubits, settings have {settings.num_qubits}"
        )


def nu(weight: int, variant) -> int:
    """(-1)^{w(w +/- 1)/2}."""
    if weight < 0:
        raise ValueError(f"Hamming weight must be nonnegative, got {weight}")
    s = _variant(variant).sign
    return -1 if (weight * (weight + s) // 2) % 2 else 1


def nu_array(weights: np.ndarray, variant) -> np.ndarray:
    s = _variant(variant).sign
    weights = np.asarray(weights, dtype=np.int64)
    return np.where((weights * (weights + s) // 2) % 2 == 1, -1, 1)


def bit_table(n: int) -> np.ndarray:
    """All N-bit strings as rows, qubit 1 first (most significant)."""
    idx = np.arange(2**n, dtype=np.int64)
    return (idx[:, None] >> np.arange(n - 1, -1, -1)) & 1


def expectation_bruteforce(state: StateVector, settings: MeasurementSettings, variant) -> float:
    """Sum nu(x) <psi|A(x)|psi> over all 2^N correlators.

    Correlators sharing a prefix of settings share their partial products,
    so the walk needs about 2^(N+1) single-qubit applications.
    """
    _check_dims(state, settings)
    n = state.num_qubits
    if n > BRUTEFORCE_MAX_QUBITS:
        raise ValueError(f"brute-force engine is capped at {BRUTEFORCE_MAX_QUBITS} qubits, got {n}")
    variant = _variant(variant)
    ops = [[bloch_operator(settings.direction(q, l)).entries for l in (0, 1)] for q in range(1, n + 1)]
    total = 0j

    def walk(vec: np.ndarray, qubit: int, weight: int) -> None:
        nonlocal total
        if qubit > n:
            total += nu(weight, variant) * np.vdot(state.amplitudes, vec)
            return
        for l in (0, 1):
            walk(apply_matrix(vec, n, qubit, ops[qubit - 1][l]), qubit + 1, weight + l)

    walk(state.amplitudes, 1, 0)
    if abs(total.imag) > IMAG_TOL * max(1.0, abs(total.real)):
        raise ArithmeticError(f"Svetlichny expectation has imaginary residue {total.imag:.3e}")
    return float(total.real)


def _collapsed_operators(vectors: np.ndarray) -> np.ndarray:
    """(A^0 + i A^1) per qubit, from Bloch vectors of shape (..., N, 2, 3)."""
    a0 = np.einsum("...a,acd->...cd", vectors[..., 0, :], PAULIS)
    a1 = np.einsum("...a,acd->...cd", vectors[..., 1, :], PAULIS)
    return a0 + 1j * a1


def fast_from_vectors(amplitudes: np.ndarray, num_qubits: int, vectors: np.ndarray, sign: int) -> np.ndarray:
    """Re[(1 + sign i) <psi| x_i (A_i^0 + i A_i^1) |psi>] for raw inputs.

    ``vectors`` has shape (..., N, 2, 3) with arbitrary leading batch axes;
    the result has the batch shape.
    """
    ops = _collapsed_operators(vectors)
    batch = vectors.shape[:-3]
    work = np.broadcast_to(amplitudes, batch + amplitudes.shape).astype(complex)
    for q in range(num_qubits):
        work = _apply_batched(work, num_qubits, q + 1, ops[..., q, :, :])
    overlap = np.einsum("k,...k->...", amplitudes.conj(), work)
    return ((1 + sign * 1j) * overlap).real


def _apply_batched(work: np.ndarray, n: int, qubit: int, mats: np.ndarray) -> np.ndarray:
    if mats.ndim == 2:
        return apply_matrix(work, n, qubit, mats)
    batch = work.shape[:-1]
    view = work.reshape(batch + (2 ** (qubit - 1), 2, 2 ** (n - qubit)))
    return apply_2x2(view, mats).reshape(work.shape)


def expectation_fast(state: StateVector, settings: MeasurementSettings, variant) -> float:
    _check_dims(state, settings)
    sign = _variant(variant).sign
    return float(fast_from_vectors(state.amplitudes, state.num_qubits, settings.vectors(), sign))


def svetlichny_matrix(settings: MeasurementSettings, variant) -> np.ndarray:
    """Dense S_N^{+/-} as a 2^N x 2^N matrix (N <= 8)."""
    n = settings.num_qubits
    if n > DENSE_MAX_QUBITS:
        raise ValueError(f"dense oracle is limited to {DENSE_MAX_QUBITS} qubits, got {n}")
    ops = [[bloch_operator(settings.direction(q, l)) for l in (0, 1)] for q in range(1, n + 1)]
    out = np.zeros((2**n, 2**n), dtype=complex)
    for bits in bit_table(n):
        out += nu(int(bits.sum()), variant) * dense_operator([ops[q][b] for q, b in enumerate(bits)])
    return out


def expectation_dense(state: StateVector, settings: MeasurementSettings, variant) -> float:
    _check_dims(state, settings)
    psi = state.amplitudes
    value = np.vdot(psi, svetlichny_matrix(settings, variant) @ psi)
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise ArithmeticError(f"Svetlichny expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


# --- closed form for cos(a)|0..0> + sin(a)|1..1> ---------------------------


def gghz_coefficients(n: int, alpha: float) -> tuple[float, float]:
    """(c1, c2) = (cos^2 a + (-1)^N sin^2 a, sin 2a)."""
    return cos(alpha) ** 2 + (-1) ** n * sin(alpha) ** 2, sin(2 * alpha)


def _selected(angles: np.ndarray, bits: np.ndarray) -> np.ndarray:
    # angles (N, 2) -> (2^N, N) picking setting bits[:, i] on qubit i
    return angles[np.arange(angles.shape[0]), bits]


def f_sum(theta: np.ndarray, variant) -> float:
    """F = sum_x nu(x) prod_i cos(theta_i^{x_i}); ``theta`` has shape (N, 2)."""
    theta = np.asarray(theta, dtype=float)
    bits = bit_table(theta.shape[0])
    weights = nu_array(bits.sum(axis=1), variant)
    return float(weights @ np.prod(np.cos(_selected(theta, bits)), axis=1))


def g_sum(theta: np.ndarray, phi: np.ndarray, variant, phase: float = 0.0) -> float:
    """G = sum_x nu(x) cos(phase + sum_i phi_i^{x_i}) prod_i sin(theta_i^{x_i})."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    bits = bit_table(theta.shape[0])
    weights = nu_array(bits.sum(axis=1), variant)
    total_phase = phase + _selected(phi, bits).sum(axis=1)
    return float(weights @ (np.cos(total_phase) * np.prod(np.sin(_selected(theta, bits)), axis=1)))


def _check_closed_n(settings: MeasurementSettings, n: int) -> None:
    if settings.num_qubits != n:
        raise ValueError(f"dimension mismatch: N = {n}, settings have {settings.num_qubits} qubits")
    if n > CLOSED_FORM_MAX_QUBITS:
        raise ValueError(f"closed form is capped at {CLOSED_FORM_MAX_QUBITS} qubits, got {n}")


def gghz_expectation_closed(n: int, alpha: float, settings: MeasurementSettings, variant) -> float:
    """Signed <S_N> on the GGHZ state as c1 F_N + c2 G_N."""
    _check_closed_n(settings, n)
    c1, c2 = gghz_coefficients(n, alpha)
    return c1 * f_sum(settings.theta, variant) + c2 * g_sum(settings.theta, settings.phi, variant)


def gghz_gradient_theta_angles(n: int, alpha: float, angles: np.ndarray, variant) -> np.ndarray:
    """d<S_N>/d theta_k^l for all (k, l) at raw angles of shape (N, 2, 2)."""
    theta, phi = angles[..., 0], angles[..., 1]
    c1, c2 = gghz_coefficients(n, alpha)
    bits = bit_table(n)
    weights = nu_array(bits.sum(axis=1), variant)
    th = _selected(theta, bits)
    cos_phase = np.cos(_selected(phi, bits).sum(axis=1))
    cos_t, sin_t = np.cos(th), np.sin(th)
    grad = np.zeros((n, 2))
    for k in range(n):
        cos_rest = np.prod(np.delete(cos_t, k, axis=1), axis=1)
        sin_rest = np.prod(np.delete(sin_t, k, axis=1), axis=1)
        for l in (0, 1):
            mask = bits[:, k] == l
            f_part = -np.sin(theta[k, l]) * (weights[mask] @ cos_rest[mask])
            g_part = np.cos(theta[k, l]) * (weights[mask] @ (cos_phase[mask] * sin_rest[mask]))
            grad[k, l] = c1 * f_part + c2 * g_part
    return grad


def gghz_gradient_theta(n: int, alpha: float, settings: MeasurementSettings, variant, qubit: int, setting: int) -> float:
    """Analytic d<S_N>/d theta_qubit^setting on the GGHZ state (qubit is 1-based)."""
    _check_closed_n(settings, n)
    if not 1 <= qubit <= n or setting not in (0, 1):
        raise IndexError(f"no angle theta_{qubit}^{setting} for N = {n}")
    return float(gghz_gradient_theta_angles(n, alpha, settings.angles, variant)[qubit - 1, setting])
