"""Multi-start maximization of |<S_N>| over all 4N measurement angles.

The signed objective Re[(1 +/- i) <psi| x_k (A_k^0 + i A_k^1) |psi>] is
linear in each Bloch vector v_k^l, so with every other vector held fixed
the best v_k^l is the normalized coefficient vector (the 3-D form of
x cos t + y sin t <= sqrt(x^2 + y^2)). A sweep updates qubits 1..N in turn
using cached left and right environments; all restarts run as one batch.
The best candidates are then polished with BFGS. Stationarity is certified
separately by central differences.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import pi

import numpy as np
from scipy.optimize import minimize

from .qcore import PAULIS, StateVector
from .svetlichny import (
    MeasurementSettings,
    Variant,
    _apply_batched,
    _collapsed_operators,
    _variant,
    bloch_vectors,
    fast_from_vectors,
)

logger = logging.getLogger(__name__)

MAX_QUBITS = 14
_TINY = 1e-300


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    max_iterations: int = 2000
    convergence_tol: float = 1e-10
    fd_step: float = 1e-6
    seed: int = 0
    polish: int = 4  # number of top restarts refined by BFGS
    screen_rtol: float = 1e-9  # relative stall tolerance of the screening stage
    screen_sweeps: int = 100  # sweep budget of the screening stage
    patience: int = 3  # sweeps below convergence_tol before stopping

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if not (0 < self.convergence_tol) or self.screen_rtol < 0:
            raise ValueError("convergence_tol must be positive and screen_rtol nonnegative")
        if not (0 < self.fd_step < 1e-2):
            raise ValueError("fd_step must lie in (0, 1e-2)")
        if self.polish < 0 or self.patience < 1 or self.screen_sweeps < 1:
            raise ValueError("polish must be >= 0 and patience >= 1")


@dataclass
class MaximizationResult:
    best_value: float
    best_settings: MeasurementSettings
    best_variant: Variant
    restarts_converged: int
    stationarity_residual: float
    sweeps: int = 0
    history: list[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "best_value": self.best_value,
            "best_settings": self.best_settings.to_records(),
            "variant": self.best_variant.value,
            "restarts_converged": self.restarts_converged,
            "stationarity_residual": self.stationarity_residual,
        }


def random_vectors(rng: np.random.Generator, restarts: int, n: int) -> np.ndarray:
    """Bloch vectors (restarts, N, 2, 3) uniform on the sphere."""
    theta = np.arccos(rng.uniform(-1.0, 1.0, size=(restarts, n, 2)))
    phi = rng.uniform(0.0, 2 * pi, size=(restarts, n, 2))
    return bloch_vectors(np.stack([theta, phi], axis=-1))


def _right_environments(psi: np.ndarray, n: int, ops: np.ndarray) -> list[np.ndarray]:
    # envs[k] = (x_{i>k} M_i)|psi>, k = 0..N-1 (0-based qubits)
    envs = [None] * n
    work = psi
    for k in range(n - 1, -1, -1):
        envs[k] = work
        work = _apply_batched(work, n, k + 1, ops[:, k])
    return envs


def _reduced_pauli_overlaps(left: np.ndarray, right: np.ndarray, n: int, k: int) -> np.ndarray:
    # t_a = <left| sigma_a on qubit k |right>, shape (R, 3)
    shape = left.shape[:-1] + (2**k, 2, 2 ** (n - k - 1))
    lt = np.swapaxes(left.reshape(shape), 1, 2).reshape(left.shape[0], 2, -1)
    rt = np.swapaxes(right.reshape(shape), 1, 2).reshape(right.shape[0], 2, -1)
    block = lt.conj() @ np.swapaxes(rt, 1, 2)  # block[r, c, d] = <left_c|right_d>
    return np.einsum("acd,rcd->ra", PAULIS, block)


def _normalize_rows(target: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(target, axis=-1, keepdims=True)
    return np.where(nrm > 1e-14, target / np.maximum(nrm, _TINY), fallback)


def block_ascent_sweep(psi: np.ndarray, n: int, vectors: np.ndarray, sign: int) -> np.ndarray:
    """One Gauss-Seidel pass over qubits 1..N; updates ``vectors`` in place.

    Returns the objective per restart after the pass.
    """
    restarts = vectors.shape[0]
    ops = _collapsed_operators(vectors)
    rights = _right_environments(np.broadcast_to(psi, (restarts, psi.size)), n, ops)
    left = np.broadcast_to(psi, (restarts, psi.size))
    value = np.zeros(restarts)
    for k in range(n):
        u = (1 + sign * 1j) * _reduced_pauli_overlaps(left, rights[k], n, k)
        vectors[:, k, 0] = _normalize_rows(u.real, vectors[:, k, 0])
        vectors[:, k, 1] = _normalize_rows(-u.imag, vectors[:, k, 1])
        value = np.einsum("ra,ra->r", vectors[:, k, 0], u.real) - np.einsum("ra,ra->r", vectors[:, k, 1], u.imag)
        op = _collapsed_operators(vectors[:, k : k + 1])[:, 0]
        left = _apply_batched(left, n, k + 1, np.conj(np.swapaxes(op, -1, -2)))
    return value


def vector_gradient(psi: np.ndarray, n: int, vectors: np.ndarray, sign: int) -> tuple[np.ndarray, np.ndarray]:
    """Objective and its gradient with respect to the Bloch vectors.

    ``vectors`` has shape (R, N, 2, 3); returns values (R,) and gradient
    (R, N, 2, 3). The objective is linear in each vector, so the gradient
    is the block-ascent coefficient vector evaluated without updates.
    """
    restarts = vectors.shape[0]
    ops = _collapsed_operators(vectors)
    rights = _right_environments(np.broadcast_to(psi, (restarts, psi.size)), n, ops)
    left = np.broadcast_to(psi, (restarts, psi.size))
    grad = np.empty_like(vectors)
    for k in range(n):
        u = (1 + sign * 1j) * _reduced_pauli_overlaps(left, rights[k], n, k)
        grad[:, k, 0] = u.real
        grad[:, k, 1] = -u.imag
        left = _apply_batched(left, n, k + 1, np.conj(np.swapaxes(ops[:, k], -1, -2)))
    value = np.einsum("rla,rla->r", vectors[:, 0], grad[:, 0])
    return value, grad


def angle_gradient(psi: np.ndarray, n: int, angles: np.ndarray, sign: int) -> tuple[float, np.ndarray]:
    """Objective and d/d(theta, phi) at raw angles of shape (N, 2, 2)."""
    theta, phi = angles[..., 0], angles[..., 1]
    value, gv = vector_gradient(psi, n, bloch_vectors(angles)[None], sign)
    gv = gv[0]
    d_theta = np.stack([np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), -np.sin(theta)], axis=-1)
    d_phi = np.stack([-np.sin(theta) * np.sin(phi), np.sin(theta) * np.cos(phi), np.zeros_like(phi)], axis=-1)
    out = np.stack([np.sum(gv * d_theta, axis=-1), np.sum(gv * d_phi, axis=-1)], axis=-1)
    return float(value[0]), out


def _objective(psi: np.ndarray, n: int, sign: int):
    def f(x: np.ndarray) -> float:
        return float(fast_from_vectors(psi, n, bloch_vectors(x.reshape(n, 2, 2)), sign))

    return f


def fd_gradient(func, x: np.ndarray, step: float) -> np.ndarray:
    grad = np.empty_like(x)
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = step
        grad[j] = (func(x + e) - func(x - e)) / (2 * step)
    return grad


def _vectors_to_angles(vectors: np.ndarray) -> np.ndarray:
    theta = np.arctan2(np.hypot(vectors[..., 0], vectors[..., 1]), vectors[..., 2])
    phi = np.arctan2(vectors[..., 1], vectors[..., 0])
    return np.stack([theta, phi], axis=-1)


def _check_input(state: StateVector) -> None:
    if state.num_qubits > MAX_QUBITS:
        raise ValueError(f"maximizer is capped at {MAX_QUBITS} qubits, got {state.num_qubits}")
    if not state.is_normalized(1e-10):
        raise ValueError(f"state is not normalized (norm {state.norm():.15g})")


def stationarity_residual(state: StateVector, settings: MeasurementSettings, variant, fd_step: float = 1e-6) -> float:
    """max |d<S_N>/d angle| over all 4N angles, by central differences."""
    f = _objective(state.amplitudes, state.num_qubits, _variant(variant).sign)
    return float(np.max(np.abs(fd_gradient(f, settings.angles.reshape(-1).copy(), fd_step))))


def certify_stationarity(state: StateVector, settings: MeasurementSettings, variant, tol: float, fd_step: float = 1e-6) -> bool:
    return stationarity_residual(state, settings, variant, fd_step) <= tol


def ascend(psi: np.ndarray, n: int, vectors: np.ndarray, sign: int, rtol: float, atol: float,
           patience: int, max_sweeps: int) -> tuple[np.ndarray, np.ndarray, int, list[float]]:
    """Block ascent on a batch of restarts until each one stalls.

    A restart stalls once its per-sweep improvement stays below
    ``atol + rtol * |value|`` for ``patience`` consecutive sweeps; stalled
    restarts leave the batch. Returns (values, stalled mask, sweeps, history
    of the batch maximum).
    """
    count = vectors.shape[0]
    prev = np.full(count, -np.inf)
    quiet = np.zeros(count, dtype=int)
    active = np.arange(count)
    history = []
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        sub = vectors[active]
        value = block_ascent_sweep(psi, n, sub, sign)
        vectors[active] = sub
        small = value - prev[active] < atol + rtol * np.abs(value)
        quiet[active] = np.where(small, quiet[active] + 1, 0)
        prev[active] = value
        history.append(float(prev.max()))
        active = active[quiet[active] < patience]
        if active.size == 0:
            break
    return prev, quiet >= patience, sweeps, history


def _polish(psi: np.ndarray, n: int, sign: int, x0: np.ndarray) -> np.ndarray:
    def neg(z):
        value, grad = angle_gradient(psi, n, z.reshape(n, 2, 2), sign)
        return -value, -grad.reshape(-1)

    res = minimize(neg, x0, jac=True, method="BFGS", options={"gtol": 1e-11, "maxiter": 1000})
    return res.x if -res.fun > -neg(x0)[0] else x0


def maximize(state: StateVector, variant, config: OptimizerConfig | None = None) -> MaximizationResult:
    """Maximize |<S_N^variant>| for ``state`` from ``config.restarts`` random starts.

    Three stages: block ascent on every restart until it stalls
    (``screen_rtol``) or uses up ``screen_sweeps``; BFGS with the analytic
    gradient on the ``polish`` best; then block ascent on those until
    the improvement stays below ``convergence_tol`` for ``patience`` sweeps.
    Block ascent never lowers the objective, so the signed maximum found is
    nonnegative and equals the maximum of |<S_N>|.
    """
    config = config or OptimizerConfig()
    _check_input(state)
    variant = _variant(variant)
    n, sign, psi = state.num_qubits, variant.sign, state.amplitudes
    rng = np.random.default_rng(config.seed)
    vectors = random_vectors(rng, config.restarts, n)

    values, stalled, sweeps, history = ascend(
        psi, n, vectors, sign, config.screen_rtol, config.convergence_tol, config.patience,
        min(config.screen_sweeps, config.max_iterations),
    )
    converged = int(stalled.sum())
    logger.debug("screening: %d sweeps, %d/%d restarts stalled", sweeps, converged, config.restarts)

    candidates = []
    for idx in np.argsort(-values, kind="stable")[: max(1, config.polish)]:
        x = _vectors_to_angles(vectors[idx]).reshape(-1)
        if config.polish:
            x = _polish(psi, n, sign, x)
        candidates.append(bloch_vectors(x.reshape(n, 2, 2)))
    batch = np.array(candidates)
    final, _, extra, tail = ascend(psi, n, batch, sign, 0.0, config.convergence_tol, config.patience, config.max_iterations)
    best = int(np.argmax(final))

    settings = MeasurementSettings.from_vectors(batch[best])
    best_val = float(fast_from_vectors(psi, n, settings.vectors(), sign))
    residual = stationarity_residual(state, settings, variant, config.fd_step)
    return MaximizationResult(
        best_value=best_val,
        best_settings=settings,
        best_variant=variant,
        restarts_converged=converged,
        stationarity_residual=residual,
        sweeps=sweeps + extra,
        history=history + tail,
    )


def maximize_both(state: StateVector, config: OptimizerConfig | None = None) -> MaximizationResult:
    """Run both variants and keep the larger maximum (ties go to plus)."""
    plus = maximize(state, Variant.PLUS, config)
    minus = maximize(state, Variant.MINUS, config)
    return minus if minus.best_value > plus.best_value else plus
