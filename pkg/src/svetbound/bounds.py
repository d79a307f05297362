"""Closed-form maxima of |<S_N>| for GGHZ and maximal-slice states."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import cos, pi, sin, sqrt, tan

import numpy as np

from .states import Family, FamilyParameter
from .svetlichny import MeasurementSettings, Variant, _variant, f_sum

VIOLATION_SLACK = 1e-12


def lhv_bound(n: int) -> float:
    return 2.0 ** (n - 1)


def algebraic_cap(n: int) -> float:
    return sqrt(2) * 2.0 ** (n - 1)


def fmax(n: int) -> float:
    """Largest |F_N|, reached with every qubit measured along Z."""
    if n < 2:
        raise ValueError(f"N must be >= 2, got {n}")
    return 2.0 ** ((n + 1) // 2) if n % 2 else 2.0 ** (n // 2)


def gmax(n: int) -> float:
    """Largest |G_N|; equals the algebraic cap."""
    if n < 2:
        raise ValueError(f"N must be >= 2, got {n}")
    return sqrt(2) * 2.0 ** (n - 1)


def _check_gghz_n(n: int) -> None:
    if int(n) != n or n < 3:
        raise ValueError(f"GGHZ bounds are derived for N >= 3, got {n}")


def gghz_alpha_branches(n: int, alpha: float) -> tuple[float, float]:
    """(Z-measurement branch, equatorial branch) of the GGHZ maximum.

    Odd N: (2^((N+1)/2) |cos 2a|, sqrt(2) 2^(N-1) sin 2a).
    Even N: (2^(N/2), sqrt(2) 2^(N-1) sin 2a).
    """
    _check_gghz_n(n)
    z_branch = fmax(n) * abs(cos(2 * alpha)) if n % 2 else fmax(n)
    return z_branch, gmax(n) * abs(sin(2 * alpha))


def gghz_alpha_threshold_reached(n: int, alpha: float) -> bool:
    """True where the equatorial branch is the active one.

    Odd N: 2^(N/2) |tan 2a| >= 2. Even N: 2^(N/2) sin 2a >= sqrt(2).
    """
    _check_gghz_n(n)
    if n % 2:
        if abs(cos(2 * alpha)) < 1e-300:
            return True
        return 2 ** (n / 2) * abs(tan(2 * alpha)) >= 2
    return 2 ** (n / 2) * sin(2 * alpha) >= sqrt(2)


def gghz_bound_alpha(n: int, alpha: float) -> float:
    """max |<S_N>| over all settings for cos(a)|0..0> + sin(a)|1..1>."""
    return max(gghz_alpha_branches(n, alpha))


def tangle_threshold(n: int) -> float:
    """n-tangle at which the GGHZ maximum switches branch."""
    _check_gghz_n(n)
    return 1.0 / (2 ** (n - 2) + 1) if n % 2 else 2.0 ** (1 - n)


def gghz_tangle_branches(n: int, tau: float) -> tuple[float, float]:
    _check_gghz_n(n)
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    z_branch = 2.0 ** ((n + 1) / 2) * sqrt(1 - tau) if n % 2 else 2.0 ** (n / 2)
    return z_branch, 2.0 ** (n - 1) * sqrt(2 * tau)


def gghz_bound_tangle(n: int, tau: float) -> float:
    """GGHZ maximum as a function of the n-tangle tau = sin^2(2a)."""
    return max(gghz_tangle_branches(n, tau))


def ms_bound(n: int, alpha: float) -> float:
    """2^(N-1) sqrt(1 + sin^2 a)."""
    if n < 3:
        raise ValueError(f"MS bound needs N >= 3, got {n}")
    return 2.0 ** (n - 1) * sqrt(1 + sin(alpha) ** 2)


def ms_bound_tangle(n: int, tau: float) -> float:
    """MS maximum in terms of tau = sin^2 a (N = 3 or even N)."""
    if n < 3 or (n % 2 and n > 3):
        raise ValueError(f"MS tangle form holds for N = 3 or even N, got {n}")
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    return 2.0 ** (n - 1) * sqrt(1 + tau)


def z_settings(n: int, variant) -> MeasurementSettings:
    """All-Z settings (theta in {0, pi}) maximizing |F_N| for ``variant``.

    With theta_i^0 = 0 everywhere, flipping setting 1 of k qubits to theta = pi
    rotates the product of (cos theta^0 + i cos theta^1) by -k pi/2, so some k
    in 0..3 always aligns it with the nu phase.
    """
    best = None
    for k in range(min(n, 3) + 1):
        angles = np.zeros((n, 2, 2))
        angles[:k, 1, 0] = pi
        value = abs(f_sum(angles[..., 0], variant))
        if best is None or value > best[0] + 1e-9:
            best = (value, angles)
    return MeasurementSettings(best[1])


def equatorial_settings(n: int, variant) -> MeasurementSettings:
    """All theta = pi/2 with phi_i^0 = 0, phi_i^1 = pi/2, qubit 1 offset by +/- pi/4.

    Then cos(sum of phi) = nu(x) / sqrt(2) term by term, so |G_N| reaches
    sqrt(2) 2^(N-1).
    """
    offset = _variant(variant).sign * pi / 4
    angles = np.zeros((n, 2, 2))
    angles[..., 0] = pi / 2
    angles[:, 1, 1] = pi / 2
    angles[0, :, 1] += offset
    return MeasurementSettings(angles)


def optimal_settings_gghz(n: int, alpha: float, variant) -> MeasurementSettings:
    """Settings attaining :func:`gghz_bound_alpha` for the given variant."""
    z_branch, eq_branch = gghz_alpha_branches(n, alpha)
    if z_branch >= eq_branch:
        return z_settings(n, variant)
    return equatorial_settings(n, variant)


@dataclass
class BoundReport:
    family: str
    num_qubits: int
    alpha: float
    variant_best: str
    lhv_bound: float
    algebraic_cap: float
    analytic_max: float
    tangle: float | None
    violates: bool
    numeric_max: float | None = None

    def __post_init__(self):
        if self.lhv_bound > self.algebraic_cap:
            raise ValueError("LHV bound exceeds the algebraic cap")
        if self.analytic_max > self.algebraic_cap + 1e-9:
            raise ValueError(f"analytic maximum {self.analytic_max} exceeds the algebraic cap")

    def to_dict(self) -> dict:
        return asdict(self)


def analytic_max(param: FamilyParameter) -> float:
    if param.family is Family.GGHZ:
        return gghz_bound_alpha(param.num_qubits, param.alpha)
    return ms_bound(param.num_qubits, param.alpha)


def violation_report(param: FamilyParameter) -> BoundReport:
    n = param.num_qubits
    value = analytic_max(param)
    return BoundReport(
        family=param.family.value,
        num_qubits=n,
        alpha=param.alpha,
        variant_best=Variant.PLUS.value,  # both variants share the same maximum
        lhv_bound=lhv_bound(n),
        algebraic_cap=algebraic_cap(n),
        analytic_max=value,
        tangle=param.tangle(),
        violates=value > lhv_bound(n) + VIOLATION_SLACK,
    )
