"""Two-party isolation of the GGHZ Svetlichny value and its global maximum.

Singling out qubits N-1 and N, the GGHZ expectation becomes

    f1 c0 c'0 + g1 s0 s'0 + f2 c0 c'1 + g2 s0 s'1
  + f3 c1 c'0 + g3 s1 s'0 + f4 c1 c'1 + g4 s1 s'1

with c_i = cos(theta_{N-1}^i), c'_j = cos(theta_N^j) (s likewise with sin).
The f/g coefficients depend on the first N-2 qubits and on the azimuths of
the last two.
"""
from __future__ import annotations

from dataclasses import astuple, dataclass
from math import cos, sin, sqrt

import numpy as np

from .svetlichny import MeasurementSettings, _variant, f_sum, g_sum, gghz_coefficients


@dataclass(frozen=True)
class AppendixCoefficients:
    f1: float
    f2: float
    f3: float
    f4: float
    g1: float
    g2: float
    g3: float
    g4: float

    def f(self) -> np.ndarray:
        return np.array([self.f1, self.f2, self.f3, self.f4])

    def g(self) -> np.ndarray:
        return np.array([self.g1, self.g2, self.g3, self.g4])

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)


# block index -> (setting of qubit N-1, setting of qubit N)
BLOCKS = ((0, 0), (0, 1), (1, 0), (1, 1))


def appendix_coefficients(
    n: int,
    alpha: float,
    sub_settings: MeasurementSettings,
    phi_second_last,
    phi_last,
    variant,
) -> AppendixCoefficients:
    """f_i, g_i for the GGHZ state from settings of qubits 1..N-2.

    ``phi_second_last`` and ``phi_last`` are the azimuth pairs (setting 0,
    setting 1) of qubits N-1 and N.

    Blocks with one of the two isolated settings equal to 1 shift the Hamming
    weight by one, and nu^{+/-}(w + 1) = -/+ nu^{-/+}(w); blocks with both
    equal to 1 shift it by two, and nu(w + 2) = -nu(w).
    """
    if n < 4:
        raise ValueError(f"appendix decomposition needs N >= 4, got {n}")
    if sub_settings.num_qubits != n - 2:
        raise ValueError(f"expected settings for {n - 2} qubits, got {sub_settings.num_qubits}")
    v = _variant(variant)
    s = v.sign
    c1, c2 = gghz_coefficients(n, alpha)
    theta, phi = sub_settings.theta, sub_settings.phi

    def g_tilde(i, j, var):
        return g_sum(theta, phi, var, phase=phi_second_last[i] + phi_last[j])

    f_same = c1 * f_sum(theta, v)
    f_other = c1 * f_sum(theta, v.other)
    return AppendixCoefficients(
        f1=f_same,
        f2=-s * f_other,
        f3=-s * f_other,
        f4=-f_same,
        g1=c2 * g_tilde(0, 0, v),
        g2=-s * c2 * g_tilde(0, 1, v.other),
        g3=-s * c2 * g_tilde(1, 0, v.other),
        g4=-c2 * g_tilde(1, 1, v),
    )


def split_settings(settings: MeasurementSettings):
    """(settings of qubits 1..N-2, phi of qubit N-1, phi of qubit N)."""
    angles = settings.angles
    return MeasurementSettings(angles[:-2]), tuple(angles[-2, :, 1]), tuple(angles[-1, :, 1])


def coefficients_for(n: int, alpha: float, settings: MeasurementSettings, variant) -> AppendixCoefficients:
    sub, phi_a, phi_b = split_settings(settings)
    return appendix_coefficients(n, alpha, sub, phi_a, phi_b, variant)


def four_block_value(coeffs: AppendixCoefficients, theta_second_last, theta_last) -> float:
    """Signed expectation rebuilt from the coefficients and the two isolated qubits' polar angles."""
    total = 0.0
    for f, g, (i, j) in zip(coeffs.f(), coeffs.g(), BLOCKS):
        a, b = theta_second_last[i], theta_last[j]
        total += f * cos(a) * cos(b) + g * sin(a) * sin(b)
    return total


def consistency_residuals(settings: MeasurementSettings, coeffs: AppendixCoefficients) -> np.ndarray:
    """f sin(theta_N^j) cos(theta_{N-1}^i) - g cos(theta_N^j) sin(theta_{N-1}^i) per block.

    Cross-multiplied form of tan(theta_N^j) = tan(theta_{N-1}^i) g / f, which
    is the equality condition of x cos t + y sin t <= sqrt(x^2 + y^2).
    """
    th_a = settings.theta[-2]
    th_b = settings.theta[-1]
    out = []
    for f, g, (i, j) in zip(coeffs.f(), coeffs.g(), BLOCKS):
        out.append(f * sin(th_b[j]) * cos(th_a[i]) - g * cos(th_b[j]) * sin(th_a[i]))
    return np.array(out)


def consistency_check(settings: MeasurementSettings, coeffs: AppendixCoefficients, tol: float) -> bool:
    return bool(np.all(np.abs(consistency_residuals(settings, coeffs)) <= tol))


def h_value(coeffs: AppendixCoefficients, theta: float) -> float:
    """Sum of the two block envelopes that share theta_{N-1}^0."""
    c2, s2 = cos(theta) ** 2, sin(theta) ** 2
    return sqrt(coeffs.f1**2 * c2 + coeffs.g1**2 * s2) + sqrt(coeffs.f2**2 * c2 + coeffs.g2**2 * s2)


def k_value(coeffs: AppendixCoefficients, theta: float) -> float:
    """Sum of the two block envelopes that share theta_{N-1}^1."""
    c2, s2 = cos(theta) ** 2, sin(theta) ** 2
    return sqrt(coeffs.f3**2 * c2 + coeffs.g3**2 * s2) + sqrt(coeffs.f4**2 * c2 + coeffs.g4**2 * s2)


def envelope_bound(coeffs: AppendixCoefficients, theta_second_last) -> float:
    """H(theta_{N-1}^0) + K(theta_{N-1}^1), an upper bound on |four_block_value|."""
    return h_value(coeffs, theta_second_last[0]) + k_value(coeffs, theta_second_last[1])


def f_g_max(n: int, alpha: float) -> tuple[float, float]:
    """(f_max, g_max): |c1| 2^((N-1)/2) or |c1| 2^((N-2)/2), and c2 sqrt(2) 2^(N-2)."""
    c1, c2 = gghz_coefficients(n, alpha)
    f_max = abs(c1) * (2 ** ((n - 1) / 2) if n % 2 else 2 ** ((n - 2) / 2))
    return f_max, abs(c2) * sqrt(2) * 2 ** (n - 2)


def hk_bounds(n: int, alpha: float) -> tuple[float, float]:
    """(max H, max K); twice either is the GGHZ global maximum."""
    if n < 4:
        raise ValueError(f"appendix decomposition needs N >= 4, got {n}")
    max_h = max(f_g_max(n, alpha))
    # K repeats H's structure on theta_{N-1}^1 with (f3, g3), (f4, g4)
    return max_h, max_h
