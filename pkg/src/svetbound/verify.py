"""Self-checks behind ``svetbound verify``.

Each check returns (passed, detail). ``quick`` keeps N <= 6 and 16
restarts; ``full`` runs at the acceptance scales.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from math import pi, sin

import numpy as np

from . import appendix, bounds, maximizer, states, svetlichny
from .svetlichny import MeasurementSettings, Variant


@dataclass(frozen=True)
class Level:
    name: str
    n_max: int
    restarts: int
    alpha_points: int
    random_draws: int
    brute_n_max: int
    dense_n_max: int
    sample_draws: int


LEVELS = {
    "quick": Level("quick", n_max=6, restarts=16, alpha_points=7, random_draws=40, brute_n_max=6, dense_n_max=5, sample_draws=200),
    "full": Level("full", n_max=10, restarts=64, alpha_points=25, random_draws=200, brute_n_max=10, dense_n_max=6, sample_draws=10_000),
}


def _random_settings(rng, n):
    return MeasurementSettings(np.stack([np.arccos(rng.uniform(-1, 1, (n, 2))), rng.uniform(0, 2 * pi, (n, 2))], -1))


def _random_state(rng, n):
    return states.StateVector.from_amplitudes(rng.normal(size=2**n) + 1j * rng.normal(size=2**n))


def check_nu_decomposition(level):
    for v in Variant:
        for w in range(32):
            expected = 1 if (w * (w + v.sign) // 2) % 2 == 0 else -1
            collapsed = ((1 + v.sign * 1j) * 1j**w).real
            if svetlichny.nu(w, v) != expected or svetlichny.nu(w, v) != collapsed:
                return False, f"nu({w}, {v.value}) = {svetlichny.nu(w, v)}, expected {expected}"
    return True, "w = 0..31, both variants"


def check_engine_equivalence(level):
    rng = np.random.default_rng(11)
    worst = 0.0
    for i in range(level.random_draws):
        n = int(rng.integers(1, level.brute_n_max + 1))
        psi, st, v = _random_state(rng, n), _random_settings(rng, n), list(Variant)[i % 2]
        fast = svetlichny.expectation_fast(psi, st, v)
        worst = max(worst, abs(fast - svetlichny.expectation_bruteforce(psi, st, v)))
        if n <= level.dense_n_max:
            worst = max(worst, abs(fast - svetlichny.expectation_dense(psi, st, v)))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


def check_closed_form(level):
    rng = np.random.default_rng(12)
    worst = 0.0
    for i in range(level.random_draws):
        n = int(rng.integers(2, min(level.n_max, 8) + 1))
        alpha = rng.uniform(0, pi / 2)
        st, v = _random_settings(rng, n), list(Variant)[i % 2]
        diff = svetlichny.gghz_expectation_closed(n, alpha, st, v) - svetlichny.expectation_fast(states.gghz(n, alpha), st, v)
        worst = max(worst, abs(diff))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


def check_tangles(level):
    worst = 0.0
    for n in range(2, level.n_max + 1, 2):
        for alpha in np.linspace(0, pi / 2, level.alpha_points):
            worst = max(worst, abs(states.n_tangle_even(states.gghz(n, alpha)) - sin(2 * alpha) ** 2))
            if n >= 4:
                worst = max(worst, abs(states.n_tangle_even(states.ms(n, alpha)) - sin(alpha) ** 2))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def check_attainment(level):
    worst = 0.0
    for n in range(3, level.n_max + 1):
        for alpha in np.linspace(0, pi / 2, level.alpha_points):
            for v in Variant:
                st = bounds.optimal_settings_gghz(n, alpha, v)
                got = abs(svetlichny.expectation_fast(states.gghz(n, alpha), st, v))
                worst = max(worst, abs(got - bounds.gghz_bound_alpha(n, alpha)))
    return worst <= 1e-9, f"max deviation {worst:.2e}"


def check_branch_continuity(level):
    worst = 0.0
    for n in range(3, level.n_max + 3):
        z, e = bounds.gghz_tangle_branches(n, bounds.tangle_threshold(n))
        worst = max(worst, abs(z - e))
    return worst <= 1e-12, f"max branch gap {worst:.2e}"


def check_tangle_threshold(level):
    for n in range(3, level.n_max + 1):
        for tau in np.linspace(0, 0.5, 101):
            if bounds.gghz_bound_tangle(n, tau) > bounds.lhv_bound(n) + 1e-12:
                return False, f"violation below tau = 1/2 at N={n}, tau={tau}"
        if not bounds.gghz_bound_tangle(n, 0.5 + 1e-6) > bounds.lhv_bound(n):
            return False, f"no violation just above tau = 1/2 at N={n}"
    return True, f"N = 3..{level.n_max}"


def check_appendix(level):
    worst = 0.0
    for n in range(4, level.n_max + 1):
        for alpha in np.linspace(0, pi / 2, level.alpha_points):
            worst = max(worst, abs(2 * appendix.hk_bounds(n, alpha)[0] - bounds.gghz_bound_alpha(n, alpha)))
    rng = np.random.default_rng(13)
    for i in range(level.random_draws // 2):
        n = int(rng.integers(4, min(level.n_max, 8) + 1))
        alpha, st, v = rng.uniform(0, pi / 2), _random_settings(rng, n), list(Variant)[i % 2]
        coeffs = appendix.coefficients_for(n, alpha, st, v)
        rebuilt = appendix.four_block_value(coeffs, st.theta[-2], st.theta[-1])
        worst = max(worst, abs(rebuilt - svetlichny.gghz_expectation_closed(n, alpha, st, v)) * 1e2)
    return worst <= 1e-10, f"max deviation (reconstruction scaled x100) {worst:.2e}"


def check_stationarity(level):
    worst = 0.0
    for n in range(3, min(level.n_max, 8) + 1):
        for alpha in np.linspace(0, pi / 2, level.alpha_points):
            for st in (bounds.z_settings(n, Variant.PLUS), bounds.equatorial_settings(n, Variant.PLUS)):
                grad = svetlichny.gghz_gradient_theta_angles(n, alpha, st.angles, Variant.PLUS)
                worst = max(worst, float(np.abs(grad).max()))
    return worst <= 1e-9, f"max gradient at analytic optima {worst:.2e}"


def check_never_exceed(level):
    rng = np.random.default_rng(14)
    worst = -np.inf
    for n in range(3, level.n_max + 1):
        for alpha in (0.2, 0.7, 1.3):
            for family, bound in (("gghz", bounds.gghz_bound_alpha(n, alpha)), ("ms", bounds.ms_bound(n, alpha))):
                psi = states.FamilyParameter(family, n, alpha).state()
                for start in range(0, level.sample_draws, 2000):
                    vec = maximizer.random_vectors(rng, min(2000, level.sample_draws - start), n)
                    for v in Variant:
                        vals = np.abs(svetlichny.fast_from_vectors(psi.amplitudes, n, vec, v.sign))
                        worst = max(worst, float(vals.max() - bound))
    return worst <= 1e-9, f"largest excess over the bound {worst:+.2e}"


def _certify(level, family):
    cfg = maximizer.OptimizerConfig(restarts=level.restarts, seed=1)
    worst = 0.0
    for n in range(3, level.n_max + 1):
        for alpha in np.linspace(0, pi / 2, level.alpha_points):
            param = states.FamilyParameter(family, n, alpha)
            got = maximizer.maximize(param.state(), Variant.PLUS, cfg).best_value
            want = bounds.analytic_max(param)
            if got > want + 1e-9:
                return False, f"maximizer exceeds bound at N={n}, alpha={alpha:.4f}: {got} > {want}"
            worst = max(worst, want - got)
    return worst <= 1e-5, f"max shortfall {worst:.2e}"


def check_maximizer_gghz(level):
    return _certify(level, "gghz")


def check_maximizer_ms(level):
    return _certify(level, "ms")


CHECKS = {
    "nu decomposition": check_nu_decomposition,
    "engine equivalence": check_engine_equivalence,
    "closed form": check_closed_form,
    "n-tangle identities": check_tangles,
    "GGHZ attainment": check_attainment,
    "branch continuity": check_branch_continuity,
    "tangle threshold": check_tangle_threshold,
    "appendix closure": check_appendix,
    "stationarity": check_stationarity,
    "never exceed": check_never_exceed,
    "maximizer GGHZ": check_maximizer_gghz,
    "maximizer MS": check_maximizer_ms,
}


def run_checks(level_name: str, out=print) -> bool:
    level = LEVELS[level_name]
    all_ok = True
    for name, check in CHECKS.items():
        start = time.time()
        try:
            ok, detail = check(level)
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'}  {name:20s} {detail}  ({time.time() - start:.1f}s)")
    return all_ok
