from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from svetbound import bounds, maximizer
from svetbound.maximizer import OptimizerConfig, maximize, maximize_both
from svetbound.qcore import StateVector
from svetbound.states import gghz, ms
from svetbound.svetlichny import MeasurementSettings, Variant, expectation_fast, fast_from_vectors

FAST = OptimizerConfig(restarts=16, seed=3)


def test_ghz_reaches_cap():
    result = maximize(gghz(3, pi / 4), "plus", FAST)
    assert abs(result.best_value - 4 * sqrt(2)) <= 1e-6
    assert result.best_variant is Variant.PLUS


def test_even_first_branch():
    assert 4 * np.sin(0.1) < sqrt(2)
    assert abs(maximize(gghz(4, 0.05), "minus", FAST).best_value - 4) <= 1e-6


def test_ms_attains_bound():
    result = maximize(ms(4, pi / 6), "plus", FAST)
    assert abs(result.best_value - 8 * sqrt(1.25)) <= 1e-5
    assert maximizer.certify_stationarity(ms(4, pi / 6), result.best_settings, "plus", 1e-4)


def test_maximize_both_examples():
    assert abs(maximize_both(gghz(5, pi / 8), FAST).best_value - bounds.gghz_bound_alpha(5, pi / 8)) <= 1e-5
    assert abs(maximize_both(ms(3, 0.0), FAST).best_value - 4) <= 1e-9
    for n in (3, 4, 5, 6):
        assert abs(maximize_both(gghz(n, 0.0), FAST).best_value - bounds.fmax(n)) <= 1e-9


def test_reported_settings_reproduce_value():
    psi = ms(5, 1.0)
    result = maximize(psi, "minus", FAST)
    assert abs(expectation_fast(psi, result.best_settings, "minus") - result.best_value) <= 1e-12
    again = MeasurementSettings.from_records(result.to_dict()["best_settings"])
    assert abs(expectation_fast(psi, again, "minus") - result.best_value) <= 1e-12


def test_deterministic_for_seed():
    a = maximize(ms(4, 0.4), "plus", FAST)
    b = maximize(ms(4, 0.4), "plus", FAST)
    assert a.best_value == b.best_value
    np.testing.assert_array_equal(a.best_settings.angles, b.best_settings.angles)


def test_restarts_counted():
    result = maximize(gghz(3, 0.5), "plus", FAST)
    assert 0 <= result.restarts_converged <= FAST.restarts
    assert result.sweeps == len(result.history) > 0


def test_optimal_settings_certified():
    for n, alpha in ((3, pi / 4), (4, 0.1), (5, 0.6)):
        s = bounds.optimal_settings_gghz(n, alpha, "plus")
        assert maximizer.certify_stationarity(gghz(n, alpha), s, "plus", 1e-6)


def test_random_settings_not_stationary(rng):
    psi = gghz(4, 0.6)
    hits = 0
    for _ in range(10):
        theta = np.arccos(rng.uniform(-1, 1, (4, 2)))
        s = MeasurementSettings(np.stack([theta, rng.uniform(0, 2 * pi, (4, 2))], -1))
        hits += maximizer.certify_stationarity(psi, s, "plus", 1e-6)
    assert hits == 0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        maximize(StateVector(3, np.ones(8)), "plus", FAST)
    with pytest.raises(ValueError):
        maximize(StateVector.basis("0" * 15), "plus", FAST)


@pytest.mark.parametrize(
    "kwargs",
    [dict(restarts=0), dict(max_iterations=0), dict(convergence_tol=0.0), dict(fd_step=0.1), dict(patience=0)],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        OptimizerConfig(**kwargs)


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_block_sweep_never_decreases(n, seed):
    rng = np.random.default_rng(seed)
    psi = StateVector.from_amplitudes(rng.normal(size=2**n) + 1j * rng.normal(size=2**n)).amplitudes
    vec = maximizer.random_vectors(rng, 5, n)
    before = fast_from_vectors(psi, n, vec, 1)
    after = maximizer.block_ascent_sweep(psi, n, vec, 1)
    assert np.all(after >= before - 1e-12)
    np.testing.assert_allclose(after, fast_from_vectors(psi, n, vec, 1), atol=1e-12)


@given(st.integers(2, 5), st.integers(0, 2**32 - 1), st.sampled_from([1, -1]))
def test_angle_gradient_matches_finite_differences(n, seed, sign):
    rng = np.random.default_rng(seed)
    psi = StateVector.from_amplitudes(rng.normal(size=2**n) + 1j * rng.normal(size=2**n)).amplitudes
    angles = rng.uniform(0, pi, (n, 2, 2))
    value, grad = maximizer.angle_gradient(psi, n, angles, sign)
    f = maximizer._objective(psi, n, sign)
    assert abs(value - f(angles.reshape(-1))) <= 1e-12
    fd = maximizer.fd_gradient(f, angles.reshape(-1), 1e-6)
    np.testing.assert_allclose(grad.reshape(-1), fd, atol=1e-6)


@given(st.integers(3, 6), st.floats(0, pi / 2), st.integers(0, 1000))
def test_never_exceeds_bounds(n, alpha, seed):
    cfg = OptimizerConfig(restarts=4, seed=seed, polish=1)
    assert maximize(gghz(n, alpha), "plus", cfg).best_value <= bounds.gghz_bound_alpha(n, alpha) + 1e-9
    assert maximize(ms(n, alpha), "minus", cfg).best_value <= bounds.ms_bound(n, alpha) + 1e-9
