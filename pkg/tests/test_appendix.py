from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from svetbound import appendix, bounds
from svetbound.svetlichny import MeasurementSettings, Variant, gghz_expectation_closed

seeds = st.integers(0, 2**32 - 1)
variants = st.sampled_from(list(Variant))


def random_settings(rng, n):
    theta = np.arccos(rng.uniform(-1, 1, (n, 2)))
    return MeasurementSettings(np.stack([theta, rng.uniform(0, 2 * pi, (n, 2))], -1))


@given(st.integers(4, 9), st.floats(0, pi / 2), variants, seeds)
def test_reconstruction(n, alpha, v, seed):
    s = random_settings(np.random.default_rng(seed), n)
    coeffs = appendix.coefficients_for(n, alpha, s, v)
    rebuilt = appendix.four_block_value(coeffs, s.theta[-2], s.theta[-1])
    assert abs(rebuilt - gghz_expectation_closed(n, alpha, s, v)) <= 1e-10


@given(st.integers(4, 8), st.floats(0, pi / 2), variants, seeds)
def test_sign_structure(n, alpha, v, seed):
    c = appendix.coefficients_for(n, alpha, random_settings(np.random.default_rng(seed), n), v)
    assert c.f4 == -c.f1
    assert c.f2 == c.f3


@given(st.integers(4, 8), variants, seeds)
def test_product_state_has_no_g_terms(n, v, seed):
    c = appendix.coefficients_for(n, 0.0, random_settings(np.random.default_rng(seed), n), v)
    assert np.all(c.g() == 0)


@given(st.integers(4, 8), st.floats(0, pi / 2), variants, seeds)
def test_envelope_bounds_value(n, alpha, v, seed):
    s = random_settings(np.random.default_rng(seed), n)
    coeffs = appendix.coefficients_for(n, alpha, s, v)
    value = appendix.four_block_value(coeffs, s.theta[-2], s.theta[-1])
    assert abs(value) <= appendix.envelope_bound(coeffs, s.theta[-2]) + 1e-10


def test_hk_examples():
    assert abs(appendix.hk_bounds(5, pi / 4)[0] - 8 * sqrt(2)) <= 1e-12
    assert abs(appendix.hk_bounds(4, 0.0)[0] - 2) <= 1e-12


def test_hk_symmetric(rng):
    for _ in range(50):
        n, alpha = int(rng.integers(4, 12)), rng.uniform(0, pi / 2)
        h, k = appendix.hk_bounds(n, alpha)
        assert h == k


@pytest.mark.parametrize("n", range(4, 11))
def test_twice_max_h_is_gghz_bound(n):
    for alpha in np.linspace(0, pi / 2, 25):
        assert abs(2 * appendix.hk_bounds(n, alpha)[0] - bounds.gghz_bound_alpha(n, alpha)) <= 1e-12


@pytest.mark.parametrize("n", range(4, 9))
@pytest.mark.parametrize("v", list(Variant))
def test_consistency_at_analytic_optima(n, v):
    for alpha in np.linspace(0, pi / 2, 9):
        s = bounds.optimal_settings_gghz(n, alpha, v)
        assert appendix.consistency_check(s, appendix.coefficients_for(n, alpha, s, v), 1e-9)


def test_consistency_fails_at_random_settings(rng):
    fails = 0
    for _ in range(20):
        s = random_settings(rng, 5)
        fails += not appendix.consistency_check(s, appendix.coefficients_for(5, 0.6, s, "plus"), 1e-9)
    assert fails == 20


def test_consistency_all_z_product_state():
    s = bounds.z_settings(6, "plus")
    assert appendix.consistency_check(s, appendix.coefficients_for(6, 0.0, s, "plus"), 1e-12)


def test_needs_four_qubits():
    with pytest.raises(ValueError):
        appendix.hk_bounds(3, 0.2)
    s = random_settings(np.random.default_rng(0), 1)
    with pytest.raises(ValueError):
        appendix.appendix_coefficients(3, 0.2, s, (0, 0), (0, 0), "plus")
    with pytest.raises(ValueError):
        appendix.appendix_coefficients(5, 0.2, s, (0, 0), (0, 0), "plus")


def test_h_can_exceed_its_maximum_off_optimum():
    # max H bounds H only along the optimal sub-settings; the all-Z pattern with
    # qubit N-1 at theta = 0 already doubles it at N = 6, alpha = 0
    angles = np.zeros((6, 2, 2))
    coeffs = appendix.coefficients_for(6, 0.0, MeasurementSettings(angles), "plus")
    assert appendix.h_value(coeffs, 0.0) > appendix.hk_bounds(6, 0.0)[0]
