import numpy as np
import pytest

from clocklab.operators import Observable, expectation
from clocklab.moments import (
    peaked_approximation_report,
    salecker_wigner_check,
    tau_moments_simulated,
    uncertainty_product,
    variance_law_predict,
)
from clocklab.states import GaussianClockSpec, gaussian_state, state_from_profiles, suggest_grids

from oracles import (
    chirped_product,
    dilation,
    gauss_hermite_mean,
    gaussian_profile,
    profile_spreads,
    two_hump_profile,
)


def _state(e0=10.0, sigma_e=0.5, tau0=0.0, p0=0.0, sigma_p=0.5, x0=0.0, t_max=0.0):
    return gaussian_state(GaussianClockSpec(e0, sigma_e, tau0, p0, sigma_p, x0), t_max=t_max)


def test_rest_clock_mean_reading_tracks_time():
    state = _state(e0=10.0, sigma_e=0.5, tau0=1.5, sigma_p=0.001, t_max=20.0)
    moments = tau_moments_simulated(state, 20.0)
    assert moments.mean_tau == pytest.approx(21.5, abs=1e-4)


def test_mean_reading_is_linear_in_time():
    state = _state(e0=10.0, sigma_e=0.5, tau0=0.5, p0=3.0, sigma_p=0.4, t_max=50.0)
    d_mean = expectation(state, Observable.D)
    tau0 = expectation(state, Observable.TAU)
    for t in (1.0, 10.0, 50.0):
        mean = tau_moments_simulated(state, t).mean_tau
        expected = tau0 + d_mean * t
        assert mean == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("spec", [
    GaussianClockSpec(e0=10.0, sigma_e=0.5, sigma_p=0.5),
    GaussianClockSpec(e0=10.0, sigma_e=0.5, tau0=2.0, p0=3.0, sigma_p=0.4),
    GaussianClockSpec(e0=-10.0, sigma_e=0.5, sigma_p=0.5),
    GaussianClockSpec(e0=10.0, sigma_e=2.0, p0=1000.0, sigma_p=0.05),
])
def test_variance_growth_matches_quadratic_law(spec):
    state = gaussian_state(spec, t_max=100.0)
    law = variance_law_predict(state)
    for t in (0.0, 1.0, 10.0, 100.0):
        sim = tau_moments_simulated(state, t).var_tau
        assert sim == pytest.approx(law.predict(t), rel=1e-7)


def test_variance_at_t50_matches_law():
    state = _state(t_max=50.0)
    law = variance_law_predict(state)
    sim = tau_moments_simulated(state, 50.0).var_tau
    assert sim == pytest.approx(law.predict(50.0), rel=1e-8)


def test_quad_coefficient_against_quadrature_oracle():
    state = _state()
    law = variance_law_predict(state)
    d1 = gauss_hermite_mean(dilation, 10.0, 0.5, 0.0, 0.5)
    d2 = gauss_hermite_mean(lambda E, P: dilation(E, P) ** 2, 10.0, 0.5, 0.0, 0.5)
    assert law.quad == pytest.approx(d2 - d1**2, rel=1e-5)
    assert law.quad == pytest.approx(3.148720497669899e-06, rel=1e-5)


def test_cross_term_vanishes_for_real_gaussians():
    for tau0 in (0.0, 3.0, -7.0, 17.0):
        state = _state(tau0=tau0)
        law = variance_law_predict(state)
        assert abs(law.lin) <= 1e-9


def test_cross_term_nonzero_for_chirped_state():
    spec = GaussianClockSpec(10.0, 0.5, p0=1000.0, sigma_p=0.5)
    e_grid, p_grid = suggest_grids(spec)
    beta = 0.4
    state = state_from_profiles(
        e_grid, p_grid,
        lambda E: np.exp(-(E - 10.0) ** 2 / 1.0 + 1j * beta * (E - 10.0) ** 2),
        lambda p: np.exp(-((p - 1000.0) ** 2)))
    law = variance_law_predict(state)
    assert abs(law.lin) > 1e-5


def test_sharp_energy_estimate_valid_for_boosted_clock():
    state = _state(e0=10.0, sigma_e=0.1, p0=1000.0, sigma_p=0.1)
    report = peaked_approximation_report(state)
    assert report.sharpness < 0.05
    assert report.exact_quad == pytest.approx(report.approx_quad, rel=2e-4)
    assert report.exact_lin == pytest.approx(0.0, abs=1e-9)
    assert report.approx_lin == pytest.approx(0.0, abs=1e-9)


def test_sharp_energy_estimate_fails_for_rest_clock():
    # dilation fluctuations of a momentum-localized rest clock are far below
    # the (dE/<H>)^2 estimate: the rest-energy fluctuation cancels between
    # numerator and denominator of D = E/H when H ~ |E|
    state = _state(e0=10.0, sigma_e=0.1, p0=0.0, sigma_p=0.1)
    report = peaked_approximation_report(state)
    assert report.sharpness < 0.05
    assert report.exact_quad < 1e-2 * report.approx_quad


def test_sharpness_shrinks_with_narrower_spreads():
    wide = peaked_approximation_report(_state(sigma_e=1.0, sigma_p=1.0)).sharpness
    narrow = peaked_approximation_report(_state(sigma_e=0.1, sigma_p=0.1)).sharpness
    assert narrow < wide


def test_broad_state_reported_without_assertion():
    # momentum window sits away from p = 0, keeping the dilation rate defined
    # even though the rest-energy support crosses zero
    report = peaked_approximation_report(
        _state(e0=10.0, sigma_e=5.0, p0=3.0, sigma_p=0.2))
    assert report.sharpness > 0.1


def test_bound_check_fields():
    state = _state(e0=10.0, sigma_e=0.2, sigma_p=0.5, t_max=10.0)
    check = salecker_wigner_check(state, 10.0)
    assert check.margin == pytest.approx(check.lhs - check.rhs)
    assert check.satisfied == (check.lhs >= check.rhs)
    assert check.slow_clock
    # the two bound forms differ by <p^2>c^2 / 2<E>^2 for a slow clock
    assert check.rhs_rest_energy == pytest.approx(check.rhs, rel=5e-3)


def test_bound_trivial_as_time_vanishes():
    state = _state(sigma_e=0.2)
    check = salecker_wigner_check(state, 1e-9)
    assert check.satisfied  # var(0) > 0 while the bound goes to zero


def test_bound_rejects_nonpositive_time():
    with pytest.raises(ValueError):
        salecker_wigner_check(_state(), 0.0)


def test_bound_satisfied_across_boosted_family():
    for sigma_e in (0.05, 0.2, 0.7, 2.0):
        state = _state(e0=10.0, sigma_e=sigma_e, p0=1000.0, sigma_p=0.05, t_max=100.0)
        for t in (1.0, 10.0, 100.0):
            check = salecker_wigner_check(state, t)
            assert check.sharpness <= 0.05
            assert check.satisfied, (sigma_e, t, check.margin)


def test_near_saturation_width_for_boosted_clock():
    # sigma_e = sqrt(hbar <H> / 2t) should sit within a few percent of the bound
    state = _state(e0=10.0, sigma_e=2.236, p0=1000.0, sigma_p=0.05, t_max=100.0)
    check = salecker_wigner_check(state, 100.0)
    assert check.lhs == pytest.approx(check.rhs, rel=0.05)


def test_gaussian_saturates_uncertainty_floor():
    for sigma_e in (0.1, 0.5, 2.0):
        product = uncertainty_product(_state(sigma_e=sigma_e))
        assert product.product == pytest.approx(0.5, abs=1e-6)
        assert product.d_m == pytest.approx(product.d_e, rel=1e-12)  # c = 1


def test_chirped_gaussian_exceeds_floor():
    sigma, beta = 0.5, 0.4
    spec = GaussianClockSpec(10.0, sigma, sigma_p=0.5)
    e_grid, p_grid = suggest_grids(spec)
    state = state_from_profiles(
        e_grid, p_grid,
        lambda E: np.exp(-(E - 10.0) ** 2 / (4 * sigma**2) + 1j * beta * E**2),
        lambda p: np.exp(-(p**2)))
    product = uncertainty_product(state)
    expected = chirped_product(sigma, beta)
    assert product.product == pytest.approx(expected, rel=1e-6)
    assert product.product > 0.5 + 1e-3


def test_two_hump_superposition_far_above_floor():
    e0, a, sigma = 10.0, 5.0, 1.0
    g, dg = two_hump_profile(e0, a, sigma)
    d_e, d_tau, prod = profile_spreads(g, dg, lambda E: np.zeros_like(E),
                                       e0 - a - 30 * sigma, e0 + a + 30 * sigma)
    from clocklab.grids import UniformGrid
    e_grid = UniformGrid(e0 - 32.0, e0 + 32.0, 2048)
    p_grid = UniformGrid(-10.0, 10.0, 64)
    state = state_from_profiles(e_grid, p_grid, lambda E: g(E) + 0j,
                                lambda p: np.exp(-p**2 / 4.0))
    product = uncertainty_product(state)
    assert product.product == pytest.approx(prod, rel=1e-6)
    assert product.product > 5 * product.lower


def test_negative_rest_energy_clock_runs_backwards():
    state = _state(e0=-10.0, sigma_e=0.5, sigma_p=0.5, t_max=50.0)
    d_mean = expectation(state, Observable.D)
    assert d_mean < -0.99
    m0 = tau_moments_simulated(state, 0.0).mean_tau
    m1 = tau_moments_simulated(state, 10.0).mean_tau
    m2 = tau_moments_simulated(state, 50.0).mean_tau
    assert m1 < m0 and m2 < m1
    law = variance_law_predict(state)
    for t in (10.0, 50.0):
        assert tau_moments_simulated(state, t).var_tau == pytest.approx(
            law.predict(t), rel=1e-7)
