import numpy as np
import pytest

from clocklab.dynamics import (
    ExtendedPhaseSpacePoint,
    base_hamiltonian,
    clock_at_rest,
    conservation_drift,
    constraint_drift,
    constraints,
    geodesic_lorentz_residual,
    hamilton_rhs,
    integrate,
    moving_clock,
    proper_time_residual,
    total_hamiltonian,
)
from clocklab.metric import StaticMetric, flat_metric, isotropic_weak_field_metric, uniform_lapse_metric

from oracles import hyperbolic_motion

FLAT = flat_metric()


def test_base_hamiltonian_rest_energy():
    assert base_hamiltonian(clock_at_rest(1.0), FLAT) == pytest.approx(1.0, abs=1e-15)


def test_base_hamiltonian_three_four_five():
    pt = moving_clock(1.0, (0.75, 0.0, 0.0))
    assert base_hamiltonian(pt, FLAT) == pytest.approx(1.25, abs=1e-15)


def test_base_hamiltonian_potential_shift():
    metric = StaticMetric(a0=lambda x: 2.0)
    pt = clock_at_rest(1.0)
    assert base_hamiltonian(pt, metric, charge=1.0) == pytest.approx(-1.0, abs=1e-15)


def test_total_hamiltonian_on_surface_equals_base():
    pt = moving_clock(1.0, (0.75, 0.0, 0.0))
    assert total_hamiltonian(pt, FLAT) == pytest.approx(base_hamiltonian(pt, FLAT), abs=1e-15)
    assert total_hamiltonian(pt, FLAT) == pytest.approx(1.25, abs=1e-15)


def test_total_hamiltonian_off_surface():
    pt = ExtendedPhaseSpacePoint(tau=0.0, p_tau=0.0, M=1.0, p_M=0.0,
                                 x=np.zeros(3), p=np.zeros(3))
    assert total_hamiltonian(pt, FLAT) == pytest.approx(0.0, abs=1e-15)


def test_rest_clock_ticks_at_unit_rate():
    rates = hamilton_rhs(clock_at_rest(1.0), FLAT)
    assert rates.tau_dot == pytest.approx(1.0, abs=1e-15)
    assert rates.p_tau_dot == 0.0
    assert rates.M_dot == 0.0
    assert rates.p_M_dot == pytest.approx(0.0, abs=1e-12)
    assert np.abs(rates.x_dot).max() == 0.0
    assert np.abs(rates.p_dot).max() == 0.0


def test_moving_clock_rate_matches_dilation():
    rates = hamilton_rhs(moving_clock(1.0, (0.75, 0.0, 0.0)), FLAT)
    assert rates.tau_dot == pytest.approx(0.8, abs=1e-15)  # 1/gamma at v = 0.6c
    assert rates.x_dot[0] == pytest.approx(0.6, abs=1e-15)
    assert rates.p_M_dot == pytest.approx(0.0, abs=1e-12)


def test_rhs_matches_finite_difference_gradient_of_h():
    rng = np.random.default_rng(11)
    metric = uniform_lapse_metric(0.05)
    for _ in range(5):
        z = rng.uniform(-0.5, 0.5, size=10)
        z[2] += 2.0
        pt = ExtendedPhaseSpacePoint.from_vector(z)
        rates = hamilton_rhs(pt, metric, charge=0.3).as_vector()
        h = 1e-6
        pairs = ((0, 1), (2, 3), (4, 7), (5, 8), (6, 9))
        for q_idx, p_idx in pairs:
            for idx, sign, slot in ((p_idx, 1.0, q_idx), (q_idx, -1.0, p_idx)):
                zp = z.copy(); zp[idx] += h
                zm = z.copy(); zm[idx] -= h
                fd = (total_hamiltonian(ExtendedPhaseSpacePoint.from_vector(zp), metric, 0.3)
                      - total_hamiltonian(ExtendedPhaseSpacePoint.from_vector(zm), metric, 0.3)
                      ) / (2.0 * h) * sign
                assert rates[slot] == pytest.approx(fd, abs=5e-8)


def test_integrate_requires_on_surface_data():
    pt = ExtendedPhaseSpacePoint(tau=0.0, p_tau=0.5, M=1.0, p_M=0.0,
                                 x=np.zeros(3), p=np.zeros(3))
    with pytest.raises(ValueError, match="constraint surface"):
        integrate(pt, FLAT, 0.0, 1.0, 0.1)


def test_flat_rest_clock_tracks_coordinate_time():
    traj = integrate(clock_at_rest(1.0), FLAT, 0.0, 10.0, 1e-2)
    assert traj.tau[-1] == pytest.approx(10.0, abs=1e-10)


def test_flat_v06_time_dilation():
    traj = integrate(moving_clock(1.0, (0.75, 0.0, 0.0)), FLAT, 0.0, 10.0, 1e-3)
    assert traj.tau[-1] == pytest.approx(8.0, abs=1e-9)
    assert traj.x[-1, 0] == pytest.approx(6.0, abs=1e-9)
    assert proper_time_residual(traj, FLAT) < 1e-8


def test_held_clock_redshift_rate():
    g_acc, q = 0.05, 2.0
    metric = uniform_lapse_metric(g_acc)
    t_end = 10.0
    high = integrate(clock_at_rest(1.0, x=(q, 0.0, 0.0)), metric, 0.0, t_end, 1e-3, hold_x=True)
    low = integrate(clock_at_rest(1.0), metric, 0.0, t_end, 1e-3, hold_x=True)
    rate_diff = (high.tau[-1] - low.tau[-1]) / t_end
    assert rate_diff == pytest.approx(g_acc * q, rel=1e-8)
    assert proper_time_residual(high, metric) < 1e-8


def test_constraints_and_conservation_along_trajectories():
    cases = [
        (FLAT, 0.0, moving_clock(1.0, (0.75, 0.0, 0.0))),
        (uniform_lapse_metric(0.1), 0.0, clock_at_rest(1.0)),
        (flat_metric(a0_slope=0.02), 0.5, clock_at_rest(1.0)),
    ]
    for metric, charge, pt0 in cases:
        traj = integrate(pt0, metric, charge, 5.0, 1e-3)
        phi1, phi2 = constraint_drift(traj)
        h_drift, m_drift = conservation_drift(traj, metric, charge)
        assert max(phi1, phi2) <= 1e-9
        assert h_drift <= 1e-9
        assert m_drift <= 1e-9


def test_geodesic_residual_flat_free_particle():
    traj = integrate(moving_clock(1.0, (0.75, 0.0, 0.0)), FLAT, 0.0, 5.0, 1e-3)
    assert geodesic_lorentz_residual(traj, FLAT) < 1e-6


def test_constant_force_matches_hyperbolic_motion():
    charge, slope = 0.5, 0.02
    metric = flat_metric(a0_slope=slope)
    force = charge * slope
    traj = integrate(clock_at_rest(1.0), metric, charge, 10.0, 1e-3)
    x_exp, tau_exp = hyperbolic_motion(1.0, force, 10.0)
    assert traj.x[-1, 0] == pytest.approx(x_exp, abs=1e-9)
    assert traj.tau[-1] == pytest.approx(tau_exp, abs=1e-9)
    assert geodesic_lorentz_residual(traj, metric, charge) < 1e-5


def test_weak_field_fall_newtonian_limit():
    g_acc = 1e-3
    metric = uniform_lapse_metric(g_acc)
    traj = integrate(clock_at_rest(1.0), metric, 0.0, 4.0, 1e-3)
    # slow fall: x ~ -g t^2 / 2 with O(v^2) corrections
    assert traj.x[-1, 0] == pytest.approx(-0.5 * g_acc * 16.0, rel=1e-4)
    assert geodesic_lorentz_residual(traj, metric) < 1e-5
    assert proper_time_residual(traj, metric) < 1e-8


def test_isotropic_weak_field_residuals():
    metric = isotropic_weak_field_metric(
        lambda x: 1e-3 * x[0], lambda x: np.array([1e-3, 0.0, 0.0]))
    traj = integrate(moving_clock(1.0, (0.1, 0.05, 0.0)), metric, 0.0, 5.0, 1e-3)
    assert proper_time_residual(traj, metric) < 1e-8
    assert geodesic_lorentz_residual(traj, metric) < 1e-5


def test_constraint_pair_values():
    pt = ExtendedPhaseSpacePoint(tau=1.0, p_tau=2.0, M=5.0, p_M=0.25,
                                 x=np.zeros(3), p=np.zeros(3))
    pair = constraints(pt)
    assert pair.phi1 == 3.0
    assert pair.phi2 == 0.25


def test_prepared_points_require_positive_rest_energy():
    with pytest.raises(ValueError):
        clock_at_rest(-1.0)
    with pytest.raises(ValueError):
        moving_clock(0.0, (0.1, 0.0, 0.0))
