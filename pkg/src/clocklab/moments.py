"""Proper-time statistics of evolved clock states.

The reading of the clock after coordinate time t is governed exactly by
tau(t) = D t + tau with D the dilation-rate observable, so its variance is
the quadratic

    var_tau(t) = quad t^2 + lin t + const,
    quad  = <D^2> - <D>^2,
    lin   = <[D, tau]_+> - 2 <D> <tau>,
    const = <tau^2> - <tau>^2.

``tau_moments_simulated`` measures the left side by evolving the state and
``variance_law_predict`` computes the coefficients at t = 0; agreement of
the two independent routes is one of the main self-checks of this module.
The sharp-energy approximation replaces D by E / <H>; its quality is
reported, not assumed.  For sharply peaked states the variance growth obeys
the clock bound var_tau(t) >= hbar t / <H>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import (
    dilation_multiplier,
    energy_multiplier,
    evolve,
    tau_statistics,
)
from .states import MomentumSpaceState

DISCRIMINANT_TOL = 1e-8
SLOW_CLOCK_MOMENTUM_FRACTION = 0.01


@dataclass(frozen=True)
class TauMoments:
    t: float
    mean_tau: float
    var_tau: float

    def __post_init__(self) -> None:
        if self.var_tau < -1e-12:
            raise ValueError("variance must be nonnegative")


@dataclass(frozen=True)
class VarianceLawCoefficients:
    quad: float
    lin: float
    const: float

    def __post_init__(self) -> None:
        if self.quad < -1e-12 or self.const < -1e-12:
            raise ValueError("quad and const must be nonnegative")
        if self.lin**2 > 4.0 * max(self.quad, 0.0) * max(self.const, 0.0) + DISCRIMINANT_TOL:
            raise ValueError("cross coefficient violates the Cauchy-Schwarz bound")

    def predict(self, t: float) -> float:
        return self.quad * t * t + self.lin * t + self.const


@dataclass(frozen=True)
class PeakedApproximationReport:
    exact_quad: float
    approx_quad: float
    exact_lin: float
    approx_lin: float
    sharpness: float
    energy_scale: float


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    satisfied: bool
    margin: float
    rhs_rest_energy: float
    slow_clock: bool
    sharpness: float


@dataclass(frozen=True)
class UncertaintyProduct:
    d_tau: float
    d_e: float
    d_m: float
    product: float
    lower: float


def _weighted(state: MomentumSpaceState, mult: np.ndarray) -> float:
    rho = np.abs(state.values) ** 2
    return float((mult * rho).sum() * state.cell_measure())


def tau_moments_simulated(state: MomentumSpaceState, t: float) -> TauMoments:
    """Evolve to coordinate time t, then measure the clock reading."""
    mean, second, _ = tau_statistics(evolve(state, t))
    return TauMoments(t=t, mean_tau=mean, var_tau=second - mean * mean)


def variance_law_predict(state: MomentumSpaceState) -> VarianceLawCoefficients:
    """Coefficients of the exact quadratic variance growth, from t = 0 data."""
    d = dilation_multiplier(state)
    d_mean = _weighted(state, d)
    d2_mean = _weighted(state, d * d)
    tau_mean, tau_sq, tpsi = tau_statistics(state)
    anti = 2.0 * float((np.conj(d * state.values) * tpsi).sum().real * state.cell_measure())
    return VarianceLawCoefficients(
        quad=d2_mean - d_mean**2,
        lin=anti - 2.0 * d_mean * tau_mean,
        const=tau_sq - tau_mean**2,
    )


def energy_sharpness(state: MomentumSpaceState) -> tuple[float, float]:
    """(<H>, dH/<H>) for the total-energy multiplier."""
    h = energy_multiplier(state)
    h_mean = _weighted(state, h)
    h_var = _weighted(state, h * h) - h_mean**2
    if h_mean <= 0.0:
        raise ValueError("total energy expectation must be positive")
    return h_mean, math.sqrt(max(h_var, 0.0)) / h_mean


def peaked_approximation_report(state: MomentumSpaceState) -> PeakedApproximationReport:
    """Exact variance-growth coefficients next to their sharp-energy
    estimates quad ~ (dE)^2/EE^2 and lin ~ (<[E,tau]_+> - 2<E><tau>)/EE,
    with EE = <H>.  The sharpness dH/<H> governs how far to trust them."""
    coeffs = variance_law_predict(state)
    e_scale, sharp = energy_sharpness(state)
    E = state.e_grid.nodes[:, None]
    e_mean = _weighted(state, np.broadcast_to(E, state.values.shape))
    e2_mean = _weighted(state, np.broadcast_to(E * E, state.values.shape))
    tau_mean, _, tpsi = tau_statistics(state)
    anti_e = 2.0 * float((np.conj(E * state.values) * tpsi).sum().real * state.cell_measure())
    return PeakedApproximationReport(
        exact_quad=coeffs.quad,
        approx_quad=(e2_mean - e_mean**2) / e_scale**2,
        exact_lin=coeffs.lin,
        approx_lin=(anti_e - 2.0 * e_mean * tau_mean) / e_scale,
        sharpness=sharp,
        energy_scale=e_scale,
    )


def salecker_wigner_check(state: MomentumSpaceState, t: float) -> BoundCheck:
    """Compare the simulated variance of the reading at time t against the
    clock bound hbar t / <H>; for slow clocks the bound is also reported in
    its rest-energy form hbar t / <E>."""
    if t <= 0.0:
        raise ValueError("the bound applies for t > 0")
    e_scale, sharp = energy_sharpness(state)
    lhs = tau_moments_simulated(state, t).var_tau
    hbar = state.units.hbar
    rhs = hbar * t / e_scale
    E = state.e_grid.nodes[:, None]
    P = state.p_grid.nodes[None, :]
    e_mean = _weighted(state, np.broadcast_to(E, state.values.shape))
    p2c2 = _weighted(state, np.broadcast_to((state.units.c * P) ** 2, state.values.shape))
    slow = p2c2 < SLOW_CLOCK_MOMENTUM_FRACTION * e_mean**2
    rhs_rest = hbar * t / e_mean if e_mean > 0.0 else math.inf
    return BoundCheck(lhs=lhs, rhs=rhs, satisfied=lhs >= rhs, margin=lhs - rhs,
                      rhs_rest_energy=rhs_rest, slow_clock=bool(slow), sharpness=sharp)


def uncertainty_product(state: MomentumSpaceState) -> UncertaintyProduct:
    """Spread product d_tau * d_E against its floor hbar/2."""
    tau_mean, tau_sq, _ = tau_statistics(state)
    d_tau = math.sqrt(max(tau_sq - tau_mean**2, 0.0))
    E = state.e_grid.nodes[:, None]
    e_mean = _weighted(state, np.broadcast_to(E, state.values.shape))
    e2_mean = _weighted(state, np.broadcast_to(E * E, state.values.shape))
    d_e = math.sqrt(max(e2_mean - e_mean**2, 0.0))
    c = state.units.c
    return UncertaintyProduct(d_tau=d_tau, d_e=d_e, d_m=d_e / c**2,
                              product=d_tau * d_e, lower=0.5 * state.units.hbar)
