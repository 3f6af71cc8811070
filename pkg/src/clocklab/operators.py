"""Operators on momentum-space clock states.

E and p act by multiplication; the total-energy generator is the diagonal
multiplier sqrt(E^2 + c^2 p^2) so time evolution is an exact pointwise
phase.  The proper-time operator is the spectral derivative i*hbar d/dE,
fixed by the canonical commutator [tau, E] = i*hbar.  The dilation-rate
observable D = E / sqrt(E^2 + c^2 p^2) is the operator form of the inverse
Lorentz factor and is singular at the cone tip E = p = 0, so states must
keep clear of it.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .grids import BOUNDARY_HEALTH_LIMIT, ComplexField2D, spectral_derivative_array
from .states import MomentumSpaceState, state_from_values

IMAG_RESIDUE_LIMIT = 1e-8
TIP_CLEARANCE_CELLS = 5.0
TIP_AMPLITUDE_LIMIT = 1e-8


class AliasingError(RuntimeError):
    """Strict-mode escalation of a band-limit health failure."""


class Observable(enum.Enum):
    E = "E"
    P = "P"
    H = "H"
    D = "D"
    TAU = "TAU"
    TAU_SQ = "TAU_SQ"


def _axes(state: MomentumSpaceState) -> tuple[np.ndarray, np.ndarray]:
    return state.e_grid.nodes[:, None], state.p_grid.nodes[None, :]


def energy_multiplier(state: MomentumSpaceState) -> np.ndarray:
    """Total-energy values sqrt(E^2 + c^2 p^2) over the grid."""
    E, P = _axes(state)
    return np.sqrt(E * E + (state.units.c * P) ** 2)


def dilation_multiplier(state: MomentumSpaceState) -> np.ndarray:
    """Dilation-rate values E / sqrt(E^2 + c^2 p^2) over the grid."""
    check_tip_clearance(state)
    E, P = _axes(state)
    denom = np.sqrt(E * E + (state.units.c * P) ** 2)
    return np.divide(E, denom, out=np.zeros_like(denom), where=denom > 0.0)


def check_tip_clearance(state: MomentumSpaceState) -> None:
    """Reject states with support near E = p = 0, where the dilation rate
    is an ill-defined 0/0."""
    eg, pg = state.e_grid, state.p_grid
    re = eg.nodes / (TIP_CLEARANCE_CELLS * eg.step)
    rp = pg.nodes / (TIP_CLEARANCE_CELLS * pg.step)
    near = (re[:, None] ** 2 + rp[None, :] ** 2) < 1.0
    if not near.any():
        return
    mag = np.abs(state.values)
    if mag[near].max() > TIP_AMPLITUDE_LIMIT * mag.max():
        raise ValueError(
            "dilation rate undefined: state support reaches within "
            f"{TIP_CLEARANCE_CELLS:.0f} grid cells of E = p = 0")


def apply_tau(state: MomentumSpaceState, strict: bool = False) -> ComplexField2D:
    """i*hbar times the spectral E-derivative of the state."""
    if strict and state.boundary_ratio() > BOUNDARY_HEALTH_LIMIT:
        raise AliasingError(
            f"state boundary amplitude ratio {state.boundary_ratio():.2e} "
            "is above the band-limit health threshold")
    deriv = spectral_derivative_array(state.values, state.e_grid, axis=0)
    return ComplexField2D(state.psi.grids, 1j * state.units.hbar * deriv)


def evolve(state: MomentumSpaceState, t: float) -> MomentumSpaceState:
    """Unitary evolution by the diagonal phase exp(-i t sqrt(E^2+c^2p^2)/hbar)."""
    if not math.isfinite(t):
        raise ValueError("evolution time must be finite")
    if t == 0.0:
        return state
    phase = np.exp((-1j * t / state.units.hbar) * energy_multiplier(state))
    return state_from_values(state.e_grid, state.p_grid, phase * state.values,
                             state.units, normalize=False)


def _grid_inner(state: MomentumSpaceState, bra: np.ndarray, ket: np.ndarray) -> complex:
    return complex(np.vdot(bra, ket) * state.cell_measure())


def _real_part(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_RESIDUE_LIMIT:
        raise ValueError(
            f"imaginary residue {value.imag:.3e} of {what} exceeds {IMAG_RESIDUE_LIMIT:.0e}")
    return value.real


def _diagonal_expectation(state: MomentumSpaceState, mult: np.ndarray) -> float:
    rho = np.abs(state.values) ** 2
    return float((mult * rho).sum() * state.cell_measure())


def tau_statistics(state: MomentumSpaceState) -> tuple[float, float, np.ndarray]:
    """(<tau>, <tau^2>, tau psi) computed with one spectral derivative."""
    tpsi = apply_tau(state).values
    mean = _real_part(_grid_inner(state, state.values, tpsi), "<tau>")
    second = float(np.vdot(tpsi, tpsi).real * state.cell_measure())
    return mean, second, tpsi


def expectation(state: MomentumSpaceState, observable: Observable | str) -> float:
    obs = Observable(observable) if not isinstance(observable, Observable) else observable
    if obs is Observable.E:
        E, _ = _axes(state)
        return _diagonal_expectation(state, np.broadcast_to(E, state.values.shape))
    if obs is Observable.P:
        _, P = _axes(state)
        return _diagonal_expectation(state, np.broadcast_to(P, state.values.shape))
    if obs is Observable.H:
        return _diagonal_expectation(state, energy_multiplier(state))
    if obs is Observable.D:
        return _diagonal_expectation(state, dilation_multiplier(state))
    if obs is Observable.TAU:
        return tau_statistics(state)[0]
    if obs is Observable.TAU_SQ:
        return tau_statistics(state)[1]
    raise ValueError(f"unknown observable: {observable!r}")


def commutator_residual(state: MomentumSpaceState) -> float:
    """Relative norm of (tau E - E tau - i hbar) applied to the state."""
    E, _ = _axes(state)
    hbar = state.units.hbar

    def tau_of(values: np.ndarray) -> np.ndarray:
        return 1j * hbar * spectral_derivative_array(values, state.e_grid, axis=0)

    resid = tau_of(E * state.values) - E * tau_of(state.values) - 1j * hbar * state.values
    # the state itself has unit norm, so this is already the relative residual
    return float(np.sqrt(np.vdot(resid, resid).real * state.cell_measure()))
