"""Momentum-space clock states psi(E, p) on a rectangular grid.

E is the rest-energy axis, p a single spatial-momentum axis (the evolution
generator depends only on p^2, so one axis exercises all of the dynamics).
States are unit-normalized under grid quadrature and are expected to be
numerically band-limited: substantial amplitude at the grid boundary breaks
the accuracy of the spectral proper-time operator and is reported.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grids import (
    BOUNDARY_HEALTH_LIMIT,
    ComplexField2D,
    NumericalHealthWarning,
    UniformGrid,
    boundary_amplitude_ratio,
    trapezoid_norm_squared,
)
from .units import NATURAL_UNITS, UnitContext

NORM_TOL = 1e-10
MIN_SIGMA_COVERAGE = 8.0     # window must span at least this many sigma per side
MIN_CELLS_PER_SIGMA = 3.0
DEFAULT_SIGMA_MARGIN = 12.0
MAX_GRID_SIZE = 1 << 15


@dataclass(frozen=True)
class GaussianClockSpec:
    """Product Gaussian in (E, p): center e0 with spread sigma_e, proper-time
    offset tau0 imprinted as the phase exp(-i E tau0 / hbar), momentum center
    p0 with spread sigma_p, and position offset x0 as exp(+i p x0 / hbar)."""

    e0: float
    sigma_e: float
    tau0: float = 0.0
    p0: float = 0.0
    sigma_p: float = 1.0
    x0: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma_e <= 0.0 or self.sigma_p <= 0.0:
            raise ValueError("sigma_e and sigma_p must be positive")


@dataclass(frozen=True, eq=False)
class MomentumSpaceState:
    psi: ComplexField2D
    units: UnitContext

    def __post_init__(self) -> None:
        nrm2 = trapezoid_norm_squared(self.psi)
        if abs(nrm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not unit-normalized: <psi|psi> = {nrm2!r}")
        ratio = boundary_amplitude_ratio(self.psi)
        if ratio > BOUNDARY_HEALTH_LIMIT:
            warnings.warn(
                f"state boundary amplitude ratio {ratio:.2e} exceeds "
                f"{BOUNDARY_HEALTH_LIMIT:.0e}; proper-time statistics may alias",
                NumericalHealthWarning,
                stacklevel=2,
            )

    @property
    def e_grid(self) -> UniformGrid:
        return self.psi.grids[0]

    @property
    def p_grid(self) -> UniformGrid:
        return self.psi.grids[1]

    @property
    def values(self) -> np.ndarray:
        return self.psi.values

    def boundary_ratio(self) -> float:
        return boundary_amplitude_ratio(self.psi)

    def cell_measure(self) -> float:
        return self.e_grid.step * self.p_grid.step


def state_from_values(e_grid: UniformGrid, p_grid: UniformGrid, values: np.ndarray,
                      units: UnitContext = NATURAL_UNITS, normalize: bool = True
                      ) -> MomentumSpaceState:
    v = np.asarray(values, dtype=complex)
    fld = ComplexField2D((e_grid, p_grid), v)
    if normalize:
        nrm2 = trapezoid_norm_squared(fld)
        if nrm2 <= 0.0:
            raise ValueError("cannot normalize a zero field")
        fld = ComplexField2D((e_grid, p_grid), v / math.sqrt(nrm2))
    return MomentumSpaceState(psi=fld, units=units)


def state_from_profiles(e_grid: UniformGrid, p_grid: UniformGrid,
                        e_profile: Callable[[np.ndarray], np.ndarray],
                        p_profile: Callable[[np.ndarray], np.ndarray],
                        units: UnitContext = NATURAL_UNITS) -> MomentumSpaceState:
    """Product state from complex amplitude profiles over each axis."""
    values = np.outer(np.asarray(e_profile(e_grid.nodes), dtype=complex),
                      np.asarray(p_profile(p_grid.nodes), dtype=complex))
    return state_from_values(e_grid, p_grid, values, units)


def _check_axis(name: str, grid: UniformGrid, center: float, sigma: float) -> None:
    left = center - grid.lo
    right = grid.hi - center
    if min(left, right) < MIN_SIGMA_COVERAGE * sigma:
        raise ValueError(
            f"grid too small on the {name} axis: window must extend at least "
            f"{MIN_SIGMA_COVERAGE:.0f} sigma on each side of the center")
    if sigma < MIN_CELLS_PER_SIGMA * grid.step:
        raise ValueError(
            f"grid too coarse on the {name} axis: sigma spans fewer than "
            f"{MIN_CELLS_PER_SIGMA:.0f} cells")


def make_gaussian_state(spec: GaussianClockSpec, e_grid: UniformGrid, p_grid: UniformGrid,
                        units: UnitContext = NATURAL_UNITS) -> MomentumSpaceState:
    """Normalized product Gaussian with the phase offsets of the spec."""
    _check_axis("E", e_grid, spec.e0, spec.sigma_e)
    _check_axis("p", p_grid, spec.p0, spec.sigma_p)
    hbar = units.hbar

    def e_profile(E: np.ndarray) -> np.ndarray:
        return np.exp(-((E - spec.e0) ** 2) / (4.0 * spec.sigma_e**2)
                      - 1j * E * spec.tau0 / hbar)

    def p_profile(p: np.ndarray) -> np.ndarray:
        return np.exp(-((p - spec.p0) ** 2) / (4.0 * spec.sigma_p**2)
                      + 1j * p * spec.x0 / hbar)

    return state_from_profiles(e_grid, p_grid, e_profile, p_profile, units)


def _next_pow2(n: float) -> int:
    return 1 << max(3, math.ceil(math.log2(max(n, 8.0))))


def _dilation_corners(spec: GaussianClockSpec, c: float) -> tuple[float, float]:
    """Rough center and half-range of E/sqrt(E^2 + c^2 p^2) over the state."""
    es = [spec.e0 - 4 * spec.sigma_e, spec.e0, spec.e0 + 4 * spec.sigma_e]
    ps = [spec.p0 - 4 * spec.sigma_p, spec.p0, spec.p0 + 4 * spec.sigma_p]
    vals = []
    for e in es:
        for p in ps:
            denom = math.hypot(e, c * p)
            vals.append(0.0 if denom == 0.0 else e / denom)
    return (max(vals) + min(vals)) / 2.0, (max(vals) - min(vals)) / 2.0


def suggest_grids(spec: GaussianClockSpec, units: UnitContext = NATURAL_UNITS,
                  t_max: float = 0.0, n_e: int = 1024, n_p: int = 256,
                  sigma_margin: float = DEFAULT_SIGMA_MARGIN) -> tuple[UniformGrid, UniformGrid]:
    """Grids sized for a Gaussian spec and a target evolution span.

    The E window covers ``sigma_margin`` sigma each side of e0, and the E
    resolution is raised until the conjugate proper-time window comfortably
    contains the evolved reading tau0 + t*<dilation> plus its spread.
    """
    hbar = units.hbar
    half_e = sigma_margin * spec.sigma_e
    d_center, d_spread = _dilation_corners(spec, units.c)
    dtau0 = hbar / (2.0 * spec.sigma_e)
    tau_reach = (abs(spec.tau0) + abs(t_max) * (abs(d_center) + d_spread)
                 + 10.0 * dtau0 + 2.0)
    de_max = math.pi * hbar / (1.3 * tau_reach)
    n_e_needed = max(n_e, _next_pow2(2.0 * half_e / de_max))
    if n_e_needed > MAX_GRID_SIZE:
        raise ValueError("requested evolution span needs an impractically large E grid")
    e_grid = UniformGrid(spec.e0 - half_e, spec.e0 + half_e, n_e_needed)

    half_p = sigma_margin * spec.sigma_p
    n_p_needed = n_p
    dp = 2.0 * half_p / n_p_needed
    while dp * abs(spec.x0) / hbar > math.pi / 1.3 and n_p_needed < MAX_GRID_SIZE:
        n_p_needed *= 2
        dp = 2.0 * half_p / n_p_needed
    p_grid = UniformGrid(spec.p0 - half_p, spec.p0 + half_p, n_p_needed)
    return e_grid, p_grid


def gaussian_state(spec: GaussianClockSpec, units: UnitContext = NATURAL_UNITS,
                   t_max: float = 0.0, n_e: int = 1024, n_p: int = 256) -> MomentumSpaceState:
    """Convenience wrapper: auto-sized grids plus the Gaussian state."""
    e_grid, p_grid = suggest_grids(spec, units, t_max=t_max, n_e=n_e, n_p=n_p)
    return make_gaussian_state(spec, e_grid, p_grid, units)


def probability_marginals(state: MomentumSpaceState) -> tuple[np.ndarray, np.ndarray,
                                                              np.ndarray, np.ndarray]:
    """(E nodes, |psi|^2 marginal over p, p nodes, marginal over E), each
    marginal normalized to unit quadrature on its own axis; the plottable
    snapshot of a state."""
    rho = np.abs(state.values) ** 2
    e_density = rho.sum(axis=1) * state.p_grid.step
    p_density = rho.sum(axis=0) * state.e_grid.step
    return state.e_grid.nodes, e_density, state.p_grid.nodes, p_density
