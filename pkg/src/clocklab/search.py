"""Golden-section search and the clock-width optimizer.

The optimizer scans the rest-energy spread sigma_e of a Gaussian clock on a
log axis and minimizes the simulated variance of the reading at a fixed
coordinate time, reporting the minimum next to the clock bound hbar t/<H>.
Each trial state is built on freshly sized grids so long evolutions stay
resolved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .moments import energy_sharpness, tau_moments_simulated
from .states import GaussianClockSpec, gaussian_state
from .units import NATURAL_UNITS, UnitContext

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


class OptimizerBracketError(RuntimeError):
    """The minimum sits at a bracket edge; the search interval is wrong."""


def golden_section_min(fn: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-3, max_iter: int = 200) -> tuple[float, float, int]:
    """Minimize a unimodal function on [lo, hi]; returns (x, fn(x), n_evals)."""
    if hi <= lo:
        raise ValueError("need lo < hi")
    a, b = lo, hi
    h = b - a
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    yc, yd = fn(c), fn(d)
    evals = 2
    for _ in range(max_iter):
        if h <= tol:
            break
        if yc < yd:
            b, d, yd = d, c, yc
            h = b - a
            c = a + _INV_PHI2 * h
            yc = fn(c)
        else:
            a, c, yc = c, d, yd
            h = b - a
            d = a + _INV_PHI * h
            yd = fn(d)
        evals += 1
    x = c if yc < yd else d
    y = min(yc, yd)
    return x, y, evals


@dataclass(frozen=True)
class ClockWidthResult:
    sigma_e_opt: float
    min_var: float
    bound: float
    energy_scale: float
    sharpness: float
    n_evals: int
    trace: tuple[tuple[float, float], ...]


def optimize_clock_width(e0: float, p0: float, sigma_p: float, t: float,
                         units: UnitContext = NATURAL_UNITS,
                         sigma_bounds: tuple[float, float] | None = None,
                         n_e: int = 1024, n_p: int = 256,
                         log_tol: float = 5e-3) -> ClockWidthResult:
    """Minimize the simulated reading variance at time t over sigma_e.

    The default bracket spans a factor of ten either side of the
    sharp-energy estimate sqrt(hbar <H> / (2 t)) of the best width.
    """
    if t <= 0.0:
        raise ValueError("need t > 0")
    if sigma_bounds is None:
        e_scale_guess = math.hypot(e0, units.c * p0)
        center = math.sqrt(units.hbar * e_scale_guess / (2.0 * t))
        sigma_bounds = (center / 10.0, center * 10.0)
    lo, hi = sigma_bounds
    if not (0.0 < lo < hi):
        raise ValueError("sigma bounds must satisfy 0 < lo < hi")

    trace: list[tuple[float, float]] = []

    def var_at(log_sigma: float) -> float:
        sigma_e = math.exp(log_sigma)
        spec = GaussianClockSpec(e0=e0, sigma_e=sigma_e, p0=p0, sigma_p=sigma_p)
        state = gaussian_state(spec, units, t_max=t, n_e=n_e, n_p=n_p)
        var = tau_moments_simulated(state, t).var_tau
        trace.append((sigma_e, var))
        return var

    log_lo, log_hi = math.log(lo), math.log(hi)
    log_opt, min_var, evals = golden_section_min(var_at, log_lo, log_hi, tol=log_tol)
    span = log_hi - log_lo
    if min(log_opt - log_lo, log_hi - log_opt) < 0.02 * span:
        raise OptimizerBracketError(
            f"variance minimum sits at the bracket edge (sigma_e = {math.exp(log_opt):.4g}); "
            "widen sigma_bounds")
    sigma_opt = math.exp(log_opt)
    best = gaussian_state(GaussianClockSpec(e0=e0, sigma_e=sigma_opt, p0=p0, sigma_p=sigma_p),
                          units, t_max=t, n_e=n_e, n_p=n_p)
    e_scale, sharp = energy_sharpness(best)
    return ClockWidthResult(
        sigma_e_opt=sigma_opt,
        min_var=min_var,
        bound=units.hbar * t / e_scale,
        energy_scale=e_scale,
        sharpness=sharp,
        n_evals=evals,
        trace=tuple(trace),
    )
