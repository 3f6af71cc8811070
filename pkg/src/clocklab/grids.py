"""Uniform grids, complex grid fields, quadrature and spectral derivatives.

Grids are periodic-style (right endpoint excluded) with power-of-two node
counts so the discrete Fourier transform applies directly.  Spectral
differentiation is exact, up to rounding, for trigonometric polynomials
below the Nyquist frequency; on smooth data that has decayed at the grid
boundary it converges faster than any power of the step.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class NumericalHealthWarning(UserWarning):
    """Raised as a warning when a field is not numerically band-limited."""


BOUNDARY_HEALTH_LIMIT = 1e-10


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class UniformGrid:
    """n evenly spaced nodes lo + k*step, k = 0..n-1, with step = (hi-lo)/n."""

    lo: float
    hi: float
    n: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.lo) or not np.isfinite(self.hi) or self.hi <= self.lo:
            raise ValueError("grid needs finite lo < hi")
        if self.n < 8 or not _is_power_of_two(self.n):
            raise ValueError("grid size must be a power of two, at least 8")

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / self.n

    @property
    def nodes(self) -> np.ndarray:
        return self.lo + self.step * np.arange(self.n)


@dataclass(frozen=True, eq=False)
class ComplexField1D:
    grid: UniformGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise ValueError("value array does not match grid size")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class ComplexField2D:
    """Row-major field: values[i, j] lives at (grids[0].nodes[i], grids[1].nodes[j])."""

    grids: tuple[UniformGrid, UniformGrid]
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grids[0].n, self.grids[1].n):
            raise ValueError("value array does not match grid sizes")
        object.__setattr__(self, "values", v)


Field = ComplexField1D | ComplexField2D


def _steps_product(fld: Field) -> float:
    if isinstance(fld, ComplexField1D):
        return fld.grid.step
    return fld.grids[0].step * fld.grids[1].step


def trapezoid_norm_squared(fld: Field) -> float:
    """Grid quadrature of |psi|^2 (rectangle rule; identical to the trapezoid
    rule on periodic data that has decayed at the boundary)."""
    v = fld.values
    return float(np.vdot(v, v).real * _steps_product(fld))


def boundary_amplitude_ratio(fld: Field) -> float:
    """max |value| on the grid boundary divided by max |value| overall.

    A small ratio certifies the field is numerically band-limited, which the
    spectral derivative needs for its accuracy claims.
    """
    mag = np.abs(fld.values)
    peak = mag.max()
    if peak == 0.0:
        return 0.0
    if isinstance(fld, ComplexField1D):
        edge = max(mag[0], mag[-1])
    else:
        edge = max(mag[0, :].max(), mag[-1, :].max(), mag[:, 0].max(), mag[:, -1].max())
    return float(edge / peak)


def wavenumbers(grid: UniformGrid) -> np.ndarray:
    """DFT angular wavenumbers for the grid, with the Nyquist bin zeroed
    (the derivative of the sampled Nyquist mode is not representable)."""
    k = 2.0 * np.pi * np.fft.fftfreq(grid.n, d=grid.step)
    k[grid.n // 2] = 0.0
    return k


def spectral_derivative_array(values: np.ndarray, grid: UniformGrid, axis: int = 0) -> np.ndarray:
    if values.shape[axis] != grid.n:
        raise ValueError("axis length does not match the supplied grid")
    k = wavenumbers(grid)
    shape = [1] * values.ndim
    shape[axis] = grid.n
    spec = np.fft.fft(values, axis=axis)
    spec *= (1j * k).reshape(shape)
    return np.fft.ifft(spec, axis=axis)


def spectral_derivative(fld: Field, axis_grid: UniformGrid | None = None, axis: int = 0) -> Field:
    """DFT-based derivative of a field along one axis.

    Parameters
    ----------
    fld : ComplexField1D or ComplexField2D
    axis_grid : optional cross-check; must match the grid of ``axis``.
    axis : which axis of a 2D field to differentiate (ignored for 1D).
    """
    grid = fld.grid if isinstance(fld, ComplexField1D) else fld.grids[axis]
    if axis_grid is not None and axis_grid != grid:
        raise ValueError("axis_grid does not match the field grid on that axis")
    ratio = boundary_amplitude_ratio(fld)
    if ratio > BOUNDARY_HEALTH_LIMIT:
        warnings.warn(
            f"field boundary amplitude ratio {ratio:.2e} exceeds "
            f"{BOUNDARY_HEALTH_LIMIT:.0e}; spectral derivative may alias",
            NumericalHealthWarning,
            stacklevel=2,
        )
    if isinstance(fld, ComplexField1D):
        return ComplexField1D(grid, spectral_derivative_array(fld.values, grid, axis=0))
    return ComplexField2D(fld.grids, spectral_derivative_array(fld.values, grid, axis=axis))
