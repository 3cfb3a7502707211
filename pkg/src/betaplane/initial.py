"""Named families of initial vorticity."""

from __future__ import annotations

import numpy as np

from .spectral import GridSpec, RealField, _forward, _inverse


def gaussian(grid: GridSpec, mass: float = 1.0, width: float = 2.0, center=(0.0, 0.0)) -> RealField:
    """mass / (pi w^2) exp(-|x - c|^2 / w^2); width 2 gives the heat kernel at t = 1."""
    x1, x2 = grid.mesh
    r2 = (x1 - center[0]) ** 2 + (x2 - center[1]) ** 2
    return RealField(grid, mass / (np.pi * width**2) * np.exp(-r2 / width**2))


def dipole(grid: GridSpec, amplitude: float = 1.0, width: float = 1.0, center=(0.0, 0.0)) -> RealField:
    """Mean-zero pair: amplitude * (x2 - c2)/w * exp(-|x - c|^2 / w^2)."""
    x1, x2 = grid.mesh
    y1, y2 = x1 - center[0], x2 - center[1]
    return RealField(grid, amplitude * (y2 / width) * np.exp(-(y1**2 + y2**2) / width**2))


def ring(grid: GridSpec, amplitude: float = 1.0, radius: float = 3.0, width: float = 1.0) -> RealField:
    x1, x2 = grid.mesh
    r = np.hypot(x1, x2)
    return RealField(grid, amplitude * np.exp(-((r - radius) ** 2) / width**2))


def mean_zero_radial(grid: GridSpec, width: float = 1.0, amplitude: float = 1.0) -> RealField:
    """Difference of two Gaussians of equal mass: radial with no net circulation."""
    x1, x2 = grid.mesh
    r2 = x1**2 + x2**2
    a, b = width**2, 2 * width**2
    vals = np.exp(-r2 / a) / (np.pi * a) - np.exp(-r2 / b) / (np.pi * b)
    return RealField(grid, amplitude * vals / np.abs(vals).max())


def random_band(grid: GridSpec, seed: int = 0, band=(1.0, 4.0), amplitude: float = 1.0) -> RealField:
    """Random field with lattice wavenumber magnitudes in ``band``; mean zero.

    ``amplitude`` is the resulting maximum of |omega|.
    """
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((grid.n, grid.n))
    c = _forward(grid, noise)
    kmag = grid.xi_abs / grid.dxi
    c = c * ((kmag >= band[0]) & (kmag <= band[1]))
    c[0, 0] = 0.0
    vals = _inverse(grid, c)
    top = np.abs(vals).max()
    if top == 0:
        raise ValueError(f"band {band} contains no lattice modes")
    return RealField(grid, amplitude * vals / top)


def zero(grid: GridSpec) -> RealField:
    return RealField.zeros(grid)


FAMILIES = {
    "gaussian": gaussian,
    "dipole": dipole,
    "ring": ring,
    "radial0": mean_zero_radial,
    "random": random_band,
    "zero": zero,
}
