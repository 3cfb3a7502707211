"""Linear propagators, Biot-Savart velocity and the transport nonlinearity."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .spectral import (
    Field,
    GridSpec,
    RealField,
    SpectralField,
    Symbol,
    _forward,
    _inverse,
    like,
    to_spectral,
)


@dataclass(frozen=True)
class SemigroupParams:
    beta: float
    t: float

    def __post_init__(self):
        if not math.isfinite(self.beta):
            raise ValueError("beta must be finite")
        if not (self.t >= 0):
            raise ValueError(f"time must be nonnegative, got {self.t}")


@dataclass(frozen=True, eq=False)
class VelocityPair:
    u1: RealField
    u2: RealField

    def divergence(self) -> np.ndarray:
        g = self.u1.grid
        xi1, xi2 = g.odd_wavenumbers
        return 1j * xi1 * _forward(g, self.u1.values) + 1j * xi2 * _forward(g, self.u2.values)


# -- symbols ------------------------------------------------------------------


def rossby_phase(grid: GridSpec) -> np.ndarray:
    """xi1 / |xi|^2 (odd slot zeroed on the Nyquist line, zero mode 0)."""
    return grid.odd_wavenumbers[0] * grid.inv_xi_sq


def l1_symbol(grid: GridSpec) -> Symbol:
    """Multiplier of L1 = d/dx1 (-Delta)^-1, i xi1/|xi|^2."""
    return Symbol(grid, 1j * rossby_phase(grid))


def heat_symbol(grid: GridSpec, t: float) -> Symbol:
    return Symbol(grid, np.exp(-t * grid.xi_sq))


def rossby_symbol(grid: GridSpec, beta: float, t: float) -> Symbol:
    bt = beta * t
    return Symbol(grid, np.exp(1j * bt * rossby_phase(grid)))


def linear_exponent(grid: GridSpec, beta: float) -> np.ndarray:
    """Symbol of Delta + beta L1."""
    return -grid.xi_sq + 1j * beta * rossby_phase(grid)


def semigroup_symbol(grid: GridSpec, beta: float, t: float) -> Symbol:
    bt = beta * t
    return Symbol(grid, np.exp(-t * grid.xi_sq + 1j * bt * rossby_phase(grid)))


# -- propagators -----------------------------------------------------------------


def heat_propagate(omega: Field, t: float) -> Field:
    if not (t >= 0):
        raise ValueError(f"heat flow needs t >= 0, got {t}")
    F = to_spectral(omega)
    return like(omega, F.coefficients * np.exp(-t * F.grid.xi_sq))


def rossby_propagate(omega: Field, beta: float, t: float) -> Field:
    """Unitary group exp(t beta L1); any real t is allowed."""
    F = to_spectral(omega)
    return like(omega, F.coefficients * rossby_symbol(F.grid, beta, t).values)


def semigroup_propagate(omega: Field, params: SemigroupParams) -> Field:
    F = to_spectral(omega)
    return like(omega, F.coefficients * semigroup_symbol(F.grid, params.beta, params.t).values)


# -- velocity and nonlinearity -----------------------------------------------


def _velocity_coefficients(grid: GridSpec, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    xi1, xi2 = grid.odd_wavenumbers
    inv = grid.inv_xi_sq
    return -1j * xi2 * inv * w, 1j * xi1 * inv * w


def biot_savart(omega: Field) -> VelocityPair:
    """u = grad^perp (-Delta)^-1 omega."""
    F = to_spectral(omega)
    g = F.grid
    c1, c2 = _velocity_coefficients(g, F.coefficients)
    return VelocityPair(RealField(g, _inverse(g, c1)), RealField(g, _inverse(g, c2)))


def transport_coefficients(grid: GridSpec, w: np.ndarray, dealias: bool = True) -> np.ndarray:
    """Spectral coefficients of div(u omega) for the state ``w``."""
    c1, c2 = _velocity_coefficients(grid, w)
    om = _inverse(grid, w)
    u1 = _inverse(grid, c1)
    u2 = _inverse(grid, c2)
    xi1, xi2 = grid.odd_wavenumbers
    out = 1j * xi1 * _forward(grid, u1 * om) + 1j * xi2 * _forward(grid, u2 * om)
    if dealias:
        out *= grid.dealias_mask
    out[0, 0] = 0.0
    return out


def nonlinear_term(omega: Field, dealias: bool = True) -> Field:
    """div(u omega), pseudo-spectral with 2/3-rule truncation of the product."""
    F = to_spectral(omega)
    return like(omega, transport_coefficients(F.grid, F.coefficients, dealias))


# -- kernels --------------------------------------------------------------------


def gauss_kernel(grid: GridSpec, t: float) -> RealField:
    """Heat kernel (4 pi t)^-1 exp(-|x|^2 / 4t) sampled on the grid."""
    if not (t > 0):
        raise ValueError(f"Gauss kernel needs t > 0, got {t}")
    if 4 * math.sqrt(t) > grid.box_length / 4:
        warnings.warn(
            f"Gauss kernel at t={t} does not fit in a box of side {grid.box_length}",
            RuntimeWarning,
            stacklevel=2,
        )
    x1, x2 = grid.mesh
    return RealField(grid, np.exp(-(x1**2 + x2**2) / (4 * t)) / (4 * np.pi * t))


def kernel_K_coefficients(grid: GridSpec, beta: float, t: float) -> np.ndarray:
    if not (t > 0):
        raise ValueError(f"kernel needs t > 0, got {t}")
    return semigroup_symbol(grid, beta, t).values


def kernel_K_self_similar_coefficients(grid: GridSpec, beta: float, t: float) -> np.ndarray:
    """Coefficients of t^-1 (exp(t^{3/2} beta L1) G_1)(t^{-1/2} x).

    Evaluated through the rescaled frequency eta = t^{1/2} xi.
    """
    if not (t > 0):
        raise ValueError(f"kernel needs t > 0, got {t}")
    rt = math.sqrt(t)
    eta1 = rt * grid.odd_wavenumbers[0]
    eta_sq = t * grid.xi_sq
    inv = np.zeros_like(eta_sq)
    nz = eta_sq > 0
    inv[nz] = 1.0 / eta_sq[nz]
    return np.exp(-eta_sq + 1j * (t * rt * beta) * eta1 * inv)


def kernel_K(grid: GridSpec, beta: float, t: float) -> RealField:
    """Integral kernel of T_beta(t), built on the frequency lattice."""
    return RealField(grid, _inverse(grid, kernel_K_coefficients(grid, beta, t)))


def inner_product(f: RealField, g: RealField) -> float:
    return float(np.sum((f.values * g.values).ravel()) * f.grid.cell_area)


def apply_l1(omega: Field) -> Field:
    F = to_spectral(omega)
    return like(omega, F.coefficients * l1_symbol(F.grid).values)


__all__ = [
    "SemigroupParams",
    "VelocityPair",
    "apply_l1",
    "biot_savart",
    "gauss_kernel",
    "heat_propagate",
    "heat_symbol",
    "inner_product",
    "kernel_K",
    "kernel_K_coefficients",
    "kernel_K_self_similar_coefficients",
    "l1_symbol",
    "linear_exponent",
    "nonlinear_term",
    "rossby_propagate",
    "rossby_symbol",
    "semigroup_propagate",
    "semigroup_symbol",
    "transport_coefficients",
]
