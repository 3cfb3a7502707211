"""Discrete Fourier infrastructure on a periodic box standing in for R^2.

Physical samples live at ``x = (L/n) j - L/2`` (row-major, axis 0 is x1),
so the origin is a grid point. Spectral coefficients are stored in FFT
index order and normalized to approximate the continuum transform
``F f(xi) = int f(x) exp(-i x.xi) dx``; a sampled Gaussian therefore has
real, positive coefficients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np
import scipy.fft as sfft

_FFT_WORKERS = 1


def set_fft_workers(workers: int) -> None:
    """Set the thread count used by every transform (results stay bitwise stable)."""
    global _FFT_WORKERS
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    _FFT_WORKERS = int(workers)


def fft_workers() -> int:
    return _FFT_WORKERS


@dataclass(frozen=True)
class GridSpec:
    """Square periodic box of side ``box_length`` with ``n`` points per side."""

    n: int
    box_length: float

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
            raise ValueError(f"n must be a power of two >= 8, got {n!r}")
        if not (self.box_length > 0 and math.isfinite(self.box_length)):
            raise ValueError(f"box_length must be positive, got {self.box_length!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "box_length", float(self.box_length))

    @property
    def spacing(self) -> float:
        return self.box_length / self.n

    @property
    def cell_area(self) -> float:
        return self.spacing**2

    @property
    def dxi(self) -> float:
        """Lattice spacing in frequency, 2 pi / L."""
        return 2 * np.pi / self.box_length

    @cached_property
    def coords(self) -> np.ndarray:
        return self.spacing * np.arange(self.n) - self.box_length / 2

    @cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(self.coords, self.coords, indexing="ij"))

    @cached_property
    def index(self) -> np.ndarray:
        """Integer wavenumbers in FFT order, covering [-n/2, n/2)."""
        return np.fft.fftfreq(self.n, 1.0 / self.n).astype(np.int64)

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        k = self.dxi * self.index
        return tuple(np.meshgrid(k, k, indexing="ij"))

    @cached_property
    def odd_wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        """Wavenumbers with the Nyquist line zeroed, for symbols odd in xi.

        An odd symbol cannot be Hermitian on the unpaired Nyquist line, so
        derivatives and L1 treat that line as frequency zero in the odd slot.
        """
        xi1, xi2 = self.wavenumbers
        nyq = self.index == -(self.n // 2)
        xi1 = xi1.copy()
        xi2 = xi2.copy()
        xi1[nyq, :] = 0.0
        xi2[:, nyq] = 0.0
        return xi1, xi2

    @cached_property
    def xi_sq(self) -> np.ndarray:
        xi1, xi2 = self.wavenumbers
        return xi1**2 + xi2**2

    @cached_property
    def xi_abs(self) -> np.ndarray:
        return np.sqrt(self.xi_sq)

    @cached_property
    def inv_xi_sq(self) -> np.ndarray:
        """1/|xi|^2 with the zero mode stored as 0."""
        out = np.zeros_like(self.xi_sq)
        nz = self.xi_sq > 0
        out[nz] = 1.0 / self.xi_sq[nz]
        return out

    @cached_property
    def _shift_phase(self) -> np.ndarray:
        # exp(i xi L/2) = (-1)^k accounts for the box being centred on 0.
        s = np.where(self.index % 2 == 0, 1.0, -1.0)
        return np.outer(s, s)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """True for modes kept by the 2/3 rule, max(|k1|, |k2|) <= n/3."""
        k = np.abs(self.index)
        keep = k <= self.n / 3
        return np.outer(keep, keep)

    def scaled(self, factor: float) -> "GridSpec":
        return GridSpec(self.n, self.box_length * factor)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class RealField:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"expected shape {(self.grid.n,) * 2}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", _frozen(v))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "RealField":
        return cls(grid, np.zeros((grid.n, grid.n)))

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "RealField":
        x1, x2 = grid.mesh
        return cls(grid, np.broadcast_to(fn(x1, x2), (grid.n, grid.n)))

    def integral(self) -> float:
        return float(self.values.sum() * self.grid.cell_area)

    def mean(self) -> float:
        return float(self.values.mean())

    def _check(self, other):
        if isinstance(other, RealField) and other.grid != self.grid:
            raise ValueError("grid mismatch")

    def __add__(self, other):
        self._check(other)
        return RealField(self.grid, self.values + getattr(other, "values", other))

    def __sub__(self, other):
        self._check(other)
        return RealField(self.grid, self.values - getattr(other, "values", other))

    def __mul__(self, c):
        return RealField(self.grid, self.values * c)

    __rmul__ = __mul__

    def __neg__(self):
        return RealField(self.grid, -self.values)


@dataclass(frozen=True, eq=False)
class SpectralField:
    grid: GridSpec
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if c.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"expected shape {(self.grid.n,) * 2}, got {c.shape}")
        object.__setattr__(self, "coefficients", _frozen(c))

    @property
    def zero_mode(self) -> complex:
        return complex(self.coefficients[0, 0])

    def _check(self, other):
        if isinstance(other, SpectralField) and other.grid != self.grid:
            raise ValueError("grid mismatch")

    def __add__(self, other):
        self._check(other)
        return SpectralField(self.grid, self.coefficients + getattr(other, "coefficients", other))

    def __sub__(self, other):
        self._check(other)
        return SpectralField(self.grid, self.coefficients - getattr(other, "coefficients", other))

    def __mul__(self, c):
        return SpectralField(self.grid, self.coefficients * c)

    __rmul__ = __mul__


Field = Union[RealField, SpectralField]


@dataclass(frozen=True, eq=False)
class Symbol:
    """Fourier multiplier sampled on the lattice; the zero mode is stored explicitly."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"expected shape {(self.grid.n,) * 2}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("symbol values must be finite (give singular symbols a zero-mode value)")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def zero_mode(self) -> complex:
        return complex(self.values[0, 0])

    @classmethod
    def constant(cls, grid: GridSpec, value: complex = 1.0) -> "Symbol":
        return cls(grid, np.full((grid.n, grid.n), value, dtype=np.complex128))

    def __mul__(self, other: "Symbol") -> "Symbol":
        if other.grid != self.grid:
            raise ValueError("grid mismatch")
        return Symbol(self.grid, self.values * other.values)


# -- transforms -------------------------------------------------------------


def _forward(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    return sfft.fft2(values, workers=_FFT_WORKERS) * (grid._shift_phase * grid.cell_area)


def _inverse(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    out = sfft.ifft2(coeffs * grid._shift_phase, workers=_FFT_WORKERS).real
    out /= grid.cell_area
    return out


def hermitian_defect(coeffs: np.ndarray) -> float:
    """max |c(k) - conj(c(-k))| relative to max |c|."""
    mirrored = np.roll(np.flip(coeffs, axis=(0, 1)), 1, axis=(0, 1))
    scale = np.abs(coeffs).max()
    if scale == 0:
        return 0.0
    return float(np.abs(coeffs - mirrored.conj()).max() / scale)


def forward_transform(f: RealField) -> SpectralField:
    if not isinstance(f, RealField):
        raise TypeError("forward_transform expects a RealField")
    return SpectralField(f.grid, _forward(f.grid, f.values))


def inverse_transform(F: SpectralField, tol: float = 1e-10) -> RealField:
    if not isinstance(F, SpectralField):
        raise TypeError("inverse_transform expects a SpectralField")
    defect = hermitian_defect(F.coefficients)
    if defect > tol:
        raise ValueError(f"coefficients violate Hermitian symmetry (defect {defect:.3e} > {tol:.1e})")
    return RealField(F.grid, _inverse(F.grid, F.coefficients))


def to_spectral(f: Field) -> SpectralField:
    return f if isinstance(f, SpectralField) else forward_transform(f)


def to_real(f: Field) -> RealField:
    return f if isinstance(f, RealField) else RealField(f.grid, _inverse(f.grid, f.coefficients))


def like(template: Field, coeffs: np.ndarray) -> Field:
    """Wrap ``coeffs`` in the same representation as ``template``."""
    if isinstance(template, SpectralField):
        return SpectralField(template.grid, coeffs)
    return RealField(template.grid, _inverse(template.grid, coeffs))


def apply_symbol(F: SpectralField, m: Symbol) -> SpectralField:
    if F.grid != m.grid:
        raise ValueError("grid mismatch between field and symbol")
    return SpectralField(F.grid, F.coefficients * m.values)


def riesz_symbol(grid: GridSpec, s: float) -> Symbol:
    """|xi|^s, with the zero mode stored as 0 for every s."""
    vals = np.zeros((grid.n, grid.n))
    nz = grid.xi_sq > 0
    if s == 0:
        vals[nz] = 1.0
    else:
        vals[nz] = grid.xi_sq[nz] ** (0.5 * s)
    return Symbol(grid, vals)


# -- Littlewood-Paley --------------------------------------------------------

_BUMP_LO, _BUMP_HI = 0.75, 8.0 / 3.0


def bump(rho: np.ndarray) -> np.ndarray:
    """Smooth profile supported on (3/4, 8/3)."""
    rho = np.asarray(rho, dtype=np.float64)
    out = np.zeros_like(rho)
    inside = (rho > _BUMP_LO) & (rho < _BUMP_HI)
    r = rho[inside]
    out[inside] = np.exp(-1.0 / ((r - _BUMP_LO) * (_BUMP_HI - r)))
    return out


def default_dyadic_range(grid: GridSpec) -> tuple[int, int]:
    k_min = math.floor(math.log2(2 * np.pi / grid.box_length)) - 1
    k_max = math.ceil(math.log2(np.pi * grid.n / grid.box_length)) + 1
    return k_min, k_max


@dataclass(frozen=True, eq=False)
class LPBank:
    """Dyadic projections phi(2^-k xi) for k in [k_min, k_max] on one grid."""

    grid: GridSpec
    k_min: int
    k_max: int
    _denominator: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.k_min > self.k_max:
            raise ValueError("k_min must not exceed k_max")
        rho = self.grid.xi_abs
        # sum over all j in Z; only j near log2 rho contribute, and the
        # lattice lives inside [k_min, k_max] padded by a few octaves
        lo, hi = default_dyadic_range(self.grid)
        js = range(min(lo, self.k_min) - 4, max(hi, self.k_max) + 5)
        den = np.zeros_like(rho)
        for j in js:
            den += bump(rho * 2.0**-j)
        object.__setattr__(self, "_denominator", _frozen(den))

    @property
    def ks(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def symbol_values(self, k: int) -> np.ndarray:
        if not self.k_min <= k <= self.k_max:
            raise ValueError(f"dyadic index {k} outside bank range [{self.k_min}, {self.k_max}]")
        num = bump(self.grid.xi_abs * 2.0**-k)
        out = np.zeros_like(num)
        nz = self._denominator > 0
        out[nz] = num[nz] / self._denominator[nz]
        return out

    def symbol(self, k: int) -> Symbol:
        return Symbol(self.grid, self.symbol_values(k))

    def partition_sum(self) -> np.ndarray:
        total = np.zeros((self.grid.n, self.grid.n))
        for k in self.ks:
            total += self.symbol_values(k)
        return total

    def covered(self) -> np.ndarray:
        """Nonzero frequencies whose every contributing block lies inside the range."""
        rho = self.grid.xi_abs
        inside = np.ones(rho.shape, dtype=bool)
        for j in (self.k_min - 1, self.k_max + 1):
            inside &= bump(rho * 2.0**-j) == 0
        lo = _BUMP_LO * 2.0**self.k_min
        hi = _BUMP_HI * 2.0**self.k_max
        return inside & (rho > lo) & (rho < hi)

    def uncovered_fraction(self, F: SpectralField) -> float:
        """Share of nonzero-mode spectral energy the bank does not reach."""
        c = F.coefficients.copy()
        c[0, 0] = 0
        total = float(np.sum(np.abs(c) ** 2))
        if total == 0:
            return 0.0
        rest = c * (1.0 - self.partition_sum())
        return float(np.sum(np.abs(rest) ** 2) / total)


def lp_bank(grid: GridSpec, k_min: int | None = None, k_max: int | None = None) -> LPBank:
    lo, hi = default_dyadic_range(grid)
    return LPBank(grid, lo if k_min is None else k_min, hi if k_max is None else k_max)


def lp_project(f: Field, k: int, bank: LPBank) -> Field:
    F = to_spectral(f)
    if F.grid != bank.grid:
        raise ValueError("grid mismatch between field and bank")
    return like(f, F.coefficients * bank.symbol_values(k))


# -- norms --------------------------------------------------------------------


def _pairwise_sum(a: np.ndarray) -> float:
    # numpy reduces contiguous 1-D float arrays pairwise
    return float(np.sum(np.ascontiguousarray(a).ravel()))


def oversample(f: RealField, factor: int = 2) -> np.ndarray:
    """Band-limited interpolation onto a grid ``factor`` times finer."""
    n = f.grid.n
    m = n * factor
    c = sfft.fft2(f.values, workers=_FFT_WORKERS)
    big = np.zeros((m, m), dtype=np.complex128)
    h = n // 2
    # split the Nyquist lines evenly between +n/2 and -n/2 to stay real
    c = c.copy()
    c[h, :] *= 0.5
    c[:, h] *= 0.5
    idx = np.r_[0 : h + 1, m - h : m]
    src = np.r_[0 : h + 1, h : n]
    big[np.ix_(idx, idx)] = c[np.ix_(src, src)]
    return sfft.ifft2(big, workers=_FFT_WORKERS).real * factor**2


def lebesgue_norm(f: Field, p: float, oversampled: bool = False) -> float:
    """L^p norm with cell quadrature; p = inf is the grid maximum of |f|."""
    if not (p >= 1):
        raise ValueError(f"p must be >= 1, got {p}")
    f = to_real(f)
    if p == np.inf:
        vals = oversample(f) if oversampled else f.values
        return float(np.abs(vals).max())
    a = np.abs(f.values)
    if p == 1:
        return _pairwise_sum(a) * f.grid.cell_area
    if p == 2:
        return math.sqrt(_pairwise_sum(a * a) * f.grid.cell_area)
    # scale first so large p cannot overflow
    top = a.max()
    if top == 0:
        return 0.0
    return float(top * (_pairwise_sum((a / top) ** p) * f.grid.cell_area) ** (1.0 / p))


def plancherel_norm(F: SpectralField) -> float:
    """L^2 norm computed on the frequency side: (2 pi)^-2 sum |F|^2 dxi^2."""
    g = F.grid
    return math.sqrt(_pairwise_sum(np.abs(F.coefficients) ** 2) * g.dxi**2 / (2 * np.pi) ** 2)


def sobolev_norm(f: Field, s: float, a: float, oversampled: bool = False) -> float:
    """Homogeneous W^{s,a} norm, ||(-Delta)^{s/2} f||_{L^a}."""
    if not (a >= 2):
        raise ValueError(f"a must be >= 2, got {a}")
    F = to_spectral(f)
    g = apply_symbol(F, riesz_symbol(F.grid, s))
    return lebesgue_norm(RealField(F.grid, _inverse(F.grid, g.coefficients)), a, oversampled)


def besov_norm(
    f: Field,
    s: float,
    p: float,
    r: float,
    bank: LPBank,
    coverage_threshold: float = 1e-10,
) -> float:
    """l^r over the bank of 2^{sk} ||P_k f||_{L^p}."""
    if not (p >= 1 and r >= 1):
        raise ValueError("besov_norm needs p, r >= 1")
    F = to_spectral(f)
    missed = bank.uncovered_fraction(F)
    if missed > coverage_threshold:
        warnings.warn(
            f"dyadic range [{bank.k_min}, {bank.k_max}] misses {missed:.2e} of the spectral energy",
            RuntimeWarning,
            stacklevel=2,
        )
    terms = np.array(
        [
            2.0 ** (s * k)
            * lebesgue_norm(RealField(F.grid, _inverse(F.grid, F.coefficients * bank.symbol_values(k))), p)
            for k in bank.ks
        ]
    )
    if r == np.inf:
        return float(terms.max(initial=0.0))
    top = terms.max(initial=0.0)
    if top == 0:
        return 0.0
    return float(top * _pairwise_sum((terms / top) ** r) ** (1.0 / r))
