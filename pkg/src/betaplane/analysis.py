"""Measurement harness: slope fits, asymptotic deficits, Strichartz and dispersive scans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.integrate import simpson

from .errors import AnalysisPreconditionError
from .exponents import predict_rates, rate_M
from .operators import kernel_K_coefficients, rossby_phase, semigroup_symbol
from .spectral import (
    Field,
    LPBank,
    RealField,
    _inverse,
    lebesgue_norm,
    sobolev_norm,
    to_spectral,
)


@dataclass(frozen=True)
class DecayFit:
    window: tuple[float, float]
    times: np.ndarray = field(repr=False)
    norms: np.ndarray = field(repr=False)
    slope: float
    intercept: float
    r_squared: float
    predicted_early: float | None = None
    predicted_late: float | None = None

    def to_dict(self) -> dict:
        return dict(window=list(self.window), samples=len(self.times), slope=self.slope,
                    intercept=self.intercept, r_squared=self.r_squared,
                    predicted_early=self.predicted_early, predicted_late=self.predicted_late)


def fit_decay(
    times: Sequence[float],
    norms: Sequence[float],
    window: tuple[float, float] | None = None,
    s: float | None = None,
    a: float | None = None,
    beta: float | None = None,
) -> DecayFit:
    """Least-squares line through (log t, log norm) restricted to ``window``."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(norms, dtype=float)
    if window is None:
        window = (float(t.min()), float(t.max()))
    lo, hi = window
    if not lo < hi:
        raise AnalysisPreconditionError(f"empty fit window {window}")
    sel = (t >= lo) & (t <= hi)
    t, y = t[sel], y[sel]
    if len(t) < 8:
        raise AnalysisPreconditionError(f"need >= 8 samples in window, have {len(t)}")
    if np.any(y <= 0) or np.any(t <= 0):
        raise AnalysisPreconditionError("norms and times must be positive inside the window")
    X, Y = np.log(t), np.log(y)
    xm, ym = X.mean(), Y.mean()
    sxx = float(np.sum((X - xm) ** 2))
    slope = float(np.sum((X - xm) * (Y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    ss_res = float(np.sum((Y - intercept - slope * X) ** 2))
    ss_tot = float(np.sum((Y - ym) ** 2))
    r2 = 1.0 if ss_tot <= 1e-30 * len(Y) else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    early = late = None
    if s is not None and a is not None:
        pred = predict_rates(s, a, beta or 0.0)
        early, late = pred.early_exponent, pred.late_exponent
    return DecayFit((float(lo), float(hi)), t, y, slope, intercept, r2, early, late)


def branch_windows(beta: float, t_min: float, t_max: float, margin: float = 5.0) -> dict[str, tuple[float, float] | None]:
    """Fit windows that stay a factor ``margin`` away from the crossover |beta|^{-2/3}."""
    if beta == 0:
        return {"early": (t_min, t_max), "late": None}
    tc = abs(beta) ** (-2 / 3)
    early = (t_min, min(t_max, tc / margin))
    late = (max(t_min, tc * margin), t_max)
    return {
        "early": early if early[0] < early[1] else None,
        "late": late if late[0] < late[1] else None,
    }


class DecayMonitor:
    """Running supremum of M_{s,a}(tau)^-1 ||omega(tau)||_{W^{s,a}}."""

    def __init__(self, s: float, a: float, beta: float):
        self.s, self.a, self.beta = s, a, beta
        self.times: list[float] = []
        self.normalized: list[float] = []
        self.supremum: list[float] = []

    def update(self, t: float, norm: float) -> float:
        if self.times and t <= self.times[-1]:
            raise ValueError("monitor times must increase")
        v = norm / rate_M(self.s, self.a, self.beta, t)
        self.times.append(t)
        self.normalized.append(v)
        self.supremum.append(max(v, self.supremum[-1]) if self.supremum else v)
        return self.supremum[-1]

    @property
    def value(self) -> float:
        return self.supremum[-1] if self.supremum else 0.0


def asymptotic_deficit(omega_t: Field, mass: float, beta: float, t: float, s: float, a: float) -> float:
    """M_{s,a}(t)^-1 ||omega_t - mass K_{beta,t}||_{W^{s,a}}."""
    if not (t > 0):
        raise AnalysisPreconditionError(f"deficit needs t > 0, got {t}")
    F = to_spectral(omega_t)
    diff = F.coefficients - mass * kernel_K_coefficients(F.grid, beta, t)
    return sobolev_norm(type(F)(F.grid, diff), s, a) / rate_M(s, a, beta, t)


def is_nonincreasing(values: Sequence[float], rtol: float = 0.0) -> bool:
    return all(b <= a * (1 + rtol) for a, b in zip(values, values[1:]))


class StrichartzResult(NamedTuple):
    value: float
    tail_fraction: float


def strichartz_quadrature(
    f: Field, beta: float, s: float, p: float, r: float, t_grid: Sequence[float]
) -> StrichartzResult:
    """Discrete L^r([0, T]; W^{s,p}) norm of T_beta(t) f by composite Simpson.

    ``tail_fraction`` is the share of the integral carried by [T/10, T].
    """
    if beta == 0:
        raise AnalysisPreconditionError("Strichartz quadrature is vacuous for beta = 0")
    if not 2 <= r < math.inf:
        raise AnalysisPreconditionError(f"r must lie in [2, inf), got {r}")
    t = np.asarray(t_grid, dtype=float)
    if t[0] != 0 or np.any(np.diff(t) <= 0):
        raise AnalysisPreconditionError("t_grid must start at 0 and increase")
    if t[-1] < 10 * abs(beta) ** (-2 / 3):
        raise AnalysisPreconditionError(
            f"t_grid ends at {t[-1]:.4g} < 10 |beta|^(-2/3) = {10 * abs(beta) ** (-2 / 3):.4g}"
        )
    F = to_spectral(f)
    g = F.grid
    vals = np.array([sobolev_norm(type(F)(g, F.coefficients * semigroup_symbol(g, beta, ti).values), s, p)
                     for ti in t])
    integrand = vals**r
    total = float(simpson(integrand, x=t))
    if total <= 0:
        return StrichartzResult(0.0, 0.0)
    tail = t >= t[-1] / 10
    tail_part = float(simpson(integrand[tail], x=t[tail])) if tail.sum() >= 2 else 0.0
    return StrichartzResult(total ** (1 / r), tail_part / total)


@dataclass(frozen=True)
class DispersiveScan:
    ks: tuple[int, ...]
    times: np.ndarray
    ratios: np.ndarray  # shape (len(ks), len(times))

    @property
    def sup(self) -> float:
        return float(self.ratios.max())

    def sup_over(self, t_lo: float, t_hi: float) -> float:
        sel = (self.times >= t_lo) & (self.times <= t_hi)
        return float(self.ratios[:, sel].max())


def dispersive_scan(f: Field, beta: float, k_set: Sequence[int], t_grid: Sequence[float], bank: LPBank) -> DispersiveScan:
    """ratio(k, t) = ||e^{t beta L1} P_k f||_inf |beta t| / (2^{3k} ||P_k f||_{L^1})."""
    if beta == 0:
        raise AnalysisPreconditionError("dispersive scan needs beta != 0")
    t = np.asarray(t_grid, dtype=float)
    if np.any(t <= 0):
        raise AnalysisPreconditionError("scan times must be positive")
    F = to_spectral(f)
    g = F.grid
    phase = rossby_phase(g)
    out = np.empty((len(k_set), len(t)))
    for i, k in enumerate(k_set):
        block = F.coefficients * bank.symbol_values(k)
        l1 = lebesgue_norm(RealField(g, _inverse(g, block)), 1)
        if l1 == 0:
            raise AnalysisPreconditionError(f"block k={k} vanishes")
        for j, tj in enumerate(t):
            bt = beta * tj
            sup = lebesgue_norm(RealField(g, _inverse(g, block * np.exp(1j * bt * phase))), math.inf)
            out[i, j] = sup * abs(bt) / (2.0 ** (3 * k) * l1)
    return DispersiveScan(tuple(k_set), t, out)


class BoundaryMass(NamedTuple):
    fraction: float
    degenerate: bool


def boundary_mass(f: RealField) -> BoundaryMass:
    """Share of int |f| sitting in the outer 10% frame of the box."""
    x1, x2 = f.grid.mesh
    edge = 0.4 * f.grid.box_length
    frame = (np.abs(x1) >= edge) | (np.abs(x2) >= edge)
    a = np.abs(f.values)
    total = float(a.sum())
    if total == 0:
        return BoundaryMass(0.0, True)
    return BoundaryMass(float(a[frame].sum()) / total, False)
