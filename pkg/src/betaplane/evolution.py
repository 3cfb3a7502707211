"""Time stepping, Picard iteration of the mild formulation, energy bookkeeping.

The state is always the continuum-normalized coefficient array; the linear
part exp(t(Delta + beta L1)) is applied exactly and only the transport term
is discretized in time.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import simpson

from .errors import BlowUpError
from .exponents import ExponentTuple, check_admissible
from .operators import linear_exponent, transport_coefficients
from .spectral import GridSpec, RealField, _forward, _inverse, lebesgue_norm, riesz_symbol

log = logging.getLogger(__name__)

SCHEMES = ("ETDRK4", "ETD-Euler")


@dataclass(frozen=True)
class EvolveConfig:
    beta: float
    dt: float
    t_end: float
    scheme: str = "ETDRK4"
    save_every: int = 1
    dealias: bool = True
    linear_only: bool = False

    def __post_init__(self):
        if not (self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (self.t_end >= self.dt * (1 - 1e-12)):
            raise ValueError(f"t_end={self.t_end} must be at least dt={self.dt}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.save_every < 1:
            raise ValueError("save_every must be >= 1")
        if abs(self.n_steps * self.dt - self.t_end) > 1e-9 * self.t_end:
            raise ValueError(f"t_end={self.t_end} is not an integer multiple of dt={self.dt}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass
class Trajectory:
    grid: GridSpec
    times: list[float]
    snapshots: list[RealField]
    step_times: list[float] = field(default_factory=list)
    dissipation_series: list[float] = field(default_factory=list)
    norm_series: dict[tuple[float, float], list[float]] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.times) != len(self.snapshots):
            raise ValueError("times and snapshots differ in length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("trajectory times must be strictly increasing")
        if any(s.grid != self.grid for s in self.snapshots):
            raise ValueError("snapshot grids differ")

    @property
    def final(self) -> RealField:
        return self.snapshots[-1]

    def at(self, t: float, tol: float = 1e-9) -> RealField:
        i = int(np.argmin(np.abs(np.asarray(self.times) - t)))
        if abs(self.times[i] - t) > tol * max(1.0, abs(t)):
            raise KeyError(f"no snapshot at t={t}")
        return self.snapshots[i]


# -- phi functions -------------------------------------------------------------

_TAYLOR_RADIUS = 1.0
_TAYLOR_TERMS = 24


def phi_functions(z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """phi_1, phi_2, phi_3 of a complex array.

    Closed forms lose ~eps/|z|^k digits near 0, so |z| < 1 goes through
    the power series sum_j z^j / (j + k)!.
    """
    z = np.asarray(z, dtype=np.complex128)
    small = np.abs(z) < _TAYLOR_RADIUS
    out = []
    zs = z[small]
    for k in (1, 2, 3):
        series = np.zeros_like(zs)
        term = np.full_like(zs, 1.0 / math.factorial(k))
        for j in range(_TAYLOR_TERMS):
            series += term
            term = term * zs / (j + k + 1)
        out.append(series)
    phi = [np.empty_like(z) for _ in range(3)]
    zb = z[~small]
    ez = np.exp(zb)
    p1 = (ez - 1) / zb
    p2 = (p1 - 1) / zb
    p3 = (p2 - 0.5) / zb
    for arr, s, b in zip(phi, out, (p1, p2, p3)):
        arr[small] = s
        arr[~small] = b
    return tuple(phi)


class _Stepper:
    def __init__(self, grid: GridSpec, cfg: EvolveConfig):
        self.grid = grid
        self.cfg = cfg
        h = cfg.dt
        L = linear_exponent(grid, cfg.beta)
        z = h * L
        self.E = np.exp(z)
        if cfg.scheme == "ETDRK4":
            self.E2 = np.exp(z / 2)
            p1h, _, _ = phi_functions(z / 2)
            p1, p2, p3 = phi_functions(z)
            self.Q = 0.5 * h * p1h
            self.f1 = h * (p1 - 3 * p2 + 4 * p3)
            self.f2 = h * (2 * p2 - 4 * p3)
            self.f3 = h * (4 * p3 - p2)
        else:
            limit = 2.0 / grid.xi_sq.max()
            if h > limit:
                raise ValueError(f"ETD-Euler stability guard: dt={h} exceeds 2/max|xi|^2={limit:.3e}")
            self.f1 = h * phi_functions(z)[0]

    def N(self, w: np.ndarray) -> np.ndarray:
        if self.cfg.linear_only:
            return np.zeros_like(w)
        return -transport_coefficients(self.grid, w, self.cfg.dealias)

    def step(self, w: np.ndarray) -> np.ndarray:
        if self.cfg.linear_only:
            return self.E * w
        if self.cfg.scheme == "ETD-Euler":
            return self.E * w + self.f1 * self.N(w)
        Nu = self.N(w)
        a = self.E2 * w + self.Q * Nu
        Na = self.N(a)
        b = self.E2 * w + self.Q * Na
        Nb = self.N(b)
        c = self.E2 * a + self.Q * (2 * Nb - Nu)
        Nc = self.N(c)
        return self.E * w + self.f1 * Nu + self.f2 * (Na + Nb) + self.f3 * Nc


def gradient_energy(grid: GridSpec, w: np.ndarray) -> float:
    """||grad omega||_{L^2}^2 from the coefficients."""
    return float(np.sum((grid.xi_sq * np.abs(w) ** 2).ravel()) * grid.dxi**2 / (2 * np.pi) ** 2)


def _record_norms(norms, series, grid, w):
    for s, a in norms:
        g = _inverse(grid, w * riesz_symbol(grid, s).values)
        series[(s, a)].append(lebesgue_norm(RealField(grid, g), a))


def evolve(omega0: RealField, cfg: EvolveConfig, norms: Sequence[tuple[float, float]] = ()) -> Trajectory:
    """Integrate the vorticity equation from ``omega0`` up to ``cfg.t_end``.

    Snapshots are kept every ``cfg.save_every`` steps and always at the final
    time. Raises BlowUpError (carrying the partial trajectory) on NaN/Inf.
    """
    grid = omega0.grid
    stepper = _Stepper(grid, cfg)
    w = _forward(grid, omega0.values)
    nsteps = cfg.n_steps
    norms = [(float(s), float(a)) for s, a in norms]
    traj = Trajectory(grid, [0.0], [omega0], [0.0], [gradient_energy(grid, w)], {k: [] for k in norms})
    _record_norms(norms, traj.norm_series, grid, w)
    for k in range(1, nsteps + 1):
        # overflow is caught below and reported as blow-up
        with np.errstate(over="ignore", invalid="ignore"):
            w = stepper.step(w)
        t = k * cfg.dt
        if not np.all(np.isfinite(w)):
            raise BlowUpError(t, traj)
        traj.step_times.append(t)
        traj.dissipation_series.append(gradient_energy(grid, w))
        if k % cfg.save_every == 0 or k == nsteps:
            traj.times.append(t)
            traj.snapshots.append(RealField(grid, _inverse(grid, w)))
            _record_norms(norms, traj.norm_series, grid, w)
    return traj


# -- energy identity ---------------------------------------------------------------


@dataclass(frozen=True)
class EnergyLedger:
    e0: float
    e_t: float
    dissipated: float
    residual: float
    degenerate: bool = False

    def to_dict(self) -> dict:
        return dict(e0=self.e0, e_t=self.e_t, dissipated=self.dissipated, residual=self.residual,
                    degenerate=self.degenerate)


def energy_check(traj: Trajectory) -> EnergyLedger:
    ts = np.asarray(traj.step_times)
    ds = np.asarray(traj.dissipation_series)
    if len(ds) < 2 or len(ds) != len(ts):
        raise ValueError("trajectory lacks per-step dissipation samples")
    if abs(ts[-1] - traj.times[-1]) > 1e-12 * max(1.0, ts[-1]):
        raise ValueError("dissipation samples do not reach the final snapshot")
    e0 = lebesgue_norm(traj.snapshots[0], 2) ** 2
    et = lebesgue_norm(traj.snapshots[-1], 2) ** 2
    diss = 2.0 * float(simpson(ds, x=ts))
    if e0 == 0:
        return EnergyLedger(0.0, et, diss, 0.0 if et == 0 and diss == 0 else math.inf, True)
    return EnergyLedger(e0, et, diss, abs(et + diss - e0) / e0)


# -- space-time norms ---------------------------------------------------------------


def _time_norm(times: np.ndarray, values: np.ndarray, r: float) -> float:
    if r == math.inf:
        return float(np.max(values, initial=0.0))
    if len(times) < 2:
        return 0.0
    top = float(np.max(values, initial=0.0))
    if top == 0:
        return 0.0
    return top * max(float(simpson((values / top) ** r, x=times)), 0.0) ** (1.0 / r)


def ynorm(traj: Trajectory, s: float, p: float, r: float) -> float:
    """L^r([0, t_end]; W^{s,p}) by composite Simpson over the snapshot times."""
    if not (r >= 1):
        raise ValueError(f"time exponent r must be >= 1, got {r}")
    vals = np.array([_sobolev(f.grid, _forward(f.grid, f.values), s, p) for f in traj.snapshots])
    return _time_norm(np.asarray(traj.times), vals, r)


def _sobolev(grid: GridSpec, w: np.ndarray, s: float, p: float) -> float:
    return lebesgue_norm(RealField(grid, _inverse(grid, w * riesz_symbol(grid, s).values)), p)


# -- Picard iteration ------------------------------------------------------------------


@dataclass
class PicardReport:
    exponents: ExponentTuple
    beta: float
    t_end: float
    n_steps: int
    iterate_count: int = 0
    y1_norms: list[float] = field(default_factory=list)
    y2_norms: list[float] = field(default_factory=list)
    d_distances: list[float] = field(default_factory=list)
    contraction_ratios: list[float] = field(default_factory=list)
    converged: bool = False
    non_contractive: bool = False

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "beta", "t_end", "n_steps", "iterate_count", "y1_norms", "y2_norms",
            "d_distances", "contraction_ratios", "converged", "non_contractive")}
        d["exponents"] = dict(zip(("delta", "p1", "r1", "p2", "r2"), self.exponents.astuple()))
        return d


def metric_weights(beta: float, A: ExponentTuple) -> tuple[float, float]:
    """beta powers weighting the Y1 and Y2 parts of the contraction metric."""
    d, p1, r1, p2, r2 = A.astuple()
    b = abs(beta)
    w1 = b ** (-(1 + d - 2 / p1 - 2 / r1) / 3)
    w2 = b ** (-(2 + d - 2 / p2 - 2 / r2) / 3)
    return w1, w2


def _duhamel(grid: GridSpec, N: np.ndarray, E1, E2, E3, dt: float) -> np.ndarray:
    """int_0^{t_j} T(t_j - tau) N(tau) dtau at every node j.

    Composite Simpson on even node counts, a closing 3/8 panel on odd ones
    and the trapezoid on the very first interval. T over whole panels is
    pulled out exactly, so each node costs O(1) array operations.
    """
    J = N.shape[0] - 1
    D = np.zeros_like(N)
    if J >= 1:
        D[1] = 0.5 * dt * (E1 * N[0] + N[1])
    for j in range(2, J + 1):
        if j % 2 == 0:
            D[j] = E2 * D[j - 2] + (dt / 3) * (E2 * N[j - 2] + 4 * E1 * N[j - 1] + N[j])
        else:
            D[j] = E3 * D[j - 3] + (3 * dt / 8) * (
                E3 * N[j - 3] + 3 * E2 * N[j - 2] + 3 * E1 * N[j - 1] + N[j]
            )
    return D


def picard_solve(
    omega0: RealField,
    beta: float,
    exponents: ExponentTuple,
    t_end: float,
    iterations: int,
    n_steps: int = 1000,
    nonlinear: bool = True,
    dealias: bool = True,
    floor_rtol: float = 1e-11,
    divergence_factor: float = 10.0,
) -> tuple[PicardReport, Trajectory]:
    """Iterate w -> T(t) w0 - int_0^t T(t - tau) div(u w)(tau) dtau on a uniform node grid.

    Returns the report and the last iterate as a trajectory over all nodes.
    Iteration stops early once the step distance falls below ``floor_rtol``
    of the iterate's own metric size, so ratios never measure roundoff.
    """
    if beta == 0:
        raise ValueError("Picard iteration needs beta != 0")
    if iterations < 2:
        raise ValueError("iterations must be >= 2")
    if not check_admissible(exponents).thm1_1:
        raise ValueError(f"exponent tuple {exponents.astuple()} fails the well-posedness conditions")
    grid = omega0.grid
    dt = t_end / n_steps
    times = dt * np.arange(n_steps + 1)
    Lz = linear_exponent(grid, beta)
    E1, E2, E3 = np.exp(dt * Lz), np.exp(2 * dt * Lz), np.exp(3 * dt * Lz)

    w0 = _forward(grid, omega0.values)
    linear = np.exp(times[:, None, None] * Lz[None]) * w0[None]
    w1, w2 = metric_weights(beta, exponents)
    d_, p1, r1, p2, r2 = exponents.astuple()
    riesz1 = riesz_symbol(grid, -1 + d_).values
    riesz2 = riesz_symbol(grid, d_).values

    def ynorms(W: np.ndarray) -> tuple[float, float]:
        n1 = np.array([lebesgue_norm(RealField(grid, _inverse(grid, w * riesz1)), p1) for w in W])
        n2 = np.array([lebesgue_norm(RealField(grid, _inverse(grid, w * riesz2)), p2) for w in W])
        return _time_norm(times, n1, r1), _time_norm(times, n2, r2)

    report = PicardReport(exponents, beta, t_end, n_steps)
    current = linear
    y1, y2 = ynorms(current)
    report.y1_norms.append(y1)
    report.y2_norms.append(y2)
    report.iterate_count = 1
    for _ in range(iterations):
        if nonlinear:
            N = np.stack([transport_coefficients(grid, w, dealias) for w in current])
        else:
            N = np.zeros_like(current)
        nxt = linear - _duhamel(grid, N, E1, E2, E3, dt)
        if not np.all(np.isfinite(nxt)):
            report.non_contractive = True
            log.warning("Picard iterate became non-finite")
            break
        a, b = ynorms(nxt - current)
        dist = w1 * a + w2 * b
        y1, y2 = ynorms(nxt)
        report.y1_norms.append(y1)
        report.y2_norms.append(y2)
        report.d_distances.append(dist)
        report.iterate_count += 1
        current = nxt
        if len(report.d_distances) >= 2:
            prev = report.d_distances[-2]
            ratio = dist / prev if prev > 0 else (0.0 if dist == 0 else math.inf)
            report.contraction_ratios.append(ratio)
            if ratio > divergence_factor:
                report.non_contractive = True
                log.warning("Picard distance grew by %.3g; aborting", ratio)
                break
        if dist <= floor_rtol * (w1 * y1 + w2 * y2):
            report.converged = True
            break
    snaps = [RealField(grid, _inverse(grid, w)) for w in current]
    return report, Trajectory(grid, list(times), snaps)


def linear_trajectory(omega0: RealField, beta: float, times: Sequence[float]) -> Trajectory:
    """Exact T_beta(t) omega0 at the given times (no time stepping)."""
    grid = omega0.grid
    w0 = _forward(grid, omega0.values)
    Lz = linear_exponent(grid, beta)
    snaps = []
    for t in times:
        if t < 0:
            raise ValueError("times must be nonnegative")
        snaps.append(omega0 if t == 0 else RealField(grid, _inverse(grid, np.exp(t * Lz) * w0)))
    return Trajectory(grid, [float(t) for t in times], snaps)
