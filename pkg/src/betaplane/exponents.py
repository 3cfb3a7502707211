"""Exponent admissibility and the reference decay-rate functions."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .spectral import Field, sobolev_norm, to_spectral

# boundary tolerance: non-strict inequalities accept slack >= -EPS,
# strict ones demand slack >= EPS
EPS = 1e-12


@dataclass(frozen=True)
class ExponentTuple:
    delta: float
    p1: float
    r1: float
    p2: float
    r2: float

    def __post_init__(self):
        d, p1, r1, p2, r2 = self.astuple()
        problems = []
        if not 0 <= d <= 0.2:
            problems.append(f"delta={d} not in [0, 1/5]")
        for name, v in (("p1", p1), ("p2", p2), ("r1", r1)):
            if not 2 < v < math.inf:
                problems.append(f"{name}={v} not in (2, inf)")
        if not 2 <= r2 < math.inf:
            problems.append(f"r2={r2} not in [2, inf)")
        if problems:
            raise ValueError("exponent tuple out of range: " + "; ".join(problems))

    def astuple(self) -> tuple[float, float, float, float, float]:
        return (self.delta, self.p1, self.r1, self.p2, self.r2)

    @classmethod
    def canonical(cls, delta: float, r1: float, r2: float) -> "ExponentTuple":
        p = canonical_p(delta)
        return cls(delta, p, r1, p, r2)


@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool
    slack: float
    strict: bool


def _le(name: str, lhs: float, rhs: float) -> Condition:
    slack = rhs - lhs
    return Condition(name, slack >= -EPS, slack, False)


def _lt(name: str, lhs: float, rhs: float) -> Condition:
    slack = rhs - lhs
    return Condition(name, slack >= EPS, slack, True)


@dataclass(frozen=True)
class AdmissibilityReport:
    exponents: ExponentTuple
    conditions: dict[str, Condition] = field(repr=False)
    branch: str
    thm1_1: bool
    thm1_2: bool
    thm1_3: bool
    thm1_3_asymptotics: bool

    def to_dict(self) -> dict:
        return {
            "exponents": dict(zip(("delta", "p1", "r1", "p2", "r2"), self.exponents.astuple())),
            "branch": self.branch,
            "thm1_1": self.thm1_1,
            "thm1_2": self.thm1_2,
            "thm1_3": self.thm1_3,
            "thm1_3_asymptotics": self.thm1_3_asymptotics,
            "conditions": {
                k: {"holds": c.holds, "slack": c.slack, "strict": c.strict} for k, c in self.conditions.items()
            },
        }


THM1_1_KEYS = (
    "delta_lt_2_over_p",
    "p_balance",
    "r1_lower",
    "r1_upper",
    "r2_lower",
    "r2_upper",
)


def check_admissible(A: ExponentTuple) -> AdmissibilityReport:
    d, p1, r1, p2, r2 = A.astuple()
    ip1, ip2, ir1, ir2 = 1 / p1, 1 / p2, 1 / r1, 1 / r2
    c: dict[str, Condition] = {}
    c["delta_lt_2_over_p"] = _lt("delta_lt_2_over_p", d, min(2 * ip1, 2 * ip2))
    c["p_balance"] = _le("p_balance", max(1 - ip1, 1 - ip2), ip1 + ip2 - d / 2)
    c["r1_lower"] = _le(
        "r1_lower", max(0.5 - ip1 + d / 2 - 1.5 * (1 - 2 * ip2), 0.5 * (1 - 2 * ip1)), ir1
    )
    c["r1_upper"] = _le("r1_upper", ir1, min(0.5 - ip1 + d / 2, 1.25 * (1 - 2 * ip1)))
    c["r2_lower"] = _le("r2_lower", 1 - ip2 + d / 2 - 1.5 * (1 - 2 * ip1), ir2)
    c["r2_upper"] = _le("r2_upper", ir2, 1 - ip2 + d / 2)

    # r2 > 2 branch versus r2 = 2 branch
    if r2 > 2:
        branch = "r2>2"
        c["r2_branch_lower"] = _le("r2_branch_lower", 0.5 * (1 - 2 * ip2), ir2)
        c["r2_branch_upper"] = _le("r2_branch_upper", ir2, 1.25 * (1 - 2 * ip2))
    else:
        branch = "r2=2"
        c["r2_branch_lower"] = _lt("r2_branch_lower", 0.5 * (1 - 2 * ip2), 0.5)
        c["r2_branch_upper"] = _lt("r2_branch_upper", 0.5, 1.25 * (1 - 2 * ip2))

    c["smoothing_r1"] = _lt("smoothing_r1", ir1, 0.5 - ip1 + d / 2)
    c["smoothing_r2"] = _lt("smoothing_r2", ir2, 1 - ip2 + d / 2)

    # delta is an input, not a derived quantity: compare it exactly
    c["delta_lt_1_13"] = Condition("delta_lt_1_13", d < 1 / 13, 1 / 13 - d, True)
    p = canonical_p(d)
    same_p = abs(p1 - p) <= EPS * p and abs(p2 - p) <= EPS * p
    c["canonical_p"] = Condition("canonical_p", same_p, -max(abs(p1 - p), abs(p2 - p)), False)
    c["asymptotic_r1"] = _lt("asymptotic_r1", 0.5 - ip1 + d / 2 - 1.5 * (1 - 2 * ip1), ir1)

    thm1_1 = all(c[k].holds for k in THM1_1_KEYS) and c["r2_branch_lower"].holds and c["r2_branch_upper"].holds
    thm1_2 = thm1_1 and c["smoothing_r1"].holds and c["smoothing_r2"].holds
    thm1_3 = thm1_2 and c["delta_lt_1_13"].holds and c["canonical_p"].holds
    return AdmissibilityReport(A, c, branch, thm1_1, thm1_2, thm1_3, thm1_3 and c["asymptotic_r1"].holds)


def canonical_p(delta: float) -> float:
    """p with 1/p = 1/3 + delta/6."""
    if not 0 <= delta <= 0.2:
        raise ValueError(f"delta={delta} not in [0, 1/5]")
    return 1.0 / (1.0 / 3.0 + delta / 6.0)


def canonical_family(delta: float) -> ExponentTuple:
    """Tuple at the r-bounds 1/r1 = (1-delta)/6, 1/r2 = (1+5 delta)/6."""
    return ExponentTuple.canonical(delta, 6.0 / (1 - delta), 6.0 / (1 + 5 * delta))


def smallness_value(omega0: Field, beta: float, delta: float) -> float:
    """|beta|^{-delta/3} ||w0||_{H^{-1+delta}} + |beta|^{-(1+delta)/3} ||w0||_{H^delta}."""
    if beta == 0:
        raise ValueError("smallness needs beta != 0")
    F = to_spectral(omega0)
    if abs(F.zero_mode) > 1e-12 * max(1.0, float(np.abs(F.coefficients).max())):
        warnings.warn("initial vorticity is not mean-zero; its mean is dropped", RuntimeWarning, stacklevel=2)
    b = abs(beta)
    return b ** (-delta / 3) * sobolev_norm(F, -1 + delta, 2) + b ** (-(1 + delta) / 3) * sobolev_norm(F, delta, 2)


def _inv(a: float) -> float:
    return 0.0 if a == math.inf else 1.0 / a


def _min_branch(beta: float, t: float, q: float) -> float:
    # min{1, |beta|^{-1+2q} t^{-3/2 (1-2q)}} with q = 1/a or 1/p
    e = 1 - 2 * q
    if e == 0:
        return 1.0
    if beta == 0:
        return 1.0
    return min(1.0, abs(beta) ** (-e) * t ** (-1.5 * e))


def rate_M(s: float, a: float, beta: float, t: float) -> float:
    if not (t > 0):
        raise ValueError(f"rate needs t > 0, got {t}")
    q = _inv(a)
    return t ** (-s / 2 - 1 + q) * _min_branch(beta, t, q)


def rate_N(s: float, p: float, beta: float, t: float) -> float:
    if not (t > 0):
        raise ValueError(f"rate needs t > 0, got {t}")
    q = _inv(p)
    return t ** (-s / 2 - 1 + 2 * q) * _min_branch(beta, t, q)


@dataclass(frozen=True)
class RatePrediction:
    s: float
    a: float
    beta: float
    early_exponent: float
    late_exponent: float
    crossover_time: float


def predict_rates(s: float, a: float, beta: float) -> RatePrediction:
    q = _inv(a)
    early = -s / 2 - 1 + q
    late = early - 1.5 * (1 - 2 * q)
    cross = abs(beta) ** (-2 / 3) if beta != 0 else math.inf
    return RatePrediction(s, a, beta, early, late, cross)


def strichartz_exponent(s: float, p: float, r: float) -> float:
    """Power of |beta| in the Strichartz bound, -(2/r + 2/p - 1 - s)/3."""
    return -(2 * _inv(r) + 2 * _inv(p) - 1 - s) / 3
