"""Flat ``key = value`` run configuration.

Lines are ``key = value``; ``#`` starts a comment; unknown or repeated keys
are errors reported with their line number. Lists use commas, paired items
use colons (``norms = 0:2, 1:inf``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError
from .evolution import SCHEMES
from .exponents import ExponentTuple, canonical_p

_RUN_ID = re.compile(r"^[A-Za-z0-9._-]+$")


def _float(v: str) -> float:
    v = v.strip().lower()
    if v in ("inf", "infinity"):
        return math.inf
    return float(v)


def _bool(v: str) -> bool:
    v = v.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _floats(v: str) -> tuple[float, ...]:
    return tuple(_float(x) for x in v.split(",") if x.strip())


def _ints(v: str) -> tuple[int, ...]:
    return tuple(int(x) for x in v.split(",") if x.strip())


def _pairs(v: str) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(_float(y) for y in x.split(":")) for x in v.split(",") if x.strip())


def _exponents(v: str):
    if v.strip().lower() == "canonical":
        return "canonical"
    vals = _floats(v)
    if len(vals) != 5:
        raise ValueError("exponents needs 'canonical' or five numbers delta,p1,r1,p2,r2")
    return vals


@dataclass(frozen=True)
class RunConfig:
    n: int = 128
    box_length: float = 40.0
    beta: float = 10.0
    delta: float = 0.05
    exponents: object = "canonical"
    r1: float = 6.0
    r2: float = 4.0
    init: str = "gaussian"
    init_mass: float = 1.0
    init_width: float = 2.0
    init_center: tuple[float, ...] = (0.0, 0.0)
    init_amplitude: float = 1.0
    init_radius: float = 3.0
    init_seed: int = 0
    init_band: tuple[float, ...] = (1.0, 4.0)
    dt: float = 1e-3
    t_end: float = 1.0
    scheme: str = "ETDRK4"
    save_every: int = 100
    dealias: bool = True
    linear_only: bool = False
    norms: tuple[tuple[float, ...], ...] = ((0.0, 2.0),)
    fit_windows: object = "auto"
    checkpoints: tuple[float, ...] = ()
    smallness_threshold: float | None = None
    picard_iterations: int = 5
    picard_steps: int = 1000
    strichartz: tuple[tuple[float, ...], ...] = ((0.0, 3.0, 6.0),)
    strichartz_t_end: float | None = None
    strichartz_samples: int = 2001
    dispersive_k: tuple[int, ...] = (-1, 0, 1)
    dispersive_times: tuple[float, ...] = (1.0, 100.0, 50.0)
    oversample_inf: bool = False
    out_dir: str = "out"
    run_id: str = "run"

    def __post_init__(self):
        for pair in self.norms:
            if len(pair) != 2:
                raise ConfigError(f"norm spec {pair} must be s:a")
            s, a = pair
            if s < 0 or not a >= 2:
                raise ConfigError(f"norm (s={s}, a={a}) needs s >= 0 and a in [2, inf]")
        for trip in self.strichartz:
            if len(trip) != 3:
                raise ConfigError(f"strichartz spec {trip} must be s:p:r")
        if not self.run_id or not _RUN_ID.match(self.run_id):
            raise ConfigError(f"run_id {self.run_id!r} is empty or not filesystem-safe")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}")
        if len(self.dispersive_times) != 3:
            raise ConfigError("dispersive_times must be lo,hi,count")

    def exponent_tuple(self) -> ExponentTuple:
        if self.exponents == "canonical":
            p = canonical_p(self.delta)
            return ExponentTuple(self.delta, p, self.r1, p, self.r2)
        return ExponentTuple(*self.exponents)

    @property
    def run_dir(self) -> Path:
        return Path(self.out_dir) / self.run_id


_PARSERS = {
    "n": int,
    "box_length": _float,
    "beta": _float,
    "delta": _float,
    "exponents": _exponents,
    "r1": _float,
    "r2": _float,
    "init": str,
    "init_mass": _float,
    "init_width": _float,
    "init_center": _floats,
    "init_amplitude": _float,
    "init_radius": _float,
    "init_seed": int,
    "init_band": _floats,
    "dt": _float,
    "t_end": _float,
    "scheme": str,
    "save_every": int,
    "dealias": _bool,
    "linear_only": _bool,
    "norms": _pairs,
    "fit_windows": lambda v: "auto" if v.strip() == "auto" else _pairs(v),
    "checkpoints": _floats,
    "smallness_threshold": _float,
    "picard_iterations": int,
    "picard_steps": int,
    "strichartz": _pairs,
    "strichartz_t_end": _float,
    "strichartz_samples": int,
    "dispersive_k": _ints,
    "dispersive_times": _floats,
    "oversample_inf": _bool,
    "out_dir": str,
    "run_id": str,
}
assert set(_PARSERS) == {f.name for f in fields(RunConfig)}


def parse_config(text: str) -> RunConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (x.strip() for x in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from None
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
