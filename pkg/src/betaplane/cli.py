"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical blow-up,
4 analysis precondition failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import initial
from .analysis import asymptotic_deficit, boundary_mass, branch_windows, dispersive_scan, fit_decay, is_nonincreasing, strichartz_quadrature
from .checkpoint import checkpoint_write
from .config import RunConfig, load_config, with_overrides
from .errors import AnalysisPreconditionError, BlowUpError, ConfigError
from .evolution import EvolveConfig, Trajectory, energy_check, evolve, linear_trajectory, picard_solve
from .exponents import ExponentTuple, canonical_family, check_admissible, predict_rates, rate_M, smallness_value, strichartz_exponent
from .spectral import GridSpec, lp_bank, set_fft_workers, sobolev_norm

log = logging.getLogger("betaplane")

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_ANALYSIS = 0, 2, 3, 4


# -- helpers ---------------------------------------------------------------------


def _label(x: float) -> str:
    return "inf" if x == math.inf else repr(float(x))


def _norm_key(s: float, a: float) -> str:
    return f"s={_label(s)};a={_label(a)}"


def _json_safe(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else ("inf" if obj > 0 else "-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.floating):
        return _json_safe(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_json_safe(obj), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_label(v) if isinstance(v, float) else v for v in row])


def build_grid(cfg: RunConfig) -> GridSpec:
    try:
        return GridSpec(cfg.n, cfg.box_length)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_initial(cfg: RunConfig, grid: GridSpec):
    name = cfg.init
    if name == "gaussian":
        return initial.gaussian(grid, cfg.init_mass, cfg.init_width, cfg.init_center)
    if name == "dipole":
        return initial.dipole(grid, cfg.init_amplitude, cfg.init_width, cfg.init_center)
    if name == "ring":
        return initial.ring(grid, cfg.init_amplitude, cfg.init_radius, cfg.init_width)
    if name == "radial0":
        return initial.mean_zero_radial(grid, cfg.init_width, cfg.init_amplitude)
    if name == "random":
        return initial.random_band(grid, cfg.init_seed, cfg.init_band, cfg.init_amplitude)
    if name == "zero":
        return initial.zero(grid)
    raise ConfigError(f"unknown initial-data family {name!r}; choose from {sorted(initial.FAMILIES)}")


def evolve_config(cfg: RunConfig) -> EvolveConfig:
    try:
        return EvolveConfig(cfg.beta, cfg.dt, cfg.t_end, cfg.scheme, cfg.save_every, cfg.dealias, cfg.linear_only)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def run_trajectory(cfg: RunConfig, extra_times=()) -> Trajectory:
    """Saved-snapshot trajectory; linear-only runs evaluate the semigroup exactly."""
    grid = build_grid(cfg)
    omega0 = build_initial(cfg, grid)
    ecfg = evolve_config(cfg)
    if cfg.linear_only:
        k = np.arange(0, ecfg.n_steps + 1, ecfg.save_every)
        times = set((k * cfg.dt).tolist()) | {ecfg.n_steps * cfg.dt} | set(extra_times)
        return linear_trajectory(omega0, cfg.beta, sorted(times))
    return evolve(omega0, ecfg)


def _norm_of(field, s, a, cfg):
    return sobolev_norm(field, s, a, oversampled=cfg.oversample_inf and a == math.inf)


def _prepare(cfg: RunConfig) -> Path:
    out = cfg.run_dir
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- subcommands ---------------------------------------------------------------------


def cmd_simulate(cfg: RunConfig) -> dict:
    out = _prepare(cfg)
    grid = build_grid(cfg)
    omega0 = build_initial(cfg, grid)
    ecfg = evolve_config(cfg)
    if cfg.linear_only:
        ecfg = EvolveConfig(cfg.beta, cfg.dt, cfg.t_end, cfg.scheme, cfg.save_every, cfg.dealias, True)
    traj = evolve(omega0, ecfg)
    for tc in cfg.checkpoints:
        try:
            snap = traj.at(tc)
        except KeyError:
            raise ConfigError(f"checkpoint time {tc} is not a saved time (dt * save_every multiples)") from None
        checkpoint_write(out / f"omega_t{tc:.6g}.bpf", snap, tc, cfg.beta)
    checkpoint_write(out / "omega_final.bpf", traj.final, traj.times[-1], cfg.beta)

    step_diss = dict(zip(traj.step_times, traj.dissipation_series))
    header = ["t"] + [f"norm[{_norm_key(s, a)}]" for s, a in cfg.norms] + ["dissipation"]
    rows = []
    for t, f in zip(traj.times, traj.snapshots):
        rows.append([t] + [_norm_of(f, s, a, cfg) for s, a in cfg.norms] + [step_diss[t]])
    write_csv(out / "norms.csv", header, rows)

    ledger = energy_check(traj)
    write_json(out / "energy.json", ledger.to_dict())
    bm = [boundary_mass(f) for f in traj.snapshots]
    summary = {
        "run_id": cfg.run_id,
        "t_end": traj.times[-1],
        "energy": ledger.to_dict(),
        "boundary_mass_peak": max(b.fraction for b in bm),
        "validity_window": grid.box_length**2 / 16,
        "mass": omega0.integral(),
        "linear_only": cfg.linear_only,
    }
    write_json(out / "summary.json", summary)
    return summary


def cmd_energy(cfg: RunConfig) -> dict:
    out = _prepare(cfg)
    grid = build_grid(cfg)
    traj = evolve(build_initial(cfg, grid), evolve_config(cfg))
    res = energy_check(traj).to_dict()
    write_json(out / "energy.json", res)
    return res


def cmd_decay(cfg: RunConfig) -> dict:
    out = _prepare(cfg)
    traj = run_trajectory(cfg)
    times = np.asarray(traj.times)
    pos = times > 0
    result = {"beta": cfg.beta, "fits": {}}
    columns: dict[str, list[float]] = {}
    for s, a in cfg.norms:
        key = _norm_key(s, a)
        norms = np.array([_norm_of(f, s, a, cfg) for f in traj.snapshots])
        columns[f"norm[{key}]"] = norms.tolist()
        columns[f"normalized[{key}]"] = [
            float(v / rate_M(s, a, cfg.beta, t)) if t > 0 else math.nan for t, v in zip(times, norms)
        ]
        if cfg.fit_windows == "auto":
            windows = {k: v for k, v in branch_windows(cfg.beta, float(times[pos][0]), float(times[-1])).items() if v}
        else:
            windows = {f"w{i}": tuple(w) for i, w in enumerate(cfg.fit_windows)}
        fits = {}
        for name, win in windows.items():
            if win[0] < times[pos][0] or win[1] > times[-1]:
                raise AnalysisPreconditionError(f"fit window {win} outside trajectory span [{times[pos][0]}, {times[-1]}]")
            fits[name] = fit_decay(times[pos], norms[pos], win, s, a, cfg.beta).to_dict()
        pred = predict_rates(s, a, cfg.beta)
        result["fits"][key] = {
            "windows": fits,
            "predicted_early": pred.early_exponent,
            "predicted_late": pred.late_exponent,
            "crossover_time": pred.crossover_time,
        }
    header = ["t"] + list(columns)
    write_csv(out / "decay_series.csv", header, [[t] + [columns[c][i] for c in columns] for i, t in enumerate(times)])
    write_json(out / "decay.json", result)
    return result


def cmd_asymptotics(cfg: RunConfig) -> dict:
    out = _prepare(cfg)
    checkpoints = cfg.checkpoints or (5.0, 10.0, 20.0, 40.0)
    grid = build_grid(cfg)
    omega0 = build_initial(cfg, grid)
    mass = omega0.integral()
    if cfg.linear_only:
        traj = linear_trajectory(omega0, cfg.beta, [0.0, *sorted(checkpoints)])
    else:
        traj = evolve(omega0, evolve_config(cfg))
    rows, series = [], {}
    for t in checkpoints:
        try:
            f = traj.at(t)
        except KeyError:
            raise AnalysisPreconditionError(f"checkpoint {t} not among saved times") from None
        row = [t]
        for s, a in cfg.norms:
            d = asymptotic_deficit(f, mass, cfg.beta, t, s, a)
            series.setdefault(_norm_key(s, a), []).append(d)
            row.append(d)
        rows.append(row)
    write_csv(out / "deficit.csv", ["t"] + [f"deficit[{_norm_key(s, a)}]" for s, a in cfg.norms], rows)
    result = {
        "mass": mass,
        "checkpoints": list(checkpoints),
        "deficits": series,
        "nonincreasing": {k: is_nonincreasing(v) for k, v in series.items()},
    }
    write_json(out / "asymptotics.json", result)
    return result


def cmd_strichartz(cfg: RunConfig) -> dict:
    out = _prepare(cfg)
    grid = build_grid(cfg)
    f = build_initial(cfg, grid)
    if cfg.beta == 0:
        raise AnalysisPreconditionError("Strichartz estimate is vacuous for beta = 0")
    T = cfg.strichartz_t_end or 10 * abs(cfg.beta) ** (-2 / 3)
    t_grid = np.linspace(0.0, T, cfg.strichartz_samples)
    res = {}
    for s, p, r in cfg.strichartz:
        q = strichartz_quadrature(f, cfg.beta, s, p, r, t_grid)
        res[f"s={_label(s)};p={_label(p)};r={_label(r)}"] = {
            "value": q.value,
            "tail_fraction": q.tail_fraction,
            "beta_exponent": strichartz_exponent(s, p, r),
            "l2_norm": sobolev_norm(f, 0, 2),
        }
    result = {"beta": cfg.beta, "t_end": T, "samples": cfg.strichartz_samples, "results": res}
    write_json(out / "strichartz.json", result)
    return result


def cmd_dispersive(cfg: RunConfig) -> dict:
    out = _prepare(cfg)
    grid = build_grid(cfg)
    f = build_initial(cfg, grid)
    lo, hi, count = cfg.dispersive_times
    times = np.geomspace(lo, hi, int(count))
    scan = dispersive_scan(f, cfg.beta, cfg.dispersive_k, times, lp_bank(grid))
    rows = [[k, float(t), float(scan.ratios[i, j])] for i, k in enumerate(scan.ks) for j, t in enumerate(times)]
    write_csv(out / "dispersive.csv", ["k", "t", "ratio"], rows)
    result = {"beta": cfg.beta, "ks": list(scan.ks), "sup": scan.sup,
              "finite": bool(np.all(np.isfinite(scan.ratios)))}
    write_json(out / "dispersive.json", result)
    return result


def cmd_admissible(cfg: RunConfig | None, tuple_text: str | None, sweep: int | None) -> dict:
    if sweep:
        deltas = np.linspace(0.0, 0.2, sweep)
        reports = [check_admissible(canonical_family(float(d))).to_dict() for d in deltas]
        return {"sweep": reports, "all_thm1_1": all(r["thm1_1"] for r in reports)}
    if tuple_text:
        try:
            vals = [float(x) for x in tuple_text.split(",")]
            if len(vals) != 5:
                raise ValueError("need five numbers delta,p1,r1,p2,r2")
            A = ExponentTuple(*vals)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    else:
        try:
            A = (cfg or RunConfig()).exponent_tuple()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return check_admissible(A).to_dict()


def cmd_picard(cfg: RunConfig) -> dict:
    out = _prepare(cfg)
    grid = build_grid(cfg)
    omega0 = build_initial(cfg, grid)
    try:
        A = cfg.exponent_tuple()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    small = smallness_value(omega0, cfg.beta, A.delta)
    report, _ = picard_solve(omega0, cfg.beta, A, cfg.t_end, cfg.picard_iterations, cfg.picard_steps,
                             nonlinear=not cfg.linear_only, dealias=cfg.dealias)
    result = report.to_dict()
    result["smallness_value"] = small
    result["smallness_threshold"] = cfg.smallness_threshold
    result["smallness_ok"] = None if cfg.smallness_threshold is None else small <= cfg.smallness_threshold
    write_json(out / "picard.json", result)
    return result


COMMANDS = ("simulate", "decay", "asymptotics", "strichartz", "dispersive", "admissible", "picard", "energy")


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="betaplane", description="Viscous beta-plane vorticity laboratory")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="key=value run configuration")
    p.add_argument("--out", help="output directory (overrides out_dir)")
    p.add_argument("--run-id", help="run identifier (overrides run_id)")
    p.add_argument("--linear-only", action="store_true", help="drop the transport term")
    p.add_argument("--threads", type=int, default=1, help="FFT worker threads")
    p.add_argument("--tuple", help="admissible: exponents delta,p1,r1,p2,r2")
    p.add_argument("--delta-sweep", type=int, help="admissible: sweep the canonical family over N deltas")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        set_fft_workers(args.threads)
        cfg = load_config(args.config) if args.config else None
        if cfg is not None or args.command != "admissible":
            cfg = with_overrides(cfg or RunConfig(), out_dir=args.out, run_id=args.run_id,
                                 linear_only=True if args.linear_only else None)
        if args.command == "admissible":
            result = cmd_admissible(cfg, args.tuple, args.delta_sweep)
            if cfg is not None:
                write_json(_prepare(cfg) / "admissible.json", result)
        else:
            result = globals()[f"cmd_{args.command}"](cfg)
        json.dump(_json_safe(result), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return EXIT_OK
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except BlowUpError as exc:
        log.error("blow-up: %s", exc)
        return EXIT_BLOWUP
    except AnalysisPreconditionError as exc:
        log.error("analysis precondition failed: %s", exc)
        return EXIT_ANALYSIS
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
