"""Command-line front end.

Exit codes: 0 success (or PHYSICAL verdict), 2 UNPHYSICAL verdict,
1 any error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from typing import Optional, Sequence

import numpy as np

from . import config as cfgmod
from . import dynamics, validator
from .minkowski import FourVector
from .potential import SingularityError, evaluate_fields

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNPHYSICAL = 2

AXES = {"t": 0, "x": 1, "y": 2, "z": 3}


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _parse_tolerances(items: Sequence[str]) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise cfgmod.ConfigError(f"--tolerance expects NAME=VALUE, got {item!r}")
        if name not in validator.DEFAULT_TOLERANCES:
            raise cfgmod.ConfigError(f"--tolerance: unknown check {name!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise cfgmod.ConfigError(f"--tolerance {name}: not a number: {value!r}") from None
    return out


def _load(args) -> cfgmod.ScenarioConfig:
    cfg = cfgmod.load(args.config)
    if getattr(args, "seed", None) is not None:
        cfg.run.seed = args.seed
    tolerances = _parse_tolerances(getattr(args, "tolerance", None))
    if tolerances:
        cfg.run.tolerances = {**cfg.run.tolerances, **tolerances}
    return cfg


def _validation_config(cfg: cfgmod.ScenarioConfig, jobs: int = 1) -> validator.ValidationConfig:
    r = cfg.run
    return validator.ValidationConfig(
        samples=r.samples,
        seed=r.seed,
        half_width=r.half_width,
        radii=tuple(r.radii),
        tolerances=dict(r.tolerances),
        jobs=jobs,
    )


def cmd_validate(args) -> int:
    cfg = _load(args)
    scenario = cfgmod.build(cfg)
    report = validator.validate(scenario.transverse, scenario.binding, _validation_config(cfg, args.jobs))
    document = {"scenario": cfg.name, "config": cfg.to_dict(), "report": report.to_dict()}
    machine = json.dumps(document, indent=2, sort_keys=True) + "\n"
    if args.out:
        write_atomic(args.out, machine)
    if args.format == "machine":
        sys.stdout.write(machine)
    else:
        sys.stdout.write(f"scenario: {cfg.name}\n{report.to_text()}\n")
        if report.failed:
            sys.stdout.write(f"failing checks: {', '.join(report.failed)}\n")
    return EXIT_UNPHYSICAL if report.verdict is validator.Verdict.UNPHYSICAL else EXIT_OK


def cmd_fields(args) -> int:
    cfg = _load(args)
    scenario = cfgmod.build(cfg)
    origin = [float(v) for v in args.origin.split(",")] if args.origin else [0.0] * 4
    if len(origin) != 4:
        raise cfgmod.ConfigError("--origin expects four comma-separated numbers ct,x,y,z")
    if args.count < 0:
        raise cfgmod.ConfigError("--count must be non-negative")
    axis = AXES[args.axis]
    values = np.linspace(args.start, args.stop, args.count) if args.count else []
    buf = io.StringIO()
    buf.write("ct,x,y,z,Ex,Ey,Ez,Bx,By,Bz\n")
    for v in values:
        event = list(origin)
        event[axis] = float(v)
        x = FourVector(*event)
        try:
            s = evaluate_fields(scenario.total, x, args.step)
        except SingularityError as exc:
            print(f"warning: skipping singular event {x.as_tuple()}: {exc}", file=sys.stderr)
            buf.write("# singular," + ",".join(f"{c:.17g}" for c in event) + "\n")
            continue
        row = (*event, *s.E, *s.B)
        buf.write(",".join(f"{c:.17g}" for c in row) + "\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_transform(args) -> int:
    cfg = _load(args)
    if cfg.gauge is None:
        raise cfgmod.ConfigError("transform needs a 'gauge' section in the config")
    scenario = cfgmod.build(cfg)
    before, after = scenario.transverse.base, scenario.transverse
    if before is None:
        raise cfgmod.ConfigError("configured gauge did not produce a transformed potential")
    events = validator.EventSample(cfg.run.samples, cfg.run.seed, cfg.run.half_width).draw(after)
    buf = io.StringIO()
    buf.write("ct,x,y,z,A0,A1,A2,A3,At0,At1,At2,At3\n")
    for x in events:
        row = (*x, *before(x), *after(x))
        buf.write(",".join(f"{c:.17g}" for c in row) + "\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def run_simulation(cfg: cfgmod.ScenarioConfig):
    """Integrate the scenario particle and summarize the drift momentum.

    Returns the trajectory and a summary dict.
    """
    scenario = cfgmod.build(cfg)
    if scenario.particle is None:
        raise cfgmod.ConfigError("simulate needs a 'particle' section in the config")
    r, c = cfg.run, cfg.run.c
    part = scenario.particle
    laser = scenario.laser
    period = 2.0 * math.pi / cfg.potential.omega
    U_p = None
    if laser is not None:
        U_p = dynamics.ponderomotive_energy(laser, part.q, part.m, c)
    lab = dynamics.lab_period(cfg.potential.omega, U_p or 0.0, part.m, c)
    dt = r.dt if r.dt is not None else period / 2000.0
    if r.t_end is not None:
        t_end = r.t_end
    else:
        ramp = cfg.potential.ramp_cycles * period * (1.0 + 2.0 * (U_p or 0.0) / (part.m * c * c))
        t_end = part.t + ramp + (r.average_cycles + 0.5) * lab
    traj = dynamics.simulate(part, scenario.total, t_end, dt, r.stride, c)
    if traj.truncated:
        raise dynamics.SimulationError(f"trajectory truncated: {traj.diagnostic}")
    summary = {"scenario": cfg.name, "t_end": t_end, "dt": dt, "lab_period": lab, "samples": len(traj.samples)}
    if laser is not None:
        k_dir = tuple(cfg.potential.direction)
        t_start = dynamics.steady_state_start(traj, laser.k, laser.profile.steady_phase)
        drift = dynamics.drift_momentum(traj, k_dir, lab, r.average_cycles, t_start,
                                        U_p, cfg.potential.omega, r.hbar)
        summary.update(drift.to_dict())
        summary["ratio_drift_c_over_U_p"] = drift.drift_p_parallel * c / U_p if U_p else None
    return traj, summary


def cmd_simulate(args) -> int:
    cfg = _load(args)
    traj, summary = run_simulation(cfg)
    if args.out:
        buf = io.StringIO()
        traj.write_csv(buf)
        write_atomic(args.out, buf.getvalue())
    if args.format == "machine":
        sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    else:
        for key in ("scenario", "U_p", "drift_p_parallel", "n_photons", "ratio_drift_c_over_U_p",
                    "periods_averaged", "lab_period", "dt", "t_end", "samples"):
            if key in summary:
                sys.stdout.write(f"{key}: {summary[key]}\n")
    return EXIT_OK


def cmd_scenarios(args) -> int:
    names = cfgmod.list_scenarios()
    if args.format == "machine":
        sys.stdout.write(json.dumps(names) + "\n")
        return EXIT_OK
    for name in names:
        try:
            description = cfgmod.load(name).description
        except cfgmod.ConfigError as exc:
            description = f"(invalid: {exc})"
        sys.stdout.write(f"{name}: {description}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lightcone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_help):
        p.add_argument("--config", required=True, help="config file or bundled scenario name")
        p.add_argument("--out", help=out_help)
        p.add_argument("--seed", type=int, help="override run.seed")
        p.add_argument("--jobs", type=int, default=1, help="worker threads")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        p.add_argument("--tolerance", action="append", metavar="NAME=VALUE",
                       help="override a check tolerance (repeatable)")

    p = sub.add_parser("validate", help="run the physicality checks")
    common(p, "write the machine-readable report here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fields", help="tabulate E and B along a grid line")
    common(p, "output table (default stdout)")
    p.add_argument("--axis", choices=tuple(AXES), default="z")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=1.0)
    p.add_argument("--count", type=int, default=11)
    p.add_argument("--origin", help="base event ct,x,y,z (default origin)")
    p.add_argument("--step", type=float, help="finite-difference step")
    p.set_defaults(func=cmd_fields)

    p = sub.add_parser("transform", help="sample a potential before and after its gauge transformation")
    common(p, "output table (default stdout)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("simulate", help="integrate a particle and report its drift momentum")
    common(p, "trajectory CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scenarios", help="list bundled scenarios")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_scenarios)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (cfgmod.ConfigError, ValueError, ArithmeticError, dynamics.SimulationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
