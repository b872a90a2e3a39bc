"""Scenario configuration files (JSON) and their translation into fields."""
from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from . import dynamics, gauge, potential
from .minkowski import FourVector, make_propagation_vector, normalize

SCENARIO_ENV = "LIGHTCONE_SCENARIO_DIR"


class ConfigError(ValueError):
    """Malformed or inconsistent scenario configuration."""


@dataclass
class PotentialSpec:
    kind: str = "plane_wave"
    amplitude: list = field(default_factory=lambda: [0.0, 1.0, 0.0, 0.0])
    quadrature_amplitude: Optional[list] = None
    waveform: str = "cos"
    omega: float = 1.0
    direction: list = field(default_factory=lambda: [0.0, 0.0, 1.0])
    ramp_cycles: float = 0.0
    charge: float = 1.0
    r_min: float = potential.DEFAULT_R_MIN


@dataclass
class GaugeSpec:
    kind: str = "constant"
    value: float = 0.0
    form: str = "cos"
    amplitude: float = 0.0


@dataclass
class BindingSpec:
    charge: float = 1.0
    r_min: float = potential.DEFAULT_R_MIN


@dataclass
class ParticleSpec:
    q: float = -1.0
    m: float = 1.0
    position: list = field(default_factory=lambda: [0.0, 0.0, 0.0])
    momentum: list = field(default_factory=lambda: [0.0, 0.0, 0.0])
    t0: float = 0.0


@dataclass
class DipoleSpec:
    anchor: list = field(default_factory=lambda: [0.0, 0.0, 0.0])


@dataclass
class RunSpec:
    t_end: Optional[float] = None
    dt: Optional[float] = None
    stride: int = 1
    average_cycles: int = 10
    seed: int = 20170217
    samples: int = 200
    half_width: float = 10.0
    radii: list = field(default_factory=lambda: [1.0, 0.1, 0.01, 0.001])
    c: float = 1.0
    hbar: float = 1.0
    tolerances: dict = field(default_factory=dict)


@dataclass
class ScenarioConfig:
    name: str = "unnamed"
    description: str = ""
    potential: PotentialSpec = field(default_factory=PotentialSpec)
    gauge: Optional[GaugeSpec] = None
    binding: Optional[BindingSpec] = None
    particle: Optional[ParticleSpec] = None
    dipole: Optional[DipoleSpec] = None
    run: RunSpec = field(default_factory=RunSpec)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        cfg = _build(cls, data, "config")
        _check(cfg)
        return cfg

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


_NESTED = {
    "potential": PotentialSpec,
    "gauge": GaugeSpec,
    "binding": BindingSpec,
    "particle": ParticleSpec,
    "dipole": DipoleSpec,
    "run": RunSpec,
}


def _build(cls, data: Any, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object, got {type(data).__name__}")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(map(repr, unknown))}")
    kwargs = {}
    for key, value in data.items():
        if cls is ScenarioConfig and key in _NESTED and value is not None:
            value = _build(_NESTED[key], value, f"{where}.{key}")
        kwargs[key] = value
    return cls(**kwargs)


def _finite(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{where}: expected a finite number, got {value!r}")
    return float(value)


def _vector(value, n, where):
    if not isinstance(value, (list, tuple)) or len(value) != n:
        raise ConfigError(f"{where}: expected a list of {n} numbers, got {value!r}")
    return [_finite(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _check(cfg: ScenarioConfig) -> None:
    p = cfg.potential
    if p.kind not in ("plane_wave", "coulomb"):
        raise ConfigError(f"config.potential.kind: unknown kind {p.kind!r}")
    p.amplitude = _vector(p.amplitude, 4, "config.potential.amplitude")
    if p.quadrature_amplitude is not None:
        p.quadrature_amplitude = _vector(p.quadrature_amplitude, 4, "config.potential.quadrature_amplitude")
    if p.waveform not in ("cos", "sin"):
        raise ConfigError(f"config.potential.waveform: expected 'cos' or 'sin', got {p.waveform!r}")
    p.omega = _finite(p.omega, "config.potential.omega")
    if p.omega <= 0:
        raise ConfigError("config.potential.omega: must be positive")
    try:
        p.direction = list(normalize(_vector(p.direction, 3, "config.potential.direction")))
    except ValueError as exc:
        raise ConfigError(f"config.potential.direction: {exc}") from None
    p.ramp_cycles = _finite(p.ramp_cycles, "config.potential.ramp_cycles")
    p.charge = _finite(p.charge, "config.potential.charge")
    p.r_min = _finite(p.r_min, "config.potential.r_min")
    if cfg.gauge is not None:
        g = cfg.gauge
        if g.kind not in ("constant", "lightcone", "nonphysical"):
            raise ConfigError(f"config.gauge.kind: unknown kind {g.kind!r}")
        if g.form not in ("cos", "sin", "const"):
            raise ConfigError(f"config.gauge.form: unknown form {g.form!r}")
        g.value = _finite(g.value, "config.gauge.value")
        g.amplitude = _finite(g.amplitude, "config.gauge.amplitude")
    if cfg.binding is not None:
        cfg.binding.charge = _finite(cfg.binding.charge, "config.binding.charge")
        cfg.binding.r_min = _finite(cfg.binding.r_min, "config.binding.r_min")
        if cfg.binding.charge == 0:
            raise ConfigError("config.binding.charge: must be nonzero")
    if cfg.particle is not None:
        s = cfg.particle
        s.q = _finite(s.q, "config.particle.q")
        s.m = _finite(s.m, "config.particle.m")
        if s.m <= 0:
            raise ConfigError("config.particle.m: must be positive")
        s.position = _vector(s.position, 3, "config.particle.position")
        s.momentum = _vector(s.momentum, 3, "config.particle.momentum")
        s.t0 = _finite(s.t0, "config.particle.t0")
    if cfg.dipole is not None:
        cfg.dipole.anchor = _vector(cfg.dipole.anchor, 3, "config.dipole.anchor")
    r = cfg.run
    for name in ("t_end", "dt"):
        if getattr(r, name) is not None:
            setattr(r, name, _finite(getattr(r, name), f"config.run.{name}"))
    for name in ("half_width", "c", "hbar"):
        setattr(r, name, _finite(getattr(r, name), f"config.run.{name}"))
        if getattr(r, name) <= 0:
            raise ConfigError(f"config.run.{name}: must be positive")
    for name in ("stride", "average_cycles", "seed", "samples"):
        v = getattr(r, name)
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"config.run.{name}: expected an integer, got {v!r}")
    r.radii = [_finite(v, f"config.run.radii[{i}]") for i, v in enumerate(r.radii)]
    if not isinstance(r.tolerances, dict):
        raise ConfigError("config.run.tolerances: expected an object")
    r.tolerances = {str(k): _finite(v, f"config.run.tolerances.{k}") for k, v in r.tolerances.items()}


def scenario_dir() -> Path:
    override = os.environ.get(SCENARIO_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("lightcone") / "scenarios"))


def list_scenarios() -> list[str]:
    return sorted(p.stem for p in scenario_dir().glob("*.json"))


def resolve(ref: str) -> Path:
    """Path of a config file, or of a bundled scenario given by name."""
    path = Path(ref)
    if path.exists() or path.suffix == ".json" or os.sep in ref:
        return path
    return scenario_dir() / f"{ref}.json"


def load(ref: str) -> ScenarioConfig:
    path = resolve(ref)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return ScenarioConfig.from_dict(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


@dataclass
class Scenario:
    """Fields and particle built from a :class:`ScenarioConfig`."""

    config: ScenarioConfig
    laser: Optional[potential.PotentialField]
    transverse: potential.PotentialField
    binding: Optional[potential.PotentialField]
    total: potential.PotentialField
    particle: Optional[dynamics.ParticleState]


def _lambda_functions(g: GaugeSpec):
    eps = g.amplitude
    if g.form == "cos":
        return (lambda s: eps * math.cos(s)), (lambda s: eps * math.sin(s)), (lambda s: -eps * math.sin(s))
    if g.form == "sin":
        return (lambda s: eps * math.sin(s)), (lambda s: -eps * math.cos(s) + eps), (lambda s: eps * math.cos(s))
    return (lambda s: eps), (lambda s: eps * s), (lambda s: 0.0)


def build(cfg: ScenarioConfig) -> Scenario:
    """Construct the potentials a scenario describes.

    ``laser`` is the untouched plane wave (``None`` for a Coulomb-only
    scenario), ``transverse`` the potential after the configured gauge and
    dipole freezing, and ``total`` adds the binding potential.

    Raises
    ------
    ConfigError
        If the parameters do not describe a valid field.
    """
    p, c = cfg.potential, cfg.run.c
    try:
        if p.kind == "coulomb":
            laser = None
            transverse = potential.coulomb(p.charge, p.r_min)
        else:
            k = make_propagation_vector(p.omega, p.direction, c)
            wf = potential.Waveform(p.waveform)
            parts = [potential.plane_wave(FourVector(*p.amplitude), k, wf, p.ramp_cycles)]
            if p.quadrature_amplitude is not None:
                other = potential.Waveform.SIN if wf is potential.Waveform.COS else potential.Waveform.COS
                parts.append(potential.plane_wave(FourVector(*p.quadrature_amplitude), k, other, p.ramp_cycles))
            laser = parts[0] if len(parts) == 1 else potential.superpose(parts)
            transverse = laser
    except ValueError as exc:
        raise ConfigError(f"config.potential: {exc}") from None

    if cfg.gauge is not None:
        g = cfg.gauge
        if laser is None and g.kind != "constant":
            raise ConfigError(f"config.gauge: {g.kind!r} gauge needs a plane-wave potential")
        if g.kind == "constant":
            transverse = gauge.apply_gauge(transverse, gauge.constant(g.value))
        elif g.kind == "lightcone":
            lp, anti, lpp = _lambda_functions(g)
            L = gauge.light_cone_gauge(lp, laser.k, antiderivative=anti, lambda_double_prime=lpp)
            transverse = gauge.apply_gauge(transverse, L)
        else:
            transverse = potential.nonphysical_gauge(laser)

    if cfg.dipole is not None:
        transverse = dynamics.dipole_freeze(transverse, cfg.dipole.anchor)

    binding = None
    total = transverse
    if cfg.binding is not None:
        binding = potential.coulomb(cfg.binding.charge, cfg.binding.r_min)
        total = potential.superpose([transverse, binding])

    particle = None
    if cfg.particle is not None:
        s = cfg.particle
        particle = dynamics.ParticleState(s.t0, tuple(s.position), tuple(s.momentum), s.q, s.m)
    return Scenario(cfg, laser, transverse, binding, total, particle)
