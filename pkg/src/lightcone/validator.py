"""Physicality checks for four-potentials.

Every check samples events pseudo-randomly from a seeded generator and
returns a :class:`CheckResult`; :func:`validate` runs the applicable checks
in a fixed order and turns them into a verdict. Sampling can falsify a
potential but never prove it physical.

Transversality alone is not a physicality criterion: the potential obtained
from a plane wave with ``Lambda = -A.x`` is lightlike along ``k`` and so
passes it.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .gauge import GaugeFunction, lambda_from_potential, wave_equation_residual
from .minkowski import CausalClass, FourVector, classify, minkowski_dot
from .potential import (
    FieldKind,
    PotentialField,
    SingularityError,
    evaluate_fields,
    potential_jacobian,
)

DEFAULT_SAMPLES = 200
DEFAULT_SEED = 20170217
DEFAULT_HALF_WIDTH = 10.0
DEFAULT_RADII = (1.0, 0.1, 0.01, 0.001)
SINGULAR_EXCLUSION = 0.5
CLASSIFY_TOLERANCE = 1e-9
DEGENERATE_NORM = 1e-12
SINGULAR_SLOPE = -0.9

DEFAULT_TOLERANCES = {
    "transversality": 1e-9,
    "phase_only_dependence": 1e-6,
    "spacelike_character": 0.0,
    "lorenz_condition": 1e-4,
    "quadratic_invariant": 1e-9,
    "field_equivalence": 1e-5,
    "wave_equation": 1e-4,
    "radiation_gauge": 1e-9,
    "cross_term": 1e-9,
}


class Status(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    WARN = "WARN"
    SKIP = "SKIP"


class Verdict(enum.Enum):
    PHYSICAL = "PHYSICAL"
    UNPHYSICAL = "UNPHYSICAL"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: Status
    residual: float
    tolerance: float
    detail: str = ""
    mandatory: bool = True
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status.value,
            "residual": _json_float(self.residual),
            "tolerance": _json_float(self.tolerance),
            "mandatory": self.mandatory,
            "detail": self.detail,
            "data": self.data,
        }


def _json_float(v: float):
    if math.isfinite(v):
        return float(v)
    return repr(float(v))


def _judge(name, residual, tolerance, detail="", mandatory=True, data=None) -> CheckResult:
    passed = residual <= tolerance
    if passed:
        status = Status.PASS
    else:
        status = Status.FAIL if mandatory else Status.WARN
    return CheckResult(name, status, float(residual), float(tolerance), detail, mandatory, data or {})


def _skip(name, detail, tolerance=0.0) -> CheckResult:
    return CheckResult(name, Status.SKIP, 0.0, tolerance, detail, mandatory=False)


@dataclass(frozen=True)
class EventSample:
    """Seeded uniform sample of events in the 4-cube ``[-w, w]^4``."""

    count: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    half_width: float = DEFAULT_HALF_WIDTH

    def draw(self, f: Optional[PotentialField] = None) -> list[FourVector]:
        rng = np.random.default_rng(self.seed)
        events: list[FourVector] = []
        while len(events) < self.count:
            for row in rng.uniform(-self.half_width, self.half_width, size=(self.count, 4)):
                x = FourVector.from_iterable(row)
                if _near_singularity(f, x):
                    continue
                events.append(x)
                if len(events) == self.count:
                    break
        return events

    def pairs(self, k: FourVector, f: Optional[PotentialField] = None) -> list[tuple[FourVector, FourVector]]:
        """Event pairs ``(x, x + d)`` with ``k.d = 0``, i.e. at equal phase."""
        rng = np.random.default_rng(self.seed + 1)
        w = self.half_width
        out = []
        while len(out) < self.count:
            for row, disp in zip(rng.uniform(-w, w, size=(self.count, 4)), rng.uniform(-w, w, size=(self.count, 4))):
                d = FourVector.from_iterable(disp)
                d = d - FourVector(minkowski_dot(k, d) / k.t, 0.0, 0.0, 0.0)
                x1 = FourVector.from_iterable(row)
                x2 = x1 + d
                if _near_singularity(f, x1) or _near_singularity(f, x2):
                    continue
                out.append((x1, x2))
                if len(out) == self.count:
                    break
        return out


def _near_singularity(f, x) -> bool:
    return f is not None and f.singular_distance is not None and f.singular_distance(x) < SINGULAR_EXCLUSION


def _norm(v: FourVector) -> float:
    return math.sqrt(v.euclidean_norm_sq())


def check_transversality(f: PotentialField, k: FourVector, events: EventSample,
                         tolerance: float = DEFAULT_TOLERANCES["transversality"]) -> CheckResult:
    """Worst ``|k.A(x)| / max(1, |A(x)|)`` over the sample."""
    worst = 0.0
    for x in events.draw(f):
        a = f(x)
        worst = max(worst, abs(minkowski_dot(k, a)) / max(1.0, _norm(a)))
    return _judge("transversality", worst, tolerance, f"max |k.A|/max(1,|A|) over {events.count} events")


def check_phase_only_dependence(f: PotentialField, k: FourVector, pairs: EventSample,
                                tolerance: float = DEFAULT_TOLERANCES["phase_only_dependence"]) -> CheckResult:
    """Worst ``|A(x1) - A(x2)|`` over event pairs of equal phase ``k.x``."""
    worst = 0.0
    for x1, x2 in pairs.pairs(k, f):
        worst = max(worst, _norm(f(x1) - f(x2)))
    if worst > tolerance:
        detail = "potential differs between events of equal phase; it is not a function of k.x alone"
    else:
        detail = "potential depends on the event only through k.x"
    return _judge("phase_only_dependence", worst, tolerance, detail)


def check_quadratic_invariant(A: PotentialField, B: PotentialField, events: EventSample,
                              tolerance: float = DEFAULT_TOLERANCES["quadratic_invariant"]) -> CheckResult:
    """Worst ``|A.A - B.B|``; the squared potential sets the ponderomotive energy."""
    worst = 0.0
    for x in events.draw(A if A.singular_distance else B):
        a, b = A(x), B(x)
        worst = max(worst, abs(minkowski_dot(a, a) - minkowski_dot(b, b)))
    return _judge("quadratic_invariant", worst, tolerance, "max |A.A - A~.A~| (ponderomotive invariant)")


def check_field_equivalence(A: PotentialField, B: PotentialField, events: EventSample,
                            tolerance: float = DEFAULT_TOLERANCES["field_equivalence"],
                            mandatory: bool = True) -> CheckResult:
    """Worst componentwise E and B difference, both from finite differences."""
    worst = 0.0
    sample = events.draw(A if A.singular_distance else B)
    for x in sample:
        fa, fb = evaluate_fields(A, x), evaluate_fields(B, x)
        worst = max(worst, float(np.max(np.abs(fa.E - fb.E))), float(np.max(np.abs(fa.B - fb.B))))
    return _judge("field_equivalence", worst, tolerance, "max componentwise |dE|, |dB|", mandatory)


def lorenz_residual(f: PotentialField, events: Sequence[FourVector]) -> float:
    """Worst ``|d_mu A^mu|`` by finite differences."""
    worst = 0.0
    for x in events:
        J = potential_jacobian(f, x)
        worst = max(worst, abs(float(np.trace(J))))
    return worst


def classify_gauge_character(f: PotentialField, events: EventSample,
                             tolerance: float = DEFAULT_TOLERANCES["spacelike_character"]) -> CheckResult:
    """Causal character of the potential across the sample.

    A physical transverse potential is spacelike. Each nonzero ``A(x)`` is
    classified after scaling to unit Euclidean norm; the residual is the
    fraction of such events that are not spacelike. The detail also reports
    the Lorenz residual and ``max |A^0|`` (zero in the radiation gauge).
    """
    if f.k is None:
        return _skip("spacelike_character", "not a transverse field; causal character not applicable")
    sample = events.draw(f)
    counts = {c: 0 for c in CausalClass}
    degenerate = 0
    max_a0 = 0.0
    for x in sample:
        a = f(x)
        max_a0 = max(max_a0, abs(a.t))
        n = _norm(a)
        if n < DEGENERATE_NORM:
            degenerate += 1
            continue
        counts[classify(a / n, CLASSIFY_TOLERANCE)] += 1
    classified = sum(counts.values())
    bad = classified - counts[CausalClass.SPACELIKE]
    residual = bad / classified if classified else 0.0
    lorenz = lorenz_residual(f, sample)
    summary = ", ".join(f"{c.value}={counts[c]}" for c in CausalClass)
    detail = f"{summary}, zero={degenerate}; lorenz={lorenz:.3e}; max|A0|={max_a0:.3e}"
    if classified and counts[CausalClass.LIGHTLIKE] == classified:
        detail += "; lightlike at every sampled event although the same fields admit a spacelike potential"
    data = {
        "counts": {c.value: counts[c] for c in CausalClass},
        "zero": degenerate,
        "lorenz_residual": lorenz,
        "max_abs_a0": max_a0,
    }
    return _judge("spacelike_character", residual, tolerance, detail, data=data)


def cross_term_diagnostic(pw: PotentialField, bind: PotentialField, radii: Sequence[float],
                          tolerance: float = DEFAULT_TOLERANCES["cross_term"],
                          n_times: int = 64, n_directions: int = 32) -> CheckResult:
    """Growth of the binding/plane-wave coupling ``V * A0_pw`` towards the origin.

    For each radius the largest ``|V A0_pw|`` over one period of time and a
    fixed set of directions is recorded. The check passes only when the
    coupling vanishes (radiation gauge). Otherwise the log-log slope against
    ``r`` tells a ``1/r`` singular coupling (slope <= -0.9) from a bounded one.
    """
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii) or any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly decreasing")
    if pw.k is None:
        raise ValueError("cross-term diagnostic needs a transverse field with a propagation vector")
    k0 = pw.k.t
    period = 2.0 * math.pi / k0
    start = (pw.profile.steady_phase / k0 if pw.profile is not None else 0.0) + max(radii)
    times = start + period * np.arange(n_times) / n_times
    directions = _fibonacci_sphere(n_directions)
    values = []
    for r in radii:
        worst = 0.0
        for n in directions:
            for x0 in times:
                x = FourVector(x0, r * n[0], r * n[1], r * n[2])
                worst = max(worst, abs(bind(x).t * pw(x).t))
        values.append(worst)
    data = {"radii": radii, "values": values}
    peak = max(values)
    if peak <= tolerance:
        return _judge("cross_term", peak, tolerance, "A0_pw = 0: no coupling to the binding potential", data=data)
    positive = [(r, v) for r, v in zip(radii, values) if v > 0]
    slope = float("nan")
    if len(positive) >= 2:
        lr = np.log([r for r, _ in positive])
        lv = np.log([v for _, v in positive])
        slope = float(np.polyfit(lr, lv, 1)[0])
    prefactor = values[-1] * radii[-1]
    data.update({"slope": slope, "prefactor": prefactor})
    if slope <= SINGULAR_SLOPE:
        detail = (f"V*A0_pw grows like r^{slope:.3f} (prefactor {prefactor:.3e}); singular coupling "
                  "whose strength depends on the laser amplitude")
    else:
        detail = (f"V*A0_pw nonzero (max {peak:.3e}, slope {slope:.3f}); A0_pw != 0 violates the "
                  "radiation gauge")
    return _judge("cross_term", peak, tolerance, detail, data=data)


def _fibonacci_sphere(n: int) -> list[tuple[float, float, float]]:
    golden = math.pi * (3.0 - math.sqrt(5.0))
    out = []
    for i in range(n):
        z = 1.0 - 2.0 * (i + 0.5) / n
        rho = math.sqrt(1.0 - z * z)
        out.append((rho * math.cos(golden * i), rho * math.sin(golden * i), z))
    return out


@dataclass(frozen=True)
class ValidationConfig:
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    half_width: float = DEFAULT_HALF_WIDTH
    radii: tuple = DEFAULT_RADII
    tolerances: dict = field(default_factory=dict)
    jobs: int = 1

    def tolerance(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    @property
    def events(self) -> EventSample:
        return EventSample(self.samples, self.seed, self.half_width)


@dataclass(frozen=True)
class ValidationReport:
    checks: list
    verdict: Verdict
    sample_count: int
    seed: int
    context: str = "standalone"

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if c.status is Status.FAIL]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "context": self.context,
            "sampled_events": {"count": self.sample_count, "seed": self.seed},
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [f"verdict: {self.verdict.value}  (context: {self.context}, "
                 f"{self.sample_count} events, seed {self.seed})"]
        for c in self.checks:
            tag = "" if c.mandatory else " (advisory)"
            lines.append(f"  [{c.status.value:4}] {c.name}{tag}: residual={c.residual:.3e} "
                         f"tol={c.tolerance:.1e}  {c.detail}")
        return "\n".join(lines)


def generating_function(f: PotentialField) -> Optional[GaugeFunction]:
    """The gauge function that produced ``f`` from its base, if known."""
    if f.kind is FieldKind.GAUGE_TRANSFORMED:
        return f.gauge
    if f.kind is FieldKind.NONPHYSICAL_PW and f.base is not None:
        return lambda_from_potential(f.base)
    return None


def _wave_equation_check(L: GaugeFunction, events: EventSample, tolerance: float, f) -> CheckResult:
    worst = 0.0
    for x in events.draw(f):
        worst = max(worst, abs(wave_equation_residual(L, x)))
    return _judge("wave_equation", worst, tolerance,
                  "max |d'Alembertian of the generating function|", mandatory=False)


def _radiation_gauge_check(f: PotentialField, events: EventSample, tolerance: float) -> CheckResult:
    worst = max(abs(f(x).t) for x in events.draw(f))
    return _judge("radiation_gauge", worst, tolerance, "max |A0| of the transverse field")


def validate(f: PotentialField, binding: Optional[PotentialField] = None,
             config: ValidationConfig = ValidationConfig()) -> ValidationReport:
    """Run every applicable physicality check on ``f``.

    ``binding`` selects the transverse-with-binding context: ``f`` is then
    the transverse part and ``binding`` the longitudinal (Coulomb)
    potential, which adds the radiation-gauge and cross-term checks and
    makes the Lorenz condition mandatory.
    """
    events = config.events
    tol = config.tolerance
    with_binding = binding is not None
    tasks: list[Callable[[], CheckResult]] = []

    if f.k is None:
        reason = "not a transverse field (no propagation vector)"
        for name in ("transversality", "phase_only_dependence", "spacelike_character", "lorenz_condition"):
            tasks.append(lambda name=name: _skip(name, reason, tol(name)))
    else:
        k = f.k
        tasks.append(lambda: check_transversality(f, k, events, tol("transversality")))
        tasks.append(lambda: check_phase_only_dependence(f, k, events, tol("phase_only_dependence")))
        tasks.append(lambda: classify_gauge_character(f, events, tol("spacelike_character")))
        tasks.append(lambda: _judge("lorenz_condition", lorenz_residual(f, events.draw(f)),
                                    tol("lorenz_condition"), "max |d_mu A^mu| (finite differences)",
                                    mandatory=with_binding))

    if f.base is not None:
        base = f.base
        tasks.append(lambda: check_quadratic_invariant(base, f, events, tol("quadratic_invariant")))
        tasks.append(lambda: check_field_equivalence(base, f, events, tol("field_equivalence"),
                                                     mandatory=False))
    else:
        tasks.append(lambda: _skip("quadratic_invariant", "no reference potential to compare with",
                                   tol("quadratic_invariant")))
        tasks.append(lambda: _skip("field_equivalence", "no reference potential to compare with",
                                   tol("field_equivalence")))

    L = generating_function(f)
    if L is not None:
        tasks.append(lambda: _wave_equation_check(L, events, tol("wave_equation"), f))
    else:
        tasks.append(lambda: _skip("wave_equation", "no generating function", tol("wave_equation")))

    if with_binding:
        if f.k is None:
            tasks.append(lambda: _skip("radiation_gauge", "no transverse field", tol("radiation_gauge")))
            tasks.append(lambda: _skip("cross_term", "no transverse field", tol("cross_term")))
        else:
            tasks.append(lambda: _radiation_gauge_check(f, events, tol("radiation_gauge")))
            tasks.append(lambda: cross_term_diagnostic(f, binding, config.radii, tol("cross_term")))

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            checks = list(pool.map(lambda task: task(), tasks))
    else:
        checks = [task() for task in tasks]

    return ValidationReport(
        checks=checks,
        verdict=_verdict(checks),
        sample_count=events.count,
        seed=events.seed,
        context="transverse_with_binding" if with_binding else "standalone",
    )


def _verdict(checks: Sequence[CheckResult]) -> Verdict:
    ran = [c for c in checks if c.mandatory and c.status is not Status.SKIP]
    if any(c.status is Status.FAIL for c in ran):
        return Verdict.UNPHYSICAL
    if not ran:
        return Verdict.INDETERMINATE
    return Verdict.PHYSICAL
