"""Four-potential fields and their electric and magnetic fields.

A :class:`PotentialField` is an evaluable map from a spacetime event
``x = (ct, x, y, z)`` to a four-potential ``A = (phi, Ax, Ay, Az)``.
Fields that depend on the event only through the phase ``k.x`` carry a
:class:`PhaseProfile`; those are the transverse (propagating) fields.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .minkowski import (
    CausalClass,
    FourVector,
    METRIC,
    classify,
    minkowski_dot,
    phase,
)

TRANSVERSALITY_TOLERANCE = 1e-10
DEFAULT_R_MIN = 1e-12


class SingularityError(ArithmeticError):
    """Raised when a field is evaluated at or too close to a singular point."""


class FieldKind(enum.Enum):
    PLANE_WAVE = "plane_wave"
    NONPHYSICAL_PW = "nonphysical_pw"
    COULOMB = "coulomb"
    SUPERPOSITION = "superposition"
    GAUGE_TRANSFORMED = "gauge_transformed"
    DIPOLE = "dipole"


class Waveform(enum.Enum):
    COS = "cos"
    SIN = "sin"


@dataclass(frozen=True)
class PhaseProfile:
    """Four-potential as a function of the phase alone, with derivatives.

    ``first`` and ``second`` return ``dA/dphi`` and ``d2A/dphi2``; either
    may be ``None`` when no closed form is known.
    """

    value: Callable[[float], FourVector]
    first: Optional[Callable[[float], FourVector]] = None
    second: Optional[Callable[[float], FourVector]] = None
    steady_phase: float = 0.0  # phase after which the amplitude envelope is flat

    def __add__(self, other: "PhaseProfile") -> "PhaseProfile":
        first = second = None
        if self.first is not None and other.first is not None:
            first = _sum_fn(self.first, other.first)
        if self.second is not None and other.second is not None:
            second = _sum_fn(self.second, other.second)
        return PhaseProfile(
            _sum_fn(self.value, other.value),
            first,
            second,
            max(self.steady_phase, other.steady_phase),
        )


def _sum_fn(f, g):
    return lambda s: f(s) + g(s)


@dataclass(frozen=True, eq=False)
class PotentialField:
    """Evaluable four-potential.

    Only ``kind`` and ``evaluator`` are required; everything else is
    optional metadata used by the validator and the integrator.

    Attributes
    ----------
    k : FourVector or None
        Propagation vector of the transverse part, if any.
    profile : PhaseProfile or None
        Present only when the potential depends on the event solely through
        ``k.x``.
    jacobian : callable or None
        Analytic ``dA^mu/dx^nu`` as a 4x4 array (row mu, column nu).
    singular_distance : callable or None
        Spatial distance from an event to the nearest singular point.
    base : PotentialField or None
        The field this one was derived from by a gauge transformation.
    """

    kind: FieldKind
    evaluator: Callable[[FourVector], FourVector]
    params: dict = field(default_factory=dict)
    k: Optional[FourVector] = None
    profile: Optional[PhaseProfile] = None
    jacobian: Optional[Callable[[FourVector], np.ndarray]] = None
    singular_distance: Optional[Callable[[FourVector], float]] = None
    base: Optional["PotentialField"] = None
    gauge: Any = None

    def __call__(self, x: FourVector) -> FourVector:
        return self.evaluator(x)

    @property
    def is_phase_only(self) -> bool:
        return self.k is not None and self.profile is not None

    def phase_derivative(self, x: FourVector) -> FourVector:
        """``dA/dphi`` at event ``x``."""
        if not self.is_phase_only or self.profile.first is None:
            raise ValueError(f"{self.kind.value} field has no analytic phase derivative")
        return self.profile.first(phase(self.k, x))


@dataclass(frozen=True)
class FieldSample:
    E: np.ndarray
    B: np.ndarray
    at: FourVector


def _ramp(phi: float, ramp_phase: float) -> tuple[float, float, float]:
    """Cosine turn-on envelope and its first two derivatives."""
    if ramp_phase <= 0.0 or phi >= ramp_phase:
        return 1.0, 0.0, 0.0
    if phi <= 0.0:
        return 0.0, 0.0, 0.0
    a = math.pi / ramp_phase
    return (
        0.5 * (1.0 - math.cos(a * phi)),
        0.5 * a * math.sin(a * phi),
        0.5 * a * a * math.cos(a * phi),
    )


def _carrier(waveform: Waveform, phi: float) -> tuple[float, float, float]:
    c, s = math.cos(phi), math.sin(phi)
    if waveform is Waveform.COS:
        return c, -s, -c
    return s, c, -s


def plane_wave(
    amplitude: FourVector,
    k: FourVector,
    waveform: Waveform = Waveform.COS,
    ramp_cycles: float = 0.0,
) -> PotentialField:
    """Monochromatic plane wave ``A(x) = A_c * waveform(k.x)``.

    With ``ramp_cycles > 0`` the amplitude is switched on smoothly over
    that many cycles of phase starting at ``phi = 0`` and is zero for
    negative phase.

    Raises
    ------
    ValueError
        If ``k`` is not lightlike, or ``amplitude`` is not transverse
        (``k.A_c != 0``).
    """
    waveform = Waveform(waveform)
    if classify(k, 1e-12) is not CausalClass.LIGHTLIKE or k.euclidean_norm_sq() == 0.0:
        raise ValueError(f"propagation vector must be a nonzero lightlike vector, got {k}")
    contraction = minkowski_dot(k, amplitude)
    if abs(contraction) > TRANSVERSALITY_TOLERANCE:
        raise ValueError(
            f"amplitude {amplitude} is not transverse to k {k}: k.A_c = {contraction:.3e} "
            f"(transversality condition k^mu A_mu = 0)"
        )
    if ramp_cycles < 0:
        raise ValueError("ramp_cycles must be non-negative")
    ramp_phase = 2.0 * math.pi * ramp_cycles

    def shape(phi):
        g, g1, g2 = _ramp(phi, ramp_phase)
        w, w1, w2 = _carrier(waveform, phi)
        return g * w, g1 * w + g * w1, g2 * w + 2.0 * g1 * w1 + g * w2

    profile = PhaseProfile(
        value=lambda phi: amplitude * shape(phi)[0],
        first=lambda phi: amplitude * shape(phi)[1],
        second=lambda phi: amplitude * shape(phi)[2],
        steady_phase=ramp_phase,
    )
    a_arr = amplitude.as_array()
    k_lower = k.as_array() * METRIC

    def jacobian(x):
        return np.outer(a_arr * shape(phase(k, x))[1], k_lower)

    return PotentialField(
        kind=FieldKind.PLANE_WAVE,
        evaluator=lambda x: profile.value(phase(k, x)),
        params={
            "amplitude": amplitude,
            "waveform": waveform,
            "ramp_cycles": ramp_cycles,
        },
        k=k,
        profile=profile,
        jacobian=jacobian,
    )


def circular_plane_wave(
    amplitude: float,
    k: FourVector,
    e1: Sequence[float],
    e2: Sequence[float],
    ramp_cycles: float = 0.0,
) -> PotentialField:
    """Circularly polarized wave ``A0 (e1 cos(phi) + e2 sin(phi))``.

    ``e1`` and ``e2`` are spatial polarization vectors; both must be
    orthogonal to the propagation direction.
    """
    a1 = FourVector(0.0, *(amplitude * v for v in e1))
    a2 = FourVector(0.0, *(amplitude * v for v in e2))
    return superpose(
        [
            plane_wave(a1, k, Waveform.COS, ramp_cycles),
            plane_wave(a2, k, Waveform.SIN, ramp_cycles),
        ]
    )


def nonphysical_gauge(base: PotentialField) -> PotentialField:
    """Potential ``-k (x.A'(phi))`` gauge-equivalent to a plane wave.

    It is what the generating function ``Lambda = -A.x`` produces from
    ``base``: identical E and B, but lightlike, null and not a function of
    the phase alone.
    """
    if not base.is_phase_only or base.profile.first is None:
        raise ValueError("nonphysical gauge needs a plane-wave base with an analytic phase derivative")
    k = base.k
    first = base.profile.first
    second = base.profile.second
    k_arr = k.as_array()
    k_lower = k_arr * METRIC

    def evaluator(x):
        return k * (-minkowski_dot(x, first(phase(k, x))))

    jacobian = None
    if second is not None:

        def jacobian(x):
            phi = phase(k, x)
            grad = first(phi).as_array() * METRIC + minkowski_dot(x, second(phi)) * k_lower
            return -np.outer(k_arr, grad)

    return PotentialField(
        kind=FieldKind.NONPHYSICAL_PW,
        evaluator=evaluator,
        params={"base_kind": base.kind.value},
        k=k,
        jacobian=jacobian,
        base=base,
    )


def coulomb(q_s: float, r_min: float = DEFAULT_R_MIN) -> PotentialField:
    """Scalar potential ``(q_s / r, 0, 0, 0)`` of a point charge at the origin."""
    if q_s == 0:
        raise ValueError("Coulomb source charge must be nonzero")

    def radius(x):
        return math.sqrt(x.x * x.x + x.y * x.y + x.z * x.z)

    def evaluator(x):
        r = radius(x)
        if r < r_min:
            raise SingularityError(f"Coulomb potential evaluated at r = {r:.3e} < r_min = {r_min:g}")
        return FourVector(q_s / r, 0.0, 0.0, 0.0)

    def jacobian(x):
        r = radius(x)
        if r < r_min:
            raise SingularityError(f"Coulomb potential evaluated at r = {r:.3e} < r_min = {r_min:g}")
        J = np.zeros((4, 4))
        J[0, 1:] = -q_s * np.array(x.spatial) / r**3
        return J

    return PotentialField(
        kind=FieldKind.COULOMB,
        evaluator=evaluator,
        params={"q_s": q_s, "r_min": r_min},
        jacobian=jacobian,
        singular_distance=radius,
    )


def superpose(parts: Sequence[PotentialField]) -> PotentialField:
    """Componentwise sum of several potentials.

    The sum keeps a phase profile only when every part has one with the
    same propagation vector.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("cannot superpose an empty list of fields")

    def evaluator(x):
        total = parts[0](x)
        for p in parts[1:]:
            total = total + p(x)
        return total

    ks = [p.k for p in parts if p.k is not None]
    k = ks[0] if ks and all(_same_vector(kk, ks[0]) for kk in ks) else None

    profile = None
    if k is not None and all(p.profile is not None and p.k is not None for p in parts):
        profile = parts[0].profile
        for p in parts[1:]:
            profile = profile + p.profile

    jacobian = None
    if all(p.jacobian is not None for p in parts):

        def jacobian(x):
            return sum(p.jacobian(x) for p in parts)

    distances = [p.singular_distance for p in parts if p.singular_distance is not None]
    singular_distance = None
    if distances:

        def singular_distance(x):
            return min(d(x) for d in distances)

    return PotentialField(
        kind=FieldKind.SUPERPOSITION,
        evaluator=evaluator,
        params={"parts": parts},
        k=k,
        profile=profile,
        jacobian=jacobian,
        singular_distance=singular_distance,
    )


def _same_vector(a: FourVector, b: FourVector, tol: float = 1e-12) -> bool:
    return all(abs(u - v) <= tol * max(1.0, abs(u), abs(v)) for u, v in zip(a, b))


def default_step(x: FourVector) -> float:
    return 1e-4 * (1.0 + max(abs(c) for c in x))


def potential_jacobian(f: PotentialField, x: FourVector, h: Optional[float] = None) -> np.ndarray:
    """``dA^mu/dx^nu`` by fourth-order central differences."""
    if h is None:
        h = default_step(x)
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    if f.singular_distance is not None and f.singular_distance(x) <= 2.0 * h:
        raise SingularityError(f"singular point within the finite-difference stencil at {x}")
    base = x.as_array()
    J = np.empty((4, 4))
    try:
        for nu in range(4):
            e = np.zeros(4)
            e[nu] = h
            vals = [f(FourVector.from_iterable(base + s * e)).as_array() for s in (2.0, 1.0, -1.0, -2.0)]
            J[:, nu] = (-vals[0] + 8.0 * vals[1] - 8.0 * vals[2] + vals[3]) / (12.0 * h)
    except SingularityError as exc:
        raise SingularityError(f"singular point within the finite-difference stencil at {x}: {exc}") from exc
    return J


def fields_from_jacobian(J: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """E and B from ``dA^mu/dx^nu`` with ``x^0 = ct``.

    ``E = -grad(phi) - dA/d(ct)`` and ``B = curl A``.
    """
    E = -J[0, 1:] - J[1:, 0]
    B = np.array([J[3, 2] - J[2, 3], J[1, 3] - J[3, 1], J[2, 1] - J[1, 2]])
    return E, B


def evaluate_fields(
    f: PotentialField,
    x: FourVector,
    h: Optional[float] = None,
    analytic: bool = False,
) -> FieldSample:
    """Electric and magnetic field of ``f`` at event ``x``.

    Finite differences are used unless ``analytic`` is set and the field
    carries an analytic Jacobian.
    """
    if analytic and f.jacobian is not None:
        if f.singular_distance is not None and f.singular_distance(x) < f.params.get("r_min", DEFAULT_R_MIN):
            raise SingularityError(f"field evaluated at a singular point {x}")
        J = f.jacobian(x)
    else:
        J = potential_jacobian(f, x, h)
    E, B = fields_from_jacobian(J)
    return FieldSample(E=E, B=B, at=x)
