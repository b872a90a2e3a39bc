"""Gauge transformations ``A -> A + d^mu Lambda``.

Derivatives are taken with respect to event coordinates ``x^0 = ct``, so
the contravariant gradient is ``d^mu = ((1/c) d/dt, -grad)``. With that
convention a single shift by ``d^mu Lambda`` changes the scalar potential
by ``+(1/c) dLambda/dt`` and the vector potential by ``-grad Lambda``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .minkowski import CausalClass, FourVector, METRIC, classify, minkowski_dot, phase
from .potential import (
    FieldKind,
    PhaseProfile,
    PotentialField,
    default_step,
)

WAVE_EQUATION_STEP = 1e-3


class GaugeKind(enum.Enum):
    CONSTANT = "constant"
    LIGHTCONE = "lightcone"
    POTENTIAL_CONTRACTION = "potential_contraction"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class GaugeFunction:
    """Scalar generating function of a gauge transformation.

    ``gradient_fn`` returns the contravariant gradient ``d^mu Lambda``;
    when it is missing, :meth:`gradient` falls back to finite differences.
    """

    kind: GaugeKind
    evaluator: Callable[[FourVector], float]
    gradient_fn: Optional[Callable[[FourVector], FourVector]] = None
    params: dict = field(default_factory=dict)

    def __call__(self, x: FourVector) -> float:
        return self.evaluator(x)

    def gradient(self, x: FourVector) -> FourVector:
        if self.gradient_fn is not None:
            return self.gradient_fn(x)
        return fd_gradient(self.evaluator, x)

    def __add__(self, other: "GaugeFunction") -> "GaugeFunction":
        return GaugeFunction(
            kind=GaugeKind.CUSTOM,
            evaluator=lambda x: self(x) + other(x),
            gradient_fn=lambda x: self.gradient(x) + other.gradient(x),
            params={"terms": (self, other)},
        )


def fd_gradient(fn: Callable[[FourVector], float], x: FourVector, h: Optional[float] = None) -> FourVector:
    """Contravariant gradient ``d^mu fn`` by fourth-order central differences."""
    if h is None:
        h = default_step(x)
    base = x.as_array()
    out = np.empty(4)
    for nu in range(4):
        e = np.zeros(4)
        e[nu] = h
        f = [fn(FourVector.from_iterable(base + s * e)) for s in (2.0, 1.0, -1.0, -2.0)]
        out[nu] = (-f[0] + 8.0 * f[1] - 8.0 * f[2] + f[3]) / (12.0 * h)
    return FourVector.from_iterable(out * METRIC)


def constant(value: float) -> GaugeFunction:
    return GaugeFunction(
        kind=GaugeKind.CONSTANT,
        evaluator=lambda x: value,
        gradient_fn=lambda x: FourVector.zero(),
        params={"value": value},
    )


def custom(
    evaluator: Callable[[FourVector], float],
    gradient: Optional[Callable[[FourVector], FourVector]] = None,
) -> GaugeFunction:
    return GaugeFunction(kind=GaugeKind.CUSTOM, evaluator=evaluator, gradient_fn=gradient)


def light_cone_gauge(
    lambda_prime: Callable[[float], float],
    k: FourVector,
    antiderivative: Optional[Callable[[float], float]] = None,
    lambda_double_prime: Optional[Callable[[float], float]] = None,
) -> GaugeFunction:
    """Gauge function ``Lambda(phi)`` that depends on the event only through ``k.x``.

    Its gradient is ``k * Lambda'(phi)``, so it shifts a potential along the
    light cone. ``antiderivative`` gives ``Lambda`` itself; without it the
    value is obtained by quadrature of ``lambda_prime`` from ``phi = 0``.

    Raises
    ------
    ValueError
        If ``k`` is not lightlike.
    """
    if classify(k, 1e-12) is not CausalClass.LIGHTLIKE or k.euclidean_norm_sq() == 0.0:
        raise ValueError(f"light-cone gauge needs a nonzero lightlike k, got {k}")

    if antiderivative is None:

        def antiderivative(phi):
            return integrate.quad(lambda_prime, 0.0, phi, epsabs=1e-13, epsrel=1e-12, limit=200)[0]

    return GaugeFunction(
        kind=GaugeKind.LIGHTCONE,
        evaluator=lambda x: antiderivative(phase(k, x)),
        gradient_fn=lambda x: k * lambda_prime(phase(k, x)),
        params={
            "k": k,
            "lambda_prime": lambda_prime,
            "lambda_double_prime": lambda_double_prime,
        },
    )


def lambda_from_potential(A: PotentialField) -> GaugeFunction:
    """Generating function ``Lambda = -A^mu(phi) x_mu`` built from a plane wave.

    Raises
    ------
    ValueError
        If ``A`` is not a phase-only field with an analytic phase derivative.
    """
    if A.kind not in (FieldKind.PLANE_WAVE, FieldKind.SUPERPOSITION) or not A.is_phase_only \
            or A.profile.first is None:
        raise ValueError("Lambda = -A.x needs a plane-wave potential with an analytic phase derivative")
    k = A.k
    value, first = A.profile.value, A.profile.first

    def evaluator(x):
        return -minkowski_dot(value(phase(k, x)), x)

    def gradient(x):
        phi = phase(k, x)
        return k * (-minkowski_dot(x, first(phi))) - value(phi)

    return GaugeFunction(
        kind=GaugeKind.POTENTIAL_CONTRACTION,
        evaluator=evaluator,
        gradient_fn=gradient,
        params={"potential": A},
    )


def apply_gauge(A: PotentialField, L: GaugeFunction) -> PotentialField:
    """Gauge-transformed potential ``A + d^mu Lambda``."""
    profile = None
    jacobian = None
    if L.kind is GaugeKind.CONSTANT:
        profile, jacobian = A.profile, A.jacobian
    elif L.kind is GaugeKind.LIGHTCONE and A.is_phase_only and _parallel(A.k, L.params["k"]):
        k = L.params["k"]
        lp, lpp = L.params["lambda_prime"], L.params["lambda_double_prime"]
        shift_first = (lambda phi: k * lpp(phi)) if lpp is not None else None
        profile = A.profile + PhaseProfile(value=lambda phi: k * lp(phi), first=shift_first)
        if lpp is not None and A.jacobian is not None:
            kk = np.outer(k.as_array(), k.as_array() * METRIC)

            def jacobian(x):
                return A.jacobian(x) + kk * lpp(phase(k, x))

    return PotentialField(
        kind=FieldKind.GAUGE_TRANSFORMED,
        evaluator=lambda x: A(x) + L.gradient(x),
        params={"gauge_kind": L.kind.value},
        k=A.k,
        profile=profile,
        jacobian=jacobian,
        singular_distance=A.singular_distance,
        base=A,
        gauge=L,
    )


def _parallel(a: Optional[FourVector], b: FourVector) -> bool:
    if a is None:
        return False
    return all(abs(u - v) <= 1e-12 * max(1.0, abs(u)) for u, v in zip(a, b))


def wave_equation_residual(L: GaugeFunction, x: FourVector, h: float = WAVE_EQUATION_STEP) -> float:
    """d'Alembertian ``(1/c^2) d2/dt2 - laplacian`` of ``Lambda`` at ``x``.

    Second-order central differences in event coordinates.
    """
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    base = x.as_array()
    centre = L(x)
    total = 0.0
    for nu in range(4):
        e = np.zeros(4)
        e[nu] = h
        second = (L(FourVector.from_iterable(base + e)) - 2.0 * centre
                  + L(FourVector.from_iterable(base - e))) / (h * h)
        total += METRIC[nu] * second
    return float(total)
