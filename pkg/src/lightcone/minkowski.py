"""Flat-spacetime four-vector algebra with metric signature (+, -, -, -)."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

METRIC = np.array([1.0, -1.0, -1.0, -1.0])

UNIT_TOLERANCE = 1e-12


class CausalClass(enum.Enum):
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"


@dataclass(frozen=True, slots=True)
class FourVector:
    """Contravariant four-vector ``(t, x, y, z)``.

    The time slot holds ``ct`` for events, ``omega/c`` for propagation
    vectors and the scalar potential for four-potentials.
    """

    t: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"non-finite four-vector component {name}={value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_iterable(cls, values: Iterable[float]) -> "FourVector":
        t, x, y, z = values
        return cls(t, x, y, z)

    @classmethod
    def zero(cls) -> "FourVector":
        return cls(0.0, 0.0, 0.0, 0.0)

    @classmethod
    def event(cls, t: float, r: Sequence[float], c: float = 1.0) -> "FourVector":
        """Spacetime event ``(ct, r)`` at lab time ``t``."""
        return cls(c * t, r[0], r[1], r[2])

    @property
    def spatial(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.t, self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple())

    def lowered(self) -> "FourVector":
        """Covariant components ``v_mu``."""
        return FourVector(self.t, -self.x, -self.y, -self.z)

    def euclidean_norm_sq(self) -> float:
        return self.t * self.t + self.x * self.x + self.y * self.y + self.z * self.z

    def __iter__(self):
        return iter(self.as_tuple())

    def __add__(self, other: "FourVector") -> "FourVector":
        return FourVector(self.t + other.t, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "FourVector") -> "FourVector":
        return FourVector(self.t - other.t, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "FourVector":
        return FourVector(-self.t, -self.x, -self.y, -self.z)

    def __mul__(self, s: float) -> "FourVector":
        return FourVector(s * self.t, s * self.x, s * self.y, s * self.z)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> "FourVector":
        return FourVector(self.t / s, self.x / s, self.y / s, self.z / s)


def minkowski_dot(a: FourVector, b: FourVector) -> float:
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z


def phase(k: FourVector, x: FourVector) -> float:
    """Phase ``k^mu x_mu = omega t - k.r`` of a wave with propagation vector ``k``."""
    return minkowski_dot(k, x)


def make_propagation_vector(omega: float, direction: Sequence[float], c: float = 1.0) -> FourVector:
    """Lightlike propagation vector ``(omega/c, (omega/c) n)``.

    Raises
    ------
    ValueError
        If ``direction`` is not a unit vector to within 1e-12, or if
        ``omega`` or ``c`` is not positive.
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    if not c > 0:
        raise ValueError(f"c must be positive, got {c!r}")
    nx, ny, nz = (float(v) for v in direction)
    norm = math.sqrt(nx * nx + ny * ny + nz * nz)
    if abs(norm - 1.0) > UNIT_TOLERANCE:
        raise ValueError(
            f"propagation direction must be a unit vector, |n| = {norm!r} "
            f"(deviation {abs(norm - 1.0):.3e} > {UNIT_TOLERANCE:g})"
        )
    kk = omega / c
    return FourVector(kk, kk * nx, kk * ny, kk * nz)


def normalize(direction: Sequence[float]) -> tuple[float, float, float]:
    nx, ny, nz = (float(v) for v in direction)
    norm = math.sqrt(nx * nx + ny * ny + nz * nz)
    if norm == 0.0:
        raise ValueError("cannot normalize a zero direction")
    return (nx / norm, ny / norm, nz / norm)


def classify(v: FourVector, tol: float) -> CausalClass:
    """Causal class of ``v`` from the sign of ``v.v``.

    ``v`` is lightlike when ``|v.v| <= tol * max(1, |v|_E^2)``, so the test
    stays meaningful for vectors of large Euclidean size.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    norm = minkowski_dot(v, v)
    if abs(norm) <= tol * max(1.0, v.euclidean_norm_sq()):
        return CausalClass.LIGHTLIKE
    if norm < 0:
        return CausalClass.SPACELIKE
    return CausalClass.TIMELIKE
