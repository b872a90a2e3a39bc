"""Relativistic charged-particle motion and ponderomotive observables.

Gaussian units throughout: the force is ``q (E + v x B / c)`` and the
momentum is ``p = gamma m v``. Events handed to a potential are
``(ct, r)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Optional, Sequence, Union

import numpy as np

from .minkowski import FourVector, phase
from .potential import (
    DEFAULT_R_MIN,
    FieldKind,
    PotentialField,
    SingularityError,
    evaluate_fields,
    fields_from_jacobian,
)

MIN_DRIFT_PERIODS = 5


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class ParticleState:
    t: float
    r: tuple
    p: tuple
    q: float = -1.0
    m: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("particle mass must be positive")
        object.__setattr__(self, "r", tuple(float(v) for v in self.r))
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))

    def gamma(self, c: float = 1.0) -> float:
        px, py, pz = self.p
        return math.sqrt(1.0 + (px * px + py * py + pz * pz) / (self.m * c) ** 2)

    def kinetic_energy(self, c: float = 1.0) -> float:
        mc2 = self.m * c * c
        px, py, pz = self.p
        p2c2 = (px * px + py * py + pz * pz) * c * c
        # (gamma - 1) m c^2 written to avoid cancellation at low momentum
        return p2c2 / (math.sqrt(mc2 * mc2 + p2c2) + mc2)


@dataclass
class Trajectory:
    samples: list
    dt: float
    stride: int = 1
    field_descriptor: str = ""
    c: float = 1.0
    truncated: bool = False
    diagnostic: Optional[str] = None

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def positions(self) -> np.ndarray:
        return np.array([s.r for s in self.samples])

    @property
    def momenta(self) -> np.ndarray:
        return np.array([s.p for s in self.samples])

    @property
    def gammas(self) -> np.ndarray:
        return np.array([s.gamma(self.c) for s in self.samples])

    def write_csv(self, out: Union[str, IO[str]]) -> None:
        """Delimited export: ``t,x,y,z,px,py,pz,gamma`` at 17 significant digits."""
        if isinstance(out, str):
            with open(out, "w", encoding="utf-8", newline="") as fh:
                self.write_csv(fh)
            return
        out.write("t,x,y,z,px,py,pz,gamma\n")
        for s in self.samples:
            row = (s.t, *s.r, *s.p, s.gamma(self.c))
            out.write(",".join(f"{v:.17g}" for v in row) + "\n")


@dataclass(frozen=True)
class PonderomotiveSummary:
    U_p: Optional[float]
    drift_p_parallel: float
    n_photons: Optional[float] = None
    periods_averaged: int = 0

    def to_dict(self) -> dict:
        return {
            "U_p": self.U_p,
            "drift_p_parallel": self.drift_p_parallel,
            "n_photons": self.n_photons,
            "periods_averaged": self.periods_averaged,
        }


def ponderomotive_energy(f: PotentialField, q: float, m: float, c: float = 1.0,
                         n_points: int = 256) -> float:
    """Cycle-averaged ``U_p = -q^2 <A.A> / (2 m c^2)`` of a transverse field.

    The average runs over one period of phase after any turn-on ramp.

    Raises
    ------
    ValueError
        If ``f`` does not depend on the event through the phase alone.
    """
    if not f.is_phase_only:
        raise ValueError(f"ponderomotive energy needs a transverse (phase-only) field, got {f.kind.value}")
    start = f.profile.steady_phase
    phis = start + 2.0 * math.pi * np.arange(n_points) / n_points
    mean_sq = 0.0
    for phi in phis:
        a = f.profile.value(float(phi))
        mean_sq += a.t * a.t - a.x * a.x - a.y * a.y - a.z * a.z
    mean_sq /= n_points
    return -q * q * mean_sq / (2.0 * m * c * c) + 0.0


def photon_number(U_p: float, omega: float, hbar: float) -> float:
    if not omega > 0 or not hbar > 0:
        raise ValueError("omega and hbar must be positive")
    return U_p / (hbar * omega)


def lab_period(omega: float, U_p: float, m: float, c: float = 1.0) -> float:
    """Lab-frame period seen by a charge that started at rest ahead of the wave.

    Its phase advances at ``omega / gamma`` and ``<gamma> = 1 + U_p/(m c^2)``.
    """
    return 2.0 * math.pi / omega * (1.0 + U_p / (m * c * c))


def dipole_freeze(f: PotentialField, anchor: Sequence[float]) -> PotentialField:
    """Dipole approximation of ``f``: the potential at ``anchor`` for all positions.

    The result depends on time only, so its magnetic field vanishes and its
    electric field is the one ``f`` has at ``anchor``.
    """
    ax, ay, az = (float(v) for v in anchor)

    def pinned(x):
        return FourVector(x.t, ax, ay, az)

    jacobian = None
    if f.jacobian is not None:

        def jacobian(x):
            J = np.array(f.jacobian(pinned(x)), dtype=float)
            J[:, 1:] = 0.0
            return J

    singular_distance = None
    if f.singular_distance is not None:
        d = f.singular_distance(FourVector(0.0, ax, ay, az))
        singular_distance = lambda x: d  # noqa: E731

    return PotentialField(
        kind=FieldKind.DIPOLE,
        evaluator=lambda x: f(pinned(x)),
        params={"anchor": (ax, ay, az), "source_kind": f.kind.value},
        k=f.k,
        jacobian=jacobian,
        singular_distance=singular_distance,
        base=f,
    )


def field_sampler(f: PotentialField, analytic: bool = True):
    """Return ``event -> (E, B)`` as plain float tuples."""
    if analytic and f.jacobian is not None:

        def sample(x):
            E, B = fields_from_jacobian(f.jacobian(x))
            return tuple(E.tolist()), tuple(B.tolist())
    else:

        def sample(x):
            s = evaluate_fields(f, x)
            return tuple(s.E.tolist()), tuple(s.B.tolist())

    return sample


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def boris_momentum(p, E, B, q, m, c, dt):
    """Half electric kick, magnetic rotation, half electric kick."""
    h = 0.5 * q * dt
    um = (p[0] + h * E[0], p[1] + h * E[1], p[2] + h * E[2])
    gm = math.sqrt(1.0 + (um[0] ** 2 + um[1] ** 2 + um[2] ** 2) / (m * c) ** 2)
    f = h / (gm * m * c)
    t = (f * B[0], f * B[1], f * B[2])
    s_fac = 2.0 / (1.0 + t[0] ** 2 + t[1] ** 2 + t[2] ** 2)
    s = (s_fac * t[0], s_fac * t[1], s_fac * t[2])
    c1 = _cross(um, t)
    up = (um[0] + c1[0], um[1] + c1[1], um[2] + c1[2])
    c2 = _cross(up, s)
    uplus = (um[0] + c2[0], um[1] + c2[1], um[2] + c2[2])
    return (uplus[0] + h * E[0], uplus[1] + h * E[1], uplus[2] + h * E[2])


def simulate(init: ParticleState, f: PotentialField, t_end: float, dt: float,
             stride: int = 1, c: float = 1.0, analytic: bool = True,
             r_min: float = DEFAULT_R_MIN) -> Trajectory:
    """Integrate ``dp/dt = q (E + v x B / c)`` from ``init`` to ``t_end``.

    Each step drifts the position half a step, samples the fields there,
    updates the momentum with :func:`boris_momentum` and drifts the second
    half, which keeps the scheme second order and time symmetric. A state
    is recorded every ``stride`` steps.

    If the particle comes within ``r_min`` of a field singularity the
    trajectory is returned truncated with a diagnostic.

    Raises
    ------
    SimulationError
        If the state becomes non-finite.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not t_end > init.t:
        raise ValueError("t_end must be later than the initial time")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    n_steps = max(1, math.ceil((t_end - init.t) / dt - 1e-9))
    q, m = init.q, init.m
    t0 = init.t
    rx, ry, rz = init.r
    p = init.p
    sample = field_sampler(f, analytic)
    mc = m * c
    half = 0.5 * dt
    traj = Trajectory([init], dt, stride, f"{f.kind.value}", c)
    for i in range(n_steps):
        g = math.sqrt(1.0 + (p[0] ** 2 + p[1] ** 2 + p[2] ** 2) / (mc * mc))
        k = half / (g * m)
        rx, ry, rz = rx + k * p[0], ry + k * p[1], rz + k * p[2]
        x = FourVector(c * (t0 + (i + 0.5) * dt), rx, ry, rz)
        try:
            if f.singular_distance is not None and f.singular_distance(x) < r_min:
                raise SingularityError(f"particle within r_min={r_min:g} of a singularity")
            E, B = sample(x)
        except SingularityError as exc:
            traj.truncated = True
            traj.diagnostic = f"stopped at t={x.t / c:.6g}: {exc}"
            return traj
        except ValueError as exc:
            raise SimulationError(f"non-finite field at t={x.t / c:.6g}: {exc}") from exc
        p = boris_momentum(p, E, B, q, m, c, dt)
        g = math.sqrt(1.0 + (p[0] ** 2 + p[1] ** 2 + p[2] ** 2) / (mc * mc))
        k = half / (g * m)
        rx, ry, rz = rx + k * p[0], ry + k * p[1], rz + k * p[2]
        if not all(math.isfinite(v) for v in (rx, ry, rz, *p)):
            raise SimulationError(f"non-finite particle state at step {i + 1}")
        if (i + 1) % stride == 0:
            traj.samples.append(ParticleState(t0 + (i + 1) * dt, (rx, ry, rz), p, q, m))
    return traj


def steady_state_start(traj: Trajectory, k: FourVector, steady_phase: float) -> float:
    """First sampled time at which the particle sees phase >= ``steady_phase``."""
    for s in traj.samples:
        if phase(k, FourVector.event(s.t, s.r, traj.c)) >= steady_phase:
            return s.t
    raise ValueError("trajectory too short: it never reaches the steady part of the wave")


def drift_momentum(traj: Trajectory, k_dir: Sequence[float], period: float,
                   n_periods: Optional[int] = None, t_start: Optional[float] = None,
                   U_p: Optional[float] = None, omega: Optional[float] = None,
                   hbar: Optional[float] = None) -> PonderomotiveSummary:
    """Cycle-averaged momentum along ``k_dir`` over the last full periods.

    Only samples after ``t_start`` (default: first sample) are used. The
    average covers ``n_periods`` periods ending at the last sample, or every
    full period available when ``n_periods`` is ``None``.

    Raises
    ------
    ValueError
        If fewer than five periods are available.
    """
    if not period > 0:
        raise ValueError("period must be positive")
    ts = traj.times
    if t_start is None:
        t_start = float(ts[0])
    available = int(math.floor((ts[-1] - t_start) / period + 1e-9))
    if n_periods is None:
        n_periods = available
    if n_periods < MIN_DRIFT_PERIODS or n_periods > available:
        raise ValueError(
            f"trajectory too short: {available} full periods after t={t_start:g}, "
            f"need {max(n_periods, MIN_DRIFT_PERIODS)}"
        )
    kx, ky, kz = k_dir
    pk = traj.momenta @ np.array([kx, ky, kz], dtype=float)
    w0 = ts[-1] - n_periods * period
    mask = ts > w0
    tw = np.concatenate(([w0], ts[mask]))
    vw = np.concatenate(([np.interp(w0, ts, pk)], pk[mask]))
    drift = float(np.trapezoid(vw, tw) / (n_periods * period))
    n_ph = None
    if U_p is not None and omega is not None and hbar is not None:
        n_ph = photon_number(U_p, omega, hbar)
    return PonderomotiveSummary(U_p, drift, n_ph, n_periods)
