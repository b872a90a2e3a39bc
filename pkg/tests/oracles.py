"""Independent reference solutions used by the test-suite."""
import math

import numpy as np


def plane_wave_orbit(t, A0, q=-1.0, m=1.0, c=1.0, omega=1.0):
    """Exact orbit of a charge released at rest at the origin at t=0.

    Linearly polarized wave along +z, ``A = (0, A0 sin(phi), 0, 0)`` with
    ``phi = omega t - (omega/c) z``. Transverse canonical momentum is
    conserved and ``gamma - p_z/(m c) = 1``; the orbit is closed-form in
    the phase and ``t(phi)`` is inverted by Newton iteration.

    Returns position (3,) and momentum (3,).
    """
    a = q * A0 / c

    def z_of(phi):
        return a * a / (2.0 * m * m * c * omega) * (phi / 2.0 - math.sin(2.0 * phi) / 4.0)

    def gamma_of(phi):
        px = -a * math.sin(phi)
        return 1.0 + px * px / (2.0 * m * m * c * c)

    phi = omega * t
    for _ in range(100):
        F = phi / omega + z_of(phi) / c - t
        step = F / (gamma_of(phi) / omega)
        phi -= step
        if abs(step) < 1e-15 * max(1.0, abs(phi)):
            break
    px = -a * math.sin(phi)
    pz = px * px / (2.0 * m * c)
    x = a / (m * omega) * (math.cos(phi) - 1.0)
    return np.array([x, 0.0, z_of(phi)]), np.array([px, 0.0, pz])


def cycle_average(fn, n=4096):
    """Mean of ``fn`` over one period by scipy quadrature."""
    from scipy import integrate

    return integrate.quad(fn, 0.0, 2.0 * math.pi, limit=400, epsabs=1e-14)[0] / (2.0 * math.pi)
