"""First-order frequency expansion of the phase mismatch and derived time scales.

The linear mismatch ``A_plus * nu_plus - A_minus * nu_minus`` (over ``c``) is
written in the detunings ``nu_plus = omega1 + omega2 - omega0`` and
``nu_minus = omega1 - omega2 - xi*omega0``. All returned times are
dimensionless, in units of ``1/omega0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .dispersion import group_index
from .phasematch import nondegeneracy_point, xi_max
from .units import SINC_GAUSS_ALPHA

#: Pulses at least this many times longer than tau_gr count as long.
LONG_PULSE_FACTOR = 10.0
#: |A_minus| below this makes the first-order model fragile.
FRAGILE_A_MINUS = 1e-3


class PulseRegime(str, enum.Enum):
    LONG = "long_pulse"
    SHORT = "short_pulse"


@dataclass(frozen=True)
class GroupDelayCoefficients:
    """Group indices of pump (A_p) and of the high/low photons (A_h, A_l)."""

    xi: float
    phi0: float
    A_p: float
    A_h: float
    A_l: float

    @property
    def A_plus(self):
        return self.A_p - (self.A_h + self.A_l) / 2.0

    @property
    def A_minus(self):
        return (self.A_h - self.A_l) / 2.0

    @property
    def fragile(self):
        return abs(self.A_minus) < FRAGILE_A_MINUS


def coefficients(crystal, lambda_p, phi0, xi):
    point = nondegeneracy_point(lambda_p, xi)
    return GroupDelayCoefficients(
        xi=float(xi),
        phi0=float(phi0),
        A_p=float(group_index(crystal, point.omega0, "e", phi0)),
        A_h=float(group_index(crystal, point.omega_h, "o")),
        A_l=float(group_index(crystal, point.omega_l, "o")),
    )


def a_minus(crystal, lambda_p, xi):
    """Vectorised A_minus(xi); it is independent of the crystal orientation."""
    xi = np.asarray(xi, dtype=float)
    omega0 = nondegeneracy_point(lambda_p, 0.0).omega0
    a_h = group_index(crystal, omega0 * (1.0 + xi) / 2.0, "o")
    a_l = group_index(crystal, omega0 * (1.0 - xi) / 2.0, "o")
    return (a_h - a_l) / 2.0


def a_plus(crystal, lambda_p, phi0, xi):
    xi = np.asarray(xi, dtype=float)
    omega0 = nondegeneracy_point(lambda_p, 0.0).omega0
    a_p = group_index(crystal, omega0, "e", phi0)
    a_h = group_index(crystal, omega0 * (1.0 + xi) / 2.0, "o")
    a_l = group_index(crystal, omega0 * (1.0 - xi) / 2.0, "o")
    return a_p - (a_h + a_l) / 2.0


def a_minus_zero(crystal, lambda_p, points=2001):
    """Nontrivial zero of A_minus(xi) inside (0, xi_max), located by bisection."""
    top = xi_max(crystal, lambda_p)
    # keep the derivative stencil of the low-frequency photon inside the window
    grid = np.linspace(0.0, top * (1 - 1e-3), points)[1:]
    values = a_minus(crystal, lambda_p, grid)
    flips = np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]
    if flips.size == 0:
        raise ValueError("A_minus keeps one sign on (0, xi_max)")
    i = flips[0]
    return optimize.brentq(
        lambda x: float(a_minus(crystal, lambda_p, x)), grid[i], grid[i + 1], xtol=1e-13
    )


@dataclass(frozen=True)
class TimeScales:
    """Characteristic times in units of 1/omega0.

    ``T_osc`` is the quantum-beat period, ``T_decoh`` the time over which the
    interference washes out, and ``tau_gr`` the pump/photon group-delay
    walk-off time that sets the long-pulse condition.
    """

    T_osc: float
    T_decoh: float
    tau_gr: float

    @property
    def oscillation_count(self):
        """T_decoh / T_osc, a proxy for the number of visible beats."""
        if math.isinf(self.T_osc):
            return 0.0
        return self.T_decoh / self.T_osc


def timescales(coeffs, setup, xi=None):
    xi = coeffs.xi if xi is None else xi
    t_osc = math.inf if xi == 0 else 2.0 * math.pi / xi
    t_decoh = math.sqrt(2.0 * SINC_GAUSS_ALPHA) * setup.length_time(abs(coeffs.A_minus))
    tau_gr = setup.length_time(abs(coeffs.A_plus)) / 2.0
    return TimeScales(T_osc=t_osc, T_decoh=t_decoh, tau_gr=tau_gr)


def pulse_regime(setup, coeffs=None, tau_gr_fs=None):
    """Classify the pump as long (tau >= 10 tau_gr) or short.

    ``tau_gr_fs`` overrides the value derived from ``coeffs``.
    """
    if setup.tau_ps <= 0:
        raise ValueError("pump duration must be positive")
    if tau_gr_fs is None:
        tau_gr_fs = timescales(coeffs, setup).tau_gr / setup.omega0
    if setup.tau_fs >= LONG_PULSE_FACTOR * tau_gr_fs:
        return PulseRegime.LONG
    return PulseRegime.SHORT
