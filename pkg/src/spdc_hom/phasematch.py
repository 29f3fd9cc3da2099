"""Phase matching of noncollinear, frequency-nondegenerate type-I emission.

The nondegeneracy ``xi = (omega_h - omega_l) / omega0`` fixes the two central
frequencies; together with the crystal orientation ``phi0`` it fixes the
noncollinearity angle ``theta0`` and the two emission cones.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .dispersion import index_extraordinary_at_angle, index_ordinary
from .errors import NoCollinearSolutionError
from .units import wavelength_to_omega

#: |n_eff - n_p| below this is treated as exactly collinear.
COLLINEAR_TOL = 1e-10
#: Bracket (rad) scanned for the collinear orientation.
PHI_BRACKET = (0.05, 1.5)
#: Uniform scan size used before local refinement of extrema.
SCAN_POINTS = 2001


class Regime(str, enum.Enum):
    COLLINEAR = "collinear"
    NONCOLLINEAR = "noncollinear"
    FORBIDDEN = "forbidden"


@dataclass(frozen=True)
class NondegeneracyPoint:
    """Central frequencies (rad/fs) and wavelengths (um) of the two photons."""

    xi: float
    omega0: float
    omega_h: float
    omega_l: float
    lambda_plus: float
    lambda_minus: float


def nondegeneracy_point(lambda_p, xi):
    if not (0.0 <= xi < 1.0):
        raise ValueError("xi must lie in [0, 1)")
    omega0 = float(wavelength_to_omega(lambda_p))
    omega_h = omega0 * (1.0 + xi) / 2.0
    return NondegeneracyPoint(
        xi=xi,
        omega0=omega0,
        omega_h=omega_h,
        omega_l=omega0 - omega_h,
        lambda_plus=2.0 * lambda_p / (1.0 + xi),
        lambda_minus=2.0 * lambda_p / (1.0 - xi),
    )


def sideband_wavelengths(lambda_p, xi):
    xi = np.asarray(xi, dtype=float)
    return 2.0 * lambda_p / (1.0 + xi), 2.0 * lambda_p / (1.0 - xi)


def effective_index(crystal, lambda_p, xi):
    """Frequency-weighted mean ordinary index of the photon pair, n_eff(xi)."""
    xi = np.asarray(xi, dtype=float)
    lam_plus, lam_minus = sideband_wavelengths(lambda_p, xi)
    return (1.0 + xi) / 2.0 * index_ordinary(crystal, lam_plus) + (1.0 - xi) / 2.0 * index_ordinary(
        crystal, lam_minus
    )


def effective_index_N(crystal, lambda_p, xi):
    """N_eff(xi) = (1 - xi^2) n_o(lam+) n_o(lam-) / n_eff(xi); enters the transverse mismatch."""
    xi = np.asarray(xi, dtype=float)
    lam_plus, lam_minus = sideband_wavelengths(lambda_p, xi)
    product = index_ordinary(crystal, lam_plus) * index_ordinary(crystal, lam_minus)
    return (1.0 - xi**2) * product / effective_index(crystal, lambda_p, xi)


def pump_index(crystal, lambda_p, phi0):
    return index_extraordinary_at_angle(crystal, lambda_p, phi0)


def index_mismatch(crystal, lambda_p, phi0, xi):
    """n_eff(xi) - n_p(phi0): positive means noncollinear, negative forbidden."""
    return effective_index(crystal, lambda_p, xi) - pump_index(crystal, lambda_p, phi0)


def _classify(mismatch):
    if abs(mismatch) <= COLLINEAR_TOL:
        return Regime.COLLINEAR
    return Regime.NONCOLLINEAR if mismatch > 0 else Regime.FORBIDDEN


def regime(crystal, lambda_p, phi0, xi):
    return _classify(float(index_mismatch(crystal, lambda_p, phi0, xi)))


def theta0(crystal, lambda_p, phi0, xi):
    """Noncollinearity angle theta0 (rad); NaN where emission is forbidden.

    ``theta0^2 = 2 N_eff (n_eff - n_p(phi0))``. Inside the collinear
    tolerance the angle is exactly zero.
    """
    xi = np.asarray(xi, dtype=float)
    mismatch = index_mismatch(crystal, lambda_p, phi0, xi)
    radicand = 2.0 * effective_index_N(crystal, lambda_p, xi) * mismatch
    out = np.where(mismatch > COLLINEAR_TOL, np.sqrt(np.abs(radicand)), np.nan)
    out = np.where(np.abs(mismatch) <= COLLINEAR_TOL, 0.0, out)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ConeGeometry:
    """Emission-cone angles (rad) at one (phi0, xi).

    ``delta_theta_L`` is the angular width of the phase-matching sinc;
    ``validity_ratio = theta0 / delta_theta_L`` must be large for the
    two-sinc split to hold, as must ``mismatch / mismatch_scale``.
    """

    xi: float
    theta0: float
    theta_inner: float
    theta_outer: float
    delta_theta_L: float
    regime: Regime
    mismatch: float
    mismatch_scale: float

    @property
    def validity_ratio(self):
        return self.theta0 / self.delta_theta_L

    @property
    def two_sinc_valid(self):
        return self.regime is Regime.NONCOLLINEAR and self.mismatch > 10.0 * self.mismatch_scale


def cone_geometry(crystal, setup, xi):
    lp = setup.lambda_p_um
    mismatch = float(index_mismatch(crystal, lp, setup.phi0_rad, xi))
    kind = _classify(mismatch)
    scale = lp / (2.0 * math.pi * setup.L_um)
    if kind is Regime.FORBIDDEN:
        nan = math.nan
        return ConeGeometry(xi, nan, nan, nan, nan, kind, mismatch, scale)
    t0 = float(theta0(crystal, lp, setup.phi0_rad, xi))
    if kind is Regime.COLLINEAR or t0 == 0.0:
        width = math.nan
    else:
        width = lp / (math.pi * setup.L_um) * float(effective_index_N(crystal, lp, xi)) / t0
    return ConeGeometry(
        xi=xi,
        theta0=t0,
        theta_inner=t0 / (1.0 + xi),
        theta_outer=t0 / (1.0 - xi),
        delta_theta_L=width,
        regime=kind,
        mismatch=mismatch,
        mismatch_scale=scale,
    )


def collinear_angle(crystal, lambda_p, xi):
    """Orientation phi0 (rad) at which emission with nondegeneracy xi is collinear."""
    target = float(effective_index(crystal, lambda_p, xi))

    def f(phi):
        return float(pump_index(crystal, lambda_p, phi)) - target

    lo, hi = PHI_BRACKET
    grid = np.linspace(lo, hi, 65)
    values = pump_index(crystal, lambda_p, grid) - target
    sign_change = np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]
    if values[0] == 0.0:
        return lo
    if sign_change.size == 0:
        raise NoCollinearSolutionError(
            f"n_p(phi) never equals n_eff({xi:g}) = {target:.6f} for phi in {PHI_BRACKET}"
        )
    i = sign_change[0]
    return optimize.brentq(f, grid[i], grid[i + 1], xtol=1e-13, rtol=4 * np.finfo(float).eps)


def collinear_angle_ellipsoid(crystal, lambda_p, xi):
    """Vectorised collinear orientation from inverting the index ellipsoid.

    Solves ``cos^2/n_o^2 + sin^2/n_e^2 = 1/n_eff^2`` for ``sin^2(phi)``; NaN
    where no orientation in [0, pi/2] works.
    """
    from .dispersion import index_extraordinary

    inv_eff = 1.0 / effective_index(crystal, lambda_p, xi) ** 2
    inv_o = 1.0 / index_ordinary(crystal, lambda_p) ** 2
    inv_e = 1.0 / index_extraordinary(crystal, lambda_p) ** 2
    s2 = (inv_eff - inv_o) / (inv_e - inv_o)
    with np.errstate(invalid="ignore"):
        out = np.where((s2 >= 0) & (s2 <= 1), np.arcsin(np.sqrt(np.clip(s2, 0, 1))), np.nan)
    return out if out.ndim else float(out)


def xi_max(crystal, lambda_p):
    """Largest xi keeping the low-frequency photon inside the window."""
    hi = crystal.window_um[1]
    x = 1.0 - 2.0 * lambda_p / hi
    if x <= 0.0:
        return 0.0
    # step down by ulps so the closed form never lands just outside the window
    while 2.0 * lambda_p / (1.0 - x) > hi:
        x = math.nextafter(x, 0.0)
    return x


def _refine_extremum(func, grid, values, maximize):
    i = int(np.argmax(values) if maximize else np.argmin(values))
    if i == 0 or i == len(grid) - 1:
        return float(grid[i]), float(values[i])
    sign = -1.0 if maximize else 1.0
    res = optimize.minimize_scalar(
        lambda x: sign * func(x),
        bracket=(grid[i - 1], grid[i], grid[i + 1]),
        method="golden",
        tol=1e-10,
    )
    return float(res.x), float(func(res.x))


def effective_index_maximum(crystal, lambda_p):
    """Location and value of the interior maximum of n_eff over [0, xi_max]."""
    grid = np.linspace(0.0, xi_max(crystal, lambda_p), SCAN_POINTS)
    values = effective_index(crystal, lambda_p, grid)
    return _refine_extremum(lambda x: float(effective_index(crystal, lambda_p, x)), grid, values, True)


@dataclass(frozen=True)
class CollinearRange:
    """Extremes of the collinear orientation over all reachable xi."""

    phi_min: float
    xi_at_min: float
    phi_max: float
    xi_at_max: float


def collinear_range(crystal, lambda_p, points=SCAN_POINTS):
    grid = np.linspace(0.0, xi_max(crystal, lambda_p), points)
    values = collinear_angle_ellipsoid(crystal, lambda_p, grid)
    if np.any(np.isnan(values)):
        raise NoCollinearSolutionError("collinear orientation missing for part of the xi range")

    def f(x):
        return collinear_angle(crystal, lambda_p, x)

    xi_lo, phi_lo = _refine_extremum(f, grid, values, maximize=False)
    xi_hi, phi_hi = _refine_extremum(f, grid, values, maximize=True)
    return CollinearRange(phi_min=phi_lo, xi_at_min=xi_lo, phi_max=phi_hi, xi_at_max=xi_hi)
