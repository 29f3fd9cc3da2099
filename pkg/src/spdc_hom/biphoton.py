"""Biphoton wavefunctions behind two- and four-slit angular selection.

Frequencies are in units of omega0 and times in units of 1/omega0. The
two-column slit structure is kept implicit: ``F(t1, t2)`` is the amplitude of
the (+, -) path, where the photon at positive angle arrives at ``t1``, and the
(-, +) path carries ``F(t2, t1)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .config import normalize_scheme
from .errors import DegenerateWidthError, ForbiddenRegimeError, UnsupportedRegimeError
from .groupdelay import PulseRegime, coefficients, pulse_regime
from .phasematch import Regime, cone_geometry
from .quadrature import integrate_2d
from .units import SINC_GAUSS_ALPHA

KERNELS = ("sinc", "gaussian")


@dataclass(frozen=True)
class BiphotonParams:
    """Dimensionless parameters of the reduced wavefunctions.

    ``sigma = omega0 L A_minus / c`` (signed) sets the temporal width,
    ``sigma_plus = omega0 L A_plus / c`` the pump walk-off and ``tau`` the
    pump duration times omega0.
    """

    xi: float
    sigma: float
    sigma_plus: float
    tau: float
    scheme: str
    fragile: bool = False

    @property
    def width2(self):
        """Gaussian-model variance scale ``alpha sigma^2``."""
        return SINC_GAUSS_ALPHA * self.sigma**2

    @property
    def static_visibility(self):
        """exp(-xi^2 alpha sigma^2 / 2): overlap of the two frequency-shifted kernels."""
        return math.exp(-self.xi**2 * self.width2 / 2.0)


@functools.lru_cache(maxsize=512)
def biphoton_params(setup, xi, scheme=None):
    """Resolve :class:`BiphotonParams`, enforcing the long-pulse model's preconditions."""
    scheme = normalize_scheme(scheme or setup.scheme)
    coeffs = coefficients(setup.crystal, setup.lambda_p_um, setup.phi0_rad, xi)
    if pulse_regime(setup, coeffs) is PulseRegime.SHORT:
        raise UnsupportedRegimeError(
            f"pump of {setup.tau_ps:g} ps is not long compared with the group walk-off"
        )
    if coeffs.A_minus == 0.0:
        raise DegenerateWidthError(f"A_minus vanishes at xi={xi:g}")
    return BiphotonParams(
        xi=float(xi),
        sigma=setup.length_time(coeffs.A_minus),
        sigma_plus=setup.length_time(coeffs.A_plus),
        tau=setup.tau_fs * setup.omega0,
        scheme=scheme,
        fragile=coeffs.fragile,
    )


def _kernel(x, kernel):
    if kernel == "sinc":
        return np.sinc(x / np.pi)
    if kernel == "gaussian":
        return np.exp(-SINC_GAUSS_ALPHA * x**2)
    raise ValueError(f"kernel must be one of {KERNELS}")


def two_frequency_wf_detuned(params, dt, nu_plus, nu_minus, kernel="sinc"):
    """Two-frequency amplitude of the (+, -) path in detuning variables.

    ``nu_plus = omega1 + omega2 - 1`` and ``nu_minus = omega1 - omega2 - xi``.
    The four-slit scheme adds the mirror term with ``xi -> -xi``, whose kernel
    sits at ``nu_minus = -2 xi``.
    """
    nu_plus = np.asarray(nu_plus, dtype=float)
    nu_minus = np.asarray(nu_minus, dtype=float)
    xi, sigma = params.xi, params.sigma
    omega1 = (1.0 + xi) / 2.0 + (nu_plus + nu_minus) / 2.0
    envelope = np.exp(-(nu_plus * params.tau) ** 2 / 2.0) * np.exp(1j * omega1 * dt)
    amp = _kernel(sigma * nu_minus / 2.0, kernel)
    if params.scheme == "four_slit":
        amp = amp + _kernel(-sigma * (nu_minus + 2.0 * xi) / 2.0, kernel)
    return envelope * amp


def two_frequency_wf(setup, xi, dt, omega1, omega2, scheme=None, kernel="sinc"):
    """Phi(omega1, omega2) of the (+, -) path; frequencies in units of omega0."""
    params = biphoton_params(setup, xi, scheme)
    omega1 = np.asarray(omega1, dtype=float)
    omega2 = np.asarray(omega2, dtype=float)
    return two_frequency_wf_detuned(params, dt, omega1 + omega2 - 1.0, omega1 - omega2 - xi, kernel)


def temporal_wf_from_params(params, dt, t1, t2):
    """Closed-form F(t1, t2) under the Gaussian model of the sinc kernel."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    u = t1 - t2 + dt
    v = t1 + t2 + dt
    envelope = np.exp(-(v**2) / (8.0 * params.tau**2) - u**2 / (4.0 * params.width2))
    if params.scheme == "four_slit":
        return np.cos(params.xi * u / 2.0) * envelope + 0j
    return np.exp(0.5j * params.xi * u) * envelope


def temporal_wf(setup, xi, dt, t1, t2, scheme=None):
    """F(t1, t2); arrival times and the delay ``dt`` in units of 1/omega0."""
    return temporal_wf_from_params(biphoton_params(setup, xi, scheme), dt, t1, t2)


def _norm_analytic(params):
    base = math.pi * params.tau * math.sqrt(2.0 * SINC_GAUSS_ALPHA) * abs(params.sigma)
    if params.scheme == "four_slit":
        return (base * (1.0 + params.static_visibility)) ** -0.5
    return (2.0 * base) ** -0.5


def _norm_quadrature(params, tol=1e-12):
    # integrate in u = t1 - t2, v = t1 + t2 (Jacobian 1/2) around the packet centre
    su = math.sqrt(SINC_GAUSS_ALPHA) * abs(params.sigma)
    sv = math.sqrt(2.0) * params.tau
    u_panels = max(8, int(16 * su * params.xi / (2 * math.pi)) + 8)

    def integrand(u, v):
        t1 = (u + v) / 2.0
        t2 = (v - u) / 2.0
        return np.abs(temporal_wf_from_params(params, 0.0, t1, t2)) ** 2 / 2.0

    value, _ = integrate_2d(integrand, (-9 * su, 9 * su), (-9 * sv, 9 * sv), u_panels, 4, tol=0.0, rtol=tol)
    return (2.0 * value) ** -0.5


@functools.lru_cache(maxsize=512)
def _cached_norm(params, method):
    if method == "analytic":
        return _norm_analytic(params)
    if method == "quadrature":
        return _norm_quadrature(params)
    raise ValueError("method must be 'analytic' or 'quadrature'")


def normalize(setup, xi, scheme=None, method="analytic"):
    """Normalisation constant N with ``2 N^2 \\int |F|^2 dt1 dt2 = 1``.

    N does not depend on the delay. Results are memoised per parameter set;
    ``functools.lru_cache`` serialises updates, so concurrent readers always
    see a complete value.
    """
    value = _cached_norm(biphoton_params(setup, xi, scheme), method)
    if not math.isfinite(value):
        raise ValueError("normalisation integral is not finite")
    return value


@dataclass(frozen=True)
class TemporalWF:
    """A normalised temporal biphoton state for fixed (xi, delay, scheme)."""

    params: BiphotonParams
    dt: float

    @classmethod
    def from_setup(cls, setup, xi, dt, scheme=None):
        return cls(biphoton_params(setup, xi, scheme), float(dt))

    @property
    def norm(self):
        return _cached_norm(self.params, "analytic")

    def __call__(self, t1, t2):
        return temporal_wf_from_params(self.params, self.dt, t1, t2)

    def path_amplitudes(self, t1, t2):
        """Normalised amplitudes of the (+, -) and (-, +) slit paths."""
        n = self.norm
        return n * self(t1, t2), n * self(t2, t1)


def full_angular_frequency_wf(setup, xi, theta1, theta2, omega1, omega2, slit_width=None):
    """Angular-frequency amplitude before slit reduction.

    Angles are free-space angles in radians in one plane through the pump
    axis; frequencies are in units of omega0. Slits are top hats of angular
    width ``slit_width`` (default half the phase-matching width) centred on
    the inner cone at positive angle and the outer cone at negative angle.
    The transposed term swaps (theta1, omega1) with (theta2, omega2).
    """
    crystal = setup.crystal
    cone = cone_geometry(crystal, setup, xi)
    if cone.regime is not Regime.NONCOLLINEAR:
        raise ForbiddenRegimeError(f"emission at xi={xi:g} is {cone.regime.value}, not noncollinear")
    coeffs = coefficients(crystal, setup.lambda_p_um, setup.phi0_rad, xi)
    sigma = setup.length_time(coeffs.A_minus)
    sigma_plus = setup.length_time(coeffs.A_plus)
    tau = setup.tau_fs * setup.omega0
    width = 0.5 * cone.delta_theta_L if slit_width is None else slit_width
    waist_term = (math.pi * setup.waist_um / setup.lambda_p_um) ** 2 / 2.0

    def slit(x):
        return (np.abs(x) <= width / 2.0).astype(float)

    def branch(th1, th2, w1, w2):
        tt1 = (1.0 + xi) * th1
        tt2 = (1.0 - xi) * th2
        nu_p = w1 + w2 - 1.0
        nu_m = w1 - w2 - xi
        arg = (tt1 - tt2 - 2.0 * cone.theta0) / (2.0 * cone.delta_theta_L)
        arg = arg + 0.5 * (sigma_plus * nu_p - sigma * nu_m)
        return (
            np.exp(-(nu_p * tau) ** 2 / 2.0)
            * np.exp(-waist_term * (tt1 + tt2) ** 2)
            * np.sinc(arg / np.pi)
            * slit(th1 - cone.theta_inner)
            * slit(th2 + cone.theta_outer)
        )

    args = [np.asarray(a, dtype=float) for a in (theta1, theta2, omega1, omega2)]
    th1, th2, w1, w2 = args
    return branch(th1, th2, w1, w2) + branch(th2, th1, w2, w1)
