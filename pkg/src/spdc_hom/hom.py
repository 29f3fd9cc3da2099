"""Beamsplitter interference: split/unsplit probabilities, coincidence densities, combs.

All times are in units of 1/omega0. ``s = sqrt(alpha) |sigma|`` is the
Gaussian-model width of the temporal wavefunction, so ``T_decoh = sqrt(2) s``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage, signal

from .biphoton import biphoton_params
from .errors import ResolutionError

log = logging.getLogger(__name__)

#: Maps the (+, -) and (-, +) path amplitudes onto (unsplit, split).
BEAMSPLITTER = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)

MIN_POINTS_PER_PERIOD = 8
PEAK_REL_HEIGHT = 1e-3


def beamsplitter_amplitudes(f12, f21, norm=1.0):
    """(A_unsplit, A_split) = N/sqrt(2) (F12 +- F21)."""
    f12 = np.asarray(f12)
    f21 = np.asarray(f21)
    return norm * (f12 + f21) / math.sqrt(2.0), norm * (f12 - f21) / math.sqrt(2.0)


def _width(params):
    return math.sqrt(params.width2)


def _warn_fragile(params):
    if params.fragile:
        log.info("xi=%g: |A_minus| is small, the first-order model is fragile", params.xi)


def _interference_term(params, dt):
    """X(dt) with w_split = (1 - X) / 2 and w_unsplit = (1 + X) / 2."""
    dt = np.asarray(dt, dtype=float)
    s = _width(params)
    envelope = np.exp(-(dt**2) / (2.0 * s**2))
    static = params.static_visibility
    if params.scheme == "four_slit":
        return envelope * (np.cos(params.xi * dt) + static) / (1.0 + static)
    return static * envelope


def split_probability_from_params(params, dt):
    _warn_fragile(params)
    return 0.5 * (1.0 - _interference_term(params, dt))


def unsplit_probability_from_params(params, dt):
    return 0.5 * (1.0 + _interference_term(params, dt))


def split_probability(setup, xi, dt, scheme=None):
    """Probability that the pair leaves the beamsplitter through different ports."""
    return split_probability_from_params(biphoton_params(setup, xi, scheme), dt)


def unsplit_probability(setup, xi, dt, scheme=None):
    return unsplit_probability_from_params(biphoton_params(setup, xi, scheme), dt)


def split_probability_two_slit(setup, xi, dt):
    return split_probability(setup, xi, dt, "two_slit")


def split_probability_four_slit(setup, xi, dt):
    return split_probability(setup, xi, dt, "four_slit")


def coincidence_density_from_params(params, dt, tm, normalization="probability"):
    """Density of split pairs in the arrival-time difference ``tm = t1 - t2``.

    With ``normalization="probability"`` the density integrates to the split
    probability; ``"unit"`` rescales it to unit integral (undefined when the
    split probability vanishes).
    """
    _warn_fragile(params)
    tm = np.asarray(tm, dtype=float)
    s = _width(params)
    # each factor is at most one, so nothing here can overflow
    g_plus = np.exp(-((tm + dt) ** 2) / (4.0 * s**2))
    g_minus = np.exp(-((tm - dt) ** 2) / (4.0 * s**2))
    if params.scheme == "four_slit":
        a = np.cos(params.xi * (tm + dt) / 2.0) * g_plus
        b = np.cos(params.xi * (tm - dt) / 2.0) * g_minus
        density = (a - b) ** 2 / (2.0 * math.sqrt(2.0 * math.pi) * s * (1.0 + params.static_visibility))
    else:
        raw = g_plus * g_plus + g_minus * g_minus - 2.0 * np.cos(params.xi * tm) * g_plus * g_minus
        density = np.maximum(raw, 0.0) / (4.0 * math.sqrt(2.0 * math.pi) * s)
    if normalization == "unit":
        total = float(split_probability_from_params(params, dt))
        if total <= 0.0:
            raise ValueError("split probability is zero; a unit-integral density does not exist")
        density = density / total
    elif normalization != "probability":
        raise ValueError("normalization must be 'probability' or 'unit'")
    return density


def coincidence_density(setup, xi, dt, tm, scheme=None, normalization="probability", resolution=None):
    """Split-pair density versus ``t1 - t2``, optionally seen by a finite-resolution counter.

    ``resolution`` is the RMS width of a Gaussian timing jitter; it requires a
    uniform ``tm`` grid.
    """
    params = biphoton_params(setup, xi, scheme)
    density = coincidence_density_from_params(params, dt, tm, normalization)
    if resolution:
        density = smooth(np.asarray(tm, dtype=float), density, resolution)
    return density


def coincidence_density_two_slit(setup, xi, dt, tm, **kwargs):
    return coincidence_density(setup, xi, dt, tm, "two_slit", **kwargs)


def coincidence_density_four_slit(setup, xi, dt, tm, **kwargs):
    return coincidence_density(setup, xi, dt, tm, "four_slit", **kwargs)


def smooth(x, y, resolution):
    """Convolve samples on a uniform grid with a unit-area Gaussian of RMS ``resolution``."""
    steps = np.diff(x)
    if steps.size == 0 or not np.allclose(steps, steps[0], rtol=1e-6):
        raise ValueError("smoothing needs a uniform grid")
    return ndimage.gaussian_filter1d(y, resolution / steps[0], mode="constant")


def default_grid(params, extra=0.0):
    """Symmetric grid of +-(max(6 T_decoh, 4 T_osc) + extra) with 16 points per T_osc.

    When the dip is narrower than a beat period the step follows ``T_decoh``.
    """
    t_decoh = math.sqrt(2.0) * _width(params)
    t_osc = math.inf if params.xi == 0 else 2.0 * math.pi / params.xi
    span = max(6.0 * t_decoh, 4.0 * t_osc if math.isfinite(t_osc) else 0.0)
    step = min(t_osc, t_decoh) / 16.0
    n = int(math.ceil((span + abs(extra)) / step))
    return step * np.arange(-n, n + 1)


@dataclass(frozen=True)
class HomCurve:
    """A sampled HOM curve: ``w_split`` versus delay or a density versus ``t1 - t2``."""

    scheme: str
    xi: float
    x: np.ndarray
    y: np.ndarray
    kind: str
    T_osc: float
    T_decoh: float
    dt: float | None = None
    fragile: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def x_label(self):
        return "omega0_dt" if self.kind == "split_probability" else "omega0_t1_minus_t2"

    @property
    def y_label(self):
        return "w_split" if self.kind == "split_probability" else "density"

    @property
    def baseline(self):
        return 0.5 if self.kind == "split_probability" else 0.0

    def header(self):
        items = {"scheme": self.scheme, "xi": self.xi, "units": "1/omega0",
                 "T_osc": self.T_osc, "T_decoh": self.T_decoh}
        if self.dt is not None:
            items["omega0_dt"] = self.dt
        if self.fragile:
            items["model_fragile"] = True
        items.update(self.meta)
        return items


def _curve_meta(params):
    t_osc = math.inf if params.xi == 0 else 2.0 * math.pi / params.xi
    return t_osc, math.sqrt(2.0) * _width(params)


def split_curve(setup, xi, dt=None, scheme=None):
    params = biphoton_params(setup, xi, scheme)
    x = default_grid(params) if dt is None else np.asarray(dt, dtype=float)
    t_osc, t_decoh = _curve_meta(params)
    y = split_probability_from_params(params, x)
    return HomCurve(params.scheme, float(xi), x, y, "split_probability", t_osc, t_decoh,
                    fragile=params.fragile)


def density_curve(setup, xi, dt, tm=None, scheme=None, normalization="probability", resolution=None):
    params = biphoton_params(setup, xi, scheme)
    if tm is None:
        tm = default_grid(params, extra=dt)
    tm = np.asarray(tm, dtype=float)
    y = coincidence_density_from_params(params, dt, tm, normalization)
    if resolution:
        y = smooth(tm, y, resolution)
    t_osc, t_decoh = _curve_meta(params)
    return HomCurve(params.scheme, float(xi), tm, y, "density", t_osc, t_decoh, dt=float(dt),
                    fragile=params.fragile)


@dataclass(frozen=True)
class CombReport:
    """Fringe metrology of one curve; times in units of 1/omega0."""

    peak_positions: np.ndarray
    period: float
    envelope_fwhm: float
    comb_count: int
    comb_centers: tuple
    comb_separation: float

    def to_dict(self):
        return {
            "peak_positions": [float(p) for p in self.peak_positions],
            "period": self.period,
            "envelope_fwhm": self.envelope_fwhm,
            "comb_count": self.comb_count,
            "comb_centers": list(self.comb_centers),
            "comb_separation": self.comb_separation,
        }


def _refine_peaks(x, y, idx):
    """Parabolic interpolation of sampled maxima (uniform grid assumed locally)."""
    idx = idx[(idx > 0) & (idx < len(y) - 1)]
    left, mid, right = y[idx - 1], y[idx], y[idx + 1]
    denom = left - 2.0 * mid + right
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(denom != 0.0, 0.5 * (left - right) / denom, 0.0)
    step = 0.5 * (x[idx + 1] - x[idx - 1])
    return x[idx] + shift * step, mid - 0.25 * (left - right) * shift


def _segments(mask):
    """Start/stop index pairs of the runs of True in ``mask``."""
    padded = np.concatenate([[False], mask, [False]]).astype(int)
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[::2], edges[1::2]))


def _crossing(x, y, i, j, level):
    """Linear interpolation of where ``y`` crosses ``level`` between samples i and j."""
    if y[j] == y[i]:
        return x[i]
    return x[i] + (level - y[i]) * (x[j] - x[i]) / (y[j] - y[i])


def analyze_comb(curve):
    """Peaks, beat period, envelope width and comb count of a sampled curve.

    Fringes are the local maxima of the deviation from the curve's baseline
    taken with the sign of its largest excursion; their heights, linearly
    interpolated, form the envelope. Combs are the runs where the envelope
    exceeds half its maximum.
    """
    x = np.asarray(curve.x, dtype=float)
    y = np.asarray(curve.y, dtype=float)
    if math.isfinite(curve.T_osc) and x.size > 1:
        per_period = curve.T_osc / float(np.max(np.diff(x)))
        if per_period < MIN_POINTS_PER_PERIOD:
            raise ResolutionError(
                f"{per_period:.1f} points per beat period; need at least {MIN_POINTS_PER_PERIOD}"
            )
    dev = y - curve.baseline
    scale = float(np.max(np.abs(dev))) if dev.size else 0.0
    empty = CombReport(np.array([]), math.nan, math.nan, 0, (), math.nan)
    if scale == 0.0:
        return empty
    sign = 1.0 if dev[np.argmax(np.abs(dev))] > 0 else -1.0
    signed = sign * dev
    idx, _ = signal.find_peaks(signed, height=PEAK_REL_HEIGHT * scale)
    if idx.size == 0:
        return empty
    positions, heights = _refine_peaks(x, signed, idx)

    period = float(np.median(np.diff(positions))) if positions.size >= 2 else math.nan

    if positions.size >= 3:
        envelope = np.interp(x, positions, heights, left=0.0, right=0.0)
    else:
        envelope = np.abs(dev)
    half = 0.5 * float(np.max(envelope))
    runs = _segments(envelope >= half)
    centers = []
    widths = []
    for start, stop in runs:
        k = start + int(np.argmax(envelope[start:stop]))
        centers.append(float(x[k]))
        lo = _crossing(x, envelope, start - 1, start, half) if start > 0 else x[start]
        hi = _crossing(x, envelope, stop - 1, stop, half) if stop < len(x) else x[stop - 1]
        widths.append(float(hi - lo))
    fwhm = max(widths) if len(runs) > 1 else (widths[0] if widths else math.nan)
    separation = centers[-1] - centers[0] if len(centers) > 1 else 0.0
    return CombReport(positions, period, fwhm, len(runs), tuple(centers), separation)


def quadrature_delays(params, count):
    """Delays ``T_osc (1/4 + m/2)``, m = 0..count-1, where ``cos(xi dt)`` vanishes.

    At these delays the fringe phase drops out of the four-slit envelope, so
    comb counting reflects the decoherence envelope alone.
    """
    t_osc = 2.0 * math.pi / params.xi
    return t_osc * (0.25 + 0.5 * np.arange(count))


def merge_threshold(setup, xi, scheme="four_slit", max_factor=3.0):
    """Delay above which the density splits into two combs centred near +-dt.

    Scans quadrature delays up to ``max_factor * T_decoh`` and returns the
    midpoint between the last single-comb and the first double-comb delay.
    """
    params = biphoton_params(setup, xi, scheme)
    t_decoh = math.sqrt(2.0) * _width(params)
    t_osc = 2.0 * math.pi / params.xi
    count = int(max_factor * t_decoh / (0.5 * t_osc)) + 2
    last_single = None
    for delay in quadrature_delays(params, count):
        report = analyze_comb(density_curve(setup, xi, delay, scheme=scheme))
        if report.comb_count >= 2:
            if last_single is None:
                raise ResolutionError("combs are already separated at the smallest delay")
            return 0.5 * (last_single + delay)
        last_single = delay
    raise ResolutionError(f"combs never separate below {max_factor} T_decoh")
