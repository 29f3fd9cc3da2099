"""Independent numerical checks of the closed-form wavefunctions and probabilities.

Three routes are available: tensor Gauss-Legendre quadrature of the
beamsplitter amplitudes over arrival times, a 2-D FFT of the two-frequency
wavefunction, and Monte-Carlo counting of split and unsplit pairs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import hom
from .config import worker_count
from .biphoton import biphoton_params, normalize, temporal_wf_from_params, two_frequency_wf_detuned
from .errors import SpdcError
from .groupdelay import a_minus_zero
from .phasematch import collinear_range, xi_max
from .quadrature import integrate_2d

KERNELS = ("gaussian_model", "exact_sinc")
PINNED_XI = (0.01, 0.04, 0.1, 0.6, 0.81)
PINNED_DT = ("0", "T_osc", "5 T_osc", "3 T_decoh")

QUADRATURE_RTOL = 1e-6
FFT_RTOL = 1e-6
FFT_DOUBLING_RTOL = 1e-8
EXACT_SINC_RTOL = 0.05
FWHM_RTOL = 0.10


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration domain in characteristic widths, initial panels and rule."""

    widths: float = 8.0
    order: int = 16
    rule: str = "gauss-legendre"
    tol: float = 1e-9
    max_doublings: int = 6


@dataclass(frozen=True)
class OracleReport:
    check: str
    params: dict
    analytic: float
    oracle: float
    rel_err: float
    passed: bool

    def to_dict(self):
        data = asdict(self)
        data["pass"] = data.pop("passed")
        return data


def _rel_err(analytic, oracle, floor=0.0):
    scale = max(abs(analytic), floor)
    if scale == 0.0:
        return abs(oracle - analytic)
    return abs(oracle - analytic) / scale


def pinned_delays(setup, xi, scheme="two_slit"):
    """The pinned delays 0, T_osc, 5 T_osc and 3 T_decoh for one xi."""
    params = biphoton_params(setup, xi, scheme)
    t_osc = 2.0 * math.pi / xi
    t_decoh = math.sqrt(2.0 * params.width2)
    return {"0": 0.0, "T_osc": t_osc, "5 T_osc": 5.0 * t_osc, "3 T_decoh": 3.0 * t_decoh}


# quadrature -----------------------------------------------------------------


def exact_sinc_temporal_wf(params, dt, t1, t2):
    """F(t1, t2) for the unapproximated sinc kernel: a boxcar of half-width |sigma| in u."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    u = t1 - t2 + dt
    v = t1 + t2 + dt
    box = (np.abs(u) <= abs(params.sigma)).astype(float)
    envelope = np.exp(-(v**2) / (8.0 * params.tau**2)) * box
    if params.scheme == "four_slit":
        return np.cos(params.xi * u / 2.0) * envelope + 0j
    return np.exp(0.5j * params.xi * u) * envelope


def quadrature_split_probability(setup, xi, dt, scheme=None, kernel="gaussian_model", spec=QuadratureSpec()):
    """Split probability from integrating |A_split|^2 over (t1, t2).

    The state is normalised by a quadrature of |F|^2 on the same nodes, so no
    closed form enters. The exact-sinc kernel has jumps at ``u = +-sigma``; those
    lines become panel edges.
    """
    if kernel not in KERNELS:
        raise ValueError(f"kernel must be one of {KERNELS}")
    params = biphoton_params(setup, xi, scheme)
    wf = temporal_wf_from_params if kernel == "gaussian_model" else exact_sinc_temporal_wf
    s = math.sqrt(params.width2)
    sv = math.sqrt(2.0) * params.tau
    if kernel == "gaussian_model":
        half_u = abs(dt) + spec.widths * s
        breaks = ()
    else:
        half_u = abs(dt) + abs(params.sigma)
        breaks = tuple(sorted({sgn * abs(params.sigma) + d for sgn in (-1, 1) for d in (-dt, dt)}))
    u_range = (-half_u, half_u)
    v_range = (-dt - spec.widths * sv, -dt + spec.widths * sv)
    # two beat periods per 16-point panel to start; refinement checks the rest
    u_panels = 8 + int(half_u * params.xi / (2 * math.pi)) + int(2 * half_u / s)

    def amplitudes(u, v):
        # (t1, t2) from u = t1 - t2 and v = t1 + t2; dt t1 dt2 = du dv / 2
        t1 = (u + v) / 2.0
        t2 = (v - u) / 2.0
        return hom.beamsplitter_amplitudes(wf(params, dt, t1, t2), wf(params, dt, t2, t1))

    def integrand(u, v):
        a_unsplit, a_split = amplitudes(u, v)
        split = np.abs(a_split) ** 2
        return np.stack([np.abs(a_unsplit) ** 2 + split, split]) / 2.0

    # normalise with the integral of |F|^2 over the same nodes; scaling by its
    # rough size turns the tolerance into an absolute one on the probability
    scale = math.pi * params.tau * math.sqrt(2.0) * s
    (norm_value, split_value), (_, err) = integrate_2d(
        integrand, u_range, v_range, u_panels, 4, tol=np.array([0.0, spec.tol * scale]),
        rtol=np.array([1e-12, 0.0]), order=spec.order, max_doublings=spec.max_doublings, x_breaks=breaks,
    )
    return split_value / norm_value, err / norm_value


# FFT -------------------------------------------------------------------------


@dataclass(frozen=True)
class FftGrid:
    """Detuning grid: ``n_plus x n_minus`` points spaced ``d_plus``, ``d_minus`` (units of omega0)."""

    n_plus: int
    n_minus: int
    d_plus: float
    d_minus: float

    def doubled(self):
        """Twice the points at half the spacing: same time step, twice the time window."""
        return FftGrid(2 * self.n_plus, 2 * self.n_minus, self.d_plus / 2, self.d_minus / 2)

    def times(self):
        """Centred conjugate times (T_plus, T_minus) = ((t1 + t2)/2, (t1 - t2)/2)."""
        tp = (np.arange(self.n_plus) - self.n_plus // 2) * 2 * math.pi / (self.n_plus * self.d_plus)
        tm = (np.arange(self.n_minus) - self.n_minus // 2) * 2 * math.pi / (self.n_minus * self.d_minus)
        return tp, tm


def _pow2(n):
    return 1 << max(4, int(math.ceil(math.log2(n))))


def default_fft_grid(params, dt, kernel="gaussian", widths=12.0):
    """Grid resolving both the 1/tau and the 1/s bandwidths with margin ``widths``."""
    s = math.sqrt(params.width2)
    tau = params.tau
    # T_plus spread tau, T_minus spread s/sqrt(2); both shifted by -dt/2
    t_plus = abs(dt) / 2 + widths * tau
    t_minus = abs(dt) / 2 + widths * s / math.sqrt(2.0)
    nu_plus = widths / tau
    nu_minus = widths * math.sqrt(2.0) / s
    if params.scheme == "four_slit":
        nu_minus += 2.0 * params.xi
    if kernel == "sinc":
        # the sinc tails decay slowly; sample them out to many side lobes
        nu_minus = max(nu_minus, 400.0 / abs(params.sigma))
    n_plus = _pow2(2 * t_plus * 2 * nu_plus / (2 * math.pi))
    n_minus = _pow2(2 * t_minus * 2 * nu_minus / (2 * math.pi))
    return FftGrid(n_plus, n_minus, 2 * nu_plus / n_plus, 2 * nu_minus / n_minus)


def fft_temporal_wf(setup, xi, dt, scheme=None, grid=None, kernel="gaussian"):
    """Sample F(t1, t2) by Fourier transforming the two-frequency wavefunction.

    Returns ``(t1, t2, F)`` with ``F`` normalised numerically so that
    ``2 sum |F|^2 dt1 dt2 = 1``; the carrier is removed so the result is
    directly comparable with the normalised closed form.
    """
    params = biphoton_params(setup, xi, scheme)
    grid = grid or default_fft_grid(params, dt, kernel)
    nu_p = (np.arange(grid.n_plus) - grid.n_plus // 2) * grid.d_plus
    nu_m = (np.arange(grid.n_minus) - grid.n_minus // 2) * grid.d_minus
    phi = two_frequency_wf_detuned(params, dt, nu_p[:, None], nu_m[None, :], kernel)
    # sum_j phi_j exp(+i nu_j T_m) on centred grids
    spectrum = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(phi))) * phi.size
    tp, tm = grid.times()
    t1 = tp[:, None] + tm[None, :]
    t2 = tp[:, None] - tm[None, :]
    carrier = np.exp(0.5j * xi * (t1 - t2) - 0.5j * dt)
    f = spectrum * carrier
    # dt1 dt2 = 2 dT_plus dT_minus
    cell = 2.0 * (tp[1] - tp[0]) * (tm[1] - tm[0])
    f = f / math.sqrt(2.0 * np.sum(np.abs(f) ** 2) * cell)
    return t1, t2, f


def fft_check(setup, xi, dt, scheme=None, grid=None):
    """Max pointwise deviation of the FFT wavefunction from N F, relative to max |N F|."""
    params = biphoton_params(setup, xi, scheme)
    t1, t2, f = fft_temporal_wf(setup, xi, dt, scheme, grid)
    exact = normalize(setup, xi, scheme) * temporal_wf_from_params(params, dt, t1, t2)
    return float(np.max(np.abs(f - exact)) / np.max(np.abs(exact)))


def fft_doubling_check(setup, xi, dt, scheme=None):
    """Change of the FFT wavefunction when the time window is doubled at fixed step."""
    params = biphoton_params(setup, xi, scheme)
    grid = default_fft_grid(params, dt)
    _, _, coarse = fft_temporal_wf(setup, xi, dt, scheme, grid)
    _, _, fine = fft_temporal_wf(setup, xi, dt, scheme, grid.doubled())
    # the coarse time grid is the central block of the fine one
    p0 = (grid.doubled().n_plus - grid.n_plus) // 2
    m0 = (grid.doubled().n_minus - grid.n_minus) // 2
    inner = fine[p0:p0 + grid.n_plus, m0:m0 + grid.n_minus]
    return float(np.max(np.abs(inner - coarse)) / np.max(np.abs(coarse)))


def _fwhm(x, y):
    y = np.asarray(y, dtype=float)
    half = 0.5 * y.max()
    above = np.flatnonzero(y >= half)
    i, j = above[0], above[-1]
    lo = hom._crossing(x, y, i - 1, i, half) if i > 0 else x[i]
    hi = hom._crossing(x, y, j, j + 1, half) if j < len(x) - 1 else x[j]
    return float(hi - lo)


def exact_sinc_overlap_fwhm(setup, xi, scheme="two_slit"):
    """FWHM of the delay overlap of the FFT profile for the exact and modelled kernels.

    The exact sinc transforms to a boxcar in ``t1 - t2``; the overlap of two
    copies shifted by the delay is the quantity the HOM dip sees. Returns
    ``(exact_fwhm, gaussian_fwhm)`` in units of 1/omega0.
    """
    params = biphoton_params(setup, xi, scheme)
    grid = default_fft_grid(params, 0.0, "sinc")
    _, t2, f = fft_temporal_wf(setup, xi, 0.0, scheme, grid, kernel="sinc")
    row = np.abs(f[grid.n_plus // 2])
    u = -2.0 * t2[grid.n_plus // 2]  # t1 - t2 = 2 T_minus; T_plus = 0 here
    order = np.argsort(u)
    u, row = u[order], row[order]
    # overlap(d) = int |F(u + d)| |F(u - d)| du; sample d on the same grid step
    overlap = np.correlate(row, row, mode="full")
    step = u[1] - u[0]
    shift = (np.arange(overlap.size) - (row.size - 1)) * step / 2.0
    s = math.sqrt(params.width2)
    return _fwhm(shift, overlap), 2.0 * math.sqrt(2.0 * math.log(2.0)) * s


def exact_sinc_split_probability(params, dt):
    """Closed form for the boxcar profile, used only to cross-check the quadrature."""
    sigma = abs(params.sigma)
    dt = abs(dt)
    if dt >= sigma:
        return 0.5
    if params.scheme == "four_slit":
        raise NotImplementedError
    return 0.5 * (1.0 - math.sin(params.xi * (sigma - dt)) / (params.xi * sigma))


# Monte Carlo ------------------------------------------------------------------


@dataclass(frozen=True)
class McRun:
    """Counts of split and unsplit pairs with binomial standard errors."""

    n_samples: int
    seed: int
    n_split: int
    n_unsplit: int

    @property
    def w_split(self):
        return self.n_split / self.n_samples

    @property
    def w_unsplit(self):
        return self.n_unsplit / self.n_samples

    @property
    def stderr(self):
        w = self.w_split
        return math.sqrt(w * (1.0 - w) / self.n_samples)

    def agrees_with(self, w, sigmas=3.0):
        """True if the estimate lies within ``sigmas`` binomial standard errors of ``w``."""
        bound = sigmas * math.sqrt(w * (1.0 - w) / self.n_samples)
        return abs(self.w_split - w) <= bound

    def to_dict(self):
        return {**asdict(self), "w_split": self.w_split, "w_unsplit": self.w_unsplit, "stderr": self.stderr}


MC_BATCH = 1 << 14


def _mc_batch(params, dt, n, rng):
    """Split count among ``n`` pairs drawn from |Psi|^2."""
    s = math.sqrt(params.width2)
    sv = math.sqrt(2.0) * params.tau
    done = 0
    splits = 0
    while done < n:
        m = n - done
        # pick the (+, -) or (-, +) path, then draw from its Gaussian envelope
        branch = rng.integers(0, 2, m)
        centre = np.where(branch == 0, -dt, dt)
        u = rng.normal(centre, s)
        v = rng.normal(-dt, sv, m)
        if params.scheme == "four_slit":
            # rejection against the cos^2 fringe of the drawn path
            arg = np.where(branch == 0, u + dt, -u + dt)
            keep = rng.random(m) < np.cos(params.xi * arg / 2.0) ** 2
            u, v = u[keep], v[keep]
        t1 = (u + v) / 2.0
        t2 = (v - u) / 2.0
        f12 = temporal_wf_from_params(params, dt, t1, t2)
        f21 = temporal_wf_from_params(params, dt, t2, t1)
        a_unsplit, a_split = hom.beamsplitter_amplitudes(f12, f21)
        p_split = np.abs(a_split) ** 2 / (np.abs(a_unsplit) ** 2 + np.abs(a_split) ** 2)
        splits += int(np.count_nonzero(rng.random(u.size) < p_split))
        done += u.size
    return splits


def monte_carlo_hom(setup, xi, dt, scheme=None, n_samples=100_000, seed=0):
    """Count split pairs among ``n_samples`` detections.

    Batch ``k`` draws from an independent Philox stream keyed by ``seed`` and
    advanced ``k`` jumps, so counts do not depend on thread scheduling.
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be at least 1000")
    params = biphoton_params(setup, xi, scheme)
    sizes = [MC_BATCH] * (n_samples // MC_BATCH)
    if n_samples % MC_BATCH:
        sizes.append(n_samples % MC_BATCH)
    base = np.random.Philox(key=seed)
    rngs = [np.random.Generator(base.jumped(k)) for k in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        counts = list(pool.map(lambda job: _mc_batch(params, dt, *job), zip(sizes, rngs)))
    n_split = sum(counts)
    return McRun(n_samples=n_samples, seed=seed, n_split=n_split, n_unsplit=n_samples - n_split)


# suite -------------------------------------------------------------------------

XI_MAX_ANCHOR = (0.9391, 1e-3)
LAMBDA_MINUS_ANCHOR = (13.29, 0.02)
PHI_MIN_ANCHOR = (0.37734, 3e-3)
PHI_MAX_ANCHOR = (0.678486, 3e-3)
XI_EXTREMUM_ANCHOR = (0.8142, 5e-3)


def _anchor(name, params, value, target, tol):
    return OracleReport(name, params, target, value, _rel_err(target, value), abs(value - target) <= tol)


def anchor_checks(setup):
    crystal, lp = setup.crystal, setup.lambda_p_um
    reports = []
    top = xi_max(crystal, lp)
    reports.append(_anchor("xi_max", {}, top, *XI_MAX_ANCHOR))
    reports.append(_anchor("lambda_minus_at_xi_max", {}, 2 * lp / (1 - top), *LAMBDA_MINUS_ANCHOR))
    rng = collinear_range(crystal, lp)
    reports.append(_anchor("phi0_coll_min", {}, rng.phi_min, *PHI_MIN_ANCHOR))
    reports.append(_anchor("phi0_coll_max", {}, rng.phi_max, *PHI_MAX_ANCHOR))
    reports.append(_anchor("phi0_coll_argmin", {}, rng.xi_at_min, *XI_EXTREMUM_ANCHOR))
    reports.append(_anchor("a_minus_zero", {}, a_minus_zero(crystal, lp), *XI_EXTREMUM_ANCHOR))
    return reports


def crystal_checks(setup):
    from .dispersion import check_crystal

    problems = check_crystal(setup.crystal)
    return [OracleReport("crystal_invariants", {"problems": problems}, 0.0, float(len(problems)),
                         float(len(problems)), not problems)]


def quadrature_checks(setup, xis=PINNED_XI, schemes=("two_slit", "four_slit")):
    reports = []
    for scheme in schemes:
        for xi in xis:
            params = biphoton_params(setup, xi, scheme)
            for label, dt in pinned_delays(setup, xi, scheme).items():
                analytic = float(hom.split_probability_from_params(params, dt))
                value, err = quadrature_split_probability(setup, xi, dt, scheme)
                rel = _rel_err(analytic, value)
                ok = rel <= QUADRATURE_RTOL if analytic else abs(value) <= QuadratureSpec.tol
                reports.append(OracleReport(
                    "quadrature_split_probability",
                    {"scheme": scheme, "xi": xi, "dt": dt, "dt_label": label, "error_estimate": err},
                    analytic, value, rel, ok,
                ))
    return reports


def exact_sinc_checks(setup, xi=0.1):
    params = biphoton_params(setup, xi, "two_slit")
    reports = []
    model = float(hom.split_probability_from_params(params, 0.0))
    value, _ = quadrature_split_probability(setup, xi, 0.0, "two_slit", "exact_sinc")
    rel = _rel_err(model, value)
    reports.append(OracleReport("exact_sinc_vs_gaussian_model", {"xi": xi, "dt": 0.0}, model, value, rel,
                                rel < EXACT_SINC_RTOL))
    exact, gauss = exact_sinc_overlap_fwhm(setup, xi)
    rel = _rel_err(gauss, exact)
    reports.append(OracleReport("exact_sinc_overlap_fwhm", {"xi": xi}, gauss, exact, rel, rel < FWHM_RTOL))
    return reports


def fft_checks(setup, xis=PINNED_XI, schemes=("two_slit", "four_slit")):
    reports = []
    for scheme in schemes:
        for xi in xis:
            for label, dt in pinned_delays(setup, xi, scheme).items():
                err = fft_check(setup, xi, dt, scheme)
                reports.append(OracleReport("fft_temporal_wf", {"scheme": scheme, "xi": xi, "dt": dt,
                                                                "dt_label": label},
                                            0.0, err, err, err < FFT_RTOL))
        err = fft_doubling_check(setup, xis[len(xis) // 2], 0.0, scheme)
        reports.append(OracleReport("fft_grid_doubling", {"scheme": scheme, "xi": xis[len(xis) // 2]},
                                    0.0, err, err, err < FFT_DOUBLING_RTOL))
    return reports


def monte_carlo_checks(setup, seed=0, n_samples=100_000, xis=PINNED_XI, schemes=("two_slit", "four_slit")):
    reports = []
    for scheme in schemes:
        for xi in xis:
            params = biphoton_params(setup, xi, scheme)
            for label, dt in pinned_delays(setup, xi, scheme).items():
                w = float(hom.split_probability_from_params(params, dt))
                run = monte_carlo_hom(setup, xi, dt, scheme, n_samples, seed)
                reports.append(OracleReport(
                    "monte_carlo_hom",
                    {"scheme": scheme, "xi": xi, "dt": dt, "dt_label": label, **run.to_dict()},
                    w, run.w_split, _rel_err(w, run.w_split), run.agrees_with(w),
                ))
    return reports


def run_suite(setup, quick=False, seed=0):
    """Every check as a list of reports; ``quick`` skips Monte Carlo.

    A check that cannot even be evaluated (for instance because corrupted
    dispersion data leave the model's domain) is reported as failed.
    """
    reports = crystal_checks(setup)
    stages = [anchor_checks, quadrature_checks, exact_sinc_checks, fft_checks]
    if not quick:
        stages.append(lambda s: monte_carlo_checks(s, seed=seed))
    for stage in stages:
        try:
            reports.extend(stage(setup))
        except (SpdcError, ValueError, ArithmeticError) as exc:
            name = getattr(stage, "__name__", "monte_carlo_checks")
            reports.append(OracleReport(name, {"error": f"{type(exc).__name__}: {exc}"},
                                        math.nan, math.nan, math.nan, False))
    return reports

