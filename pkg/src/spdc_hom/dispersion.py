"""Refractive indices of uniaxial crystals.

Indices follow the four-coefficient Sellmeier form used for BBO::

    n^2(lam) = A + B / (lam^2 - C) - D * lam^2        (lam in micrometres)

Every function accepts scalars or numpy arrays and raises
:class:`~spdc_hom.errors.TransparencyError` when any wavelength falls outside
the crystal's transparency window (a closed interval).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, DerivativeDomainError, TransparencyError
from .units import omega_to_wavelength

#: Relative step of the central-difference stencil that validates group indices.
FD_REL_STEP = 1e-4


@dataclass(frozen=True)
class CrystalDispersion:
    """Sellmeier data for the ordinary and extraordinary waves of a crystal.

    Attributes
    ----------
    name : str
        Label used in reports and manifests.
    sellmeier_o, sellmeier_e : tuple of float
        ``(A, B, C, D)`` with ``B`` and ``C`` in um^2 and ``D`` in um^-2.
    window_um : tuple of float
        Closed transparency interval ``(lo, hi)`` in micrometres.
    """

    name: str
    sellmeier_o: tuple
    sellmeier_e: tuple
    window_um: tuple = field(default=(0.19, 13.29))

    def __post_init__(self):
        errors = {}
        for attr in ("sellmeier_o", "sellmeier_e"):
            coeffs = tuple(float(v) for v in getattr(self, attr))
            if len(coeffs) != 4 or not all(math.isfinite(v) for v in coeffs):
                errors[attr] = "expected four finite numbers [A, B, C, D]"
            object.__setattr__(self, attr, coeffs)
        window = tuple(float(v) for v in self.window_um)
        if len(window) != 2 or not (0.0 < window[0] < window[1]):
            errors["window_um"] = "expected [lo, hi] with 0 < lo < hi"
        object.__setattr__(self, "window_um", window)
        if errors:
            raise ConfigError(errors)

    def to_dict(self):
        return {
            "name": self.name,
            "sellmeier_o": list(self.sellmeier_o),
            "sellmeier_e": list(self.sellmeier_e),
            "window_um": list(self.window_um),
        }

    @classmethod
    def from_dict(cls, data):
        missing = [k for k in ("sellmeier_o", "sellmeier_e", "window_um") if k not in data]
        if missing:
            raise ConfigError({k: "required" for k in missing})
        return cls(
            name=str(data.get("name", "custom")),
            sellmeier_o=tuple(data["sellmeier_o"]),
            sellmeier_e=tuple(data["sellmeier_e"]),
            window_um=tuple(data["window_um"]),
        )


def _load_presets():
    presets = {}
    for entry in resources.files(__package__).joinpath("crystals").iterdir():
        if entry.name.endswith(".json"):
            crystal = CrystalDispersion.from_dict(json.loads(entry.read_text()))
            presets[crystal.name] = crystal
    return presets


PRESETS = _load_presets()
BBO = PRESETS["BBO"]


def load_crystal(source):
    """Resolve a crystal from a preset name, a JSON path, or a mapping."""
    if isinstance(source, CrystalDispersion):
        return source
    if isinstance(source, dict):
        return CrystalDispersion.from_dict(source)
    if isinstance(source, str) and source in PRESETS:
        return PRESETS[source]
    path = Path(source)
    if path.suffix == ".json" and path.exists():
        return CrystalDispersion.from_dict(json.loads(path.read_text()))
    raise ConfigError({"crystal": f"unknown preset or file {source!r}; presets: {sorted(PRESETS)}"})


def _check_window(crystal, lam):
    lo, hi = crystal.window_um
    lam = np.asarray(lam, dtype=float)
    if np.any(~np.isfinite(lam)) or np.any(lam < lo) or np.any(lam > hi):
        bad = lam[(lam < lo) | (lam > hi) | ~np.isfinite(lam)]
        raise TransparencyError(
            f"wavelength {bad.flat[0]:.6g} um outside {crystal.name} window [{lo}, {hi}] um"
        )
    return lam


def _n_squared(coeffs, lam):
    a, b, c, d = coeffs
    lam2 = lam * lam
    return a + b / (lam2 - c) - d * lam2


def _dn_squared_dlam(coeffs, lam):
    _, b, c, d = coeffs
    lam2 = lam * lam
    return -2.0 * b * lam / (lam2 - c) ** 2 - 2.0 * d * lam


def _index(coeffs, crystal, lam):
    n2 = _n_squared(coeffs, lam)
    if np.any(n2 <= 0):
        raise TransparencyError(f"{crystal.name}: Sellmeier form gives n^2 <= 0 inside the window")
    return np.sqrt(n2)


def index_ordinary(crystal, wavelength_um):
    """Ordinary-wave refractive index n_o(lam)."""
    lam = _check_window(crystal, wavelength_um)
    return _index(crystal.sellmeier_o, crystal, lam)


def index_extraordinary(crystal, wavelength_um):
    """Principal extraordinary index n_e(lam) (propagation normal to the axis)."""
    lam = _check_window(crystal, wavelength_um)
    return _index(crystal.sellmeier_e, crystal, lam)


def _check_angle(phi):
    phi = np.asarray(phi, dtype=float)
    if np.any(phi < 0.0) or np.any(phi > math.pi / 2):
        raise ValueError("angle to the optical axis must lie in [0, pi/2]")
    return phi


def index_extraordinary_at_angle(crystal, wavelength_um, phi):
    """Index of the extraordinary wave travelling at angle ``phi`` to the optic axis.

    Uses the index ellipsoid, ``n(phi)^-2 = cos^2(phi)/n_o^2 + sin^2(phi)/n_e^2``.
    """
    phi = _check_angle(phi)
    no = index_ordinary(crystal, wavelength_um)
    ne = index_extraordinary(crystal, wavelength_um)
    return 1.0 / np.sqrt(np.cos(phi) ** 2 / no**2 + np.sin(phi) ** 2 / ne**2)


def _dn_dlam(coeffs, lam, n):
    return _dn_squared_dlam(coeffs, lam) / (2.0 * n)


def group_index(crystal, omega, branch="o", phi=None):
    """Group index ``c dk/domega = n + omega dn/domega`` from the analytic derivative.

    Parameters
    ----------
    omega : float or array
        Angular frequency in rad/fs.
    branch : {"o", "e"}
        Ordinary wave, or extraordinary wave at angle ``phi`` to the optic axis.
    """
    lam = omega_to_wavelength(omega)
    lo, hi = crystal.window_um
    # the finite-difference stencil omega*(1 +- h) must stay inside the window
    if np.any(lam / (1.0 + FD_REL_STEP) < lo) or np.any(lam / (1.0 - FD_REL_STEP) > hi):
        raise DerivativeDomainError(
            f"wavelength too close to the {crystal.name} window edge for a derivative"
        )
    if branch == "o":
        n = index_ordinary(crystal, lam)
        dn = _dn_dlam(crystal.sellmeier_o, lam, n)
    elif branch == "e":
        if phi is None:
            raise ValueError("extraordinary branch needs the angle phi")
        phi = _check_angle(phi)
        no = index_ordinary(crystal, lam)
        ne = index_extraordinary(crystal, lam)
        n = 1.0 / np.sqrt(np.cos(phi) ** 2 / no**2 + np.sin(phi) ** 2 / ne**2)
        dno = _dn_dlam(crystal.sellmeier_o, lam, no)
        dne = _dn_dlam(crystal.sellmeier_e, lam, ne)
        dn = n**3 * (np.cos(phi) ** 2 * dno / no**3 + np.sin(phi) ** 2 * dne / ne**3)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    # dn/domega = -(lam/omega) dn/dlam
    return n - lam * dn


def group_index_fd(crystal, omega, branch="o", phi=None, rel_step=FD_REL_STEP):
    """Central finite-difference estimate of the group index; used to cross-check."""
    omega = np.asarray(omega, dtype=float)
    h = rel_step * omega

    def k_scaled(w):
        lam = omega_to_wavelength(w)
        if branch == "o":
            n = index_ordinary(crystal, lam)
        else:
            n = index_extraordinary_at_angle(crystal, lam, phi)
        return n * w

    return (k_scaled(omega + h) - k_scaled(omega - h)) / (2.0 * h)


def check_crystal(crystal, samples=400):
    """Return a list of physical-consistency problems (empty if none).

    The Sellmeier form must give a real index over the whole window. Indices
    must exceed one, and a negative crystal must keep n_e < n_o, on the lower
    half of the window in log-wavelength; the empirical IR term of common BBO
    fits drives n_o towards zero at the far edge, which is exactly what sets
    the long-wavelength cutoff.
    """
    lo, hi = crystal.window_um
    lam = np.geomspace(lo, hi, samples)
    problems = []
    for label, coeffs in (("n_o", crystal.sellmeier_o), ("n_e", crystal.sellmeier_e)):
        with np.errstate(all="ignore"):
            n2 = _n_squared(coeffs, lam)
        if not np.all(np.isfinite(n2)) or np.any(n2 <= 0):
            problems.append(f"{label}^2 is not positive everywhere in the window")
    if problems:
        return problems
    lower = lam[lam <= math.sqrt(lo * hi)]
    no = np.sqrt(_n_squared(crystal.sellmeier_o, lower))
    ne = np.sqrt(_n_squared(crystal.sellmeier_e, lower))
    if np.any(no <= 1.0) or np.any(ne <= 1.0):
        problems.append("refractive index <= 1 in the short-wavelength half of the window")
    if np.any(ne > no) and np.any(ne < no):
        problems.append("birefringence changes sign in the short-wavelength half of the window")
    return problems
