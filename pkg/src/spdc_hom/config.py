"""Experimental setup: pump, crystal and slit scheme."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .dispersion import BBO, PRESETS, CrystalDispersion, load_crystal
from .errors import ConfigError
from .units import C_UM_PER_FS, wavelength_to_omega

SCHEMES = ("two_slit", "four_slit")
_SCHEME_ALIASES = {"two": "two_slit", "2": "two_slit", "four": "four_slit", "4": "four_slit"}


def worker_count():
    """Threads for parallel evaluation, capped by the SPDC_SIM_THREADS variable."""
    default = os.cpu_count() or 1
    cap = os.environ.get("SPDC_SIM_THREADS")
    if cap is None:
        return default
    try:
        return max(1, min(default, int(cap)))
    except ValueError as exc:
        raise ConfigError({"SPDC_SIM_THREADS": f"expected an integer, got {cap!r}"}) from exc


def normalize_scheme(scheme):
    scheme = _SCHEME_ALIASES.get(str(scheme), str(scheme))
    if scheme not in SCHEMES:
        raise ConfigError({"scheme": f"expected one of {SCHEMES}, got {scheme!r}"})
    return scheme


@dataclass(frozen=True)
class SetupConfig:
    """Pump, crystal and detection geometry.

    Defaults reproduce the working point used throughout: a 0.5 cm BBO
    crystal pumped at 0.4047 um, cut so that degenerate emission is collinear.
    ``tau_ps`` is the pump duration and ``waist_um`` the pump waist.
    """

    crystal: CrystalDispersion = field(default=BBO)
    lambda_p_um: float = 0.4047
    L_cm: float = 0.5
    phi0_rad: float = 0.5007589
    tau_ps: float = 10.0
    waist_um: float = 100.0
    scheme: str = "two_slit"

    def __post_init__(self):
        errors = {}
        for name in ("lambda_p_um", "L_cm", "tau_ps", "waist_um"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                errors[name] = "must be a number"
                continue
            if not (math.isfinite(value) and value > 0):
                errors[name] = "must be a positive finite number"
            object.__setattr__(self, name, value)
        try:
            phi0 = float(self.phi0_rad)
            if not (0.0 <= phi0 <= math.pi / 2):
                errors["phi0_rad"] = "must lie in [0, pi/2]"
            object.__setattr__(self, "phi0_rad", phi0)
        except (TypeError, ValueError):
            errors["phi0_rad"] = "must be a number"
        try:
            object.__setattr__(self, "scheme", normalize_scheme(self.scheme))
        except ConfigError as exc:
            errors.update(exc.errors)
        if not isinstance(self.crystal, CrystalDispersion):
            errors["crystal"] = "must be a CrystalDispersion"
        if errors:
            raise ConfigError(errors)

    @property
    def omega0(self):
        """Pump carrier angular frequency in rad/fs."""
        return float(wavelength_to_omega(self.lambda_p_um))

    @property
    def L_um(self):
        return self.L_cm * 1e4

    @property
    def tau_fs(self):
        return self.tau_ps * 1e3

    def length_time(self, coefficient):
        """``omega0 * L * coefficient / c``: a crystal transit time in 1/omega0 units."""
        return self.omega0 * self.L_um * coefficient / C_UM_PER_FS

    def with_(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        crystal = self.crystal
        preset = PRESETS.get(crystal.name)
        return {
            "crystal": crystal.name if preset == crystal else crystal.to_dict(),
            "lambda_p_um": self.lambda_p_um,
            "L_cm": self.L_cm,
            "phi0_rad": self.phi0_rad,
            "tau_ps": self.tau_ps,
            "waist_um": self.waist_um,
            "scheme": self.scheme,
        }

    @classmethod
    def from_dict(cls, data):
        known = {"crystal", "lambda_p_um", "L_cm", "phi0_rad", "tau_ps", "waist_um", "scheme"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError({k: "unknown field" for k in sorted(unknown)})
        kwargs = dict(data)
        if "crystal" in kwargs:
            kwargs["crystal"] = load_crystal(kwargs["crystal"])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path):
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError({"config": f"not valid JSON: {exc}"}) from exc
        if not isinstance(data, dict):
            raise ConfigError({"config": "top level must be an object"})
        return cls.from_dict(data)
