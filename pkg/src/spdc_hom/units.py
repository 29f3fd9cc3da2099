"""Physical constants and unit conversions.

Wavelengths are in micrometres, angular frequencies in rad/fs and times in
femtoseconds unless a function says otherwise. Most of the interference code
works in dimensionless units where frequencies are divided by the pump
frequency omega0 and times are multiplied by it.
"""

import numpy as np

#: Speed of light in micrometres per femtosecond.
C_UM_PER_FS = 0.299792458

#: Width parameter of the Gaussian model exp(-alpha x^2) of sinc(x);
#: chosen so both functions have the same FWHM.
SINC_GAUSS_ALPHA = 0.19292


def wavelength_to_omega(wavelength_um):
    """Angular frequency (rad/fs) of a vacuum wavelength in micrometres."""
    return 2.0 * np.pi * C_UM_PER_FS / np.asarray(wavelength_um, dtype=float)


def omega_to_wavelength(omega):
    """Vacuum wavelength (micrometres) of an angular frequency in rad/fs."""
    return 2.0 * np.pi * C_UM_PER_FS / np.asarray(omega, dtype=float)


def fs_to_omega0_units(t_fs, omega0):
    return np.asarray(t_fs, dtype=float) * omega0


def omega0_units_to_fs(t, omega0):
    return np.asarray(t, dtype=float) / omega0
