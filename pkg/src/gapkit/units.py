"""Unit system and thermal quantities.

Energies and frequencies are wavenumbers (cm^-1), times are femtoseconds.
In this system hbar*Omega is numerically the wavenumber itself, so the
dimensionless combination beta*hbar*omega is simply nu / (k_B T [cm^-1]).
Angular frequencies used for time evolution are obtained with the factor
2*pi*c expressed in rad fs^-1 per cm^-1.
"""
from dataclasses import dataclass

import numpy as np
from scipy import constants as _const

from .exceptions import ValidationError

#: Boltzmann constant in cm^-1 / K, k_B / (h c).
BOLTZMANN_WAVENUMBER = _const.k / (_const.h * _const.c * 100.0)
#: 2 pi c in rad fs^-1 per cm^-1.
ANGULAR_PER_WAVENUMBER = 2.0 * np.pi * _const.c * 100.0 * 1e-15
#: hbar in cm^-1 fs (hbar * omega[rad/fs] gives cm^-1).
HBAR = 1.0 / ANGULAR_PER_WAVENUMBER


@dataclass(frozen=True)
class PhysicalContext:
    """Temperature plus the fixed unit constants.

    Parameters
    ----------
    temperature : float
        Temperature in kelvin, strictly positive.
    """

    temperature: float

    def __post_init__(self):
        t = float(self.temperature)
        if not np.isfinite(t) or t <= 0.0:
            raise ValidationError(f"temperature must be > 0 K, got {self.temperature!r}")
        object.__setattr__(self, "temperature", t)

    @property
    def boltzmann_wavenumber(self) -> float:
        return BOLTZMANN_WAVENUMBER

    @property
    def angular_per_wavenumber(self) -> float:
        return ANGULAR_PER_WAVENUMBER


def thermal_energy(ctx: PhysicalContext) -> float:
    """k_B T in cm^-1."""
    return BOLTZMANN_WAVENUMBER * ctx.temperature


def beta_hbar_omega(ctx: PhysicalContext, freq):
    """Dimensionless beta*hbar*omega for a wavenumber (scalar or array)."""
    x = np.asarray(freq, dtype=float) / thermal_energy(ctx)
    return float(x) if x.ndim == 0 else x


def beta_hbar_time(ctx: PhysicalContext) -> float:
    """beta*hbar expressed as a time in fs."""
    return 1.0 / (ANGULAR_PER_WAVENUMBER * thermal_energy(ctx))


def angular(freq):
    """Convert wavenumbers to angular frequency in rad/fs."""
    return ANGULAR_PER_WAVENUMBER * np.asarray(freq, dtype=float)
