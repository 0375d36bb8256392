"""Gaussian windowing, cosine transform and spectrum bookkeeping.

Transform convention: G(omega) = int exp(i omega t) C(t) dt with omega in
rad/fs and t in fs, so spectra carry cm^-2 fs.  Frequencies on every public
grid are wavenumbers; peak areas quoted as "angular measure" are
``2*pi*c * int G dnu``.
"""
import json
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.integrate import trapezoid

from .correlators import CorrelationSeries
from .exceptions import ValidationError
from .units import ANGULAR_PER_WAVENUMBER

DEFAULT_WINDOW_FRACTION = 0.09
DEFAULT_FREQ_MAX = 2000.0
DEFAULT_FREQ_STEP = 1.0
_SYMMETRY_RTOL = 1e-9


class SpectrumKind(str, Enum):
    CLASSICAL_G = "classical_G"
    CORRECTED_G = "corrected_G"
    J = "J"
    SPECTRAL_DENSITY_J = "spectral_density_j"


@dataclass(frozen=True)
class Spectrum:
    """Real function on a monotone wavenumber grid.

    Attributes
    ----------
    frequencies : ndarray
        Increasing wavenumbers, cm^-1.
    values : ndarray
        Spectrum values, cm^-2 fs (``spectral_density_j`` has the same units
        divided by pi).
    kind : SpectrumKind
    temperature : float or None
        Kelvin; ``None`` for temperature-independent references.
    correction : str or None
        Correction method name for corrected spectra.
    """

    frequencies: np.ndarray
    values: np.ndarray
    kind: SpectrumKind
    temperature: float | None = None
    correction: str | None = None

    def __post_init__(self):
        f = np.array(self.frequencies, dtype=float)
        v = np.array(self.values, dtype=float)
        if f.ndim != 1 or f.shape != v.shape or f.size == 0:
            raise ValidationError("frequencies and values must be matching non-empty 1-D arrays")
        if f.size > 1 and np.any(np.diff(f) <= 0):
            raise ValidationError("frequency grid must be strictly increasing")
        kind = SpectrumKind(self.kind)
        if kind is SpectrumKind.SPECTRAL_DENSITY_J and f[0] < 0:
            raise ValidationError("spectral density j is defined on non-negative frequencies only")
        f.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "kind", kind)

    def positive(self):
        """Restriction to nu > 0."""
        m = self.frequencies > 0
        return self.frequencies[m], self.values[m]

    def angular_area(self, lo=None, hi=None):
        """Trapezoid integral over [lo, hi] in the angular measure d omega."""
        f, v = self.frequencies, self.values
        m = np.ones(f.size, bool)
        if lo is not None:
            m &= f >= lo
        if hi is not None:
            m &= f <= hi
        return ANGULAR_PER_WAVENUMBER * trapezoid(v[m], f[m])

    def to_json(self):
        return {
            "kind": self.kind.value,
            "temperature_K": self.temperature,
            "correction": self.correction,
            "frequencies_cm1": self.frequencies.tolist(),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(
                frequencies=obj["frequencies_cm1"],
                values=obj["values"],
                kind=obj["kind"],
                temperature=obj.get("temperature_K"),
                correction=obj.get("correction"),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ValidationError(f"malformed spectrum JSON: {exc}") from None


def save_spectrum(spec: Spectrum, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec.to_json(), fh)


def load_spectrum(path) -> Spectrum:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from None
    return Spectrum.from_json(obj)


@dataclass(frozen=True)
class WindowSpec:
    """Gaussian taper exp(-t^2 / (2 sigma_t^2)) with sigma_t^2 = fraction * t_max^2."""

    t_max: float
    variance_fraction: float = DEFAULT_WINDOW_FRACTION

    def __post_init__(self):
        if not self.variance_fraction > 0 or not self.t_max > 0:
            raise ValidationError("window needs variance_fraction > 0 and t_max > 0")

    @property
    def variance(self) -> float:
        """sigma_t^2 in fs^2."""
        return self.variance_fraction * self.t_max**2

    def __call__(self, t):
        return np.exp(-np.square(t) / (2.0 * self.variance))

    def frequency_sigma(self) -> float:
        """Standard deviation of the frequency-domain kernel, cm^-1."""
        return 1.0 / (np.sqrt(self.variance) * ANGULAR_PER_WAVENUMBER)

    def frequency_fwhm(self) -> float:
        return 2.0 * np.sqrt(2.0 * np.log(2.0)) * self.frequency_sigma()

    @classmethod
    def for_series(cls, series: CorrelationSeries, fraction=DEFAULT_WINDOW_FRACTION):
        """Window whose t_max is the last lag of ``series``."""
        t_max = series.times[-1]
        if t_max <= 0:
            raise ValidationError("series must contain at least two lags to define t_max")
        return cls(t_max=t_max, variance_fraction=fraction)


def apply_gaussian_window(series: CorrelationSeries, spec: WindowSpec) -> CorrelationSeries:
    return series.with_values(series.values * spec(series.times))


def frequency_grid(freq_max=DEFAULT_FREQ_MAX, step=DEFAULT_FREQ_STEP, symmetric=True):
    """Uniform grid 0..freq_max, mirrored to -freq_max..freq_max if ``symmetric``."""
    if not step > 0 or not freq_max > 0:
        raise ValidationError("freq_max and step must be positive")
    n = int(round(freq_max / step))
    pos = step * np.arange(n + 1)
    if not symmetric:
        return pos
    return np.concatenate([-pos[:0:-1], pos])


def cosine_transform(values, dt, freqs):
    """dt * (C_0 + 2 sum_{k>=1} C_k cos(omega t_k)) on a wavenumber grid."""
    values = np.asarray(values, dtype=float)
    freqs = np.asarray(freqs, dtype=float)
    weights = np.full(values.size, 2.0)
    weights[0] = 1.0
    t = dt * np.arange(values.size)
    out = np.empty(freqs.size)
    # blocks bound the size of the cosine table
    block = max(1, 2_000_000 // max(values.size, 1))
    wv = weights * values
    for s in range(0, freqs.size, block):
        phase = np.outer(ANGULAR_PER_WAVENUMBER * freqs[s:s + block], t)
        out[s:s + block] = dt * (np.cos(phase) @ wv)
    return out


def classical_tdcd(series: CorrelationSeries, freq_grid) -> Spectrum:
    """Classical TDCD G^cl from a real, even-extended correlator.

    The caller applies the window first (or deliberately does not).
    """
    freq_grid = np.asarray(freq_grid, dtype=float)
    if freq_grid.size == 0:
        raise ValidationError("empty frequency grid")
    return Spectrum(freq_grid, cosine_transform(series.values, series.dt, freq_grid),
                    SpectrumKind.CLASSICAL_G, temperature=series.temperature)


def reflection_index(freqs):
    """Index map i -> index of -freqs[i]; raises if the grid is not symmetric."""
    freqs = np.asarray(freqs, dtype=float)
    rev = freqs[::-1]
    scale = max(np.max(np.abs(freqs)), 1e-300)
    if not np.allclose(freqs, -rev, rtol=0, atol=_SYMMETRY_RTOL * scale):
        raise ValidationError("frequency grid is not reflection-symmetric about 0")
    return np.arange(freqs.size)[::-1]


def sym_asym_split(spec: Spectrum):
    """Return (G_sym, G_asym); the antisymmetric part is tagged as J."""
    idx = reflection_index(spec.frequencies)
    g, gr = spec.values, spec.values[idx]
    sym = replace(spec, values=0.5 * (g + gr))
    asym = replace(spec, values=0.5 * (g - gr), kind=SpectrumKind.J)
    return sym, asym


def spectral_density_from_J(J: Spectrum) -> Spectrum:
    """j(nu) = Theta(nu) J(nu) / pi on the non-negative part of the grid."""
    if J.kind is not SpectrumKind.J:
        raise ValidationError(f"expected a J spectrum, got {J.kind.value}")
    m = J.frequencies >= 0
    return replace(J, frequencies=J.frequencies[m], values=J.values[m] / np.pi,
                   kind=SpectrumKind.SPECTRAL_DENSITY_J)


def J_from_spectral_density(j: Spectrum) -> Spectrum:
    """J(nu) = pi (j(nu) - j(-nu)) on the mirrored grid."""
    if j.kind is not SpectrumKind.SPECTRAL_DENSITY_J:
        raise ValidationError(f"expected a spectral_density_j spectrum, got {j.kind.value}")
    f, v = j.frequencies, j.values
    if f[0] == 0.0:
        freqs = np.concatenate([-f[:0:-1], f])
        vals = np.pi * np.concatenate([-v[:0:-1], [0.0], v[1:]])
    else:
        freqs = np.concatenate([-f[::-1], f])
        vals = np.pi * np.concatenate([-v[::-1], v])
    return replace(j, frequencies=freqs, values=vals, kind=SpectrumKind.J)
