"""Semiclassical a posteriori corrections of classical spectra.

Every correction maps the classical TDCD G^cl(nu) onto a corrected G(nu)
and its antisymmetric part J(nu), as a function of x = beta*hbar*omega:

==================  ==============================  =========================
method              G prefactor                     J prefactor
==================  ==============================  =========================
standard            2 / (1 + exp(-x))               tanh(x/2)
harmonic            x / (1 - exp(-x))               x/2
schofield           exp(x/2)                        sinh(x/2)
schofield-harmonic  exp(x/4) sqrt(x/(1 - exp(-x)))  sqrt((x/2) sinh(x/2))
egelstaff           exp(x/2) F[C^cl(sqrt(t^2 + (beta hbar/2)^2))]
==================  ==============================  =========================

Egelstaff is not a pointwise prefactor and has its own entry point,
:func:`egelstaff_correct`.
"""
import warnings
from dataclasses import replace
from enum import Enum

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import expit

from .correlators import CorrelationSeries
from .exceptions import ValidationError
from .spectral import Spectrum, SpectrumKind, cosine_transform, reflection_index
from .units import ANGULAR_PER_WAVENUMBER, PhysicalContext, beta_hbar_omega, beta_hbar_time, thermal_energy

_SMALL_X = 1e-6
_ODD_RTOL = 1e-8


class CorrectionKind(str, Enum):
    STANDARD = "standard"
    HARMONIC = "harmonic"
    SCHOFIELD = "schofield"
    EGELSTAFF = "egelstaff"
    SCHOFIELD_HARMONIC = "schofield-harmonic"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        if key == "schofieldharmonic":
            key = "schofield-harmonic"
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValidationError(f"unknown correction {name!r}; choose from {choices}") from None


class EgelstaffNegativeWarning(UserWarning):
    """The Egelstaff-corrected J is negative somewhere at positive frequency."""


def _harmonic_g(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SMALL_X
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = x / -np.expm1(-x)
    return np.where(small, 1.0 + x / 2.0 + x * x / 12.0, out)


def _reject_egelstaff(kind):
    if kind is CorrectionKind.EGELSTAFF:
        raise ValidationError("egelstaff is not a pointwise prefactor; use egelstaff_correct")


def g_prefactor(kind, x):
    """Multiplier taking G^cl(nu) to the corrected G(nu)."""
    kind = CorrectionKind.parse(kind)
    _reject_egelstaff(kind)
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        if kind is CorrectionKind.STANDARD:
            out = 2.0 * expit(x)
        elif kind is CorrectionKind.HARMONIC:
            out = _harmonic_g(x)
        elif kind is CorrectionKind.SCHOFIELD:
            out = np.exp(x / 2.0)
        else:
            out = np.exp(x / 4.0) * np.sqrt(_harmonic_g(x))
    return out[()] if out.ndim == 0 else out


def j_prefactor(kind, x):
    """Multiplier taking G^cl(nu) to J(nu).

    The schofield-harmonic factor is even in ``x``; callers evaluate it on
    nu >= 0 and extend oddly (see :func:`correct_spectrum`).
    """
    kind = CorrectionKind.parse(kind)
    _reject_egelstaff(kind)
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        if kind is CorrectionKind.STANDARD:
            out = np.tanh(x / 2.0)
        elif kind is CorrectionKind.HARMONIC:
            out = x / 2.0
        elif kind is CorrectionKind.SCHOFIELD:
            out = np.sinh(x / 2.0)
        else:
            out = np.sqrt(x / 2.0 * np.sinh(x / 2.0))
    return out[()] if out.ndim == 0 else out


def _odd_extend(freqs, values):
    """Antisymmetrize using the nu >= 0 half of ``values``."""
    idx = reflection_index(freqs)
    out = np.array(values, dtype=float)
    neg = freqs < 0
    out[neg] = -out[idx][neg]
    out[freqs == 0] = 0.0
    return out


def detailed_balance_factor(x):
    """2 / (1 - exp(-x)); infinite at x = 0."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        return 2.0 / -np.expm1(-x)


def correct_spectrum(G_cl: Spectrum, kind, ctx: PhysicalContext):
    """Apply a pointwise correction to a classical TDCD.

    Parameters
    ----------
    G_cl : Spectrum
        Classical TDCD on a reflection-symmetric grid.
    kind : CorrectionKind or str
        Any method except egelstaff.
    ctx : PhysicalContext

    Returns
    -------
    (Spectrum, Spectrum)
        Corrected G and its antisymmetric part J.  J is exactly odd.  For
        schofield-harmonic the corrected G is built from J by detailed
        balance, which reproduces the tabulated G prefactor at nu > 0.
    """
    kind = CorrectionKind.parse(kind)
    if kind is CorrectionKind.EGELSTAFF:
        raise ValidationError("egelstaff consumes a correlation series; use egelstaff_correct")
    if G_cl.kind is not SpectrumKind.CLASSICAL_G:
        raise ValidationError(f"expected a classical_G spectrum, got {G_cl.kind.value}")
    f = G_cl.frequencies
    reflection_index(f)
    x = beta_hbar_omega(ctx, f)
    G = G_cl.values

    # j(|x|) sign(x) equals j(x) for the odd prefactors and is the odd
    # extension of the even schofield-harmonic one
    J = _odd_extend(f, j_prefactor(kind, np.abs(x)) * np.sign(x) * G)
    meta = dict(temperature=ctx.temperature, correction=kind.value)
    J_spec = Spectrum(f, J, SpectrumKind.J, **meta)
    if kind is CorrectionKind.SCHOFIELD_HARMONIC:
        G_corr = detailed_balance_G_from_J(J_spec, ctx)
    else:
        G_corr = Spectrum(f, g_prefactor(kind, x) * G, SpectrumKind.CORRECTED_G, **meta)
    return G_corr, J_spec


def detailed_balance_G_from_J(J: Spectrum, ctx: PhysicalContext) -> Spectrum:
    """G(nu) = 2 / (1 - exp(-x)) J(nu).

    Nodes with |x| < 1e-6 (where J vanishes and the factor diverges) take
    the mean of their neighbours.
    """
    if J.kind is not SpectrumKind.J:
        raise ValidationError(f"expected a J spectrum, got {J.kind.value}")
    x = beta_hbar_omega(ctx, J.frequencies)
    x = np.atleast_1d(x)
    small = np.abs(x) < _SMALL_X
    with np.errstate(invalid="ignore"):
        G = np.where(small, 0.0, detailed_balance_factor(np.where(small, 1.0, x)) * J.values)
    for i in np.flatnonzero(small):
        nb = [G[k] for k in (i - 1, i + 1) if 0 <= k < G.size and not small[k]]
        G[i] = np.mean(nb) if nb else 0.0
    return Spectrum(J.frequencies, G, SpectrumKind.CORRECTED_G,
                    temperature=ctx.temperature, correction=J.correction)


def egelstaff_correct(C_cl: CorrelationSeries, ctx: PhysicalContext, freq_grid):
    """Egelstaff correction from a (windowed) classical correlator.

    C^cl is resampled at sqrt(t^2 + (beta hbar/2)^2) with a monotone cubic
    interpolant, set to zero beyond the last lag, cosine transformed, then
    multiplied by exp(x/2) for G and sinh(x/2) for J.  Negative J at positive
    frequency triggers :class:`EgelstaffNegativeWarning`.
    """
    shift = beta_hbar_time(ctx) / 2.0
    t = C_cl.times
    if t[-1] < shift:
        raise ValidationError(
            f"series extends to {t[-1]:g} fs, shorter than beta*hbar/2 = {shift:.4g} fs")
    interp = PchipInterpolator(t, C_cl.values, extrapolate=False)
    resampled = np.nan_to_num(interp(np.sqrt(t * t + shift * shift)), nan=0.0)
    freq_grid = np.asarray(freq_grid, dtype=float)
    base = cosine_transform(resampled, C_cl.dt, freq_grid)
    x = beta_hbar_omega(ctx, freq_grid)
    with np.errstate(over="ignore"):
        G = np.exp(x / 2.0) * base
        J = np.sinh(x / 2.0) * base
    meta = dict(temperature=ctx.temperature, correction=CorrectionKind.EGELSTAFF.value)
    pos = freq_grid > 0
    if np.any(J[pos] < 0):
        lowest = freq_grid[pos][J[pos] < 0].min()
        warnings.warn(
            f"egelstaff J is negative at positive frequencies (from {lowest:g} cm^-1); "
            "values are reported unchanged", EgelstaffNegativeWarning, stacklevel=2)
    return (Spectrum(freq_grid, G, SpectrumKind.CORRECTED_G, **meta),
            Spectrum(freq_grid, J, SpectrumKind.J, **meta))


def reconstruct_correlator(J: Spectrum, ctx: PhysicalContext, time_grid):
    """Complex correlator C(t) from an odd J(nu).

    C(t) = 1/(2 pi) int exp(-i omega t) (coth(x/2) + 1) J d omega, by the
    trapezoid rule over the wavenumber grid (d omega = 2 pi c d nu).  At nu = 0
    the integrand takes its limit 2 k_B T J'(0), with J'(0) from a central
    difference.  Real and imaginary parts are accumulated separately so that
    C(-t) = conj(C(t)) holds exactly.
    """
    if J.kind is not SpectrumKind.J:
        raise ValidationError(f"expected a J spectrum, got {J.kind.value}")
    f, v = J.frequencies, J.values
    idx = reflection_index(f)
    scale = np.max(np.abs(v)) if v.size else 0.0
    if scale > 0 and np.max(np.abs(v + v[idx])) > _ODD_RTOL * scale:
        raise ValidationError("J is not odd within tolerance")

    kT = thermal_energy(ctx)
    x = f / kT
    even = np.empty_like(v)
    big = np.abs(x) >= _SMALL_X
    even[big] = v[big] / np.tanh(x[big] / 2.0)
    tiny = ~big & (f != 0)
    even[tiny] = (2.0 / x[tiny] + x[tiny] / 6.0) * v[tiny]
    for i in np.flatnonzero(f == 0):
        if 0 < i < f.size - 1:
            slope = (v[i + 1] - v[i - 1]) / (f[i + 1] - f[i - 1])
        else:
            slope = 0.0
        even[i] = 2.0 * kT * slope

    # trapezoid weights on a possibly non-uniform grid
    w = np.zeros_like(f)
    d = np.diff(f)
    w[:-1] += d / 2.0
    w[1:] += d / 2.0
    pref = ANGULAR_PER_WAVENUMBER / (2.0 * np.pi)

    t = np.atleast_1d(np.asarray(time_grid, dtype=float))
    re = np.empty(t.size)
    im = np.empty(t.size)
    we, wo = w * even, w * v
    omega = ANGULAR_PER_WAVENUMBER * f
    block = max(1, 4_000_000 // max(f.size, 1))
    for s in range(0, t.size, block):
        phase = np.outer(t[s:s + block], omega)
        re[s:s + block] = pref * (np.cos(phase) @ we)
        im[s:s + block] = -pref * (np.sin(phase) @ wo)
    return re + 1j * im
