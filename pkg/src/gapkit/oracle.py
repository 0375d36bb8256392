"""Shifted-harmonic-surface bath: sampling, exact trajectories and references.

Internal phase-space units are mass-scaled with angular frequencies omega in
rad/fs and hbar = 1/(2 pi c) cm^-1 fs, so that (P^2 + omega^2 Q^2)/2 is an
energy in cm^-1.  Public inputs and outputs use wavenumbers.

The reduced gap of one configuration is::

    Delta = -sum_j sqrt(2 hbar X_j omega_j^3) Q_j
            + sum_jk xi_jk omega_j omega_k Q_j Q_k

so the dimensionless quadratic coefficients xi_jk are measured against the
ground-state curvature (xi_jj = 1/2 equals the harmonic potential itself).
"""
import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .correlators import CorrelationSeries, ThreeTimeGrid
from .exceptions import ValidationError
from .spectral import Spectrum, SpectrumKind, WindowSpec, apply_gaussian_window, cosine_transform
from .trajectory import GapTrajectory, TrajectoryStats
from .units import ANGULAR_PER_WAVENUMBER, HBAR, PhysicalContext, thermal_energy

#: Samples per independent random sub-stream.
BLOCK_SIZE = 4096


class Distribution(str, Enum):
    BOLTZMANN = "boltzmann"
    WIGNER = "wigner"


@dataclass(frozen=True)
class BathModeSet:
    """Discrete harmonic modes.

    Attributes
    ----------
    omegas : ndarray
        Mode wavenumbers Omega_j in cm^-1, all > 0.
    huang_rhys : ndarray
        Dimensionless Huang-Rhys factors X_j >= 0.
    """

    omegas: np.ndarray
    huang_rhys: np.ndarray

    def __post_init__(self):
        om = np.atleast_1d(np.array(self.omegas, dtype=float))
        x = np.atleast_1d(np.array(self.huang_rhys, dtype=float))
        if om.shape != x.shape or om.ndim != 1:
            raise ValidationError("omegas and huang_rhys must be 1-D arrays of equal length")
        if np.any(~np.isfinite(om)) or np.any(om <= 0):
            raise ValidationError("mode frequencies must be > 0")
        if np.any(~np.isfinite(x)) or np.any(x < 0):
            raise ValidationError("Huang-Rhys factors must be >= 0")
        om.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "omegas", om)
        object.__setattr__(self, "huang_rhys", x)

    @classmethod
    def single(cls, omega, huang_rhys):
        return cls([omega], [huang_rhys])

    def __len__(self):
        return self.omegas.size

    def __add__(self, other):
        return BathModeSet(np.concatenate([self.omegas, other.omegas]),
                           np.concatenate([self.huang_rhys, other.huang_rhys]))

    @property
    def angular(self):
        """omega_j in rad/fs."""
        return ANGULAR_PER_WAVENUMBER * self.omegas

    @property
    def kappa(self):
        """Coupling constants hbar Omega_j sqrt(X_j), cm^-1."""
        return self.omegas * np.sqrt(self.huang_rhys)

    @property
    def displacement(self):
        """Surface shifts delta Q_j = sqrt(2 hbar X_j / omega_j) (positive root)."""
        return np.sqrt(2.0 * HBAR * self.huang_rhys / self.angular)

    @property
    def linear_coefficients(self):
        """d Delta / d Q_j = -omega_j^2 delta Q_j."""
        return -np.sqrt(2.0 * HBAR * self.huang_rhys * self.angular**3)

    def zeta(self, ctx):
        return self.omegas / thermal_energy(ctx)


def reorganization_energy(modes: BathModeSet) -> float:
    """lambda_R = sum_j Omega_j X_j in cm^-1."""
    return float(np.sum(modes.omegas * modes.huang_rhys))


def load_modes(source) -> BathModeSet:
    """Read ``omega_cm1,huang_rhys`` CSV (``#`` comment lines allowed)."""
    text = source.read() if hasattr(source, "read") else open(source, encoding="utf-8").read()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    rows = list(csv.reader(lines))
    if not rows or [c.strip() for c in rows[0]] != ["omega_cm1", "huang_rhys"]:
        raise ValidationError("modes CSV must start with header 'omega_cm1,huang_rhys'")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ValidationError(f"non-numeric cell in modes CSV: {exc}") from None
    if data.size == 0:
        raise ValidationError("modes CSV lists no modes")
    return BathModeSet(data[:, 0], data[:, 1])


@dataclass(frozen=True)
class CouplingForm:
    """Linear coupling, optionally with a symmetric quadratic term xi_jk."""

    quadratic: np.ndarray | None = None

    def __post_init__(self):
        if self.quadratic is not None:
            q = np.atleast_2d(np.array(self.quadratic, dtype=float))
            if q.shape[0] != q.shape[1] or not np.allclose(q, q.T):
                raise ValidationError("quadratic coefficient matrix must be square and symmetric")
            q.setflags(write=False)
            object.__setattr__(self, "quadratic", q)

    @property
    def is_linear(self):
        return self.quadratic is None or not np.any(self.quadratic)

    def coefficients(self, modes: BathModeSet):
        """(linear, quadratic) coefficients in internal Q units."""
        lin = modes.linear_coefficients
        if self.is_linear:
            return lin, None
        if self.quadratic.shape != (len(modes), len(modes)):
            raise ValidationError("quadratic matrix size does not match the number of modes")
        w = modes.angular
        return lin, self.quadratic * np.outer(w, w)


LINEAR = CouplingForm()


def default_quadratic_form(modes: BathModeSet, ctx: PhysicalContext, fraction=0.1) -> CouplingForm:
    """Diagonal xi on the first mode only.

    The magnitude makes the standard deviation of the quadratic term under
    Boltzmann sampling equal to ``fraction`` times the linear-coupling
    standard deviation s: with q^2 exponentially distributed in energy,
    std(xi omega^2 Q^2) = sqrt(2) xi k_B T, so xi = fraction * s / (sqrt(2) k_B T).
    """
    kT = thermal_energy(ctx)
    s_lin = np.sqrt(np.sum(2.0 * modes.huang_rhys * modes.omegas * kT))
    xi = np.zeros((len(modes), len(modes)))
    xi[0, 0] = fraction * s_lin / (np.sqrt(2.0) * kT)
    return CouplingForm(xi)


@dataclass(frozen=True)
class PhaseSample:
    """Initial conditions; arrays of shape (n_samples, n_modes)."""

    q0: np.ndarray
    p0: np.ndarray

    def __post_init__(self):
        q = np.atleast_2d(np.array(self.q0, dtype=float))
        p = np.atleast_2d(np.array(self.p0, dtype=float))
        if q.shape != p.shape or not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
            raise ValidationError("q0 and p0 must be finite arrays of equal shape")
        object.__setattr__(self, "q0", q)
        object.__setattr__(self, "p0", p)

    def __len__(self):
        return self.q0.shape[0]


def _energy_variance(modes, ctx, dist):
    """<omega^2 Q^2> = <P^2> per mode, cm^-1."""
    dist = Distribution(dist)
    kT = thermal_energy(ctx)
    if dist is Distribution.BOLTZMANN:
        return np.full(len(modes), kT)
    return 0.5 * modes.omegas / np.tanh(0.5 * modes.zeta(ctx))


def _block_rng(seed, block):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(block)])))


def _sample_block(modes, ctx, dist, seed, block, size):
    var = _energy_variance(modes, ctx, dist)
    z = _block_rng(seed, block).standard_normal((2, size, len(modes)))
    sd = np.sqrt(var)
    return z[0] * sd / modes.angular, z[1] * sd


def sample_phase_space(modes, ctx, dist, n_samples, seed=0) -> PhaseSample:
    """Draw ``n_samples`` initial conditions.

    Sample i always comes from sub-stream (seed, i // BLOCK_SIZE), so the
    draws do not depend on how blocks are scheduled.
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be >= 1")
    qs, ps = [], []
    for b, start in enumerate(range(0, n_samples, BLOCK_SIZE)):
        q, p = _sample_block(modes, ctx, dist, seed, b, min(BLOCK_SIZE, n_samples - start))
        qs.append(q)
        ps.append(p)
    return PhaseSample(np.concatenate(qs), np.concatenate(ps))


def sample_boltzmann(modes, ctx, n_samples=1, seed=0) -> PhaseSample:
    """Classical thermal state: Q0 ~ N(0, k_B T / omega^2), P0 ~ N(0, k_B T)."""
    return sample_phase_space(modes, ctx, Distribution.BOLTZMANN, n_samples, seed)


def sample_wigner(modes, ctx, n_samples=1, seed=0) -> PhaseSample:
    """Wigner function of the thermal state: <omega^2 Q0^2> = <P0^2> = (hbar omega / 2) coth(zeta/2)."""
    return sample_phase_space(modes, ctx, Distribution.WIGNER, n_samples, seed)


def propagate(modes, sample: PhaseSample, times):
    """Exact free evolution; returns (Q, P) with shape (n_samples, n_times, n_modes)."""
    w = modes.angular
    ph = np.multiply.outer(np.asarray(times, dtype=float), w)
    c, s = np.cos(ph), np.sin(ph)
    q0, p0 = sample.q0[:, None, :], sample.p0[:, None, :]
    return q0 * c + p0 / w * s, p0 * c - w * q0 * s


def gap_trace(modes, sample: PhaseSample, times, form: CouplingForm = LINEAR):
    """Reduced energy gap along each trajectory, cm^-1.

    Returns shape (n_samples, n_times).
    """
    lin, quad = form.coefficients(modes)
    return kernels.gap_traces(sample.q0, sample.p0, modes.angular, lin, quad, times)


def thermal_gap_mean(modes, ctx, dist, form: CouplingForm = LINEAR) -> float:
    """<Delta> under the sampling distribution (nonzero only for quadratic coupling)."""
    if form.is_linear:
        return 0.0
    return float(np.sum(np.diag(form.quadratic) * _energy_variance(modes, ctx, dist)))


def _uniform_dt(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1 or times[0] != 0.0:
        raise ValidationError("times must be a 1-D grid starting at 0")
    if times.size == 1:
        return 1.0
    dt = times[1] - times[0]
    if dt <= 0 or not np.allclose(np.diff(times), dt, rtol=1e-9, atol=0):
        raise ValidationError("times must be uniform")
    return dt


def _run_blocks(fn, n_samples, workers):
    blocks = list(enumerate(range(0, n_samples, BLOCK_SIZE)))
    args = [(b, min(BLOCK_SIZE, n_samples - start)) for b, start in blocks]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: fn(*a), args))
    else:
        parts = [fn(*a) for a in args]
    # fixed reduction order keeps results independent of the worker count
    return tuple(sum(p[i] for p in parts) for i in range(len(parts[0])))


def _mean_and_stderr(total, total_sq, n):
    mean = total / n
    var = np.maximum(total_sq - n * mean * mean, 0.0) / (n - 1)
    return mean, np.sqrt(var / n)


def mc_correlator(modes, ctx, dist, form: CouplingForm = LINEAR, n_samples=100_000,
                  times=None, seed=0, workers=1):
    """Ensemble estimate of <dDelta(t) dDelta(0)> over fresh trajectories.

    dDelta is the gap minus its thermal mean (zero for linear coupling).

    Returns
    -------
    series : CorrelationSeries
        Mean over samples, cm^-2.
    stderr : ndarray
        Standard error of the mean per lag.
    """
    if n_samples < 2:
        raise ValidationError("n_samples must be >= 2")
    dist = Distribution(dist)
    times = np.asarray(times if times is not None else 4.0 * np.arange(401), dtype=float)
    dt = _uniform_dt(times)
    lin, quad = form.coefficients(modes)
    w = modes.angular
    shift = thermal_gap_mean(modes, ctx, dist, form)

    def block(b, size):
        q, p = _sample_block(modes, ctx, dist, seed, b, size)
        if shift == 0.0:
            return kernels.mc_accumulate(q, p, w, lin, quad, times)
        d = kernels.gap_traces(q, p, w, lin, quad, times) - shift
        prod = d * d[:, :1]
        return prod.sum(axis=0), (prod * prod).sum(axis=0)

    total, total_sq = _run_blocks(block, n_samples, workers)
    mean, se = _mean_and_stderr(total, total_sq, n_samples)
    st = TrajectoryStats(mean=shift, variance=max(float(mean[0]), 0.0))
    return CorrelationSeries(dt, mean, st, ctx.temperature), se


def mc_three_time(modes, ctx, dist, form: CouplingForm = LINEAR, n_samples=10_000,
                  dt=4.0, max_k=20, max_j=20, seed=0, workers=1):
    """Ensemble estimate of <dD(0) dD(k dt) dD((k+j) dt)> with standard errors."""
    if n_samples < 2:
        raise ValidationError("n_samples must be >= 2")
    dist = Distribution(dist)
    lin, quad = form.coefficients(modes)
    w = modes.angular
    shift = thermal_gap_mean(modes, ctx, dist, form)

    def block(b, size):
        q, p = _sample_block(modes, ctx, dist, seed, b, size)
        d0 = kernels.gap_traces(q, p, w, lin, quad, [0.0])[:, 0] - shift
        return (*kernels.mc_accumulate3(q, p, w, lin, quad, dt, max_k, max_j, shift),
                float(np.dot(d0, d0)))

    total, total_sq, m2 = _run_blocks(block, n_samples, workers)
    mean, se = _mean_and_stderr(total, total_sq, n_samples)
    st = TrajectoryStats(mean=shift, variance=m2 / n_samples)
    return ThreeTimeGrid(dt, mean, st), se


def concatenated_trace(modes, ctx, dist, form: CouplingForm = LINEAR, n_segments=10,
                       steps=1000, dt=4.0, seed=0, label="oracle") -> GapTrajectory:
    """One long gap trace built from ``n_segments`` fresh trajectories of ``steps`` points."""
    if n_segments < 1 or steps < 1 or n_segments * steps < 2:
        raise ValidationError("need at least 2 points in total")
    sample = sample_phase_space(modes, ctx, dist, n_segments, seed)
    times = dt * np.arange(steps)
    gaps = gap_trace(modes, sample, times, form)
    return GapTrajectory(dt=dt, samples=gaps.ravel(), temperature=ctx.temperature, label=label)


# -- closed forms --------------------------------------------------------------

def _cos_table(modes, times):
    return np.cos(np.multiply.outer(np.asarray(times, dtype=float), modes.angular))


def analytic_alpha_boltzmann(modes, ctx, times):
    """sum_j (hbar Omega_j)^2 X_j cos(Omega_j t) (2 / zeta_j)."""
    amp = modes.omegas**2 * modes.huang_rhys * (2.0 / modes.zeta(ctx))
    return _cos_table(modes, times) @ amp


def analytic_alpha_wigner(modes, ctx, times):
    """sum_j (hbar Omega_j)^2 X_j cos(Omega_j t) coth(zeta_j / 2)."""
    amp = modes.omegas**2 * modes.huang_rhys / np.tanh(modes.zeta(ctx) / 2.0)
    return _cos_table(modes, times) @ amp


def analytic_quantum_alpha(modes, ctx, times):
    """Quantum correlator sum_j kappa_j^2 [coth(zeta_j/2) cos(Omega_j t) - i sin(Omega_j t)]."""
    k2 = modes.kappa**2
    ph = np.multiply.outer(np.asarray(times, dtype=float), modes.angular)
    coth = 1.0 / np.tanh(modes.zeta(ctx) / 2.0)
    return np.cos(ph) @ (k2 * coth) - 1j * (np.sin(ph) @ k2)


def coordinate_correlator(modes, ctx, dist, times):
    """<Q_j(t) Q_j(0)> per mode, shape (n_times, n_modes); cross-mode terms vanish."""
    var_q = _energy_variance(modes, ctx, dist) / modes.angular**2
    return _cos_table(modes, times) * var_q


def analytic_J(modes, broadening, freq_grid) -> Spectrum:
    """pi sum_j kappa_j^2 [delta(omega - Omega_j) - delta(omega + Omega_j)], Gaussian broadened.

    ``broadening`` is the standard deviation in cm^-1.  Each positive lobe
    has area pi kappa_j^2 in the angular measure d omega.
    """
    if not broadening > 0:
        raise ValidationError("broadening must be > 0")
    f = np.asarray(freq_grid, dtype=float)
    norm = 1.0 / (broadening * np.sqrt(2.0 * np.pi) * ANGULAR_PER_WAVENUMBER)
    vals = np.zeros_like(f)
    for om, k2 in zip(modes.omegas, modes.kappa**2):
        vals += np.pi * k2 * norm * (np.exp(-0.5 * ((f - om) / broadening) ** 2)
                                     - np.exp(-0.5 * ((f + om) / broadening) ** 2))
    return Spectrum(f, vals, SpectrumKind.J)


def j_from_real_alpha(real_alpha: CorrelationSeries, ctx, freq_grid, window: WindowSpec | None = None):
    """Spectral density j = tanh(x/2) G / pi from a real correlator (Standard route).

    ``window`` optionally tapers the correlator before the cosine transform.
    Only the non-negative part of ``freq_grid`` is kept.
    """
    series = real_alpha if window is None else apply_gaussian_window(real_alpha, window)
    f = np.asarray(freq_grid, dtype=float)
    f = f[f >= 0]
    G = cosine_transform(series.values, series.dt, f)
    x = f / thermal_energy(ctx)
    return Spectrum(f, np.tanh(x / 2.0) * G / np.pi, SpectrumKind.SPECTRAL_DENSITY_J,
                    temperature=ctx.temperature, correction="standard")


def write_analytic_csv(modes, ctx, times, dest):
    """Closed-form correlators as CSV: boltzmann, wigner and the quantum real/imag parts."""
    times = np.asarray(times, dtype=float)
    ab = analytic_alpha_boltzmann(modes, ctx, times)
    aw = analytic_alpha_wigner(modes, ctx, times)
    aq = analytic_quantum_alpha(modes, ctx, times)
    out = io.StringIO()
    out.write(f"# temperature_K={ctx.temperature:g}\n")
    out.write("lag_fs,boltzmann_cm2,wigner_cm2,quantum_re_cm2,quantum_im_cm2\n")
    for row in zip(times, ab, aw, aq.real, aq.imag):
        out.write(",".join(f"{v:.17g}" for v in row) + "\n")
    if hasattr(dest, "write"):
        dest.write(out.getvalue())
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(out.getvalue())
