"""Decision tools: temperature invariance, three-time significance, profile rescaling.

Thresholds used downstream (an L2 noise bound of 0.05 and the 95th-percentile
surrogate floor) are policy choices of this package, not derived limits.
"""
import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .correlators import (DEFAULT_THREE_TIME_LAG, CorrelationSeries, ThreeTimeGrid, normalize,
                          three_time_correlator, two_time_correlator)
from .exceptions import ValidationError
from .spectral import Spectrum, SpectrumKind
from .trajectory import GapTrajectory

#: Band edges in cm^-1; the last band is open-ended.
BAND_EDGES = (0.0, 200.0, 600.0, 2000.0)
INVARIANCE_POLICY = "relative L2 over nu > 0; 0.05 is the package's noise bound, not a derived limit"
SIGNIFICANCE_POLICY = ("noise floor = 95th percentile of max|C(k,j)|/s^3 over permutation surrogates; "
                       "the lag (0,0) entry (skewness) is permutation invariant and excluded")
DEFAULT_SURROGATES = 200


@dataclass(frozen=True)
class BandDifference:
    lo: float
    hi: float
    relative_difference: float


@dataclass(frozen=True)
class InvarianceReport:
    method: str | None
    temperatures: tuple
    relative_l2: float
    bands: list = field(default_factory=list)
    policy: str = INVARIANCE_POLICY

    def band(self, lo):
        """Relative difference of the band starting at ``lo``."""
        for b in self.bands:
            if b.lo == lo:
                return b.relative_difference
        raise KeyError(lo)

    def to_json(self):
        d = asdict(self)
        d["temperatures_K"] = list(d.pop("temperatures"))
        return d


def _rel_l2(a, b):
    denom = max(np.linalg.norm(a), np.linalg.norm(b))
    if denom == 0:
        return 0.0
    return float(np.linalg.norm(a - b) / denom)


def temperature_invariance(J_a: Spectrum, J_b: Spectrum, edges=BAND_EDGES) -> InvarianceReport:
    """Compare two corrected spectra obtained at different temperatures.

    relative_l2 = ||J_a - J_b|| / max(||J_a||, ||J_b||) on nu > 0, plus the
    same quantity restricted to each band [edges[i], edges[i+1]); the last
    band also takes every point above its nominal upper edge.
    """
    if J_a.kind is not J_b.kind or J_a.kind not in (SpectrumKind.J, SpectrumKind.SPECTRAL_DENSITY_J):
        raise ValidationError("temperature_invariance compares two J (or two j) spectra")
    if J_a.correction != J_b.correction:
        raise ValidationError(f"method mismatch: {J_a.correction!r} vs {J_b.correction!r}")
    fa, va = J_a.positive()
    fb, vb = J_b.positive()
    if fa.shape != fb.shape or not np.allclose(fa, fb, rtol=1e-12, atol=1e-9):
        raise ValidationError("frequency grids differ")

    bands = []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        last = i == len(edges) - 2
        m = (fa >= lo) & ((fa < hi) | last)
        rel = _rel_l2(va[m], vb[m]) if np.any(m) else float("nan")
        bands.append(BandDifference(lo, hi, rel))
    return InvarianceReport(J_a.correction, (J_a.temperature, J_b.temperature), _rel_l2(va, vb), bands)


@dataclass(frozen=True)
class SignificanceReport:
    """Peaks are normalized by s^2 (two-time) and s^3 (three-time)."""

    two_time_peak: float
    three_time_peak: float
    ratio: float
    noise_floor: float
    skewness: float
    surrogates: int
    seed: int
    policy: str = SIGNIFICANCE_POLICY

    @property
    def significant(self):
        return self.three_time_peak > self.noise_floor

    def to_json(self):
        d = asdict(self)
        d["significant"] = self.significant
        return d


def _offdiag_peak(values):
    v = np.abs(values).copy()
    v[0, 0] = 0.0
    return float(v.max())


def three_point_significance(traj: GapTrajectory, c2: CorrelationSeries | None = None,
                             c3: ThreeTimeGrid | None = None, surrogates=DEFAULT_SURROGATES,
                             seed=7, max_k=DEFAULT_THREE_TIME_LAG, max_j=DEFAULT_THREE_TIME_LAG,
                             workers=1):
    """Compare the normalized three-time correlator with a permutation null.

    Parameters
    ----------
    traj : GapTrajectory
        Source of ``c2``/``c3`` and of the surrogate samples.
    c2, c3 : optional
        Precomputed correlators of ``traj``; computed when omitted
        (``c3`` on a ``max_k`` x ``max_j`` grid).
    surrogates : int
        Number of random permutations of the centered samples.
    seed : int
        Seed for the permutations; equal seeds give equal floors.
    workers : int
        Threads for the surrogate loop.  Surrogate ``i`` draws from its own
        generator seeded by ``(seed, i)``, so the floor does not depend on it.

    Returns
    -------
    SignificanceReport
        three_time_peak and noise_floor both leave out C(0,0), the sample
        skewness, which no permutation changes; it is reported separately.
    """
    if c2 is None:
        c2 = two_time_correlator(traj)
    if c3 is None:
        c3 = three_time_correlator(traj, max_k, max_j)
    if not np.isclose(c2.origin_stats.variance, c3.origin_stats.variance, rtol=1e-12, atol=0):
        raise ValidationError("c2 and c3 do not come from the same trajectory")
    s = c3.origin_stats.std_dev
    if not s > 0:
        raise ValidationError("zero variance: significance is undefined")
    if surrogates < 1:
        raise ValidationError("surrogates must be >= 1")

    n2 = normalize(c2, 2).values
    n3 = normalize(c3, 3).values
    two_peak = float(np.max(np.abs(n2)))
    three_peak = _offdiag_peak(n3)

    nk, nj = c3.values.shape
    x = traj.centered()

    def surrogate_peak(i):
        perm = np.random.default_rng([seed, i]).permutation(x)
        return _offdiag_peak(kernels.three_time(perm, nk - 1, nj - 1)) / s**3

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            peaks = np.fromiter(pool.map(surrogate_peak, range(surrogates)), float, surrogates)
    else:
        peaks = np.fromiter(map(surrogate_peak, range(surrogates)), float, surrogates)
    floor = float(np.percentile(peaks, 95))
    return SignificanceReport(two_time_peak=two_peak, three_time_peak=three_peak,
                              ratio=three_peak / two_peak if two_peak > 0 else float("inf"),
                              noise_floor=floor, skewness=float(n3[0, 0]),
                              surrogates=int(surrogates), seed=int(seed))


def rescale_experimental_profile(freqs, values) -> Spectrum:
    """Multiply a tabulated profile by (hbar omega)^2 = nu^2 to obtain j(nu)."""
    f = np.asarray(freqs, dtype=float)
    v = np.asarray(values, dtype=float)
    if np.any(f < 0):
        raise ValidationError("experimental profile has negative frequencies")
    order = np.argsort(f)
    f, v = f[order], v[order]
    return Spectrum(f, v * f**2, SpectrumKind.SPECTRAL_DENSITY_J, correction="experimental")


def load_profile(path):
    """Read ``freq_cm1,value`` CSV; returns (freqs, values)."""
    with open(path, encoding="utf-8") as fh:
        rows = [r for r in csv.reader(ln for ln in fh if not ln.startswith("#")) if r]
    if not rows or rows[0][0].strip() != "freq_cm1":
        raise ValidationError("profile CSV must start with header 'freq_cm1,value'")
    try:
        data = np.array([[float(c) for c in r[:2]] for r in rows[1:]])
    except ValueError as exc:
        raise ValidationError(f"non-numeric cell: {exc}") from None
    if data.size == 0:
        raise ValidationError("profile CSV has no rows")
    return data[:, 0], data[:, 1]
