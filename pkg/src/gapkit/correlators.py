"""Discrete two-time and three-time gap-fluctuation correlators.

Two-time, for k = 0..K::

    C_k = 1/(N-k) * sum_{i=0}^{N-k-1} dX_i dX_{i+k}

Three-time, for 0 <= k <= K, 0 <= j <= J::

    C(k, j) = 1/(N-k-j) * sum_{i=0}^{N-k-j-1} dX_i dX_{i+k} dX_{i+k+j}

with dX_i = X_i - mean(X).  The per-lag normalization uses the number of
terms, so an FFT shortcut is not used.
"""
import io
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import ValidationError
from .trajectory import GapTrajectory, TrajectoryStats, parse_metadata, split_comments, stats

DEFAULT_MAX_LAG = 400
DEFAULT_THREE_TIME_LAG = 100


@dataclass(frozen=True)
class CorrelationSeries:
    """Two-time correlator sampled at lags t_k = k*dt.

    ``values`` are in cm^-2 unless the series has been normalized.
    """

    dt: float
    values: np.ndarray
    origin_stats: TrajectoryStats
    temperature: float | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        if v.ndim != 1 or v.size == 0:
            raise ValidationError("correlation series must be a non-empty 1-D array")
        object.__setattr__(self, "values", v)

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.values.size)

    def with_values(self, values):
        return CorrelationSeries(self.dt, values, self.origin_stats, self.temperature)


@dataclass(frozen=True)
class ThreeTimeGrid:
    """Three-time correlator on the (k, j) lag grid, cm^-3."""

    dt: float
    values: np.ndarray
    origin_stats: TrajectoryStats

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        if v.ndim != 2 or not np.all(np.isfinite(v)):
            raise ValidationError("three-time grid must be a finite 2-D array")
        object.__setattr__(self, "values", v)


def default_max_lag(n):
    return int(min(n // 4, DEFAULT_MAX_LAG))


def two_time_correlator(traj: GapTrajectory, max_lag=None) -> CorrelationSeries:
    """Estimate C_k for k = 0..max_lag (default ``min(N/4, 400)``)."""
    n = len(traj)
    if max_lag is None:
        max_lag = default_max_lag(n)
    if not 0 <= max_lag <= n - 2:
        raise ValidationError(f"max_lag must lie in [0, {n - 2}], got {max_lag}")
    st = stats(traj)
    values = kernels.two_time(traj.centered(), max_lag)
    values[0] = st.variance
    return CorrelationSeries(traj.dt, values, st, traj.temperature)


def three_time_correlator(traj: GapTrajectory, max_k=DEFAULT_THREE_TIME_LAG,
                          max_j=DEFAULT_THREE_TIME_LAG) -> ThreeTimeGrid:
    """Estimate C(k, j); requires ``max_k + max_j <= N - 2``."""
    n = len(traj)
    if max_k < 0 or max_j < 0 or max_k + max_j > n - 2:
        raise ValidationError(f"lag budget max_k + max_j = {max_k + max_j} exceeds N - 2 = {n - 2}")
    st = stats(traj)
    return ThreeTimeGrid(traj.dt, kernels.three_time(traj.centered(), max_k, max_j), st)


def normalize(data, power):
    """Divide by s**power (s the population standard deviation).

    ``power`` is 2 for a :class:`CorrelationSeries` and 3 for a
    :class:`ThreeTimeGrid`.  Returns an object of the same type holding
    dimensionless values.
    """
    if power not in (2, 3):
        raise ValidationError("power must be 2 or 3")
    s = data.origin_stats.std_dev
    if not s > 0:
        raise ValidationError("zero standard deviation: cannot normalize")
    scaled = data.values / s**power
    if isinstance(data, CorrelationSeries):
        if power == 2:
            # C_0 == s^2 by construction; pin it against rounding in the division
            scaled[0] = 1.0
        return data.with_values(scaled)
    return ThreeTimeGrid(data.dt, scaled, data.origin_stats)


# -- CSV i/o -----------------------------------------------------------------

def write_series_csv(series: CorrelationSeries, dest, unit="cm2"):
    out = io.StringIO()
    if series.temperature is not None:
        out.write(f"# temperature_K={series.temperature:g}\n")
    st = series.origin_stats
    out.write(f"# mean_cm1={st.mean:.17g}\n# variance_cm2={st.variance:.17g}\n")
    out.write(f"lag_fs,value_{unit}\n")
    for t, v in zip(series.times, series.values):
        out.write(f"{t:.10g},{v:.17g}\n")
    _emit(dest, out.getvalue())


def read_series_csv(source) -> CorrelationSeries:
    """Read a ``lag_fs,value_cm2`` file written by :func:`write_series_csv`.

    A file without the ``variance_cm2`` comment takes the lag-0 value as the
    variance.
    """
    text = source.read() if hasattr(source, "read") else open(source, encoding="utf-8").read()
    comments, body = split_comments(text)
    meta = parse_metadata(comments)
    rows = [r.split(",") for r in body if r.strip()]
    if not rows or rows[0][0].strip() != "lag_fs":
        raise ValidationError("expected header starting with 'lag_fs'")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:]])
    except ValueError as exc:
        raise ValidationError(f"non-numeric cell: {exc}") from None
    if data.ndim != 2 or data.shape[0] < 2 or data.shape[1] != 2:
        raise ValidationError("correlator CSV needs at least 2 rows of 2 columns")
    dt = data[1, 0] - data[0, 0]
    if not dt > 0 or not np.allclose(np.diff(data[:, 0]), dt, rtol=1e-6, atol=0):
        raise ValidationError("non-uniform lag grid")
    variance = float(meta.get("variance_cm2", data[0, 1]))
    st = TrajectoryStats(mean=float(meta.get("mean_cm1", 0.0)), variance=max(variance, 0.0))
    temp = float(meta["temperature_K"]) if "temperature_K" in meta else None
    return CorrelationSeries(dt, data[:, 1], st, temp)


def write_grid_csv(grid: ThreeTimeGrid, dest):
    out = io.StringIO()
    out.write("k_fs,j_fs,value_cm3\n")
    nk, nj = grid.values.shape
    for k in range(nk):
        for j in range(nj):
            out.write(f"{k * grid.dt:.10g},{j * grid.dt:.10g},{grid.values[k, j]:.17g}\n")
    _emit(dest, out.getvalue())


def _emit(dest, text):
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
