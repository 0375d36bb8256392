"""Loading, validation and moments of energy-gap time traces.

The on-disk format is a UTF-8 CSV::

    # temperature_K=300
    # site=1
    time_fs,gap_cm1
    0,12450.1
    4,12461.7
    ...

Comment lines (``#`` prefix) carrying ``key=value`` pairs may precede the
header.  Times must be uniformly spaced.
"""
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ValidationError

HEADER = ("time_fs", "gap_cm1")
_UNIFORM_RTOL = 1e-6


@dataclass(frozen=True)
class GapTrajectory:
    """Uniformly sampled energy-gap series.

    Attributes
    ----------
    dt : float
        Sampling step in fs.
    samples : ndarray
        Energy gaps in cm^-1, length N >= 2.
    temperature : float
        Temperature in kelvin.
    label : str
        Free text, e.g. the site id.
    """

    dt: float
    samples: np.ndarray
    temperature: float
    label: str = ""

    def __post_init__(self):
        x = np.array(self.samples, dtype=float)
        x.setflags(write=False)
        if x.ndim != 1 or x.size < 2:
            raise ValidationError("fewer than 2 rows")
        if not np.all(np.isfinite(x)):
            raise ValidationError("trajectory contains non-finite samples")
        if not self.dt > 0:
            raise ValidationError(f"dt must be positive, got {self.dt!r}")
        if not self.temperature > 0:
            raise ValidationError(f"temperature must be positive, got {self.temperature!r}")
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "temperature", float(self.temperature))

    def __len__(self):
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.samples.size)

    def centered(self) -> np.ndarray:
        """Samples with the mean removed."""
        return self.samples - self.samples.mean()


@dataclass(frozen=True)
class TrajectoryStats:
    mean: float
    variance: float
    std_dev: float = field(init=False)

    def __post_init__(self):
        if self.variance < 0:
            raise ValidationError("variance must be non-negative")
        object.__setattr__(self, "std_dev", math.sqrt(self.variance))


def stats(traj: GapTrajectory) -> TrajectoryStats:
    """Mean and population (1/N) variance, so that C_0 equals the variance."""
    x = traj.samples
    mean = float(x.mean())
    return TrajectoryStats(mean=mean, variance=float(np.mean((x - mean) ** 2)))


def parse_metadata(lines):
    """Collect ``key=value`` pairs from ``#`` comment lines."""
    meta = {}
    for line in lines:
        body = line.lstrip("#").strip()
        if "=" in body:
            key, value = body.split("=", 1)
            meta[key.strip()] = value.strip()
    return meta


def split_comments(text):
    """Split CSV text into (leading comment lines, remaining lines)."""
    lines = text.splitlines()
    comments = []
    i = 0
    while i < len(lines) and (lines[i].startswith("#") or not lines[i].strip()):
        if lines[i].startswith("#"):
            comments.append(lines[i])
        i += 1
    return comments, lines[i:]


def load_trajectory(source, temperature=None, dt=None, label=None) -> GapTrajectory:
    """Read a gap trajectory from CSV.

    Parameters
    ----------
    source : str, path-like, bytes or file object
        CSV data.  Strings that are not paths are not accepted; pass
        ``io.StringIO`` for in-memory text.
    temperature, dt, label : optional
        Overrides for the ``temperature_K`` metadata, the time step inferred
        from the time column, and the ``site`` metadata.

    Raises
    ------
    ValidationError
        On fewer than 2 rows, non-numeric cells, a non-uniform time grid,
        a wrong header, or a missing temperature.
    """
    text = _read_text(source)
    comments, body = split_comments(text)
    meta = parse_metadata(comments)

    rows = [r for r in csv.reader(body) if r and any(c.strip() for c in r)]
    if rows and tuple(c.strip() for c in rows[0]) == HEADER:
        rows = rows[1:]
    elif rows:
        raise ValidationError(f"expected header {','.join(HEADER)!r}, got {','.join(rows[0])!r}")
    if len(rows) < 2:
        raise ValidationError("fewer than 2 rows")

    try:
        data = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise ValidationError(f"non-numeric cell: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValidationError("each row must have exactly two columns")
    if not np.all(np.isfinite(data)):
        raise ValidationError("non-finite value in trajectory")

    if dt is None:
        steps = np.diff(data[:, 0])
        dt = float(steps.mean())
        if dt <= 0 or np.max(np.abs(steps - dt)) > _UNIFORM_RTOL * abs(dt):
            raise ValidationError("non-uniform time grid")

    if temperature is None:
        if "temperature_K" not in meta:
            raise ValidationError("missing temperature: supply temperature_K metadata or an override")
        try:
            temperature = float(meta["temperature_K"])
        except ValueError:
            raise ValidationError(f"bad temperature_K {meta['temperature_K']!r}") from None

    if label is None:
        label = meta.get("site", "")
    return GapTrajectory(dt=dt, samples=data[:, 1], temperature=temperature, label=label)


def write_trajectory(traj: GapTrajectory, dest):
    """Write ``traj`` in the CSV format read by :func:`load_trajectory`."""
    out = io.StringIO()
    out.write(f"# temperature_K={traj.temperature:g}\n")
    if traj.label:
        out.write(f"# site={traj.label}\n")
    out.write(",".join(HEADER) + "\n")
    for t, x in zip(traj.times, traj.samples):
        out.write(f"{t:.10g},{x:.17g}\n")
    _write_text(dest, out.getvalue())


def _read_text(source):
    if hasattr(source, "read"):
        data = source.read()
    else:
        with open(source, "rb") as fh:
            data = fh.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8-sig")
        except UnicodeDecodeError:
            raise ValidationError("input is not UTF-8 text") from None
    return data


def _write_text(dest, text):
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
