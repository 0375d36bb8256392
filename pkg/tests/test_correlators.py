import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gapkit.correlators import (normalize, read_series_csv, three_time_correlator,
                                two_time_correlator, write_grid_csv, write_series_csv)
from gapkit.exceptions import ValidationError
from gapkit.trajectory import GapTrajectory

ALT = GapTrajectory(4.0, [1.0, -1.0, 1.0, -1.0], 300.0)


def _brute_two(x, max_lag):
    d = x - x.mean()
    return np.array([np.mean(d[: d.size - k] * d[k:]) for k in range(max_lag + 1)])


def _brute_three(x, mk, mj):
    d = x - x.mean()
    n = d.size
    out = np.empty((mk + 1, mj + 1))
    for k in range(mk + 1):
        for j in range(mj + 1):
            m = n - k - j
            out[k, j] = np.mean(d[:m] * d[k:k + m] * d[k + j:k + j + m])
    return out


def test_alternating_two_time():
    c = two_time_correlator(ALT, 2)
    np.testing.assert_array_equal(c.values, [1.0, -1.0, 1.0])
    np.testing.assert_array_equal(c.times, [0.0, 4.0, 8.0])


def test_alternating_three_time():
    assert three_time_correlator(ALT, 1, 1).values[1, 1] == 0.0


def test_constant_series_gives_zeros():
    flat = GapTrajectory(1.0, [3.0] * 20, 300.0)
    assert not np.any(two_time_correlator(flat, 5).values)
    assert not np.any(three_time_correlator(flat, 4, 4).values)


def test_default_max_lag():
    traj = GapTrajectory(1.0, np.random.default_rng(0).normal(size=2000), 300.0)
    assert two_time_correlator(traj).values.size == 401
    short = GapTrajectory(1.0, np.arange(40.0), 300.0)
    assert two_time_correlator(short).values.size == 11


@pytest.mark.parametrize("lag", [-1, 3])
def test_max_lag_bounds(lag):
    with pytest.raises(ValidationError):
        two_time_correlator(ALT, lag)


def test_three_time_lag_budget():
    with pytest.raises(ValidationError, match="lag budget"):
        three_time_correlator(ALT, 2, 1)


def test_lag_zero_is_variance():
    traj = GapTrajectory(1.0, np.random.default_rng(1).normal(5, 3, 500), 300.0)
    c = two_time_correlator(traj, 20)
    assert c.values[0] == c.origin_stats.variance


def test_normalize():
    n2 = normalize(two_time_correlator(ALT, 2), 2)
    np.testing.assert_array_equal(n2.values, [1.0, -1.0, 1.0])
    traj = GapTrajectory(1.0, np.random.default_rng(2).normal(0, 7, 300), 300.0)
    assert normalize(two_time_correlator(traj, 10), 2).values[0] == 1.0
    c3 = three_time_correlator(traj, 3, 3)
    np.testing.assert_allclose(normalize(c3, 3).values, c3.values / c3.origin_stats.std_dev**3)


def test_normalize_errors():
    flat = GapTrajectory(1.0, [2.0, 2.0, 2.0], 300.0)
    with pytest.raises(ValidationError):
        normalize(two_time_correlator(flat, 1), 2)
    with pytest.raises(ValidationError):
        normalize(two_time_correlator(ALT, 1), 4)


def test_series_csv_round_trip():
    traj = GapTrajectory(4.0, np.random.default_rng(3).normal(size=100), 77.0)
    c = two_time_correlator(traj, 10)
    buf = io.StringIO()
    write_series_csv(c, buf)
    text = buf.getvalue()
    assert "lag_fs,value_cm2" in text
    back = read_series_csv(io.StringIO(text))
    np.testing.assert_array_equal(back.values, c.values)
    assert back.dt == 4.0 and back.temperature == 77.0
    assert back.origin_stats.variance == c.origin_stats.variance


def test_grid_csv_layout():
    buf = io.StringIO()
    write_grid_csv(three_time_correlator(ALT, 1, 1), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "k_fs,j_fs,value_cm3"
    assert len(lines) == 5
    assert lines[4].startswith("4,4,")


def test_read_series_rejects_garbage():
    with pytest.raises(ValidationError):
        read_series_csv(io.StringIO("lag_fs,value_cm2\n0,1\n4,x\n"))
    with pytest.raises(ValidationError):
        read_series_csv(io.StringIO("lag_fs,value_cm2\n0,1\n4,2\n9,3\n"))


samples = arrays(np.float64, st.integers(8, 60),
                 elements=st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False))


@settings(max_examples=60, deadline=None)
@given(samples)
def test_two_time_matches_definition(x):
    traj = GapTrajectory(1.0, x, 300.0)
    c = two_time_correlator(traj, 5)
    scale = max(1.0, float(np.max(np.abs(x - x.mean())) ** 2))
    np.testing.assert_allclose(c.values, _brute_two(x, 5), rtol=1e-9, atol=1e-9 * scale)


@settings(max_examples=60, deadline=None)
@given(samples)
def test_three_time_matches_definition(x):
    traj = GapTrajectory(1.0, x, 300.0)
    c = three_time_correlator(traj, 3, 3)
    scale = max(1.0, float(np.max(np.abs(x - x.mean())) ** 3))
    np.testing.assert_allclose(c.values, _brute_three(x, 3, 3), rtol=1e-9, atol=1e-9 * scale)


@settings(max_examples=40, deadline=None)
@given(samples, st.floats(-1e3, 1e3))
def test_correlators_shift_invariant(x, shift):
    a = two_time_correlator(GapTrajectory(1.0, x, 300.0), 4).values
    b = two_time_correlator(GapTrajectory(1.0, x + shift, 300.0), 4).values
    scale = max(1.0, float(np.max(np.abs(x)) + abs(shift)) ** 2)
    np.testing.assert_allclose(a, b, atol=1e-9 * scale)


@settings(max_examples=40, deadline=None)
@given(samples)
def test_normalized_origin_is_one(x):
    traj = GapTrajectory(1.0, x, 300.0)
    c = two_time_correlator(traj, 2)
    if c.origin_stats.std_dev > 1e-6:
        assert normalize(c, 2).values[0] == 1.0
