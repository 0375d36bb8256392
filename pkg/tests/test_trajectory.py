import io

import numpy as np
import pytest

from gapkit.exceptions import ValidationError
from gapkit.trajectory import GapTrajectory, load_trajectory, stats, write_trajectory


def _csv(rows, meta="# temperature_K=300\n"):
    body = "\n".join(f"{t},{g}" for t, g in rows)
    return io.StringIO(f"{meta}time_fs,gap_cm1\n{body}\n")


def test_dt_inferred_from_time_column():
    traj = load_trajectory(_csv([(0, 1.0), (4, 2.0), (8, 3.0)]))
    assert traj.dt == 4.0
    assert traj.temperature == 300.0
    assert len(traj) == 3


def test_metadata_and_label():
    traj = load_trajectory(_csv([(0, 1), (4, 2)], "# temperature_K=77\n# site=BChl3\n"))
    assert traj.temperature == 77.0
    assert traj.label == "BChl3"


def test_crlf_and_bom(tmp_path):
    p = tmp_path / "t.csv"
    p.write_bytes("﻿# temperature_K=300\r\ntime_fs,gap_cm1\r\n0,1\r\n4,2\r\n".encode("utf-8"))
    assert load_trajectory(p).dt == 4.0


def test_empty_file_rejected():
    with pytest.raises(ValidationError, match="fewer than 2 rows"):
        load_trajectory(io.StringIO(""))


def test_single_row_rejected():
    with pytest.raises(ValidationError, match="fewer than 2 rows"):
        load_trajectory(_csv([(0, 1.0)]))


def test_non_uniform_grid_rejected():
    with pytest.raises(ValidationError, match="non-uniform time grid"):
        load_trajectory(_csv([(0, 1.0), (4, 2.0), (9, 3.0)]))


def test_non_numeric_cell_rejected():
    with pytest.raises(ValidationError, match="non-numeric"):
        load_trajectory(_csv([(0, 1.0), (4, "abc")]))


def test_missing_temperature():
    with pytest.raises(ValidationError, match="missing temperature"):
        load_trajectory(_csv([(0, 1.0), (4, 2.0)], meta=""))
    traj = load_trajectory(_csv([(0, 1.0), (4, 2.0)], meta=""), temperature=150.0)
    assert traj.temperature == 150.0


def test_override_beats_metadata():
    assert load_trajectory(_csv([(0, 1), (4, 2)]), temperature=77).temperature == 77.0


def test_write_read_round_trip():
    traj = GapTrajectory(2.0, [1.5, -2.25, 3.125], 300.0, label="s1")
    buf = io.StringIO()
    write_trajectory(traj, buf)
    back = load_trajectory(io.StringIO(buf.getvalue()))
    np.testing.assert_array_equal(back.samples, traj.samples)
    assert back.dt == traj.dt and back.label == "s1"


@pytest.mark.parametrize("samples, mean, var", [
    ([5, 5, 5], 5.0, 0.0),
    ([1, -1, 1, -1], 0.0, 1.0),
    ([0, 2], 1.0, 1.0),
])
def test_stats(samples, mean, var):
    st = stats(GapTrajectory(1.0, samples, 300.0))
    assert st.mean == mean and st.variance == var
    assert st.std_dev == pytest.approx(np.sqrt(var))


def test_centered_has_zero_mean():
    traj = GapTrajectory(1.0, np.arange(10.0), 300.0)
    assert abs(traj.centered().mean()) < 1e-15


@pytest.mark.parametrize("kwargs", [
    dict(dt=0.0, samples=[1, 2], temperature=300.0),
    dict(dt=1.0, samples=[1, np.nan], temperature=300.0),
    dict(dt=1.0, samples=[1, 2], temperature=-1.0),
])
def test_trajectory_validation(kwargs):
    with pytest.raises(ValidationError):
        GapTrajectory(**kwargs)
