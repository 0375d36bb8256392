import json
import subprocess
import sys

import numpy as np
import pytest

from gapkit import __version__
from gapkit.cli import main
from gapkit.spectral import load_spectrum


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "modes.csv").write_text("omega_cm1,huang_rhys\n100,0.5\n237,0.2\n415,0.1\n")
    return tmp_path


def _run(*args):
    return main(list(args))


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_console_script_help():
    out = subprocess.run([sys.executable, "-m", "gapkit.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for cmd in ("correlate", "threepoint", "spectrum", "correct", "oracle", "compare-temps", "significance"):
        assert cmd in out.stdout


def test_pipeline(workdir):
    assert _run("oracle", "--modes", "modes.csv", "--temperature-kelvin", "300", "--emit", "trace",
                "--steps", "1000", "--output", "traj.csv") == 0
    assert _run("correlate", "--input", "traj.csv", "--max-lag", "400", "--output", "corr.csv") == 0
    assert (workdir / "corr.csv").read_text().count("\n") > 400
    assert _run("threepoint", "--input", "traj.csv", "--max-k", "5", "--max-j", "5", "--output", "grid.csv") == 0
    assert (workdir / "grid.csv").read_text().startswith("k_fs,j_fs,value_cm3")
    assert _run("spectrum", "--input", "corr.csv", "--output", "G.json") == 0
    G = load_spectrum(workdir / "G.json")
    assert G.temperature == 300.0 and G.frequencies[0] == -2000.0
    for method in ("standard", "harmonic", "schofield", "schofield-harmonic"):
        assert _run("correct", "--input", "G.json", "--method", method, "--output", f"J_{method}.json") == 0
        assert load_spectrum(workdir / f"J_{method}.json").correction == method
    assert _run("correct", "--input", "corr.csv", "--method", "egelstaff", "--output", "J_e.json") == 0
    assert _run("compare-temps", "--a", "J_harmonic.json", "--b", "J_harmonic.json",
                "--output", "cmp.json") == 0
    assert json.loads((workdir / "cmp.json").read_text())["relative_l2"] == 0.0
    assert _run("significance", "--input", "traj.csv", "--surrogates", "10", "--max-k", "10",
                "--max-j", "10", "--output", "sig.json") == 0
    sig = json.loads((workdir / "sig.json").read_text())
    assert {"two_time_peak", "three_time_peak", "ratio", "noise_floor"} <= set(sig)


@pytest.mark.parametrize("emit", ["correlator", "analytic"])
def test_oracle_emits(workdir, emit):
    assert _run("oracle", "--modes", "modes.csv", "--temperature-kelvin", "77", "--samples", "2000",
                "--steps", "50", "--emit", emit, "--coupling", "quadratic", "--output", "o.csv") == 0
    text = (workdir / "o.csv").read_text()
    assert "temperature_K=77" in text


def test_rescale_profile(workdir):
    (workdir / "p.csv").write_text("freq_cm1,value\n0,1\n100,2\n")
    assert _run("rescale-profile", "--input", "p.csv", "--output", "j.json") == 0
    assert load_spectrum(workdir / "j.json").values.tolist() == [0.0, 2e4]


def test_validation_errors_exit_two(workdir, capsys):
    (workdir / "bad.csv").write_text("# temperature_K=300\ntime_fs,gap_cm1\n0,1\n4,2\n9,3\n")
    assert _run("correlate", "--input", "bad.csv") == 2
    assert "non-uniform" in capsys.readouterr().err
    assert _run("correlate", "--input", "missing.csv") == 2
    (workdir / "G.json").write_text(json.dumps({"kind": "classical_G", "temperature_K": None,
                                               "correction": None, "frequencies_cm1": [-1, 0, 1],
                                               "values": [1, 1, 1]}))
    assert _run("correct", "--input", "G.json", "--method", "harmonic") == 2
    assert _run("correct", "--input", "G.json", "--method", "nonsense", "--temperature-kelvin", "300") == 2


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["spectrum"])
    assert exc.value.code == 2


def test_temperature_override(workdir):
    (workdir / "t.csv").write_text("time_fs,gap_cm1\n" + "\n".join(f"{4 * i},{np.sin(i)}" for i in range(50)))
    assert _run("correlate", "--input", "t.csv") == 2
    assert _run("correlate", "--input", "t.csv", "--temperature-kelvin", "77", "--output", "c.csv") == 0
    assert "temperature_K=77" in (workdir / "c.csv").read_text()
