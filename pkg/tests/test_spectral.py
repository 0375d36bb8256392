import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from gapkit.correlators import CorrelationSeries
from gapkit.exceptions import ValidationError
from gapkit.spectral import (J_from_spectral_density, Spectrum, SpectrumKind, WindowSpec,
                             apply_gaussian_window, classical_tdcd, frequency_grid, load_spectrum,
                             reflection_index, save_spectrum, spectral_density_from_J, sym_asym_split)
from gapkit.trajectory import TrajectoryStats
from gapkit.units import ANGULAR_PER_WAVENUMBER


def _series(values, dt=4.0):
    values = np.asarray(values, dtype=float)
    return CorrelationSeries(dt, values, TrajectoryStats(0.0, max(float(values[0]), 0.0)), 300.0)


def test_window_variance():
    w = WindowSpec(1600.0, 0.09)
    assert w.variance == pytest.approx(2.304e5)


def test_window_leaves_origin_unchanged():
    s = _series(np.linspace(5.0, 1.0, 401))
    out = apply_gaussian_window(s, WindowSpec.for_series(s))
    assert out.values[0] == 5.0
    assert out.values[-1] < 5.0 * np.exp(-5.0)


def test_window_fwhm_close_to_26():
    assert WindowSpec(1600.0).frequency_fwhm() == pytest.approx(26.0, abs=0.5)


def test_window_validation():
    with pytest.raises(ValidationError):
        WindowSpec(0.0)
    with pytest.raises(ValidationError):
        WindowSpec(100.0, -0.1)


def test_frequency_grid():
    g = frequency_grid(10.0, 2.5)
    np.testing.assert_array_equal(g, [-10, -7.5, -5, -2.5, 0, 2.5, 5, 7.5, 10])
    np.testing.assert_array_equal(frequency_grid(4.0, 2.0, symmetric=False), [0, 2, 4])
    with pytest.raises(ValidationError):
        frequency_grid(10.0, 0.0)


def test_windowed_cosine_peak_area():
    nu0, amp = 300.0, 2.0
    t = 4.0 * np.arange(401)
    s = apply_gaussian_window(_series(amp * np.cos(ANGULAR_PER_WAVENUMBER * nu0 * t)),
                              WindowSpec(t[-1]))
    G = classical_tdcd(s, frequency_grid(2000.0, 1.0))
    assert G.angular_area(nu0 - 80, nu0 + 80) == pytest.approx(np.pi * amp, rel=1e-3)
    assert G.angular_area(-nu0 - 80, -nu0 + 80) == pytest.approx(np.pi * amp, rel=1e-3)
    assert abs(G.frequencies[np.argmax(G.values)]) == nu0


def test_zero_series_zero_spectrum():
    G = classical_tdcd(_series(np.zeros(50)), frequency_grid(100.0, 1.0))
    assert not np.any(G.values)
    assert G.kind is SpectrumKind.CLASSICAL_G


def test_classical_tdcd_even():
    rng = np.random.default_rng(4)
    G = classical_tdcd(_series(rng.normal(size=60)), frequency_grid(500.0, 1.0))
    np.testing.assert_allclose(G.values, G.values[::-1], atol=1e-10)


def test_sym_asym_split_exponential():
    s = Spectrum([-1.0, 0.0, 1.0], np.exp([-1.0, 0.0, 1.0]), SpectrumKind.CLASSICAL_G)
    sym, asym = sym_asym_split(s)
    assert sym.values[2] == pytest.approx(1.5431, abs=1e-4)
    assert asym.values[2] == pytest.approx(1.1752, abs=1e-4)
    assert asym.kind is SpectrumKind.J


def test_sym_asym_parity():
    f = frequency_grid(5.0, 1.0)
    even = Spectrum(f, f**2, SpectrumKind.CLASSICAL_G)
    odd = Spectrum(f, f**3, SpectrumKind.CLASSICAL_G)
    assert not np.any(sym_asym_split(even)[1].values)
    assert not np.any(sym_asym_split(odd)[0].values)


def test_asymmetric_grid_rejected():
    with pytest.raises(ValidationError, match="reflection-symmetric"):
        reflection_index([-1.0, 0.0, 2.0])


def test_spectral_density_conversions():
    f = frequency_grid(3.0, 1.0)
    J = Spectrum(f, np.pi * np.array([-3, -2, -1, 0, 1, 2, 3.0]), SpectrumKind.J)
    j = spectral_density_from_J(J)
    np.testing.assert_array_equal(j.frequencies, [0, 1, 2, 3])
    assert j.values[1] == pytest.approx(1.0)
    back = J_from_spectral_density(j)
    np.testing.assert_allclose(back.values, J.values)
    np.testing.assert_array_equal(back.frequencies, f)


def test_zero_spectral_density():
    j = Spectrum([0.0, 1.0, 2.0], [0.0, 0.0, 0.0], SpectrumKind.SPECTRAL_DENSITY_J)
    assert not np.any(J_from_spectral_density(j).values)


def test_peak_area_doubles_into_odd_J():
    f = np.arange(0.0, 200.0, 0.5)
    vals = np.exp(-0.5 * ((f - 100) / 3.0) ** 2)
    vals /= trapezoid(vals, f)
    J = J_from_spectral_density(Spectrum(f, vals, SpectrumKind.SPECTRAL_DENSITY_J))
    area = J.angular_area(50, 150) / ANGULAR_PER_WAVENUMBER
    assert area == pytest.approx(np.pi, rel=1e-6)
    assert J.angular_area(-150, -50) / ANGULAR_PER_WAVENUMBER == pytest.approx(-np.pi, rel=1e-6)


def test_kind_checks():
    g = Spectrum([-1.0, 0.0, 1.0], [1.0, 2.0, 1.0], SpectrumKind.CLASSICAL_G)
    with pytest.raises(ValidationError):
        spectral_density_from_J(g)
    with pytest.raises(ValidationError):
        J_from_spectral_density(g)
    with pytest.raises(ValidationError):
        Spectrum([-1.0, 0.0], [0.0, 0.0], SpectrumKind.SPECTRAL_DENSITY_J)
    with pytest.raises(ValidationError):
        Spectrum([0.0, 0.0], [1.0, 1.0], SpectrumKind.J)


def test_json_round_trip(tmp_path):
    s = Spectrum([-1.0, 0.0, 1.0], [-0.5, 0.0, 0.5], SpectrumKind.J, 77.0, "harmonic")
    p = tmp_path / "s.json"
    save_spectrum(s, p)
    obj = json.loads(p.read_text())
    assert set(obj) == {"kind", "temperature_K", "correction", "frequencies_cm1", "values"}
    back = load_spectrum(p)
    np.testing.assert_array_equal(back.values, s.values)
    np.testing.assert_array_equal(back.frequencies, s.frequencies)
    assert (back.kind, back.temperature, back.correction) == (SpectrumKind.J, 77.0, "harmonic")


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ValidationError):
        load_spectrum(p)
    p.write_text(json.dumps({"kind": "J"}))
    with pytest.raises(ValidationError):
        load_spectrum(p)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=3, max_size=40), st.floats(0.5, 3.0))
def test_transform_is_linear(vals, scale):
    f = frequency_grid(300.0, 5.0)
    a = classical_tdcd(_series(vals), f).values
    b = classical_tdcd(_series(np.asarray(vals) * scale), f).values
    np.testing.assert_allclose(b, scale * a, atol=1e-9 * (1 + np.max(np.abs(a)) * scale))
