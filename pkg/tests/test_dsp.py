import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatgraph.dsp import FilterSpec, butterworth_bandpass, decimate, window
from heatgraph.errors import InvalidBand, TooShort
from heatgraph.simulate import DataMatrix


def butterworth_bandpass_gain(f, fs, low, high, order):
    """Analytic |H| of a bilinear-transformed Butterworth bandpass (prewarped edges)."""
    w = lambda x: 2 * fs * math.tan(math.pi * x / fs)
    W, Wl, Wh = w(f), w(low), w(high)
    q = (W * W - Wl * Wh) / (W * (Wh - Wl))
    return 1.0 / math.sqrt(1.0 + q ** (2 * order))


def sine(freq, fs, seconds, channels=1):
    t = np.arange(int(round(seconds * fs))) / fs
    return DataMatrix(np.tile(np.sin(2 * np.pi * freq * t), (channels, 1)), 1.0 / fs), t


def amplitude(y, t, freq, sl):
    c, s = np.cos(2 * np.pi * freq * t[sl]), np.sin(2 * np.pi * freq * t[sl])
    return 2 * math.hypot(np.mean(y[sl] * c), np.mean(y[sl] * s))


def test_zero_signal():
    X = DataMatrix(np.zeros((3, 4096)), 1 / 2048)
    assert not butterworth_bandpass(X, FilterSpec()).values.any()


def test_passband_sine():
    X, t = sine(10.0, 2048, 20.0)
    Y = butterworth_bandpass(X, FilterSpec(0.5, 45.0))
    a = amplitude(Y.values[0], t, 10.0, slice(4096, -4096))
    assert 0.99 <= a <= 1.01
    assert a == pytest.approx(butterworth_bandpass_gain(10.0, 2048, 0.5, 45.0, 4) ** 2, abs=2e-3)


def test_stopband_sine():
    X, t = sine(0.05, 2048, 400.0)
    Y = butterworth_bandpass(X, FilterSpec(0.5, 45.0))
    mid = slice(100 * 2048, 300 * 2048)
    assert amplitude(Y.values[0], t, 0.05, mid) < 0.1
    assert butterworth_bandpass_gain(0.05, 2048, 0.5, 45.0, 4) ** 2 < 1e-6


@pytest.mark.parametrize("f", [2.0, 30.0, 45.0, 60.0])
def test_gain_matches_analytic(f):
    fs = 500.0
    X, t = sine(f, fs, 40.0)
    spec = FilterSpec(0.5, 45.0, order=4, zero_phase=False)
    Y = butterworth_bandpass(X, spec)
    a = amplitude(Y.values[0], t, f, slice(int(20 * fs), None))
    assert a == pytest.approx(butterworth_bandpass_gain(f, fs, 0.5, 45.0, 4), rel=5e-3, abs=1e-3)


def test_zero_phase_no_lag():
    fs = 500.0
    rng = np.random.default_rng(3)
    t = np.arange(int(20 * fs)) / fs
    x = sum(np.sin(2 * np.pi * f * t + rng.uniform(0, 2 * np.pi)) for f in (4.0, 7.5, 12.0, 21.0))
    Y = butterworth_bandpass(DataMatrix(x[None, :], 1 / fs), FilterSpec(0.5, 45.0)).values[0]
    xc = np.correlate(Y - Y.mean(), x - x.mean(), mode="full")
    assert np.argmax(xc) - (len(x) - 1) == 0


def test_forward_only_lags():
    fs = 500.0
    t = np.arange(int(20 * fs)) / fs
    x = np.sin(2 * np.pi * 3.0 * t) + np.sin(2 * np.pi * 9.0 * t)
    Y = butterworth_bandpass(DataMatrix(x[None, :], 1 / fs), FilterSpec(0.5, 45.0, zero_phase=False)).values[0]
    xc = np.correlate(Y - Y.mean(), x - x.mean(), mode="full")
    assert np.argmax(xc) - (len(x) - 1) > 0


@settings(max_examples=20, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**32 - 1))
def test_linearity(a, b, seed):
    r = np.random.default_rng(seed)
    X = DataMatrix(r.standard_normal((2, 3000)), 1 / 250)
    Y = DataMatrix(r.standard_normal((2, 3000)), 1 / 250)
    spec = FilterSpec(1.0, 40.0)
    lhs = butterworth_bandpass(DataMatrix(a * X.values + b * Y.values, X.dt), spec).values
    rhs = a * butterworth_bandpass(X, spec).values + b * butterworth_bandpass(Y, spec).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.max(np.abs(rhs)))


def test_band_above_nyquist():
    X = DataMatrix(np.zeros((1, 100)), 1 / 80)
    with pytest.raises(InvalidBand):
        butterworth_bandpass(X, FilterSpec(0.5, 45.0))


def test_bad_band_spec():
    with pytest.raises(InvalidBand):
        FilterSpec(10.0, 5.0)


class TestDecimate:
    def test_identity(self):
        X = DataMatrix(np.arange(12.0).reshape(2, 6), 0.1)
        Y = decimate(X, 1)
        np.testing.assert_array_equal(Y.values, X.values)
        assert Y.dt == X.dt

    def test_dataset_one_rate(self):
        Y = decimate(DataMatrix(np.zeros((1, 610)), 1 / 2048), 61)
        assert Y.dt == pytest.approx(61 / 2048)
        assert Y.dt * 1e3 == pytest.approx(29.79, abs=5e-3)
        assert Y.n_steps == 10

    def test_dataset_two_rate(self):
        Y = decimate(DataMatrix(np.zeros((1, 150)), 1 / 500), 15)
        assert Y.dt == pytest.approx(0.030)

    def test_keeps_every_kth(self):
        X = DataMatrix(np.arange(10.0)[None, :], 1.0)
        np.testing.assert_array_equal(decimate(X, 3).values, [[0, 3, 6, 9]])

    def test_anti_alias_removes_high_band(self):
        fs = 2048.0
        X, t = sine(40.0, fs, 10.0)  # above the post-decimation Nyquist of ~16.8 Hz
        plain = decimate(X, 61)
        filtered = decimate(X, 61, anti_alias=True)
        assert np.std(filtered.values[0, 20:-20]) < 0.05 * np.std(plain.values[0])

    def test_bad_factor(self):
        with pytest.raises(ValueError):
            decimate(DataMatrix(np.zeros((1, 4)), 1.0), 0)


class TestWindow:
    def test_two_minutes(self):
        X = DataMatrix(np.zeros((2, 120 * 50)), 1 / 50)
        ws = window(X, 60.0, 60.0)
        assert len(ws) == 2 and all(w.n_steps == 3000 for w in ws)

    def test_dataset_one_sample(self):
        X = decimate(DataMatrix(np.zeros((3, 12 * 2048)), 1 / 2048), 61)
        assert len(window(X, 12.0)) == 1

    def test_too_short(self):
        with pytest.raises(TooShort):
            window(DataMatrix(np.zeros((1, 59 * 10)), 0.1), 60.0)

    def test_trailing_partial_dropped(self):
        X = DataMatrix(np.arange(25.0)[None, :], 1.0)
        ws = window(X, 10.0)
        assert len(ws) == 2
        np.testing.assert_array_equal(ws[1].values, [np.arange(10.0, 20.0)])

    def test_overlap(self):
        X = DataMatrix(np.arange(20.0)[None, :], 1.0)
        assert len(window(X, 10.0, 5.0)) == 3

    def test_commutes_with_decimate(self):
        X = DataMatrix(np.random.default_rng(0).standard_normal((3, 6000)), 0.002)
        a = [decimate(w, 15) for w in window(X, 3.0)]
        b = window(decimate(X, 15), 3.0)
        assert len(a) == len(b)
        for u, v in zip(a, b):
            np.testing.assert_array_equal(u.values, v.values)
            assert u.dt == pytest.approx(v.dt)
