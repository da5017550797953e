"""Preprocessing: Butterworth bandpass, integer decimation and fixed-length windows."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import InvalidBand, TooShort
from .simulate import DataMatrix


@dataclass(frozen=True)
class FilterSpec:
    low_hz: float = 0.5
    high_hz: float = 45.0
    order: int = 4
    zero_phase: bool = True

    def __post_init__(self):
        if not (self.low_hz > 0 and self.high_hz > self.low_hz):
            raise InvalidBand(f"need 0 < low_hz < high_hz, got ({self.low_hz}, {self.high_hz})")
        if int(self.order) != self.order or self.order < 1:
            raise ValueError("order must be a positive integer")

    def check(self, fs: float) -> None:
        if self.high_hz >= fs / 2:
            raise InvalidBand(f"band edge {self.high_hz} Hz is not below Nyquist {fs / 2:g} Hz")

    def sos(self, fs: float) -> np.ndarray:
        self.check(fs)
        return signal.butter(self.order, [self.low_hz, self.high_hz], btype="bandpass", fs=fs, output="sos")


def _padlen(order: int, fs: float, low_hz: float, n: int) -> int:
    want = 3 * order * max(1, math.ceil(fs / low_hz))
    return max(0, min(want, n - 1))


def _apply(sos, values, zero_phase, padlen):
    if zero_phase:
        return signal.sosfiltfilt(sos, values, axis=1, padtype="odd", padlen=padlen)
    return signal.sosfilt(sos, values, axis=1)


def butterworth_bandpass(X: DataMatrix, spec: FilterSpec) -> DataMatrix:
    """Filter every channel with a Butterworth bandpass.

    In zero-phase mode the filter runs forward and backward over an
    odd-reflected padding of ``3 * order * max(1, fs / low_hz)`` samples
    (capped by the signal length).
    """
    fs = X.fs
    sos = spec.sos(fs)
    padlen = _padlen(spec.order, fs, spec.low_hz, X.n_steps)
    return X.with_values(_apply(sos, X.values, spec.zero_phase, padlen))


def anti_alias_lowpass(X: DataMatrix, factor: int, order: int = 4) -> DataMatrix:
    """Zero-phase lowpass at 0.8 of the post-decimation Nyquist frequency."""
    fs = X.fs
    cutoff = 0.8 * (fs / factor) / 2
    sos = signal.butter(order, cutoff, btype="lowpass", fs=fs, output="sos")
    padlen = _padlen(order, fs, cutoff, X.n_steps)
    return X.with_values(signal.sosfiltfilt(sos, X.values, axis=1, padtype="odd", padlen=padlen))


def decimate(X: DataMatrix, factor: int, anti_alias: bool = False, order: int = 4) -> DataMatrix:
    """Keep every ``factor``-th sample starting at 0; ``dt`` grows by ``factor``.

    No lowpass is applied unless ``anti_alias`` is set.
    """
    if int(factor) != factor or factor < 1:
        raise ValueError(f"decimation factor must be a positive integer, got {factor}")
    factor = int(factor)
    if factor == 1:
        return X.with_values(X.values.copy())
    if anti_alias:
        X = anti_alias_lowpass(X, factor, order)
    return X.with_values(X.values[:, ::factor].copy(), dt=X.dt * factor)


def samples_for(seconds: float, dt: float) -> int:
    return int(round(seconds / dt))


def window(X: DataMatrix, length_seconds: float, hop_seconds: float | None = None) -> list[DataMatrix]:
    """Split into windows of ``length_seconds``; a trailing partial window is dropped."""
    hop_seconds = length_seconds if hop_seconds is None else hop_seconds
    if length_seconds <= 0 or hop_seconds <= 0:
        raise ValueError("window length and hop must be positive")
    n_win = samples_for(length_seconds, X.dt)
    n_hop = samples_for(hop_seconds, X.dt)
    if n_win < 1 or n_hop < 1:
        raise ValueError("window length and hop must span at least one sample")
    if n_win > X.n_steps:
        raise TooShort(f"window of {length_seconds:g} s exceeds signal duration {X.duration:g} s")
    starts = range(0, X.n_steps - n_win + 1, n_hop)
    return [X.with_values(X.values[:, s:s + n_win].copy()) for s in starts]
