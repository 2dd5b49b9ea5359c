"""Reusable signal-processing primitives.

FFT magnitude spectra, zero-phase brick-wall filters, center clipping,
moving maximum, median smoothing, differencing, the Hilbert envelope and
a parametrised spectrogram. All functions are pure and deterministic.

The filters are FFT bin masks rather than FIR/IIR designs: exact stopbands,
no phase shift, and trivially testable. The boundary bin at f == cutoff is
kept by `lowpass` and dropped by `highpass`, so the two masks partition the
spectrum and lowpass(x) + highpass(x) reconstructs x.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage, signal as sp_signal

from .audio import FrameSpec, Signal, frame_times, frames


def next_pow2(n: int) -> int:
    """Smallest power of two >= n."""
    return 1 << (int(n) - 1).bit_length()


@dataclass(frozen=True)
class Spectrum:
    """Magnitude spectrum: ascending bin frequencies from DC, Hz-per-bin resolution."""

    freqs: np.ndarray
    mags: np.ndarray
    resolution: float

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=np.float64)
        mags = np.asarray(self.mags, dtype=np.float64)
        if len(freqs) != len(mags):
            raise ValueError("freqs and mags must have the same length")
        if len(freqs) and (freqs[0] != 0.0 or np.any(np.diff(freqs) <= 0)):
            raise ValueError("freqs must start at 0 and ascend strictly")
        if np.any(mags < 0):
            raise ValueError("magnitudes must be non-negative")
        for name, arr in (("freqs", freqs), ("mags", mags)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class SpectrogramGrid:
    """Time x frequency magnitude matrix, linear or dB per the `db` flag."""

    times: np.ndarray
    freqs: np.ndarray
    mags: np.ndarray
    db: bool
    floor_db: float

    def __post_init__(self):
        if self.mags.shape != (len(self.times), len(self.freqs)):
            raise ValueError("mags must be shaped (len(times), len(freqs))")


def fft_magnitude(samples, rate: float, pad_to: int | None = None) -> Spectrum:
    """Real-input DFT magnitudes, bins 0..N/2.

    Zero-pads to the next power of two by default (pass pad_to to override;
    it must be >= len(samples)). resolution = rate / N for padded length N.
    """
    x = np.asarray(samples, dtype=np.float64)
    if len(x) == 0:
        raise ValueError("samples must be non-empty")
    n = next_pow2(len(x)) if pad_to is None else int(pad_to)
    if n < len(x):
        raise ValueError("pad_to must be >= len(samples)")
    mags = np.abs(np.fft.rfft(x, n=n))
    freqs = np.fft.rfftfreq(n, 1.0 / rate)
    return Spectrum(freqs, mags, rate / n)


def _bin_mask_filter(samples, rate, keep) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64)
    spec = np.fft.rfft(x)
    f = np.fft.rfftfreq(len(x), 1.0 / rate)
    spec[~keep(f)] = 0.0
    return np.fft.irfft(spec, n=len(x))


def lowpass(samples, rate: float, cutoff: float) -> np.ndarray:
    """Zero-phase FFT-mask lowpass: zero every bin with f > cutoff.

    Output length equals input length, DC is preserved, and a symmetric
    pulse stays centered (no phase shift).
    """
    if not 0 < cutoff < rate / 2:
        raise ValueError("cutoff must lie in (0, rate/2)")
    return _bin_mask_filter(samples, rate, lambda f: f <= cutoff)


def highpass(samples, rate: float, cutoff: float) -> np.ndarray:
    """Zero-phase FFT-mask highpass: zero every bin with f <= cutoff (DC always removed)."""
    if not 0 < cutoff < rate / 2:
        raise ValueError("cutoff must lie in (0, rate/2)")
    return _bin_mask_filter(samples, rate, lambda f: f > cutoff)


def center_clip(samples, ratio: float) -> np.ndarray:
    """Zero all samples with |x| below ratio * max(|x|); signs are preserved.

    ratio 0 is the identity; an all-zero input comes back unchanged.
    """
    if not 0 <= ratio < 1:
        raise ValueError("ratio must lie in [0, 1)")
    x = np.asarray(samples, dtype=np.float64)
    threshold = ratio * np.max(np.abs(x)) if len(x) else 0.0
    return np.where(np.abs(x) >= threshold, x, 0.0)


def moving_max(samples, win: int) -> np.ndarray:
    """Maximum over a centered window of `win` samples, clipped at the edges.

    win must be odd; win == 1 is the identity. y[i] >= x[i] everywhere.
    """
    if win < 1 or win % 2 == 0:
        raise ValueError("win must be an odd positive integer")
    x = np.asarray(samples, dtype=np.float64)
    if win == 1 or len(x) == 0:
        return x.copy()
    return ndimage.maximum_filter1d(x, size=win, mode="nearest")


def median_filter(samples, win: int) -> np.ndarray:
    """Sliding median over a centered window with edge replication.

    win must be odd; each output value is an element of its window's
    multiset, so the output range never exceeds the input range.
    """
    if win < 1 or win % 2 == 0:
        raise ValueError("win must be an odd positive integer")
    x = np.asarray(samples, dtype=np.float64)
    # scipy returns 0 for a length-1 input with size > 1; the replicated
    # window's median is trivially the value itself.
    if win == 1 or len(x) <= 1:
        return x.copy()
    return ndimage.median_filter(x, size=win, mode="nearest")


def diff(samples) -> np.ndarray:
    """First difference: y[i] = x[i+1] - x[i], one sample shorter than x."""
    x = np.asarray(samples, dtype=np.float64)
    if len(x) < 2:
        raise ValueError("need at least two samples to difference")
    return np.diff(x)


def hilbert_envelope(samples) -> np.ndarray:
    """Magnitude of the analytic signal (FFT method); non-negative everywhere.

    For a pure tone this equals the tone's amplitude away from the edges.
    """
    x = np.asarray(samples, dtype=np.float64)
    if len(x) < 4:
        raise ValueError("need at least four samples")
    return np.abs(sp_signal.hilbert(x))


def spectrogram(
    signal: Signal,
    spec: FrameSpec,
    pad_to: int | None = None,
    db: bool = True,
    floor_db: float = -60.0,
) -> SpectrogramGrid:
    """Parametrised spectrogram: one fft_magnitude column per windowed frame.

    Times are frame centers. With db set, magnitudes become
    20*log10(mag/max_mag) clamped at floor_db; a silent input sits entirely
    at the floor.
    """
    if floor_db >= 0:
        raise ValueError("floor_db must be negative")
    frame_mat = frames(signal, spec)
    if frame_mat.shape[0] == 0:
        raise ValueError("signal too short for one frame")
    n = next_pow2(spec.frame_len) if pad_to is None else int(pad_to)
    if n < spec.frame_len:
        raise ValueError("pad_to must be >= frame_len")
    mags = np.abs(np.fft.rfft(frame_mat, n=n, axis=1))
    freqs = np.fft.rfftfreq(n, 1.0 / signal.rate)
    times = frame_times(signal, spec)
    if db:
        peak = mags.max()
        if peak > 0:
            with np.errstate(divide="ignore"):
                mags = 20.0 * np.log10(mags / peak)
            mags = np.maximum(mags, floor_db)
        else:
            mags = np.full_like(mags, floor_db)
    return SpectrogramGrid(times, freqs, mags, db, floor_db)
