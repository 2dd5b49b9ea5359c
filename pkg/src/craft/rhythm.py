"""AM/FM demodulation, envelope spectra and rhythm-zone edge detection.

The AM envelope uses a crystal-set style detector: rectify, take the
maximum in a parametrised moving window, lowpass globally, downsample to a
low rate. The F0 contour is treated as the frequency-modulation envelope.
An FFT of either envelope gives the envelope spectrum (AES/FES), and
differencing the smoothed spectrum marks rhythm-zone boundaries at
prominent local minima.
"""

from dataclasses import dataclass, fields

import numpy as np

from . import dsp
from .audio import Signal, resample
from .contours import median_interpolate
from .dsp import Spectrum
from .evaluation import normalize_length, pearson_r
from .f0 import F0Track


@dataclass(frozen=True)
class Envelope:
    """Low-rate modulation trace; AM values are non-negative, FM is detrended."""

    values: np.ndarray
    rate: float
    kind: str  # "am" | "fm"

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("rate must be positive")
        if self.kind not in ("am", "fm"):
            raise ValueError(f"unknown envelope kind: {self.kind!r}")
        values = np.asarray(self.values, dtype=np.float64)
        if self.kind == "am" and len(values) and values.min() < 0:
            raise ValueError("AM envelope values must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class RhythmZone:
    f_low: float
    f_high: float
    peak_freq: float
    peak_mag: float


@dataclass(frozen=True)
class RhythmZoneSet:
    """Boundaries and the zones they carve out of [0, display_max]."""

    boundaries: np.ndarray
    zones: tuple[RhythmZone, ...]
    display_max: float

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=np.float64)
        if np.any(np.diff(b) <= 0):
            raise ValueError("boundaries must ascend strictly")
        if len(b) and (b[0] <= 0 or b[-1] >= self.display_max):
            raise ValueError("boundaries must lie strictly inside (0, display_max)")
        b.setflags(write=False)
        object.__setattr__(self, "boundaries", b)


@dataclass(frozen=True)
class RhythmParams:
    """Defaults for the whole rhythm chain, all adjustable."""

    win_ms: float = 20.0
    lp_cutoff: float = 24.0
    out_rate: float = 100.0
    display_max: float = 20.0
    smooth_win: int = 3
    prominence: float = 0.1
    norm_len: int = 1000

    def __post_init__(self):
        if self.win_ms <= 0:
            raise ValueError("win_ms must be positive")
        if not 0 < self.lp_cutoff < self.out_rate / 2:
            raise ValueError("need 0 < lp_cutoff < out_rate/2")
        if not 0 < self.display_max <= self.out_rate / 2:
            raise ValueError("display_max must lie in (0, out_rate/2]")
        if self.smooth_win < 1 or self.smooth_win % 2 == 0:
            raise ValueError("smooth_win must be odd")
        if not 0 <= self.prominence < 1:
            raise ValueError("prominence must lie in [0, 1)")


def am_envelope(
    signal: Signal,
    win_ms: float = 20.0,
    lp_cutoff: float = 24.0,
    out_rate: float = 100.0,
) -> Envelope:
    """Amplitude envelope by rectification, moving maximum and lowpass.

    The detector window is win_ms rounded to an odd sample count; the
    result is resampled to out_rate. Values are clamped at 0 so filter
    ripple cannot push the envelope negative.
    """
    if win_ms <= 0:
        raise ValueError("win_ms must be positive")
    if not 0 < lp_cutoff < out_rate / 2:
        raise ValueError("need 0 < lp_cutoff < out_rate/2")
    win = int(round(win_ms * signal.rate / 1000.0))
    win = max(1, win) | 1
    rectified = np.abs(signal.samples)
    env = dsp.moving_max(rectified, win)
    env = dsp.lowpass(env, signal.rate, lp_cutoff)
    env = np.maximum(env, 0.0)
    low = resample(Signal(env, signal.rate), int(round(out_rate)))
    return Envelope(low.samples, out_rate, "am")


def fm_envelope(track: F0Track, out_rate: float = 100.0) -> Envelope:
    """Frequency-modulation envelope of an F0 track.

    Unvoiced gaps are median-interpolated, the mean is subtracted so the
    spectrum is not DC-dominated, and the result is linearly resampled to
    out_rate.
    """
    if track.voiced_count() == 0:
        raise ValueError("no voiced frames")
    if track.voiced_count() < 2:
        raise ValueError("need at least two voiced frames")
    filled = median_interpolate(track.f0)
    detrended = filled - filled.mean()
    n_out = max(2, int(round(len(detrended) / track.frame_rate * out_rate)))
    values = normalize_length(detrended, n_out)
    return Envelope(values, out_rate, "fm")


def envelope_spectrum(env: Envelope, display_max: float = 20.0) -> Spectrum:
    """AES/FES: hann-windowed, zero-padded FFT magnitude of the envelope.

    Mean is subtracted first (a no-op for detrended FM), the FFT is padded
    to the next power of two at least 4x the length, and the bins are
    truncated to [0, display_max].
    """
    if len(env) < 8:
        raise ValueError("envelope too short (need at least 8 points)")
    if display_max > env.rate / 2:
        raise ValueError("display_max must not exceed the envelope Nyquist")
    x = env.values - env.values.mean()
    x = x * np.hanning(len(x))
    full = dsp.fft_magnitude(x, env.rate, pad_to=dsp.next_pow2(4 * len(x)))
    keep = full.freqs <= display_max
    return Spectrum(full.freqs[keep], full.mags[keep], full.resolution)


def _moving_average(x: np.ndarray, win: int) -> np.ndarray:
    if win == 1:
        return x.copy()
    h = win // 2
    padded = np.pad(x, h, mode="edge")
    kernel = np.full(win, 1.0 / win)
    return np.convolve(padded, kernel, mode="valid")


def jassem_edges(
    spec: Spectrum,
    smooth_win: int = 3,
    prominence: float = 0.1,
    display_max: float | None = None,
) -> RhythmZoneSet:
    """Rhythm-zone boundaries at prominent local minima of the smoothed spectrum.

    The spectrum is moving-average smoothed, differenced, and a boundary is
    placed where the difference turns from negative to non-negative,
    provided the minimum sits below (1 - prominence) times the smaller of
    the flanking peaks. No qualifying minima means one zone covering the
    whole range.
    """
    if len(spec.freqs) < 5:
        raise ValueError("need at least five spectrum bins")
    if smooth_win < 1 or smooth_win % 2 == 0:
        raise ValueError("smooth_win must be odd")
    if display_max is None:
        display_max = float(spec.freqs[-1])
    smoothed = _moving_average(spec.mags, smooth_win)
    d = dsp.diff(smoothed)
    candidates = [i for i in range(1, len(d)) if d[i - 1] < 0 <= d[i]]

    edges = [0] + candidates + [len(smoothed) - 1]
    boundaries = []
    for pos, i in enumerate(candidates, start=1):
        left_peak = smoothed[edges[pos - 1]: i + 1].max()
        right_peak = smoothed[i: edges[pos + 1] + 1].max()
        if smoothed[i] < (1.0 - prominence) * min(left_peak, right_peak):
            boundaries.append(i)

    cuts = [0.0] + [float(spec.freqs[i]) for i in boundaries] + [display_max]
    zones = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        inside = (spec.freqs >= lo) & (spec.freqs <= hi)
        idx = np.flatnonzero(inside)
        peak_idx = idx[np.argmax(spec.mags[idx])] if len(idx) else None
        zones.append(
            RhythmZone(
                lo,
                hi,
                float(spec.freqs[peak_idx]) if peak_idx is not None else lo,
                float(spec.mags[peak_idx]) if peak_idx is not None else 0.0,
            )
        )
    return RhythmZoneSet(np.array([spec.freqs[i] for i in boundaries]), tuple(zones), display_max)


@dataclass(frozen=True)
class RhythmReport:
    am: Envelope
    fm: Envelope
    aes: Spectrum
    fes: Spectrum
    am_zones: RhythmZoneSet
    fm_zones: RhythmZoneSet
    am_fm_r: float
    am_fm_p: float


def rhythm_report(signal: Signal, track: F0Track, params: RhythmParams | None = None) -> RhythmReport:
    """The full rhythm chain: envelopes, spectra, zones and the AM/FM correlation.

    am_fm_r is Pearson's r between the length-normalised AM envelope and
    the (already median-interpolated) FM envelope, sharing the evaluation
    module's definition of r.
    """
    p = params if params is not None else RhythmParams()
    am = am_envelope(signal, p.win_ms, p.lp_cutoff, p.out_rate)
    fm = fm_envelope(track, p.out_rate)
    aes = envelope_spectrum(am, p.display_max)
    fes = envelope_spectrum(fm, p.display_max)
    am_zones = jassem_edges(aes, p.smooth_win, p.prominence, p.display_max)
    fm_zones = jassem_edges(fes, p.smooth_win, p.prominence, p.display_max)
    try:
        r, p_value = pearson_r(
            normalize_length(am.values, p.norm_len),
            normalize_length(fm.values, p.norm_len),
            n_effective=min(len(am), len(fm)),
        )
    except ValueError:
        # A constant envelope (silence, or a perfectly flat F0) carries no
        # correlation information.
        r, p_value = 0.0, 1.0
    return RhythmReport(am, fm, aes, fes, am_zones, fm_zones, r, p_value)


def rhythm_params_dict(params: RhythmParams) -> dict:
    return {f.name: getattr(params, f.name) for f in fields(params)}
