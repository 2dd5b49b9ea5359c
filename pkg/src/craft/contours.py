"""Polynomial models of F0 contours.

Two modelling domains: per voiced segment (local) and over the whole
utterance after median interpolation of unvoiced gaps (global). The shared
median-interpolation primitive lives here too.
"""

from dataclasses import dataclass

import numpy as np

from .f0 import F0Track


@dataclass(frozen=True)
class VoicedSegment:
    """A maximal run of voiced frames: [start, end) indices into the parent track."""

    start: int
    end: int
    times: np.ndarray
    f0: np.ndarray

    def __len__(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class PolyModel:
    """Least-squares polynomial p(t - span[0]), coefficients in ascending power."""

    order: int
    coeffs: np.ndarray
    span: tuple[float, float]
    rmse: float

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("need order + 1 coefficients")
        if self.rmse < 0:
            raise ValueError("rmse must be non-negative")

    def predict(self, times) -> np.ndarray:
        t = np.asarray(times, dtype=np.float64) - self.span[0]
        return np.polynomial.polynomial.polyval(t, self.coeffs)


def voiced_segments(track: F0Track) -> list[VoicedSegment]:
    """Maximal runs of consecutive f0 > 0, in time order."""
    voiced = np.concatenate(([False], track.f0 > 0, [False]))
    edges = np.flatnonzero(np.diff(voiced.astype(np.int8)))
    segments = []
    for start, end in zip(edges[::2], edges[1::2]):
        segments.append(
            VoicedSegment(int(start), int(end), track.times[start:end], track.f0[start:end])
        )
    return segments


def median_interpolate(f0) -> np.ndarray:
    """Replace zeros by the median of the nonzero values.

    Nonzero values are untouched. The even-count median is the mean of the
    two middle values. All-zero input raises, there is nothing to
    interpolate from.
    """
    values = np.asarray(f0, dtype=np.float64)
    nonzero = values[values > 0]
    if len(nonzero) == 0:
        raise ValueError("no voiced frames")
    return np.where(values > 0, values, np.median(nonzero))


def fit_poly(times, values, order: int) -> PolyModel:
    """Least-squares polynomial fit of the given order.

    Times are shifted so the first one is 0 before fitting (conditioning);
    the shift is recorded in span. Raises when there are fewer than
    order + 1 points.
    """
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if order < 0:
        raise ValueError("order must be non-negative")
    if len(t) != len(v):
        raise ValueError("times and values must have the same length")
    if len(t) < order + 1:
        raise ValueError("segment too short for order")
    shifted = t - t[0]
    coeffs = np.polynomial.polynomial.polyfit(shifted, v, order)
    residuals = np.polynomial.polynomial.polyval(shifted, coeffs) - v
    rmse = float(np.sqrt(np.mean(residuals ** 2)))
    return PolyModel(order, coeffs, (float(t[0]), float(t[-1])), rmse)


@dataclass(frozen=True)
class SkippedSegment:
    start: int
    end: int
    frames: int
    required: int


@dataclass(frozen=True)
class TrackModels:
    local: list[PolyModel]
    global_model: PolyModel
    skipped: list[SkippedSegment]


def model_track(
    track: F0Track,
    local_order: int = 3,
    global_order: int = 6,
    min_seg_frames: int = 5,
) -> TrackModels:
    """Fit local models per voiced segment and one global model.

    Segments shorter than max(min_seg_frames, local_order + 1) are skipped
    and reported. The global model is fitted over the full
    median-interpolated track.
    """
    required = max(min_seg_frames, local_order + 1)
    local = []
    skipped = []
    for seg in voiced_segments(track):
        if len(seg) < required:
            skipped.append(SkippedSegment(seg.start, seg.end, len(seg), required))
            continue
        local.append(fit_poly(seg.times, seg.f0, local_order))
    filled = median_interpolate(track.f0)
    global_model = fit_poly(track.times, filled, global_order)
    return TrackModels(local, global_model, skipped)
