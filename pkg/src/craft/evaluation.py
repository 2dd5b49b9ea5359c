"""Estimator comparison and timing: the quantitative harness.

Track pairs are compared by median-interpolating unvoiced gaps,
normalising both vectors to a common length and computing Pearson's r with
a two-tailed p-value. Timing benchmarks run each estimator repeatedly on
identical input, discard the warm-up run and report the median.
"""

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from .audio import Signal
from .contours import median_interpolate
from .f0 import F0Track, get_estimator

TRACK_FORMATS = ("csv", "json")


class TrackFormatError(ValueError):
    """Raised for malformed track files; carries the offending line where known."""


def normalize_length(values, n: int) -> np.ndarray:
    """Linearly interpolate onto n uniformly spaced points over the same index range.

    First and last values are preserved exactly.
    """
    x = np.asarray(values, dtype=np.float64)
    if len(x) < 2 or n < 2:
        raise ValueError("need at least two points on both sides")
    return np.interp(np.linspace(0.0, len(x) - 1, n), np.arange(len(x)), x)


def pearson_r(x, y, n_effective: int | None = None) -> tuple[float, float]:
    """Product-moment correlation with a two-tailed t-distribution p-value.

    n_effective is the sample size used for the p-value (defaults to the
    vector length); callers comparing resampled vectors pass the original
    count, since resampling manufactures no independent observations.
    """
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if len(a) != len(b):
        raise ValueError("vectors must have the same length")
    if len(a) < 3:
        raise ValueError("need at least three points")
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt(np.sum(da ** 2) * np.sum(db ** 2))
    if denom == 0:
        raise ValueError("degenerate input (constant vector)")
    r = float(np.clip(np.sum(da * db) / denom, -1.0, 1.0))
    n = len(a) if n_effective is None else int(n_effective)
    df = max(n - 2, 1)
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * np.sqrt(df / (1.0 - r * r))
        p = float(2.0 * stats.t.sf(abs(t), df))
    return r, p


def compare_tracks(a: F0Track, b: F0Track, n: int = 1000) -> tuple[float, float]:
    """Correlate two tracks: median interpolation, length normalisation, Pearson r.

    The p-value uses the smaller of the two original frame counts as its
    sample size.
    """
    for track in (a, b):
        if track.voiced_count() < 2:
            raise ValueError("no voiced frames" if track.voiced_count() == 0
                             else "need at least two voiced frames")
    xa = normalize_length(median_interpolate(a.f0), n)
    xb = normalize_length(median_interpolate(b.f0), n)
    return pearson_r(xa, xb, n_effective=min(len(a), len(b)))


@dataclass(frozen=True)
class BenchmarkResult:
    label: str
    median_s: float
    timings: tuple[float, ...]  # post-warm-up wall-clock seconds
    k: int


@dataclass
class ComparisonReport:
    """Pairwise correlation matrix plus optional per-label timings."""

    labels: list[str]
    r_matrix: np.ndarray
    p_matrix: np.ndarray
    n_effective: np.ndarray
    timings: dict[str, BenchmarkResult] = field(default_factory=dict)
    k: int = 0

    def to_json(self) -> dict:
        out = {
            "labels": self.labels,
            "r_matrix": self.r_matrix.tolist(),
            "p_matrix": self.p_matrix.tolist(),
            "n_effective": self.n_effective.tolist(),
        }
        if self.timings:
            out["k"] = self.k
            out["timings"] = {
                label: {"median_s": res.median_s, "timings_s": list(res.timings)}
                for label, res in self.timings.items()
            }
        return out


def comparison_matrix(tracks, n: int = 1000) -> ComparisonReport:
    """All-pairs compare_tracks over labelled tracks: symmetric, unit diagonal.

    `tracks` is a sequence of (label, F0Track) pairs in display order.
    """
    tracks = list(tracks)
    if len(tracks) < 2:
        raise ValueError("need at least two tracks")
    labels = [label for label, _ in tracks]
    m = len(tracks)
    r = np.eye(m)
    p = np.zeros((m, m))
    n_eff = np.zeros((m, m), dtype=int)
    for i in range(m):
        n_eff[i, i] = len(tracks[i][1])
        for j in range(i + 1, m):
            rij, pij = compare_tracks(tracks[i][1], tracks[j][1], n)
            r[i, j] = r[j, i] = rij
            p[i, j] = p[j, i] = pij
            n_eff[i, j] = n_eff[j, i] = min(len(tracks[i][1]), len(tracks[j][1]))
    return ComparisonReport(labels, r, p, n_eff)


def benchmark(label: str, params, signal: Signal, k: int = 100) -> BenchmarkResult:
    """Median wall-clock seconds over k single-threaded runs on identical input.

    The first run is a warm-up and is discarded from the distribution.
    Must not run concurrently with other benchmarks.
    """
    if k < 3:
        raise ValueError("k must be at least 3")
    info = get_estimator(label)
    if params is None:
        params = info.params_cls.for_rate(signal.rate)
    timings = []
    for _ in range(k):
        start = time.perf_counter()
        info.estimate(signal, params)
        timings.append(time.perf_counter() - start)
    retained = tuple(timings[1:])
    return BenchmarkResult(label, float(np.median(retained)), retained, k)


def _parse_track_rows(rows, source: str) -> F0Track:
    times = []
    f0 = []
    for lineno, t, f in rows:
        if t < 0:
            raise TrackFormatError(f"line {lineno}: negative time")
        if f < 0:
            raise TrackFormatError(f"line {lineno}: negative f0")
        if times and t <= times[-1]:
            raise TrackFormatError(f"line {lineno}: non-ascending times")
        times.append(t)
        f0.append(f)
    return F0Track(np.array(times), np.array(f0), source=source)


def import_track(path, fmt: str = "csv") -> F0Track:
    """Read a track from CSV (time_s,f0_hz) or JSON; see export_track for the formats.

    Malformed rows, non-ascending times and negative f0 each raise a
    distinct TrackFormatError naming the offending line.
    """
    path = Path(path)
    if fmt == "csv":
        source = path.stem
        rows = []
        with open(path, newline="", encoding="utf-8") as handle:
            lineno = 0
            header_seen = False
            for raw in handle:
                lineno += 1
                line = raw.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    if "=" in line and line.lstrip("# ").startswith("source"):
                        source = line.split("=", 1)[1].strip()
                    continue
                if not header_seen:
                    if line != "time_s,f0_hz":
                        raise TrackFormatError(f"line {lineno}: expected header 'time_s,f0_hz'")
                    header_seen = True
                    continue
                parts = line.split(",")
                if len(parts) != 2:
                    raise TrackFormatError(f"line {lineno}: expected two fields")
                try:
                    rows.append((lineno, float(parts[0]), float(parts[1])))
                except ValueError:
                    raise TrackFormatError(f"line {lineno}: malformed number") from None
        if not header_seen:
            raise TrackFormatError("line 1: missing header 'time_s,f0_hz'")
        return _parse_track_rows(rows, source)
    if fmt == "json":
        with open(path, encoding="utf-8") as handle:
            try:
                payload = json.load(handle)
            except json.JSONDecodeError as exc:
                raise TrackFormatError(f"line {exc.lineno}: invalid JSON") from exc
        return track_from_json(payload, default_source=path.stem)
    raise ValueError(f"unknown track format: {fmt!r}")


def track_from_json(payload: dict, default_source: str = "") -> F0Track:
    """Build a track from the JSON object format, validating the same rules as CSV."""
    for key in ("times_s", "f0_hz"):
        if key not in payload or not isinstance(payload[key], list):
            raise TrackFormatError(f"line 1: missing array {key!r}")
    times = payload["times_s"]
    f0 = payload["f0_hz"]
    if len(times) != len(f0):
        raise TrackFormatError("line 1: times_s and f0_hz differ in length")
    source = str(payload.get("source", default_source))
    rows = []
    for i, (t, f) in enumerate(zip(times, f0)):
        if not isinstance(t, (int, float)) or not isinstance(f, (int, float)):
            raise TrackFormatError(f"line 1: malformed number at index {i}")
        rows.append((i + 1, float(t), float(f)))
    return _parse_track_rows(rows, source)


def export_track(track: F0Track, path, fmt: str = "csv") -> None:
    """Write a track with fixed field order, 6 decimal places, LF endings.

    CSV: '# source=<label>' comment, 'time_s,f0_hz' header, one row per
    frame. JSON: {"source": ..., "times_s": [...], "f0_hz": [...]}.
    Unvoiced frames are written as 0, never blank.
    """
    path = Path(path)
    if fmt == "csv":
        lines = []
        if track.source:
            lines.append(f"# source={track.source}")
        lines.append("time_s,f0_hz")
        for t, f in zip(track.times, track.f0):
            lines.append(f"{t:.6f},{f:.6f}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    elif fmt == "json":
        payload = {
            "source": track.source,
            "times_s": [round(float(t), 6) for t in track.times],
            "f0_hz": [round(float(f), 6) for f in track.f0],
        }
        path.write_text(json.dumps(payload) + "\n", encoding="utf-8", newline="\n")
    else:
        raise ValueError(f"unknown track format: {fmt!r}")
