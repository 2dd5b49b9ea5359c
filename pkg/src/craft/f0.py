"""F0 estimation: the SOFT tracker and an AMDF tracker.

Both estimators share the F0Track output contract (0.0 encodes unvoiced)
and the same post-processing path: frequency-range clipping followed by
median smoothing. SOFT runs a fixed preprocessing chain (center clipping,
lowpass, highpass) and then measures a per-frame frequency candidate with
one of three selectable methods; AMDF searches the lag-domain average
magnitude difference for its minimum.
"""

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from . import dsp
from .audio import FrameSpec, Signal, frame_times, frames

SOFT_METHODS = ("fft_harmonic", "zero_crossing", "peak_picking")

# Submultiple acceptance: a candidate fundamental needs a local spectral
# peak of at least this fraction of the strongest peak's magnitude.
HARMONIC_FLOOR = 0.25

# AMDF lag dips within this fraction of the mean of the true minimum count
# as ties and resolve to the smallest lag. Integer-lag quantisation can make
# the dip at twice the period marginally deeper than at the period itself,
# which would otherwise halve the estimate on gliding F0.
LAG_TIE_TOLERANCE = 0.05


@dataclass(frozen=True)
class F0Track:
    """Frame-aligned F0 estimates in Hz; 0.0 means unvoiced.

    times are frame centers in seconds, strictly ascending with constant
    step hop/rate. frame_len and hop are 0 for imported tracks whose frame
    geometry is unknown.
    """

    times: np.ndarray
    f0: np.ndarray
    frame_len: int = 0
    hop: int = 0
    source: str = ""

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        f0 = np.asarray(self.f0, dtype=np.float64)
        if len(times) != len(f0):
            raise ValueError("times and f0 must have the same length")
        if len(times) > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("times must ascend strictly")
        for name, arr in (("times", times), ("f0", f0)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.f0)

    @property
    def frame_rate(self) -> float:
        """Frames per second, from the time step."""
        if len(self.times) < 2:
            raise ValueError("need at least two frames for a frame rate")
        return 1.0 / (self.times[1] - self.times[0])

    @property
    def voiced(self) -> np.ndarray:
        return self.f0 > 0

    def voiced_count(self) -> int:
        return int(np.count_nonzero(self.f0 > 0))


@dataclass(frozen=True)
class SoftParams:
    """The SOFT processing space: all adjustable.

    clip_ratio, lp_cutoff and hp_cutoff steer preprocessing; frame_len/hop
    (samples) fix the frame geometry; method selects the per-frame
    measurement; f_min/f_max clip the admissible range; median_win smooths
    the track; voicing_rms gates frames on RMS relative to the whole
    signal.
    """

    clip_ratio: float = 0.3
    lp_cutoff: float = 900.0
    hp_cutoff: float = 60.0
    frame_len: int = 480
    hop: int = 160
    method: str = "fft_harmonic"
    f_min: float = 60.0
    f_max: float = 400.0
    median_win: int = 5
    voicing_rms: float = 0.1

    def __post_init__(self):
        _validate_common(self)
        if not 0 <= self.clip_ratio < 1:
            raise ValueError("clip_ratio must lie in [0, 1)")
        if self.method not in SOFT_METHODS:
            raise ValueError(f"unknown method: {self.method!r}")
        if not 0 < self.hp_cutoff < self.lp_cutoff:
            raise ValueError("need 0 < hp_cutoff < lp_cutoff")
        if not 0 <= self.voicing_rms <= 1:
            raise ValueError("voicing_rms must lie in [0, 1]")

    @classmethod
    def for_rate(cls, rate: int, **overrides) -> "SoftParams":
        """Defaults with 30 ms frames and 10 ms hop at the given rate."""
        base = dict(frame_len=round(0.030 * rate), hop=round(0.010 * rate))
        base.update(overrides)
        return cls(**base)


@dataclass(frozen=True)
class AmdfParams:
    """AMDF estimator parameters; dip_ratio is the voicing criterion."""

    frame_len: int = 534
    hop: int = 160
    f_min: float = 60.0
    f_max: float = 400.0
    dip_ratio: float = 0.3
    median_win: int = 5

    def __post_init__(self):
        _validate_common(self)
        if not 0 < self.dip_ratio < 1:
            raise ValueError("dip_ratio must lie in (0, 1)")

    @classmethod
    def for_rate(cls, rate: int, **overrides) -> "AmdfParams":
        """Defaults sized so two periods of f_min fit in a frame, 10 ms hop."""
        f_min = overrides.get("f_min", 60.0)
        base = dict(frame_len=math.ceil(2 * rate / f_min), hop=round(0.010 * rate))
        base.update(overrides)
        return cls(**base)


def _validate_common(p):
    if p.frame_len <= 0 or p.hop <= 0:
        raise ValueError("frame_len and hop must be positive")
    if p.hop > p.frame_len:
        raise ValueError("hop must not exceed frame_len")
    if not 0 < p.f_min < p.f_max:
        raise ValueError("need 0 < f_min < f_max")
    if p.median_win < 1 or p.median_win % 2 == 0:
        raise ValueError("median_win must be odd and >= 1")


def _check_geometry(signal: Signal, params) -> None:
    if params.f_max >= signal.rate / 2:
        raise ValueError("f_max must stay below the Nyquist frequency")
    # One full period of f_min must fit in a frame, otherwise no interval or
    # lag measurement can see the lowest admissible frequency.
    if params.frame_len < signal.rate / params.f_min:
        raise ValueError("frame too short for f_min")
    if len(signal) < params.frame_len:
        raise ValueError("signal shorter than one frame")


def frame_fft_candidate(frame, rate: float, f_min: float, f_max: float) -> float | None:
    """Strongest-and-lowest-harmonic-peak frequency measurement.

    Hann-windows the frame, finds the strongest spectral peak p in
    [f_min, rate/2], then walks the submultiples p/k and returns the lowest
    one inside [f_min, f_max] that is supported by a local spectral peak
    (within one bin) of at least HARMONIC_FLOOR times the strongest peak's
    magnitude. None means the frame offers no usable peak.
    """
    x = np.asarray(frame, dtype=np.float64)
    if len(x) == 0:
        raise ValueError("frame must be non-empty")
    # 4x zero-padding plus parabolic refinement: sub-bin accuracy without
    # pretending the frame carries more information than it does.
    n = dsp.next_pow2(len(x)) * 4
    mags = np.abs(np.fft.rfft(x * np.hanning(len(x)), n=n))
    res = rate / n
    lo = int(np.ceil(f_min / res))
    if lo >= len(mags):
        return None
    b = lo + int(np.argmax(mags[lo:]))
    strongest = mags[b]
    if strongest <= 0.0:
        return None

    def refined(j: int) -> float:
        if 0 < j < len(mags) - 1:
            a, c, d = mags[j - 1], mags[j], mags[j + 1]
            den = a - 2 * c + d
            if den != 0:
                off = 0.5 * (a - d) / den
                if abs(off) <= 1:
                    return (j + off) * res
        return j * res

    p = refined(b)
    for k in range(int(p // f_min), 0, -1):  # largest k first = lowest frequency
        f = p / k
        if not f_min <= f <= f_max:
            continue
        j = int(round(f / res))
        for jj in (j - 1, j, j + 1):
            if not 1 <= jj < len(mags) - 1:
                continue
            if (
                mags[jj] >= mags[jj - 1]
                and mags[jj] >= mags[jj + 1]
                and mags[jj] >= HARMONIC_FLOOR * strongest
            ):
                estimate = p if k == 1 else refined(jj)
                if f_min <= estimate <= f_max:
                    return estimate
    return None


def frame_zcr_candidate(frame, rate: float) -> float | None:
    """Zero-crossing interval measurement.

    Upward (negative-to-positive) crossings are located with linear
    interpolation; the mean interval between consecutive crossings is the
    period estimate. None when fewer than two crossings exist.
    """
    x = np.asarray(frame, dtype=np.float64)
    if len(x) == 0:
        raise ValueError("frame must be non-empty")
    idx = np.flatnonzero((x[:-1] < 0) & (x[1:] >= 0))
    if len(idx) < 2:
        return None
    crossings = idx + (-x[idx]) / (x[idx + 1] - x[idx])
    mean_interval = (crossings[-1] - crossings[0]) / (len(crossings) - 1)
    if mean_interval <= 0:
        return None
    return rate / mean_interval


def frame_peak_candidate(frame, rate: float) -> float | None:
    """Peak-picking measurement: peaks of x are upward zero crossings of diff(x)."""
    x = np.asarray(frame, dtype=np.float64)
    if len(x) == 0:
        raise ValueError("frame must be non-empty")
    if len(x) < 2:
        return None
    return frame_zcr_candidate(np.diff(x), rate)


def _postprocess(raw, params) -> np.ndarray:
    f0 = np.asarray(raw, dtype=np.float64)
    out_of_range = (f0 < params.f_min) | (f0 > params.f_max)
    f0[out_of_range] = 0.0
    if params.median_win > 1 and len(f0) >= 1:
        f0 = dsp.median_filter(f0, params.median_win)
    return f0


def soft_estimate(signal: Signal, params: SoftParams | None = None) -> F0Track:
    """Run the SOFT pipeline and return an F0 track.

    Steps, in order: center clip at clip_ratio; lowpass at lp_cutoff;
    highpass at hp_cutoff; per-frame candidate from the selected method;
    frames with RMS below voicing_rms * global RMS forced unvoiced;
    candidates outside [f_min, f_max] forced unvoiced; median smoothing.
    """
    params = params if params is not None else SoftParams.for_rate(signal.rate)
    _check_geometry(signal, params)

    pre = dsp.center_clip(signal.samples, params.clip_ratio)
    pre = dsp.lowpass(pre, signal.rate, params.lp_cutoff)
    pre = dsp.highpass(pre, signal.rate, params.hp_cutoff)
    pre_signal = Signal(pre, signal.rate)

    # Plain time-domain frames; the spectral method applies its own window.
    spec = FrameSpec(params.frame_len, params.hop, "rectangular")
    frame_mat = frames(pre_signal, spec)

    global_rms = float(np.sqrt(np.mean(pre ** 2)))
    threshold = params.voicing_rms * global_rms

    raw = np.zeros(frame_mat.shape[0])
    for i, frame in enumerate(frame_mat):
        if np.sqrt(np.mean(frame ** 2)) < threshold:
            continue
        if params.method == "fft_harmonic":
            cand = frame_fft_candidate(frame, signal.rate, params.f_min, params.f_max)
        elif params.method == "zero_crossing":
            cand = frame_zcr_candidate(frame, signal.rate)
        else:
            cand = frame_peak_candidate(frame, signal.rate)
        raw[i] = cand if cand is not None else 0.0

    return F0Track(
        times=frame_times(signal, spec),
        f0=_postprocess(raw, params),
        frame_len=params.frame_len,
        hop=params.hop,
        source="soft",
    )


def amdf_estimate(signal: Signal, params: AmdfParams | None = None) -> F0Track:
    """Average-magnitude-difference F0 track.

    Per frame, AMDF(tau) = mean |x[n] - x[n+tau]| over tau in
    [rate/f_max, rate/f_min]; the frame is voiced iff the relative dip
    (mean - min)/mean reaches dip_ratio. Lags within LAG_TIE_TOLERANCE of
    the minimum count as ties and resolve to the smallest lag, so exact or
    near multiples of the true period cannot pull the estimate down an
    octave.
    """
    params = params if params is not None else AmdfParams.for_rate(signal.rate)
    _check_geometry(signal, params)

    rate = signal.rate
    tau_min = int(np.ceil(rate / params.f_max))
    tau_max = int(np.floor(rate / params.f_min))
    tau_max = min(tau_max, params.frame_len - 1)

    spec = FrameSpec(params.frame_len, params.hop, "rectangular")
    frame_mat = frames(signal, spec)
    raw = np.zeros(frame_mat.shape[0])
    amdf = np.empty(tau_max - tau_min + 1)
    for i, frame in enumerate(frame_mat):
        for j, tau in enumerate(range(tau_min, tau_max + 1)):
            amdf[j] = np.mean(np.abs(frame[: len(frame) - tau] - frame[tau:]))
        mean = amdf.mean()
        if mean <= 0:
            continue
        floor = amdf.min()
        if (mean - floor) / mean < params.dip_ratio:
            continue
        tau_star = tau_min + int(np.argmax(amdf <= floor + LAG_TIE_TOLERANCE * mean))
        raw[i] = rate / tau_star

    return F0Track(
        times=frame_times(signal, spec),
        f0=_postprocess(raw, params),
        frame_len=params.frame_len,
        hop=params.hop,
        source="amdf",
    )


@dataclass(frozen=True)
class ParamField:
    """One adjustable parameter, described for schema-driven UIs."""

    name: str
    kind: str  # "float" | "int" | "enum"
    default: float | int | str | None  # None: resolved from the signal rate
    minimum: float | None = None
    maximum: float | None = None
    choices: tuple[str, ...] | None = None
    unit: str = ""
    description: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "default": self.default}
        if self.minimum is not None:
            out["minimum"] = self.minimum
        if self.maximum is not None:
            out["maximum"] = self.maximum
        if self.choices is not None:
            out["choices"] = list(self.choices)
        if self.unit:
            out["unit"] = self.unit
        if self.description:
            out["description"] = self.description
        return out


@dataclass(frozen=True)
class EstimatorInfo:
    label: str
    params_cls: type
    fields: tuple[ParamField, ...]
    estimate: object  # (Signal, params) -> F0Track

    def schema(self) -> dict:
        return {"label": self.label, "fields": [f.to_json() for f in self.fields]}


_SOFT_FIELDS = (
    ParamField("clip_ratio", "float", 0.3, 0.0, 0.99,
               description="center-clipping threshold as a fraction of the peak"),
    ParamField("lp_cutoff", "float", 900.0, 1.0, 24000.0, unit="Hz",
               description="lowpass cutoff suppressing higher harmonics"),
    ParamField("hp_cutoff", "float", 60.0, 1.0, 24000.0, unit="Hz",
               description="highpass cutoff suppressing low-frequency noise"),
    ParamField("frame_len", "int", None, 2, None, unit="samples",
               description="analysis frame length (default: 30 ms of the input)"),
    ParamField("hop", "int", None, 1, None, unit="samples",
               description="frame step (default: 10 ms of the input)"),
    ParamField("method", "enum", "fft_harmonic", choices=SOFT_METHODS,
               description="per-frame frequency measurement"),
    ParamField("f_min", "float", 60.0, 1.0, 2000.0, unit="Hz",
               description="lowest admissible F0"),
    ParamField("f_max", "float", 400.0, 1.0, 4000.0, unit="Hz",
               description="highest admissible F0"),
    ParamField("median_win", "int", 5, 1, 99,
               description="odd median-smoothing window over the track"),
    ParamField("voicing_rms", "float", 0.1, 0.0, 1.0,
               description="voicing gate as a fraction of global RMS"),
)

_AMDF_FIELDS = (
    ParamField("frame_len", "int", None, 2, None, unit="samples",
               description="analysis frame length (default: two periods of f_min)"),
    ParamField("hop", "int", None, 1, None, unit="samples",
               description="frame step (default: 10 ms of the input)"),
    ParamField("f_min", "float", 60.0, 1.0, 2000.0, unit="Hz",
               description="lowest admissible F0"),
    ParamField("f_max", "float", 400.0, 1.0, 4000.0, unit="Hz",
               description="highest admissible F0"),
    ParamField("dip_ratio", "float", 0.3, 0.01, 0.99,
               description="relative AMDF dip required to call a frame voiced"),
    ParamField("median_win", "int", 5, 1, 99,
               description="odd median-smoothing window over the track"),
)

_REGISTRY = {
    "soft": EstimatorInfo("soft", SoftParams, _SOFT_FIELDS, soft_estimate),
    "amdf": EstimatorInfo("amdf", AmdfParams, _AMDF_FIELDS, amdf_estimate),
}


def estimator_registry() -> dict[str, EstimatorInfo]:
    """Built-in estimators by label; external tracks are imported, not registered."""
    return dict(_REGISTRY)


def get_estimator(label: str) -> EstimatorInfo:
    try:
        return _REGISTRY[label]
    except KeyError:
        raise ValueError(f"unknown estimator: {label!r}") from None


def make_params(label: str, rate: int, overrides: dict | None = None):
    """Build a validated parameter object for an estimator at a given rate.

    Unknown override keys raise; None values fall back to the rate-derived
    default. Returns the params instance.
    """
    info = get_estimator(label)
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    known = {f.name for f in fields(info.params_cls)}
    for key in overrides:
        if key not in known:
            raise ValueError(f"unknown parameter for {label}: {key!r}")
    if "method" in overrides:
        overrides["method"] = str(overrides["method"])
    for int_field in ("frame_len", "hop", "median_win"):
        if int_field in overrides:
            overrides[int_field] = int(overrides[int_field])
    return info.params_cls.for_rate(rate, **overrides)


def params_dict(params) -> dict:
    """Fully-resolved parameter values as a plain dict."""
    return {f.name: getattr(params, f.name) for f in fields(params)}


def estimate(signal: Signal, label: str, params=None) -> F0Track:
    """Dispatch to a registered estimator, with defaults when params is None."""
    info = get_estimator(label)
    if params is None:
        params = info.params_cls.for_rate(signal.rate)
    return info.estimate(signal, params)


def with_params(params, **overrides):
    """Copy a params object with some fields replaced (validation re-runs)."""
    return replace(params, **overrides)
