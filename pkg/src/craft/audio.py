"""Audio ingestion, normalization, resampling and frame segmentation.

Everything downstream (F0 estimators, envelope analysis, spectrograms)
consumes the `Signal` container defined here.
"""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

WINDOW_FUNCTIONS = ("rectangular", "hann", "hamming")

MIN_RATE = 8000
MAX_RATE = 48000


class AudioReadError(ValueError):
    """Raised when a WAV file cannot be turned into a Signal."""


@dataclass(frozen=True)
class Signal:
    """Mono audio: samples nominally in [-1, 1] plus a sample rate in Hz.

    Immutable after construction; safe to share between threads.
    """

    samples: np.ndarray
    rate: int

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("sample rate must be positive")
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        """Length in seconds."""
        return len(self.samples) / self.rate


@dataclass(frozen=True)
class FrameSpec:
    """Frame geometry: length and hop in samples plus a window function."""

    frame_len: int
    hop: int
    window_fn: str = "hann"

    def __post_init__(self):
        if self.frame_len <= 0:
            raise ValueError("frame_len must be positive")
        if not 0 < self.hop <= self.frame_len:
            raise ValueError("hop must satisfy 0 < hop <= frame_len")
        if self.window_fn not in WINDOW_FUNCTIONS:
            raise ValueError(f"unknown window function: {self.window_fn!r}")

    def frame_count(self, n_samples: int) -> int:
        if n_samples < self.frame_len:
            return 0
        return (n_samples - self.frame_len) // self.hop + 1

    def window(self) -> np.ndarray:
        if self.window_fn == "hann":
            return np.hanning(self.frame_len)
        if self.window_fn == "hamming":
            return np.hamming(self.frame_len)
        return np.ones(self.frame_len)


def load_wav(path) -> Signal:
    """Read a RIFF/WAVE file into a mono Signal.

    Accepts 16-bit PCM or 32-bit IEEE float, 1 or 2 channels, sample rate
    8-48 kHz. Stereo is downmixed by channel average; 16-bit samples are
    scaled by 1/32768 so -32768 maps to -1.0 exactly.

    Raises AudioReadError with a distinct message for an unreadable file,
    an unsupported codec/bit depth, and zero-length audio.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise AudioReadError(f"unreadable file: {exc}") from exc
    return decode_wav(raw, str(path))


def decode_wav(raw: bytes, name: str = "<buffer>") -> Signal:
    """Decode in-memory WAV bytes; same contract and errors as load_wav."""
    path = name
    if len(raw) < 12 or raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise AudioReadError(f"unreadable file: {path} is not a RIFF/WAVE container")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos:pos + 4]
        (chunk_size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8:pos + 8 + chunk_size]
        if chunk_id == b"fmt " and len(body) >= 16:
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            data = body
        pos += 8 + chunk_size + (chunk_size & 1)  # chunks are word-aligned

    if fmt is None or data is None:
        raise AudioReadError(f"unreadable file: {path} has no fmt/data chunk")

    codec, channels, rate, _, _, bits = fmt
    if (codec, bits) == (1, 16):
        samples = np.frombuffer(data[: len(data) // 2 * 2], dtype="<i2").astype(np.float64) / 32768.0
    elif (codec, bits) == (3, 32):
        samples = np.frombuffer(data[: len(data) // 4 * 4], dtype="<f4").astype(np.float64)
    else:
        raise AudioReadError(
            f"unsupported codec or bit depth: format {codec}, {bits}-bit in {path}"
        )
    if channels not in (1, 2):
        raise AudioReadError(f"unsupported codec or bit depth: {channels} channels in {path}")
    if not MIN_RATE <= rate <= MAX_RATE:
        raise AudioReadError(
            f"unsupported codec or bit depth: sample rate {rate} outside "
            f"[{MIN_RATE}, {MAX_RATE}] Hz in {path}"
        )
    if channels == 2:
        samples = samples[: len(samples) // 2 * 2].reshape(-1, 2).mean(axis=1)
    if len(samples) == 0:
        raise AudioReadError(f"zero-length audio in {path}")
    return Signal(samples, rate)


def normalize(signal: Signal) -> Signal:
    """Peak-normalize so max(|samples|) == 1.0; silence is returned unchanged."""
    peak = np.max(np.abs(signal.samples)) if len(signal) else 0.0
    if peak == 0.0:
        return signal
    return Signal(signal.samples / peak, signal.rate)


def frames(signal: Signal, spec: FrameSpec) -> np.ndarray:
    """Slice a signal into windowed frames.

    Frame i starts at sample i*hop; the count is
    floor((N - frame_len)/hop) + 1 for N >= frame_len, else 0 (an empty
    array, not an error). The window is applied pointwise.
    """
    n = spec.frame_count(len(signal))
    if n == 0:
        return np.empty((0, spec.frame_len))
    idx = np.arange(spec.frame_len)[None, :] + spec.hop * np.arange(n)[:, None]
    return signal.samples[idx] * spec.window()[None, :]


def frame_times(signal: Signal, spec: FrameSpec) -> np.ndarray:
    """Frame-center times in seconds for each frame of `frames`."""
    n = spec.frame_count(len(signal))
    return (np.arange(n) * spec.hop + spec.frame_len / 2.0) / signal.rate


def resample(signal: Signal, target_rate: int) -> Signal:
    """Linearly resample onto target_rate, preserving the endpoints exactly.

    Output duration stays within one sample period of the input duration.
    Linear interpolation is deliberate: tracks and envelopes fed through
    here are already heavily low-passed.
    """
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    if target_rate == signal.rate:
        return signal
    n_in = len(signal)
    n_out = max(1, int(round(n_in * target_rate / signal.rate)))
    if n_in == 1:
        return Signal(np.full(n_out, signal.samples[0]), target_rate)
    positions = np.linspace(0.0, n_in - 1, n_out)
    return Signal(np.interp(positions, np.arange(n_in), signal.samples), target_rate)
