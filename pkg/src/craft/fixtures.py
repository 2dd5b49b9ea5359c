"""Deterministic synthetic audio clips.

These replace corpus audio for demos and tests: each generator is a pure
function of its arguments (noise is seeded), so the rendered WAV files are
byte-identical across runs.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile
from scipy.signal import sawtooth

from .audio import Signal

DEFAULT_RATE = 16000


def sine(freq: float = 200.0, duration: float = 1.0, rate: int = DEFAULT_RATE,
         amplitude: float = 0.8) -> Signal:
    t = np.arange(int(round(duration * rate))) / rate
    return Signal(amplitude * np.sin(2 * np.pi * freq * t), rate)


def saw(freq: float = 120.0, duration: float = 1.0, rate: int = DEFAULT_RATE,
        amplitude: float = 0.8) -> Signal:
    t = np.arange(int(round(duration * rate))) / rate
    return Signal(amplitude * sawtooth(2 * np.pi * freq * t), rate)


def _phase(inst_freq: np.ndarray, rate: int) -> np.ndarray:
    return 2 * np.pi * np.cumsum(inst_freq) / rate


def saw_meander(f_start: float = 100.0, f_end: float = 200.0, duration: float = 5.0,
                rate: int = DEFAULT_RATE, amplitude: float = 0.8) -> Signal:
    """Sawtooth whose fundamental ramps linearly from f_start to f_end."""
    n = int(round(duration * rate))
    inst = np.linspace(f_start, f_end, n)
    return Signal(amplitude * sawtooth(_phase(inst, rate)), rate)


def am_noise(mod_freq: float = 4.0, duration: float = 5.0, rate: int = DEFAULT_RATE,
             depth: float = 1.0, seed: int = 1234) -> Signal:
    """White noise carrier, amplitude-modulated at mod_freq."""
    n = int(round(duration * rate))
    t = np.arange(n) / rate
    rng = np.random.default_rng(seed)
    carrier = rng.standard_normal(n)
    carrier /= np.max(np.abs(carrier))
    mod = 0.5 * (1.0 + depth * np.sin(2 * np.pi * mod_freq * t))
    return Signal(0.8 * mod * carrier, rate)


def fm_saw(f_center: float = 150.0, f_dev: float = 30.0, mod_freq: float = 2.0,
           duration: float = 5.0, rate: int = DEFAULT_RATE, amplitude: float = 0.8) -> Signal:
    """Constant-amplitude sawtooth with F0 = f_center + f_dev*sin(2*pi*mod_freq*t)."""
    n = int(round(duration * rate))
    t = np.arange(n) / rate
    inst = f_center + f_dev * np.sin(2 * np.pi * mod_freq * t)
    return Signal(amplitude * sawtooth(_phase(inst, rate)), rate)


def comodulated(mod_freq: float = 3.0, f_center: float = 150.0, f_dev: float = 30.0,
                duration: float = 5.0, rate: int = DEFAULT_RATE, depth: float = 0.4) -> Signal:
    """Sawtooth co-modulated in amplitude and F0 by the same sinusoid.

    The AM depth stays moderate so the quiet half-cycle survives center
    clipping and the voicing gate; the point of the clip is a shared
    modulator, not a stress test.
    """
    n = int(round(duration * rate))
    t = np.arange(n) / rate
    mod = np.sin(2 * np.pi * mod_freq * t)
    inst = f_center + f_dev * mod
    amp = 0.5 * (1.0 + depth * mod)
    return Signal(amp * sawtooth(_phase(inst, rate)), rate)


def write_wav(signal: Signal, path) -> None:
    """Write 16-bit PCM; samples are clipped to [-1, 1] first."""
    clipped = np.clip(signal.samples, -1.0, 1.0)
    pcm = np.round(clipped * 32767.0).astype(np.int16)
    wavfile.write(str(path), signal.rate, pcm)


@dataclass(frozen=True)
class ClipSpec:
    id: str
    name: str
    description: str
    build: object  # () -> Signal


BUNDLED_CLIPS = (
    ClipSpec("sine200", "Pure tone 200 Hz",
             "1 s sine at 200 Hz; a flat F0 ground truth.", lambda: sine()),
    ClipSpec("saw120", "Sawtooth 120 Hz",
             "1 s harmonic-rich sawtooth at 120 Hz; exercises fundamental-vs-harmonic choices.",
             lambda: saw()),
    ClipSpec("saw_meander", "Meandering sawtooth 100-200 Hz",
             "5 s sawtooth whose fundamental ramps 100 to 200 Hz.", lambda: saw_meander()),
    ClipSpec("am_noise_4hz", "AM noise at 4 Hz",
             "5 s noise carrier, amplitude-modulated at 4 Hz.", lambda: am_noise()),
    ClipSpec("fm_saw_2hz", "FM sawtooth at 2 Hz",
             "5 s sawtooth, F0 = 150 + 30*sin(2*pi*2t).", lambda: fm_saw()),
    ClipSpec("comod_3hz", "Co-modulated carrier at 3 Hz",
             "5 s sawtooth with amplitude and F0 driven by the same 3 Hz sinusoid.",
             lambda: comodulated()),
)


def ensure_clips(directory) -> list[dict]:
    """Render any missing bundled clips into `directory`; return catalog entries."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    catalog = []
    for clip in BUNDLED_CLIPS:
        path = directory / f"{clip.id}.wav"
        if not path.exists():
            write_wav(clip.build(), path)
        rate, data = wavfile.read(str(path))
        catalog.append({
            "id": clip.id,
            "name": clip.name,
            "duration_s": round(len(data) / rate, 6),
            "sample_rate": int(rate),
            "description": clip.description,
        })
    return catalog
