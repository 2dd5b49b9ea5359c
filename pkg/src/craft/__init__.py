"""craft: speech-prosody analysis toolkit.

F0 tracking (SOFT and AMDF), amplitude/frequency demodulation with
envelope spectra and rhythm-zone detection, polynomial contour models, and
a quantitative estimator-comparison harness. Exposed as a library, a CLI
(`craft`), and an HTTP service (`craft serve`).
"""

from .audio import AudioReadError, FrameSpec, Signal, frames, load_wav, normalize, resample
from .contours import PolyModel, VoicedSegment, fit_poly, median_interpolate, model_track, voiced_segments
from .dsp import Spectrum, SpectrogramGrid, fft_magnitude, hilbert_envelope, highpass, lowpass, spectrogram
from .evaluation import (
    BenchmarkResult,
    ComparisonReport,
    benchmark,
    compare_tracks,
    comparison_matrix,
    export_track,
    import_track,
    normalize_length,
    pearson_r,
)
from .f0 import (
    AmdfParams,
    F0Track,
    SoftParams,
    amdf_estimate,
    estimator_registry,
    soft_estimate,
)
from .rhythm import Envelope, RhythmParams, RhythmReport, RhythmZoneSet, am_envelope, envelope_spectrum, fm_envelope, jassem_edges, rhythm_report

__version__ = "0.1.0"
