"""Pydantic request/response models and the machine-readable parameter schema.

The /api/schema document is assembled from the estimator registry plus the
field descriptors below; UIs generate their parameter forms from it rather
than duplicating defaults.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..f0 import ParamField

ANALYSES = ("f0", "envelope", "spectrum", "zones", "poly", "spectrogram")

RHYTHM_FIELDS = (
    ParamField("win_ms", "float", 20.0, 1.0, 500.0, unit="ms",
               description="moving-maximum detector window"),
    ParamField("lp_cutoff", "float", 24.0, 1.0, 49.0, unit="Hz",
               description="envelope lowpass cutoff"),
    ParamField("out_rate", "float", 100.0, 10.0, 1000.0, unit="Hz",
               description="envelope sample rate"),
    ParamField("display_max", "float", 20.0, 1.0, 50.0, unit="Hz",
               description="upper edge of the envelope spectrum display"),
    ParamField("smooth_win", "int", 3, 1, 21,
               description="odd moving-average window before edge detection"),
    ParamField("prominence", "float", 0.1, 0.0, 0.9,
               description="required relative depth of a zone boundary minimum"),
    ParamField("norm_len", "int", 1000, 10, 100000,
               description="length tracks are normalised to before correlation"),
)

POLY_FIELDS = (
    ParamField("local_order", "int", 3, 0, 8,
               description="polynomial order per voiced segment"),
    ParamField("global_order", "int", 6, 0, 8,
               description="polynomial order for the whole utterance"),
    ParamField("min_seg_frames", "int", 5, 1, 100,
               description="shortest voiced segment that still gets a local model"),
)

SPECTROGRAM_FIELDS = (
    ParamField("frame_len", "int", None, 16, None, unit="samples",
               description="spectrogram frame length (default: 32 ms of the input)"),
    ParamField("hop", "int", None, 1, None, unit="samples",
               description="spectrogram hop (default: frame_len / 2)"),
    ParamField("window_fn", "enum", "hann", choices=("rectangular", "hann", "hamming"),
               description="analysis window"),
    ParamField("floor_db", "float", -60.0, -120.0, -1.0, unit="dB",
               description="display floor for dB magnitudes"),
)


def schema_document() -> dict:
    from ..f0 import estimator_registry

    return {
        "estimators": {label: info.schema() for label, info in estimator_registry().items()},
        "analyses": list(ANALYSES),
        "rhythm": {"fields": [f.to_json() for f in RHYTHM_FIELDS]},
        "poly": {"fields": [f.to_json() for f in POLY_FIELDS]},
        "spectrogram": {"fields": [f.to_json() for f in SPECTROGRAM_FIELDS]},
    }


class ErrorBody(BaseModel):
    error: str
    field: Optional[str] = None


class ClipEntry(BaseModel):
    id: str
    name: str
    duration_s: float
    sample_rate: int
    description: str


class UploadResponse(BaseModel):
    token: str
    duration_s: float
    sample_rate: int


class AnalyzeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: str = Field(description="clip id or upload token")
    estimator: str = "soft"
    params: dict = Field(default_factory=dict)
    analyses: list[Literal["f0", "envelope", "spectrum", "zones", "poly", "spectrogram"]] = (
        Field(default_factory=lambda: ["f0"])
    )
    rhythm: dict = Field(default_factory=dict)
    poly: dict = Field(default_factory=dict)
    spectrogram: dict = Field(default_factory=dict)


class TrackPayload(BaseModel):
    source: str
    times_s: list[float]
    f0_hz: list[float]


class EnvelopePayload(BaseModel):
    kind: str
    rate_hz: float
    values: list[float]


class SpectrumPayload(BaseModel):
    freqs_hz: list[float]
    mags: list[float]
    resolution_hz: float


class ZonePayload(BaseModel):
    f_low_hz: float
    f_high_hz: float
    peak_freq_hz: float
    peak_mag: float


class ZoneSetPayload(BaseModel):
    boundaries_hz: list[float]
    zones: list[ZonePayload]
    display_max_hz: float


class ZonesSection(BaseModel):
    am: ZoneSetPayload
    fm: ZoneSetPayload
    am_fm_r: float
    am_fm_p: float


class EnvelopeSection(BaseModel):
    am: EnvelopePayload
    fm: EnvelopePayload


class SpectrumSection(BaseModel):
    aes: SpectrumPayload
    fes: SpectrumPayload


class PolyModelPayload(BaseModel):
    order: int
    coeffs: list[float]
    span_s: tuple[float, float]
    rmse_hz: float


class SkippedSegmentPayload(BaseModel):
    start: int
    end: int
    frames: int
    required: int


class PolySection(BaseModel):
    local: list[PolyModelPayload]
    global_model: PolyModelPayload = Field(serialization_alias="global")
    skipped: list[SkippedSegmentPayload]


class SpectrogramPayload(BaseModel):
    times_s: list[float]
    freqs_hz: list[float]
    mags_db: list[list[float]]
    floor_db: float


class SourceInfo(BaseModel):
    id: str
    kind: Literal["clip", "upload"]
    duration_s: float
    sample_rate: int


class AnalyzeResponse(BaseModel):
    source: SourceInfo
    estimator: str
    params: dict
    rhythm_params: dict
    poly_params: dict
    spectrogram_params: dict
    f0: Optional[TrackPayload] = None
    envelope: Optional[EnvelopeSection] = None
    spectrum: Optional[SpectrumSection] = None
    zones: Optional[ZonesSection] = None
    poly: Optional[PolySection] = None
    spectrogram: Optional[SpectrogramPayload] = None


class EstimatorItem(BaseModel):
    model_config = ConfigDict(extra="forbid")

    estimator: str
    params: dict = Field(default_factory=dict)
    label: Optional[str] = None


class TrackItem(BaseModel):
    model_config = ConfigDict(extra="forbid")

    track: dict  # {"source": ..., "times_s": [...], "f0_hz": [...]}
    label: Optional[str] = None


class CompareRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    items: list[EstimatorItem | TrackItem]
    source: Optional[str] = None
    n: int = Field(default=1000, ge=10, le=100000)
    benchmark: bool = False
    k: int = Field(default=100, ge=3, le=10000)


class TimingPayload(BaseModel):
    median_s: float
    timings_s: list[float]


class CompareResponse(BaseModel):
    labels: list[str]
    r_matrix: list[list[float]]
    p_matrix: list[list[float]]
    n_effective: list[list[int]]
    k: Optional[int] = None
    timings: Optional[dict[str, TimingPayload]] = None
