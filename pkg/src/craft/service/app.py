"""HTTP facade over the analysis library.

Stateless except for the upload store: every /api/analyze response is a
pure function of the audio bytes and the fully-resolved parameters, and the
resolved parameters are echoed back so clients can display effective
values. All 4xx bodies carry {"error": ..., "field": ...?}.
"""

import os
import threading
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request, UploadFile, File
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .. import contours, rhythm
from ..audio import AudioReadError, FrameSpec, decode_wav
from ..dsp import spectrogram as dsp_spectrogram
from ..evaluation import (
    TrackFormatError,
    benchmark,
    comparison_matrix,
    track_from_json,
)
from ..f0 import get_estimator, make_params, params_dict
from . import schemas
from .schemas import (
    ANALYSES,
    AnalyzeRequest,
    AnalyzeResponse,
    ClipEntry,
    CompareRequest,
    CompareResponse,
    ErrorBody,
    UploadResponse,
)
from .store import ClipStore, ExpiredTokenError, UnknownSourceError, UploadStore


class ApiError(Exception):
    def __init__(self, status: int, error: str, field: str | None = None):
        super().__init__(error)
        self.status = status
        self.error = error
        self.field = field


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8573
    clip_dir: str = ""
    upload_limit_mb: float = 20.0
    upload_ttl_s: float = 3600.0
    cors_origins: list = dc_field(default_factory=lambda: ["*"])

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        env = os.environ
        cfg = cls(
            host=env.get("CRAFT_HOST", "127.0.0.1"),
            port=int(env.get("CRAFT_PORT", "8573")),
            clip_dir=env.get("CRAFT_CLIP_DIR", ""),
            upload_limit_mb=float(env.get("CRAFT_UPLOAD_LIMIT_MB", "20")),
            upload_ttl_s=float(env.get("CRAFT_UPLOAD_TTL_S", "3600")),
            cors_origins=env.get("CRAFT_CORS_ORIGINS", "*").split(","),
        )
        for key, value in overrides.items():
            setattr(cfg, key, value)
        if not cfg.clip_dir:
            cfg.clip_dir = str(Path.home() / ".cache" / "craft" / "clips")
        return cfg


def _require_finite(name, values) -> None:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size and not np.all(np.isfinite(arr)):
        raise RuntimeError(f"non-finite values in {name}")


def _check_bounds(fields, overrides: dict, where: str) -> None:
    known = {f.name: f for f in fields}
    for key, value in overrides.items():
        if key not in known:
            raise ApiError(422, f"unknown parameter {key!r}", field=f"{where}.{key}")
        spec = known[key]
        if spec.kind == "enum":
            if value not in spec.choices:
                raise ApiError(422, f"{key} must be one of {list(spec.choices)}",
                               field=f"{where}.{key}")
            continue
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ApiError(422, f"{key} must be a number", field=f"{where}.{key}")
        if spec.minimum is not None and value < spec.minimum:
            raise ApiError(422, f"{key} must be >= {spec.minimum}", field=f"{where}.{key}")
        if spec.maximum is not None and value > spec.maximum:
            raise ApiError(422, f"{key} must be <= {spec.maximum}", field=f"{where}.{key}")


def _estimator_params(label: str, rate: int, overrides: dict, where: str = "params"):
    try:
        info = get_estimator(label)
    except ValueError as exc:
        raise ApiError(422, str(exc), field="estimator") from exc
    _check_bounds(info.fields, overrides, where)
    try:
        return make_params(label, rate, overrides)
    except ValueError as exc:
        raise ApiError(422, str(exc), field=where) from exc


def _rhythm_params(overrides: dict) -> rhythm.RhythmParams:
    _check_bounds(schemas.RHYTHM_FIELDS, overrides, "rhythm")
    try:
        return rhythm.RhythmParams(**{
            k: (int(v) if k in ("smooth_win", "norm_len") else float(v))
            for k, v in overrides.items()
        })
    except ValueError as exc:
        raise ApiError(422, str(exc), field="rhythm") from exc


def _poly_params(overrides: dict) -> dict:
    _check_bounds(schemas.POLY_FIELDS, overrides, "poly")
    resolved = {"local_order": 3, "global_order": 6, "min_seg_frames": 5}
    resolved.update({k: int(v) for k, v in overrides.items()})
    return resolved


def _spectrogram_params(overrides: dict, rate: int) -> dict:
    _check_bounds(schemas.SPECTROGRAM_FIELDS, overrides, "spectrogram")
    resolved = {
        "frame_len": round(0.032 * rate),
        "hop": None,
        "window_fn": "hann",
        "floor_db": -60.0,
    }
    for k, v in overrides.items():
        resolved[k] = v if k == "window_fn" else (float(v) if k == "floor_db" else int(v))
    if resolved["hop"] is None:
        resolved["hop"] = max(1, resolved["frame_len"] // 2)
    return resolved


def _track_payload(track) -> schemas.TrackPayload:
    _require_finite("f0", track.f0)
    return schemas.TrackPayload(
        source=track.source, times_s=track.times.tolist(), f0_hz=track.f0.tolist()
    )


def _envelope_payload(env) -> schemas.EnvelopePayload:
    _require_finite("envelope", env.values)
    return schemas.EnvelopePayload(kind=env.kind, rate_hz=env.rate, values=env.values.tolist())


def _spectrum_payload(spec) -> schemas.SpectrumPayload:
    _require_finite("spectrum", spec.mags)
    return schemas.SpectrumPayload(
        freqs_hz=spec.freqs.tolist(), mags=spec.mags.tolist(), resolution_hz=spec.resolution
    )


def _zoneset_payload(zs) -> schemas.ZoneSetPayload:
    return schemas.ZoneSetPayload(
        boundaries_hz=zs.boundaries.tolist(),
        zones=[
            schemas.ZonePayload(
                f_low_hz=z.f_low, f_high_hz=z.f_high,
                peak_freq_hz=z.peak_freq, peak_mag=z.peak_mag,
            )
            for z in zs.zones
        ],
        display_max_hz=zs.display_max,
    )


def _poly_payload(model) -> schemas.PolyModelPayload:
    _require_finite("poly coeffs", model.coeffs)
    return schemas.PolyModelPayload(
        order=model.order, coeffs=model.coeffs.tolist(),
        span_s=model.span, rmse_hz=model.rmse,
    )


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    app = FastAPI(title="craft", docs_url=None, redoc_url=None, openapi_url=None)
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    clips = ClipStore(config.clip_dir)
    uploads = UploadStore(ttl_s=config.upload_ttl_s)
    bench_lock = threading.Lock()
    app.state.clips = clips
    app.state.uploads = uploads
    app.state.config = config

    @app.exception_handler(ApiError)
    async def api_error_handler(_req: Request, exc: ApiError):
        body = ErrorBody(error=exc.error, field=exc.field)
        return JSONResponse(status_code=exc.status,
                            content=body.model_dump(exclude_none=True))

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(_req: Request, exc: StarletteHTTPException):
        return JSONResponse(status_code=exc.status_code,
                            content={"error": str(exc.detail)})

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_req: Request, exc: RequestValidationError):
        first = exc.errors()[0]
        loc = ".".join(str(part) for part in first.get("loc", ()) if part != "body")
        return JSONResponse(
            status_code=422,
            content={"error": first.get("msg", "invalid request"), "field": loc or None},
        )

    def resolve_source(source: str):
        try:
            return clips.load(source), schemas.SourceInfo(
                id=source, kind="clip",
                duration_s=next(e["duration_s"] for e in clips.catalog if e["id"] == source),
                sample_rate=next(e["sample_rate"] for e in clips.catalog if e["id"] == source),
            )
        except UnknownSourceError:
            pass
        try:
            signal = uploads.get(source)
        except ExpiredTokenError:
            raise ApiError(410, "upload token expired", field="source") from None
        except UnknownSourceError:
            raise ApiError(404, f"unknown clip or token: {source}", field="source") from None
        return signal, schemas.SourceInfo(
            id=source, kind="upload",
            duration_s=signal.duration, sample_rate=signal.rate,
        )

    @app.get("/api/clips", response_model=list[ClipEntry])
    def list_clips():
        return clips.entries()

    @app.post("/api/audio", response_model=UploadResponse)
    async def upload_audio(file: UploadFile = File(...)):
        data = await file.read()
        if len(data) > config.upload_limit_mb * 1024 * 1024:
            raise ApiError(413, "upload exceeds size limit", field="file")
        if not data:
            raise ApiError(422, "empty upload", field="file")
        try:
            signal = decode_wav(data, file.filename or "upload")
        except AudioReadError as exc:
            raise ApiError(422, str(exc), field="file") from exc
        return uploads.put(signal)

    @app.post("/api/analyze")
    def analyze(req: AnalyzeRequest):
        if not req.analyses:
            raise ApiError(422, "no analyses requested", field="analyses")
        signal, source_info = resolve_source(req.source)
        params = _estimator_params(req.estimator, signal.rate, req.params)
        rhythm_params = _rhythm_params(req.rhythm)
        poly_params = _poly_params(req.poly)
        spectro_params = _spectrogram_params(req.spectrogram, signal.rate)

        response = AnalyzeResponse(
            source=source_info,
            estimator=req.estimator,
            params=params_dict(params),
            rhythm_params=rhythm.rhythm_params_dict(rhythm_params),
            poly_params=poly_params,
            spectrogram_params=spectro_params,
        )
        requested = set(req.analyses)

        track = None
        if requested & {"f0", "envelope", "spectrum", "zones", "poly"}:
            try:
                track = get_estimator(req.estimator).estimate(signal, params)
            except ValueError as exc:
                raise ApiError(422, str(exc), field="params") from exc
        if "f0" in requested:
            response.f0 = _track_payload(track)
        if requested & {"envelope", "spectrum", "zones"}:
            try:
                report = rhythm.rhythm_report(signal, track, rhythm_params)
            except ValueError as exc:
                raise ApiError(422, str(exc)) from exc
            if "envelope" in requested:
                response.envelope = schemas.EnvelopeSection(
                    am=_envelope_payload(report.am), fm=_envelope_payload(report.fm)
                )
            if "spectrum" in requested:
                response.spectrum = schemas.SpectrumSection(
                    aes=_spectrum_payload(report.aes), fes=_spectrum_payload(report.fes)
                )
            if "zones" in requested:
                response.zones = schemas.ZonesSection(
                    am=_zoneset_payload(report.am_zones),
                    fm=_zoneset_payload(report.fm_zones),
                    am_fm_r=report.am_fm_r,
                    am_fm_p=report.am_fm_p,
                )
        if "poly" in requested:
            try:
                models = contours.model_track(
                    track,
                    local_order=poly_params["local_order"],
                    global_order=poly_params["global_order"],
                    min_seg_frames=poly_params["min_seg_frames"],
                )
            except ValueError as exc:
                raise ApiError(422, str(exc), field="poly") from exc
            response.poly = schemas.PolySection(
                local=[_poly_payload(m) for m in models.local],
                global_model=_poly_payload(models.global_model),
                skipped=[
                    schemas.SkippedSegmentPayload(
                        start=s.start, end=s.end, frames=s.frames, required=s.required
                    )
                    for s in models.skipped
                ],
            )
        if "spectrogram" in requested:
            try:
                grid = dsp_spectrogram(
                    signal,
                    FrameSpec(spectro_params["frame_len"], spectro_params["hop"],
                              spectro_params["window_fn"]),
                    db=True,
                    floor_db=spectro_params["floor_db"],
                )
            except ValueError as exc:
                raise ApiError(422, str(exc), field="spectrogram") from exc
            _require_finite("spectrogram", grid.mags)
            response.spectrogram = schemas.SpectrogramPayload(
                times_s=grid.times.tolist(),
                freqs_hz=grid.freqs.tolist(),
                mags_db=grid.mags.tolist(),
                floor_db=grid.floor_db,
            )
        return JSONResponse(response.model_dump(exclude_none=True, by_alias=True))

    @app.post("/api/compare", response_model=CompareResponse,
              response_model_exclude_none=True)
    def compare(req: CompareRequest):
        if len(req.items) < 2:
            raise ApiError(422, "need at least two estimator configs or tracks",
                           field="items")
        estimator_items = [i for i in req.items if isinstance(i, schemas.EstimatorItem)]
        signal = None
        if estimator_items or req.benchmark:
            if not req.source:
                raise ApiError(422, "source is required to run estimators", field="source")
            signal, _ = resolve_source(req.source)

        tracks = []
        bench_targets = []
        for idx, item in enumerate(req.items):
            if isinstance(item, schemas.EstimatorItem):
                params = _estimator_params(item.estimator, signal.rate, item.params,
                                           where=f"items.{idx}.params")
                label = item.label or item.estimator
                try:
                    track = get_estimator(item.estimator).estimate(signal, params)
                except ValueError as exc:
                    raise ApiError(422, str(exc), field=f"items.{idx}") from exc
                tracks.append((label, track))
                bench_targets.append((label, item.estimator, params))
            else:
                try:
                    track = track_from_json(item.track)
                except TrackFormatError as exc:
                    raise ApiError(422, str(exc), field=f"items.{idx}.track") from exc
                tracks.append((item.label or track.source or f"track{idx}", track))

        labels = [label for label, _ in tracks]
        if len(set(labels)) != len(labels):
            raise ApiError(422, "labels must be unique", field="items")

        try:
            report = comparison_matrix(tracks, n=req.n)
        except ValueError as exc:
            raise ApiError(422, str(exc), field="items") from exc

        payload = report.to_json()
        if req.benchmark:
            timings = {}
            with bench_lock:  # benchmarks are exclusive, queued serially
                for label, est, params in bench_targets:
                    result = benchmark(est, params, signal, k=req.k)
                    timings[label] = schemas.TimingPayload(
                        median_s=result.median_s, timings_s=list(result.timings)
                    )
            payload["k"] = req.k
            payload["timings"] = timings
        return CompareResponse(**payload)

    @app.get("/api/schema")
    def schema():
        return schemas.schema_document()

    return app


def run(config: ServiceConfig | None = None) -> None:
    import uvicorn

    config = config or ServiceConfig.from_env()
    uvicorn.run(create_app(config), host=config.host, port=config.port)
