"""Command-line interface: batch analysis over WAV and track files.

Every subcommand is a thin shell over a library operation; no analysis
logic lives here. Exit codes: 0 ok, 1 processing error, 2 usage error.
Outputs carry no timestamps and use fixed float formatting, so repeated
runs on identical inputs are byte-identical (benchmark timings excepted,
they are measurements).
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import rhythm as rhythm_mod
from .audio import load_wav
from .contours import model_track
from .evaluation import benchmark, comparison_matrix, export_track, import_track
from .f0 import estimator_registry, get_estimator, make_params
from .svgplot import spectrum_svg

ESTIMATOR_FLAGS = (
    ("clip_ratio", float), ("lp_cutoff", float), ("hp_cutoff", float),
    ("frame_len", int), ("hop", int), ("method", str), ("f_min", float),
    ("f_max", float), ("median_win", int), ("voicing_rms", float),
    ("dip_ratio", float),
)


def _add_estimator_flags(parser):
    for name, typ in ESTIMATOR_FLAGS:
        parser.add_argument(f"--{name.replace('_', '-')}", type=typ, default=None,
                            dest=name, help=f"estimator parameter {name}")


def _collect_overrides(args):
    return {name: getattr(args, name) for name, _ in ESTIMATOR_FLAGS
            if getattr(args, name) is not None}


def _resolve_format(parser, out: Path, explicit: str | None) -> str:
    by_ext = {".csv": "csv", ".json": "json"}.get(out.suffix.lower())
    if explicit and by_ext and explicit != by_ext:
        parser.error(f"--format {explicit} conflicts with output extension {out.suffix}")
    fmt = explicit or by_ext
    if fmt is None:
        parser.error("cannot infer format; use --format or a .csv/.json extension")
    return fmt


def _read_track(path: Path):
    fmt = "json" if path.suffix.lower() == ".json" else "csv"
    return import_track(path, fmt)


def _write_csv(path: Path, header: str, columns) -> None:
    lines = [header]
    for row in zip(*columns):
        lines.append(",".join(f"{v:.6f}" for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _zoneset_json(zs) -> dict:
    return {
        "boundaries_hz": [round(float(b), 6) for b in zs.boundaries],
        "zones": [
            {
                "f_low_hz": round(z.f_low, 6),
                "f_high_hz": round(z.f_high, 6),
                "peak_freq_hz": round(z.peak_freq, 6),
                "peak_mag": round(z.peak_mag, 6),
            }
            for z in zs.zones
        ],
        "display_max_hz": zs.display_max,
    }


def cmd_analyze(parser, args) -> int:
    out = Path(args.out)
    fmt = _resolve_format(parser, out, args.format)
    try:
        info = get_estimator(args.estimator)  # label check before any I/O
    except ValueError as exc:
        parser.error(str(exc))
    signal = load_wav(args.infile)
    try:
        params = make_params(args.estimator, signal.rate, _collect_overrides(args))
    except ValueError as exc:
        parser.error(str(exc))
    track = info.estimate(signal, params)
    export_track(track, out, fmt)
    return 0


def cmd_rhythm(parser, args) -> int:
    signal = load_wav(args.infile)
    if args.f0_track:
        track = _read_track(Path(args.f0_track))
    else:
        track = get_estimator("soft").estimate(
            signal, make_params("soft", signal.rate, {})
        )
    params = rhythm_mod.RhythmParams(
        win_ms=args.win_ms, lp_cutoff=args.lp_cutoff, out_rate=args.out_rate,
        display_max=args.display_max, smooth_win=args.smooth_win,
        prominence=args.prominence,
    )
    report = rhythm_mod.rhythm_report(signal, track, params)

    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    am_t = np.arange(len(report.am)) / report.am.rate
    fm_t = np.arange(len(report.fm)) / report.fm.rate
    _write_csv(Path(f"{prefix}.am.csv"), "time_s,value", (am_t, report.am.values))
    _write_csv(Path(f"{prefix}.fm.csv"), "time_s,value", (fm_t, report.fm.values))
    _write_csv(Path(f"{prefix}.aes.csv"), "freq_hz,magnitude",
               (report.aes.freqs, report.aes.mags))
    _write_csv(Path(f"{prefix}.fes.csv"), "freq_hz,magnitude",
               (report.fes.freqs, report.fes.mags))
    zones = {
        "am": _zoneset_json(report.am_zones),
        "fm": _zoneset_json(report.fm_zones),
        "am_fm_r": round(report.am_fm_r, 6),
        "am_fm_p": report.am_fm_p,
    }
    Path(f"{prefix}.zones.json").write_text(
        json.dumps(zones, indent=2) + "\n", encoding="utf-8", newline="\n"
    )
    if args.svg:
        svg = spectrum_svg(report.aes.freqs, report.aes.mags,
                           report.am_zones.boundaries, title=track.source or "aes")
        Path(f"{prefix}.svg").write_text(svg, encoding="utf-8", newline="\n")
    return 0


def cmd_compare(parser, args) -> int:
    if args.bench and not args.infile:
        parser.error("--bench requires --in <wav>")
    if len(args.tracks) < 2:
        parser.error("need at least two --tracks files")
    tracks = []
    for path in args.tracks:
        track = _read_track(Path(path))
        label = track.source or Path(path).stem
        n = 2
        while label in (l for l, _ in tracks):
            label = f"{track.source or Path(path).stem}-{n}"
            n += 1
        tracks.append((label, track))
    report = comparison_matrix(tracks, n=args.n)
    payload = report.to_json()
    if args.bench:
        signal = load_wav(args.infile)
        payload["k"] = args.k
        payload["timings"] = {}
        for label in sorted(estimator_registry()):
            result = benchmark(label, None, signal, k=args.k)
            payload["timings"][label] = {
                "median_s": result.median_s,
                "timings_s": list(result.timings),
            }
    Path(args.out).write_text(json.dumps(payload, indent=2) + "\n",
                              encoding="utf-8", newline="\n")
    return 0


def cmd_model(parser, args) -> int:
    track = _read_track(Path(args.infile))
    models = model_track(track, local_order=args.local_order,
                         global_order=args.global_order,
                         min_seg_frames=args.min_seg_frames)

    def model_json(m):
        return {
            "order": m.order,
            "coeffs": [float(c) for c in m.coeffs],
            "span_s": [m.span[0], m.span[1]],
            "rmse_hz": m.rmse,
        }

    payload = {
        "source": track.source,
        "local": [model_json(m) for m in models.local],
        "global": model_json(models.global_model),
        "skipped": [
            {"start": s.start, "end": s.end, "frames": s.frames, "required": s.required}
            for s in models.skipped
        ],
    }
    Path(args.out).write_text(json.dumps(payload, indent=2) + "\n",
                              encoding="utf-8", newline="\n")
    return 0


def cmd_serve(parser, args) -> int:
    from .service import ServiceConfig, run

    overrides = {}
    if args.port is not None:
        overrides["port"] = args.port
    if args.host is not None:
        overrides["host"] = args.host
    if args.clip_dir is not None:
        overrides["clip_dir"] = args.clip_dir
    run(ServiceConfig.from_env(**overrides))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="craft", description="speech prosody analysis toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="estimate an F0 track from a WAV file")
    p.add_argument("--in", dest="infile", required=True, help="input WAV")
    p.add_argument("--estimator", default="soft", help="estimator label (soft, amdf)")
    p.add_argument("--out", required=True, help="output track (.csv or .json)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    _add_estimator_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("rhythm", help="envelopes, envelope spectra and rhythm zones")
    p.add_argument("--in", dest="infile", required=True, help="input WAV")
    p.add_argument("--f0-track", dest="f0_track", default=None,
                   help="use an imported track instead of running SOFT")
    p.add_argument("--out-prefix", dest="out_prefix", required=True)
    p.add_argument("--svg", action="store_true", help="also write <prefix>.svg")
    p.add_argument("--win-ms", type=float, default=20.0)
    p.add_argument("--lp-cutoff", type=float, default=24.0)
    p.add_argument("--out-rate", type=float, default=100.0)
    p.add_argument("--display-max", type=float, default=20.0)
    p.add_argument("--smooth-win", type=int, default=3)
    p.add_argument("--prominence", type=float, default=0.1)
    p.set_defaults(func=cmd_rhythm)

    p = sub.add_parser("compare", help="correlation matrix across track files")
    p.add_argument("--tracks", nargs="+", required=True, help="track files (.csv/.json)")
    p.add_argument("--out", required=True, help="output report JSON")
    p.add_argument("--n", type=int, default=1000, help="normalisation length")
    p.add_argument("--bench", action="store_true",
                   help="also benchmark the built-in estimators")
    p.add_argument("--in", dest="infile", default=None, help="WAV for --bench")
    p.add_argument("--k", type=int, default=100, help="benchmark iterations")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("model", help="fit local and global polynomial contour models")
    p.add_argument("--in", dest="infile", required=True, help="input track (.csv/.json)")
    p.add_argument("--local-order", type=int, default=3)
    p.add_argument("--global-order", type=int, default=6)
    p.add_argument("--min-seg-frames", type=int, default=5)
    p.add_argument("--out", required=True, help="output model JSON")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default=None)
    p.add_argument("--clip-dir", dest="clip_dir", default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except Exception as exc:  # processing errors exit 1, usage already exited 2
        print(f"craft: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
