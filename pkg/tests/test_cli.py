import json
import subprocess
import sys

import numpy as np
import pytest

from craft import fixtures
from craft.cli import main
from craft.evaluation import export_track, import_track
from craft.f0 import soft_estimate


def run_cli(argv):
    """main() plus argparse's SystemExit(2) on usage errors."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


@pytest.fixture(scope="module")
def sine_wav(tmp_path_factory):
    path = tmp_path_factory.mktemp("wav") / "sine200.wav"
    fixtures.write_wav(fixtures.sine(), path)
    return path


@pytest.fixture(scope="module")
def am_wav(tmp_path_factory):
    path = tmp_path_factory.mktemp("wav") / "am4.wav"
    fixtures.write_wav(fixtures.am_noise(), path)
    return path


def test_analyze_writes_track_csv(tmp_path, sine_wav):
    out = tmp_path / "track.csv"
    code = run_cli(["analyze", "--in", str(sine_wav), "--estimator", "soft",
                    "--out", str(out)])
    assert code == 0
    track = import_track(out, "csv")
    voiced = track.f0[track.f0 > 0]
    assert len(voiced) / len(track) >= 0.95
    assert np.all(np.abs(voiced - 200.0) <= 3.0)
    assert track.source == "soft"


def test_analyze_missing_in_is_usage_error(tmp_path):
    code = run_cli(["analyze", "--out", str(tmp_path / "x.csv")])
    assert code == 2


def test_analyze_format_conflict_is_usage_error(tmp_path, sine_wav):
    code = run_cli(["analyze", "--in", str(sine_wav),
                    "--out", str(tmp_path / "x.csv"), "--format", "json"])
    assert code == 2


def test_analyze_unknown_estimator_usage_error(tmp_path, sine_wav):
    code = run_cli(["analyze", "--in", str(sine_wav), "--estimator", "yin",
                    "--out", str(tmp_path / "x.csv")])
    assert code == 2


def test_analyze_unreadable_wav_processing_error(tmp_path, capsys):
    code = run_cli(["analyze", "--in", str(tmp_path / "missing.wav"),
                    "--out", str(tmp_path / "x.csv")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_analyze_byte_identical_reruns(tmp_path, sine_wav):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    run_cli(["analyze", "--in", str(sine_wav), "--out", str(out1)])
    run_cli(["analyze", "--in", str(sine_wav), "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()


def test_rhythm_outputs(tmp_path, am_wav):
    prefix = tmp_path / "out" / "am"
    code = run_cli(["rhythm", "--in", str(am_wav), "--out-prefix", str(prefix), "--svg"])
    assert code == 0
    for suffix in (".am.csv", ".fm.csv", ".aes.csv", ".fes.csv", ".zones.json", ".svg"):
        assert (tmp_path / "out" / f"am{suffix}").exists()

    rows = (tmp_path / "out" / "am.aes.csv").read_text().strip().splitlines()
    assert rows[0] == "freq_hz,magnitude"
    data = np.array([[float(v) for v in row.split(",")] for row in rows[1:]])
    nondc = data[data[:, 0] > 0.5]
    peak = nondc[np.argmax(nondc[:, 1]), 0]
    assert peak == pytest.approx(4.0, abs=0.2)

    zones = json.loads((tmp_path / "out" / "am.zones.json").read_text())
    for kind in ("am", "fm"):
        z = zones[kind]["zones"]
        assert z[0]["f_low_hz"] == 0.0
        assert z[-1]["f_high_hz"] == 20.0
        for a, b in zip(z[:-1], z[1:]):
            assert a["f_high_hz"] == b["f_low_hz"]

    svg = (tmp_path / "out" / "am.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_rhythm_silence_track_fails_with_message(tmp_path, am_wav, capsys):
    silent = tmp_path / "silent.csv"
    silent.write_text("time_s,f0_hz\n" +
                      "".join(f"{i/100:.6f},0.000000\n" for i in range(100)))
    code = run_cli(["rhythm", "--in", str(am_wav), "--f0-track", str(silent),
                    "--out-prefix", str(tmp_path / "x")])
    assert code == 1
    assert "no voiced frames" in capsys.readouterr().err


def test_compare_two_copies_r_one(tmp_path, sine_wav):
    sig = fixtures.saw_meander(duration=2.0)
    track = soft_estimate(sig)
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    export_track(track, a, "csv")
    export_track(track, b, "csv")
    out = tmp_path / "report.json"
    code = run_cli(["compare", "--tracks", str(a), str(b), "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["r_matrix"][0][1] == pytest.approx(1.0)
    assert len(report["labels"]) == 2
    assert report["labels"][0] != report["labels"][1]  # de-duplicated


def test_compare_three_tracks_symmetric(tmp_path):
    rng = np.random.default_rng(50)
    paths = []
    for i in range(3):
        from craft.f0 import F0Track

        f0 = 150 + 30 * np.sin(np.linspace(0, 6, 80) + i)
        track = F0Track(np.round(np.arange(80) * 0.01, 6), f0, source=f"est{i}")
        path = tmp_path / f"t{i}.csv"
        export_track(track, path, "csv")
        paths.append(str(path))
    out = tmp_path / "report.json"
    assert run_cli(["compare", "--tracks", *paths, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    r = np.array(report["r_matrix"])
    assert r.shape == (3, 3)
    assert np.allclose(r, r.T)
    assert np.allclose(np.diag(r), 1.0)


def test_compare_single_track_usage_error(tmp_path, sine_wav):
    track = tmp_path / "only.csv"
    export_track(soft_estimate(fixtures.sine()), track, "csv")
    assert run_cli(["compare", "--tracks", str(track),
                    "--out", str(tmp_path / "r.json")]) == 2


def test_model_constant_track(tmp_path):
    from craft.f0 import F0Track

    track = F0Track(np.round(np.arange(50) * 0.01, 6), np.full(50, 150.0), source="const")
    path = tmp_path / "const.csv"
    export_track(track, path, "csv")
    out = tmp_path / "model.json"
    code = run_cli(["model", "--in", str(path), "--local-order", "2",
                    "--global-order", "3", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["global"]["rmse_hz"] < 1e-9
    for model in payload["local"]:
        assert model["rmse_hz"] < 1e-9


def test_model_recovers_cubic(tmp_path):
    from craft.f0 import F0Track

    t = np.round(np.arange(40) * 0.01, 6)
    f0 = 150 + 20 * t - 30 * t ** 2 + 10 * t ** 3
    track = F0Track(t, f0, source="cubic")
    path = tmp_path / "cubic.csv"
    export_track(track, path, "csv")
    out = tmp_path / "model.json"
    assert run_cli(["model", "--in", str(path), "--local-order", "3",
                    "--global-order", "3", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    coeffs = payload["local"][0]["coeffs"]
    assert np.allclose(coeffs, [150, 20, -30, 10], atol=1e-4)


def test_model_order_exceeding_frames_fails(tmp_path, capsys):
    from craft.f0 import F0Track

    track = F0Track(np.round(np.arange(4) * 0.01, 6), np.full(4, 150.0), source="short")
    path = tmp_path / "short.csv"
    export_track(track, path, "csv")
    code = run_cli(["model", "--in", str(path), "--global-order", "6",
                    "--out", str(tmp_path / "m.json")])
    assert code == 1
    assert "too short" in capsys.readouterr().err


def test_console_entrypoint_runs():
    proc = subprocess.run([sys.executable, "-m", "craft.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "analyze" in proc.stdout
