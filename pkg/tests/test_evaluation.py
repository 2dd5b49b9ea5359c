import json
import math

import numpy as np
import pytest
from scipy import integrate

from craft import fixtures
from craft.evaluation import (
    TrackFormatError,
    benchmark,
    compare_tracks,
    comparison_matrix,
    export_track,
    import_track,
    normalize_length,
    pearson_r,
    track_from_json,
)
from craft.f0 import F0Track, amdf_estimate, soft_estimate


def make_track(f0, step=0.01, source="test"):
    f0 = np.asarray(f0, dtype=float)
    return F0Track(np.round(np.arange(len(f0)) * step, 6), f0, source=source)


# ---- normalize_length ----

def test_normalize_length_example():
    assert np.allclose(normalize_length([1, 2, 3], 5), [1, 1.5, 2, 2.5, 3])


def test_normalize_length_identity():
    x = np.array([4.0, 7.0, 1.0])
    assert np.allclose(normalize_length(x, 3), x)


def test_normalize_length_linear_roundtrip():
    ramp = np.linspace(0, 9, 10)
    down = normalize_length(ramp, 4)
    up = normalize_length(down, 10)
    assert np.allclose(up, ramp)


def test_normalize_length_endpoints_and_monotone():
    rng = np.random.default_rng(30)
    x = np.sort(rng.standard_normal(37))
    y = normalize_length(x, 101)
    assert y[0] == x[0] and y[-1] == x[-1]
    assert np.all(np.diff(y) >= -1e-12)


# ---- pearson_r ----

def two_pass_pearson(x, y):
    mx, my = np.mean(x), np.mean(y)
    cov = np.sum((x - mx) * (y - my))
    return cov / math.sqrt(np.sum((x - mx) ** 2) * np.sum((y - my) ** 2))


def t_density(t, df):
    log_c = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)
    return math.exp(log_c - (df + 1) / 2 * math.log1p(t * t / df))


def two_tailed_p_by_quadrature(t, df):
    tail, _ = integrate.quad(t_density, abs(t), np.inf, args=(df,))
    return 2 * tail


def test_pearson_perfect_positive():
    r, p = pearson_r([1, 2, 3], [2, 4, 6])
    assert r == 1.0
    assert p == 0.0


def test_pearson_perfect_negative():
    r, _ = pearson_r([1.0, 2.0, 3.0], [-1.0, -2.0, -3.0])
    assert r == -1.0


def test_pearson_matches_two_pass_oracle():
    rng = np.random.default_rng(31)
    for _ in range(200):
        x = rng.standard_normal(50)
        y = rng.standard_normal(50)
        r, _ = pearson_r(x, y)
        assert abs(r - two_pass_pearson(x, y)) < 1e-12


def test_pearson_affine_invariance():
    rng = np.random.default_rng(32)
    x = rng.standard_normal(64)
    r_pos, _ = pearson_r(x, 2.0 * x + 10.0)
    r_neg, _ = pearson_r(x, -0.5 * x + 3.0)
    assert abs(r_pos - 1.0) < 1e-9
    assert abs(r_neg + 1.0) < 1e-9


def test_pearson_p_matches_quadrature_oracle():
    rng = np.random.default_rng(33)
    for df in (3, 10, 48, 120, 500):
        n = df + 2
        x = rng.standard_normal(n)
        y = rng.standard_normal(n) + 0.3 * x
        r, p = pearson_r(x, y)
        t = r * math.sqrt((n - 2) / (1 - r * r))
        assert abs(p - two_tailed_p_by_quadrature(t, n - 2)) < 1e-6


def test_pearson_uses_supplied_n_effective():
    rng = np.random.default_rng(34)
    x = rng.standard_normal(1000)
    y = x + rng.standard_normal(1000)
    _, p_large = pearson_r(x, y)
    _, p_small = pearson_r(x, y, n_effective=10)
    assert p_small > p_large


def test_pearson_degenerate_input():
    with pytest.raises(ValueError, match="degenerate input"):
        pearson_r([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


# ---- compare_tracks / comparison_matrix ----

def test_compare_track_with_itself():
    track = make_track([0, 100, 120, 130, 0, 140])
    r, p = compare_tracks(track, track)
    assert r == pytest.approx(1.0)
    assert p == pytest.approx(0.0, abs=1e-12)


def test_compare_affine_transformed_track():
    f0 = np.array([0, 100, 120, 130, 0, 140, 150, 135.0])
    base = make_track(f0)
    scaled = f0.copy()
    scaled[scaled > 0] = 2 * scaled[scaled > 0] + 10
    r, _ = compare_tracks(base, make_track(scaled))
    assert abs(r - 1.0) < 1e-9


def test_compare_soft_vs_amdf_on_meander():
    sig = fixtures.saw_meander()
    r, p = compare_tracks(soft_estimate(sig), amdf_estimate(sig))
    assert r >= 0.95
    assert p < 0.01


def test_compare_needs_voiced_frames():
    silent = make_track([0.0, 0.0, 0.0])
    voiced = make_track([100.0, 120.0, 110.0])
    with pytest.raises(ValueError, match="no voiced frames"):
        compare_tracks(silent, voiced)


def test_comparison_matrix_identical_tracks():
    track = make_track([100, 120, 0, 130, 125.0])
    report = comparison_matrix([("a", track), ("b", track), ("c", track)])
    assert report.labels == ["a", "b", "c"]
    assert np.allclose(report.r_matrix, 1.0)
    assert np.allclose(report.r_matrix, report.r_matrix.T)
    assert np.allclose(np.diag(report.r_matrix), 1.0)


def test_comparison_matrix_consistent_with_pairwise():
    a = make_track([100, 120, 110, 0, 140.0])
    b = make_track([90, 100, 0, 120, 135.0])
    report = comparison_matrix([("a", a), ("b", b)])
    r, p = compare_tracks(a, b)
    assert report.r_matrix[0, 1] == pytest.approx(r)
    assert report.p_matrix[1, 0] == pytest.approx(p)


def test_comparison_matrix_needs_two():
    with pytest.raises(ValueError, match="at least two"):
        comparison_matrix([("only", make_track([100.0, 120.0]))])


# ---- benchmark ----

def test_benchmark_order_statistics():
    sig = fixtures.sine(duration=0.2)
    result = benchmark("soft", None, sig, k=5)
    assert len(result.timings) == 4  # warm-up discarded
    assert min(result.timings) <= result.median_s <= max(result.timings)
    assert result.median_s > 0


def test_benchmark_k_validation():
    with pytest.raises(ValueError):
        benchmark("soft", None, fixtures.sine(duration=0.2), k=2)


# ---- import / export ----

def test_import_csv_fixture(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("time_s,f0_hz\n0.00,0\n0.01,120.5\n", encoding="utf-8")
    track = import_track(path, "csv")
    assert len(track) == 2
    assert track.f0[1] == pytest.approx(120.5)
    assert track.source == "t"


def test_import_csv_reads_source_comment(tmp_path):
    path = tmp_path / "ext.csv"
    path.write_text("# source=rapt\ntime_s,f0_hz\n0.000000,0.000000\n", encoding="utf-8")
    assert import_track(path, "csv").source == "rapt"


def test_import_csv_non_ascending_names_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time_s,f0_hz\n0.02,100\n0.01,110\n", encoding="utf-8")
    with pytest.raises(TrackFormatError, match="line 3: non-ascending times"):
        import_track(path, "csv")


def test_import_csv_negative_f0_names_line(tmp_path):
    path = tmp_path / "neg.csv"
    path.write_text("time_s,f0_hz\n0.01,-5\n", encoding="utf-8")
    with pytest.raises(TrackFormatError, match="line 2: negative f0"):
        import_track(path, "csv")


def test_import_csv_malformed_row_names_line(tmp_path):
    path = tmp_path / "mal.csv"
    path.write_text("time_s,f0_hz\n0.01,abc\n", encoding="utf-8")
    with pytest.raises(TrackFormatError, match="line 2: malformed number"):
        import_track(path, "csv")


def test_roundtrip_csv_identity(tmp_path):
    track = make_track([0, 100.5, 120.25, 0, 110.125], source="soft")
    path = tmp_path / "rt.csv"
    export_track(track, path, "csv")
    back = import_track(path, "csv")
    assert np.array_equal(back.times, track.times)
    assert np.array_equal(back.f0, track.f0)
    assert back.source == track.source
    # Re-export reproduces the file byte for byte.
    second = tmp_path / "rt2.csv"
    export_track(back, second, "csv")
    assert path.read_bytes() == second.read_bytes()


def test_roundtrip_json_identity(tmp_path):
    track = make_track([0, 150, 0, 165.5], source="amdf")
    path = tmp_path / "rt.json"
    export_track(track, path, "json")
    back = import_track(path, "json")
    assert np.array_equal(back.times, track.times)
    assert np.array_equal(back.f0, track.f0)
    assert back.source == "amdf"


def test_export_json_schema(tmp_path):
    track = make_track([0, 100.0], source="soft")
    path = tmp_path / "schema.json"
    export_track(track, path, "json")
    payload = json.loads(path.read_text())
    assert set(payload) == {"source", "times_s", "f0_hz"}
    assert payload["source"] == "soft"
    assert payload["f0_hz"][0] == 0  # unvoiced written as 0, not blank/null


def test_export_empty_track_header_only(tmp_path):
    track = F0Track(np.array([]), np.array([]), source="")
    path = tmp_path / "empty.csv"
    export_track(track, path, "csv")
    assert path.read_text() == "time_s,f0_hz\n"


def test_track_from_json_validates():
    with pytest.raises(TrackFormatError):
        track_from_json({"times_s": [0.0], "f0_hz": [1.0, 2.0]})
    with pytest.raises(TrackFormatError):
        track_from_json({"times_s": [0.0]})
