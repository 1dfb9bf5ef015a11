import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hompath import AnalyzerConfig, DelayConfig, default_source
from hompath.engine import coincidence_rate_analytic
from hompath.scan import (ScanError, ScanSpec, compute_visibility, curve_from_points,
                          emit_scan_csv, read_scan_csv, run_scan)

MATCHED = DelayConfig(0.0, 668.0, 668.0)


def test_ideal_dip_scan(src):
    c = run_scan(ScanSpec(-500, 500, 101), src, MATCHED)
    assert c.extremum == (0.0, 0.0)
    assert c.visibility == pytest.approx(1.0, abs=1e-9)
    assert c.baseline == 1.0


def test_ideal_peak_scan(src):
    c = run_scan(ScanSpec(-500, 500, 101), src.with_phase(math.pi), MATCHED)
    assert c.extremum == (0.0, 2.0)
    assert c.visibility == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("phi", [0.0, math.pi])
def test_tilt_offsets_shift_extremum(src, phi):
    plain = run_scan(ScanSpec(-500, 500, 2001), src.with_phase(phi), MATCHED)
    tilted = run_scan(ScanSpec(-500, 500, 2001, delta_tau2=1.0, delta_tau=15.0), src.with_phase(phi), MATCHED)
    assert tilted.extremum[0] - plain.extremum[0] == pytest.approx(-0.5 - 15.0, abs=1e-12)


def test_tilt_turns_dip_towards_peak(src):
    # one femtosecond of extra birefringent delay adds w * 1 fs to the interference phase
    c = run_scan(ScanSpec(-500, 500, 2001, delta_tau2=1.0), src, MATCHED)
    assert c.extremum[1] > 1.0


@pytest.mark.parametrize("points,baseline,expected", [
    ([(0.0, 0.0), (1.0, 1.0)], 1.0, 1.0),
    ([(0.0, 2.0), (1.0, 1.0)], 1.0, 1.0),
    ([(-1.0, 1.0), (0.0, 0.07), (1.0, 1.0)], 1.0, 0.93),
])
def test_compute_visibility_examples(points, baseline, expected):
    assert compute_visibility(points, baseline) == pytest.approx(expected, abs=1e-15)


def test_compute_visibility_errors():
    with pytest.raises(ScanError):
        compute_visibility([], 1.0)
    with pytest.raises(ScanError):
        compute_visibility([(0.0, 1.0)], 0.0)


def test_baseline_undefined(src):
    with pytest.raises(ScanError, match="widen"):
        run_scan(ScanSpec(-100, 100, 11), src, MATCHED)
    with pytest.raises(ScanError):
        curve_from_points([(0.0, 0.5)], [False])


def test_spec_validation():
    with pytest.raises(ScanError):
        ScanSpec(0, 1, 1)
    with pytest.raises(ScanError):
        ScanSpec(1, 1, 5)
    with pytest.raises(ScanError):
        ScanSpec(0, 1, 5, engine="fast")
    with pytest.raises(ScanError):
        ScanSpec(0, 1, 5, analyzers=AnalyzerConfig(0.1, 0.2))


def test_csv_two_points(tmp_path, src):
    c = curve_from_points([(-400.0, 1.0), (0.0, 0.0)], [True, False])
    path = tmp_path / "two.csv"
    emit_scan_csv(c, path)
    text = path.read_text()
    assert text.splitlines() == ["tau_fs,rate_norm", "-400.0,1.0", "0.0,0.0"]
    assert text.endswith("\n")


def test_csv_round_trip_and_regeneration(tmp_path, src):
    spec = ScanSpec(-500, 500, 41)
    c = run_scan(spec, src.with_phase(0.7), DelayConfig(0, 660, 668))
    path = tmp_path / "scan.csv"
    emit_scan_csv(c, path)
    back = read_scan_csv(path)
    assert len(back) == 41
    for (t0, r0), (t1, r1) in zip(c.points, back):
        assert abs(t0 - t1) <= 1e-9 and abs(r0 - r1) <= 1e-9
        assert r1 == pytest.approx(coincidence_rate_analytic(src.with_phase(0.7), DelayConfig(t1, 660, 668)).rate_norm, abs=1e-12)


def test_csv_io_error_names_destination(tmp_path, src):
    c = curve_from_points([(-400.0, 1.0)], [True])
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        emit_scan_csv(c, bad)


def test_parallel_scan_matches_sequential(src):
    spec = ScanSpec(-700, 700, 15, engine="numeric")
    seq = run_scan(spec, src.with_phase(1.1), DelayConfig(0, 660, 668))
    par = run_scan(spec, src.with_phase(1.1), DelayConfig(0, 660, 668), workers=4)
    assert seq == par


@pytest.mark.parametrize("engine", ["analytic", "numeric"])
def test_scan_symmetric_about_zero(src, engine):
    c = run_scan(ScanSpec(-700, 700, 29, engine=engine), src.with_phase(0.9), MATCHED)
    rates = np.array([r for _, r in c.points])
    assert np.max(np.abs(rates - rates[::-1])) <= 1e-9


@settings(max_examples=50, deadline=None)
@given(phi=st.floats(0, 2 * math.pi))
def test_monotone_envelope(phi):
    p = default_source().with_phase(phi)
    taus = np.linspace(0, 400, 401)
    dev = [abs(coincidence_rate_analytic(p, DelayConfig(t, 668, 668)).rate_norm - 1.0) for t in taus]
    assert np.all(np.diff(dev) <= 1e-15)


def test_visibility_invariant_under_analyzers(src):
    vis = {}
    for deg in (None, (90, 0), (45, 45), (45, -45)):
        a = None if deg is None else AnalyzerConfig.from_degrees(*deg)
        c = run_scan(ScanSpec(-400, 400, 21, engine="numeric", analyzers=a), src, MATCHED)
        vis[deg] = c.visibility
    assert max(vis.values()) - min(vis.values()) <= 1e-3
