import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from hompath import (AnalyzerConfig, DelayConfig, DetectionChannel, InvalidParams,
                     SourceParams, amplitude_hv, amplitude_vh, default_source,
                     pump_envelope, rect, two_time_probability)
from hompath.model import analyzed_coincidence_probability

H3V4 = DetectionChannel.H_AT_D3_V_AT_D4
V3H4 = DetectionChannel.V_AT_D3_H_AT_D4
CHANNELS = list(DetectionChannel)


def test_rect_examples():
    assert rect(0.5, 0, 1) == 1
    assert rect(-0.1, 0, 1) == 0
    assert rect(1.0, 0, 1) == 0
    assert rect(0.0, 0, 1) == 1


def test_rect_rejects_reversed_interval():
    with pytest.raises(InvalidParams):
        rect(0.5, 1, 0)


def test_source_validation():
    base = dict(crystal_length=3.0, kp_prime=5710.0, ko_prime=5623.0, ke_prime=5420.0,
                mean_frequency=2.41, pump_bandwidth=0.0196)
    SourceParams(**base)
    for change in ({"crystal_length": 0.0}, {"pump_bandwidth": -1.0}, {"mean_frequency": 0.0},
                   {"ke_prime": 5623.0}, {"ke_prime": 5700.0}, {"kp_prime": math.nan}):
        with pytest.raises(InvalidParams):
            SourceParams(**{**base, **change})


def test_delay_and_analyzer_validation():
    with pytest.raises(InvalidParams):
        DelayConfig(math.inf, 0, 0)
    a = AnalyzerConfig(-math.pi / 4, 3 * math.pi)
    assert a.theta3 == pytest.approx(3 * math.pi / 4)
    assert 0 <= a.theta4 < math.pi and a.theta4 == pytest.approx(0.0, abs=1e-12)


def test_dgd_of_default_source(src):
    assert src.dgd() == pytest.approx(3.0 * (src.ko_prime - src.ke_prime))
    assert src.dgd() > 0


def test_pump_envelope_unity_on_ridge(src):
    assert pump_envelope(0.0, 0.0, src) == 1.0
    t_e = 250.0
    t_o = src.e_weight * t_e / src.o_weight
    assert pump_envelope(t_o, t_e, src) == pytest.approx(1.0, abs=1e-15)


def test_pump_envelope_matches_extended_precision(src):
    # 40-digit evaluation with sigma from the 120 fs FWHM, frozen
    mpmath.mp.dps = 40
    kp, ko, ke = (mpmath.mpf(repr(x)) for x in (src.kp_prime, src.ko_prime, src.ke_prime))
    sigma = 2 * mpmath.sqrt(2 * mpmath.log(2)) / 120
    expected = mpmath.exp(-sigma ** 2 / 4 * ((kp - ke) / (ko - ke) * 100) ** 2)
    assert float(expected) == pytest.approx(0.14030556453995429, rel=1e-15)
    assert pump_envelope(100.0, 0.0, src) == pytest.approx(0.14030556453995429, rel=1e-12)


def test_amplitude_support_and_peak(src):
    d = DelayConfig(tau=30.0, tau1=600.0, tau2=640.0)
    # shifted e-o difference negative -> zero
    assert amplitude_hv(0.0, d.tau2 + d.tau - 1.0, src, d) == 0
    assert amplitude_vh(d.tau, d.tau1 - 1.0, src, d) == 0
    # shifted arguments (0, 0): modulus is the normalization constant
    assert abs(amplitude_hv(0.0, d.tau2 + d.tau, src, d)) == pytest.approx(src.normalization(), rel=1e-14)
    assert abs(amplitude_vh(d.tau, d.tau1, src, d)) == pytest.approx(src.normalization(), rel=1e-14)


def test_amplitudes_coincide_without_delays(src):
    d = DelayConfig()
    t_o = np.linspace(-200, 300, 37)
    t_e = t_o + np.linspace(0, 700, 37)
    np.testing.assert_array_equal(amplitude_hv(t_o, t_e, src, d), amplitude_vh(t_o, t_e, src, d))


@pytest.mark.parametrize("d", [DelayConfig(), DelayConfig(120.0, 668.0, 650.0)])
def test_amplitude_normalization_by_adaptive_quadrature(src, d):
    n2 = src.normalization() ** 2
    assert n2 * math.sqrt(2 * math.pi) / src.pump_bandwidth * src.dgd() == pytest.approx(1.0, abs=1e-14)
    hv = oracles.joint_intensity_integral(lambda a, b: amplitude_hv(a, b, src, d), src,
                                          0.0, d.tau2 + d.tau)
    vh = oracles.joint_intensity_integral(lambda a, b: amplitude_vh(a, b, src, d), src,
                                          d.tau, d.tau1)
    assert hv == pytest.approx(1.0, abs=1e-6)
    assert vh == pytest.approx(1.0, abs=1e-6)


# --- detection probabilities against the mode-expansion oracle --------------

def _points(rng, d, n=40):
    t3 = rng.uniform(-300, 300, n)
    t4 = t3 + rng.choice([-1, 1], n) * rng.uniform(d.tau1 - 100, d.tau1 + 700, n)
    return t3, t4


@pytest.mark.parametrize("phi", [0.0, 0.7, math.pi])
@pytest.mark.parametrize("d", [DelayConfig(0, 668, 668), DelayConfig(40, 668, 662), DelayConfig(-90, 20, 5)])
def test_two_time_probability_matches_operator_expansion(src, d, phi):
    p = src.with_phase(phi)
    rng = np.random.default_rng(3)
    for t, tp in zip(*_points(rng, d)):
        hv = oracles.detection_amplitude(("H", 3, t, None), ("V", 4, tp, None), p, d)
        vh = oracles.detection_amplitude(("V", 3, t, None), ("H", 4, tp, None), p, d)
        b3 = oracles.detection_amplitude(("H", 3, t, None), ("V", 3, tp, None), p, d)
        b4 = oracles.detection_amplitude(("H", 4, t, None), ("V", 4, tp, None), p, d)
        assert two_time_probability(t, tp, H3V4, p, d) == pytest.approx(abs(hv) ** 2, abs=1e-16)
        assert two_time_probability(t, tp, V3H4, p, d) == pytest.approx(abs(vh) ** 2, abs=1e-16)
        assert two_time_probability(t, tp, DetectionChannel.BOTH_AT_D3, p, d) == pytest.approx(abs(b3) ** 2, abs=1e-16)
        assert two_time_probability(t, tp, DetectionChannel.BOTH_AT_D4, p, d) == pytest.approx(abs(b4) ** 2, abs=1e-16)


def test_same_polarization_coincidences_vanish(src, matched):
    rng = np.random.default_rng(5)
    for t, tp in zip(*_points(rng, matched)):
        for pol in "HV":
            amp = oracles.detection_amplitude((pol, 3, t, None), (pol, 4, tp, None), src, matched)
            assert amp == 0


def test_ideal_dip_is_pointwise_zero(src, matched):
    t = np.linspace(-300, 300, 41)
    tp = t + 900.0
    g_hv = amplitude_hv(t, tp, src, matched)
    g_vh = amplitude_vh(t, tp, src, matched)
    np.testing.assert_array_equal(g_hv, g_vh)
    vals = two_time_probability(t, tp, H3V4, src, matched)
    np.testing.assert_allclose(vals, 0.25 * np.abs(g_hv - g_vh) ** 2, atol=0)
    assert np.all(vals == 0)


def test_analyzer_h_v_matches_unfiltered_channel(src):
    d = DelayConfig(25.0, 668.0, 668.0)
    a = AnalyzerConfig(math.pi / 2, 0.0)
    rng = np.random.default_rng(9)
    t3, t4 = _points(rng, d)
    plain = two_time_probability(t3, t4, H3V4, src, d)
    np.testing.assert_allclose(two_time_probability(t3, t4, H3V4, src, d, a), plain, atol=1e-18)
    np.testing.assert_allclose(two_time_probability(t3, t4, V3H4, src, d, a), 0.0, atol=1e-18)
    np.testing.assert_allclose(analyzed_coincidence_probability(t3, t4, src, d, a), plain, atol=1e-18)


@pytest.mark.parametrize("deg", [(90, 0), (45, 45), (45, -45), (30, 110)])
def test_analyzed_density_matches_operator_expansion(src, deg):
    d = DelayConfig(-60.0, 668.0, 660.0)
    p = src.with_phase(0.4)
    a = AnalyzerConfig.from_degrees(*deg)
    rng = np.random.default_rng(11)
    for t3, t4 in zip(*_points(rng, d)):
        ref = oracles.coincidence_density(t3, t4, p, d, (a.theta3, a.theta4))
        assert analyzed_coincidence_probability(t3, t4, p, d, a) == pytest.approx(ref, abs=1e-16)


# --- properties -------------------------------------------------------------

delays = st.builds(DelayConfig, st.floats(-700, 700), st.floats(-50, 900), st.floats(-50, 900))
phases = st.floats(-2 * math.pi, 2 * math.pi)
times = st.floats(-1500, 1500)


@settings(max_examples=200, deadline=None)
@given(d=delays, t=times, tp=times)
def test_support_property(d, t, tp):
    p = default_source()
    T = p.dgd()
    diff_hv = (tp - d.tau2 - d.tau) - t
    diff_vh = (tp - d.tau1) - (t - d.tau)
    assert (amplitude_hv(t, tp, p, d) != 0) == (0 <= diff_hv < T)
    assert (amplitude_vh(t, tp, p, d) != 0) == (0 <= diff_vh < T)


@settings(max_examples=200, deadline=None)
@given(d=delays, phi=phases, t=times, tp=times, ch=st.sampled_from(CHANNELS))
def test_phase_covariance(d, phi, t, tp, ch):
    p = default_source()
    a = two_time_probability(t, tp, ch, p.with_phase(phi), d)
    b = two_time_probability(t, tp, ch, p.with_phase(phi + 2 * math.pi), d)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a)) * src_scale(p)


def src_scale(p):
    return p.normalization() ** 2


@settings(max_examples=200, deadline=None)
@given(d=delays, phi=phases, t=times, tp=times)
def test_exchange_symmetry(d, phi, t, tp):
    # (tau, tau1, tau2, phi) -> (-tau, tau2, tau1, -phi) swaps the channels at
    # exchanged times; the mirror configuration is also translated by -tau
    p = default_source().with_phase(phi)
    q = p.with_phase(-phi)
    m = d.swapped()
    # rect edges are measure-zero; rounding can move a point across one
    T = p.dgd()
    for u in ((tp - d.tau2 - d.tau) - t, (tp - d.tau1) - (t - d.tau),
              (t - d.tau2 - d.tau) - tp, (t - d.tau1) - (tp - d.tau)):
        assume(min(abs(u), abs(u - T)) > 1e-6)
    scale = p.normalization() ** 2
    for ch, sw in ((H3V4, V3H4), (V3H4, H3V4)):
        lhs = two_time_probability(t, tp, ch, p, d)
        rhs = two_time_probability(tp - d.tau, t - d.tau, sw, q, m)
        assert abs(lhs - rhs) <= 1e-12 * scale


@settings(max_examples=100, deadline=None)
@given(th3=st.floats(0, math.pi), th4=st.floats(0, math.pi), tau=st.floats(-40, 40),
       t3=st.floats(-400, 400), dt=st.floats(-1500, 1500))
def test_analyzer_factorization_disjoint_supports(th3, th4, tau, t3, dt):
    p = default_source()
    gap = p.dgd() + 8 / p.pump_bandwidth
    d = DelayConfig(tau, gap + 60.0, gap + 50.0)
    a = AnalyzerConfig(th3, th4)
    t4 = t3 + dt
    hv = two_time_probability(t3, t4, H3V4, p, d)
    vh = two_time_probability(t3, t4, V3H4, p, d)
    s3, c3, s4, c4 = math.sin(th3), math.cos(th3), math.sin(th4), math.cos(th4)
    assert two_time_probability(t3, t4, H3V4, p, d, a) == pytest.approx((s3 * c4) ** 2 * hv, abs=1e-20)
    assert two_time_probability(t3, t4, V3H4, p, d, a) == pytest.approx((c3 * s4) ** 2 * vh, abs=1e-20)
    total = analyzed_coincidence_probability(t3, t4, p, d, a)
    assert total == pytest.approx((s3 * c4) ** 2 * hv + (c3 * s4) ** 2 * vh, abs=1e-12 * src_scale(p))
