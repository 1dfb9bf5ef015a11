"""Two-photon source model: parameters, temporal amplitudes, detection probabilities.

Times are in femtoseconds, lengths in millimetres, angular frequencies in
rad/fs. All functions broadcast over numpy arrays of times.

Probabilities returned here are in units of the no-interference coincidence
background: the 1/sqrt(2) weight of each emission term in the pair
superposition is absorbed into that unit, so that the coincidence density
integrates to exactly 1 when the two emission terms do not overlap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np


class InvalidParams(ValueError):
    """Raised for physically inconsistent source, delay or analyzer settings."""


@dataclass(frozen=True)
class SourceParams:
    """Crystal and pump description.

    ``kp_prime``, ``ko_prime`` and ``ke_prime`` are inverse group velocities
    (fs/mm) of the pump at twice the mean frequency and of the o- and e-rays
    at the mean frequency. ``pump_bandwidth`` is the width parameter of a pump
    field spectrum proportional to exp{-[(w - 2 w_mean)/sigma]^2}.
    """

    crystal_length: float
    kp_prime: float
    ko_prime: float
    ke_prime: float
    mean_frequency: float
    pump_bandwidth: float
    pump_phase: float = 0.0

    def __post_init__(self):
        for name in ("crystal_length", "kp_prime", "ko_prime", "ke_prime",
                     "mean_frequency", "pump_bandwidth", "pump_phase"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite")
        if self.crystal_length <= 0:
            raise InvalidParams("crystal_length must be positive")
        if self.pump_bandwidth <= 0:
            raise InvalidParams("pump_bandwidth must be positive")
        if self.mean_frequency <= 0:
            raise InvalidParams("mean_frequency must be positive")
        if not self.ko_prime > self.ke_prime:
            raise InvalidParams(
                "ko_prime must exceed ke_prime (o-ray slower than e-ray); "
                f"got ko'={self.ko_prime}, ke'={self.ke_prime}")
        if not (math.isfinite(self.dgd()) and self.dgd() > 0):
            raise InvalidParams("crystal differential group delay must be finite and positive")

    def dgd(self) -> float:
        """Differential group delay L (k'_o - k'_e) accumulated across the crystal, fs."""
        return self.crystal_length * (self.ko_prime - self.ke_prime)

    @property
    def o_weight(self) -> float:
        """(k'_p - k'_e)/(k'_o - k'_e), the o-time coefficient of the pump envelope."""
        return (self.kp_prime - self.ke_prime) / (self.ko_prime - self.ke_prime)

    @property
    def e_weight(self) -> float:
        """(k'_p - k'_o)/(k'_o - k'_e), the e-time coefficient of the pump envelope."""
        return (self.kp_prime - self.ko_prime) / (self.ko_prime - self.ke_prime)

    def normalization(self) -> float:
        """Amplitude prefactor making the joint temporal intensity integrate to one."""
        return math.sqrt(self.pump_bandwidth / (math.sqrt(2.0 * math.pi) * self.dgd()))

    def with_phase(self, phase: float) -> "SourceParams":
        return replace(self, pump_phase=phase)


@dataclass(frozen=True)
class DelayConfig:
    """Interferometer delays (fs).

    ``tau`` is the free-space path difference between the arms over c;
    ``tau1``/``tau2`` are the extra e-vs-o birefringent delays in paths 1 and 2.
    """

    tau: float = 0.0
    tau1: float = 0.0
    tau2: float = 0.0

    def __post_init__(self):
        for name in ("tau", "tau1", "tau2"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite")

    def swapped(self) -> "DelayConfig":
        """Mirror configuration: arms exchanged and path difference reversed."""
        return DelayConfig(tau=-self.tau, tau1=self.tau2, tau2=self.tau1)


@dataclass(frozen=True)
class AnalyzerConfig:
    """Polarizer transmission axes at D3 and D4 in radians from vertical.

    0 passes V, pi/2 passes H. Angles are stored reduced to [0, pi).
    Absence of analyzers is represented by ``None`` wherever an
    ``Optional[AnalyzerConfig]`` is accepted.
    """

    theta3: float
    theta4: float

    def __post_init__(self):
        for name in ("theta3", "theta4"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParams(f"{name} must be finite")
            object.__setattr__(self, name, _reduce_angle(value))

    @classmethod
    def from_degrees(cls, deg3: float, deg4: float) -> "AnalyzerConfig":
        return cls(math.radians(deg3), math.radians(deg4))

    def coefficients(self):
        """(sin th3, cos th3, sin th4, cos th4): H and V projection amplitudes."""
        return (math.sin(self.theta3), math.cos(self.theta3),
                math.sin(self.theta4), math.cos(self.theta4))


def _reduce_angle(theta: float) -> float:
    r = math.fmod(theta, math.pi)
    if r < 0:
        r += math.pi
    if r >= math.pi:
        r = 0.0
    return r


class DetectionChannel(enum.Enum):
    H_AT_D3_V_AT_D4 = "H_at_D3_V_at_D4"
    V_AT_D3_H_AT_D4 = "V_at_D3_H_at_D4"
    BOTH_AT_D3 = "Both_at_D3"
    BOTH_AT_D4 = "Both_at_D4"

    @property
    def is_coincidence(self) -> bool:
        return self in (DetectionChannel.H_AT_D3_V_AT_D4, DetectionChannel.V_AT_D3_H_AT_D4)


def rect(t, t1: float, t2: float):
    """Indicator of the half-open interval [t1, t2)."""
    if t1 > t2:
        raise InvalidParams(f"invalid interval: t1={t1} > t2={t2}")
    t = np.asarray(t, dtype=float)
    out = ((t >= t1) & (t < t2)).astype(float)
    return out if out.ndim else float(out)


def pump_envelope(t_o, t_e, p: SourceParams):
    """Pump-envelope factor exp{-(sigma^2/4)[A t_o - B t_e]^2} of the joint amplitude."""
    arg = p.o_weight * np.asarray(t_o, dtype=float) - p.e_weight * np.asarray(t_e, dtype=float)
    return np.exp(-0.25 * p.pump_bandwidth ** 2 * arg * arg)


def _joint_amplitude(t_o, t_e, p: SourceParams):
    t_o = np.asarray(t_o, dtype=float)
    t_e = np.asarray(t_e, dtype=float)
    diff = t_e - t_o
    support = (diff >= 0.0) & (diff < p.dgd())
    phase = np.exp(-1j * p.mean_frequency * (t_o + t_e))
    return np.where(support, p.normalization() * phase * pump_envelope(t_o, t_e, p), 0.0)


def amplitude_hv(t_o, t_e, p: SourceParams, d: DelayConfig):
    """Amplitude of the |H>_1 |V>_2 emission term at the beamsplitter input.

    The e-photon travels path 2 and is delayed by ``tau2 + tau``.
    """
    return _joint_amplitude(t_o, np.asarray(t_e, dtype=float) - d.tau2 - d.tau, p)[()]


def amplitude_vh(t_o, t_e, p: SourceParams, d: DelayConfig):
    """Amplitude of the |V>_1 |H>_2 emission term at the beamsplitter input."""
    return _joint_amplitude(np.asarray(t_o, dtype=float) - d.tau,
                            np.asarray(t_e, dtype=float) - d.tau1, p)[()]


def detector_amplitudes(t, t_prime, p: SourceParams, d: DelayConfig):
    """Two-photon amplitudes at the detectors for each polarization channel.

    Returns ``(hv, vh, bunched)``: ``hv`` for H at D3 (time t) with V at D4
    (time t'), ``vh`` for V at D3 (t) with H at D4 (t'), and ``bunched`` for
    an H photon at time t and a V photon at time t' leaving the same port
    (identical for D3 and D4 up to a global phase). Derived from
    a_i3 = (a_i2 + i a_i1)/sqrt2 and a_i4 = (a_i1 + i a_i2)/sqrt2.
    """
    eiphi = np.exp(1j * p.pump_phase)
    g_hv = amplitude_hv(t, t_prime, p, d)
    g_vh = amplitude_vh(t, t_prime, p, d)
    # H1 reaches D3 by reflection (i), V2 reaches D4 by reflection (i): i*i = -1
    hv = 0.5 * (-g_hv + eiphi * g_vh)
    # V at D3 and H at D4: o-photon time is t', e-photon time is t
    g_hv_r = amplitude_hv(t_prime, t, p, d)
    g_vh_r = amplitude_vh(t_prime, t, p, d)
    vh = 0.5 * (g_hv_r - eiphi * g_vh_r)
    bunched = 0.5j * (g_hv + eiphi * g_vh)
    return hv, vh, bunched


def two_time_probability(t, t_prime, ch: DetectionChannel, p: SourceParams,
                         d: DelayConfig, a: Optional[AnalyzerConfig] = None):
    """Joint detection density for one polarization channel.

    For coincidence channels ``t`` is the D3 time and ``t_prime`` the D4
    time. For the bunched channels ``t`` is the H-photon time and
    ``t_prime`` the V-photon time. With analyzers each photon is weighted by
    its projection onto the analyzer axis; the coherent cross term between
    the two coincidence channels is handled by
    :func:`analyzed_coincidence_probability`.
    """
    ch = DetectionChannel(ch)
    hv, vh, bunched = detector_amplitudes(t, t_prime, p, d)
    if ch is DetectionChannel.H_AT_D3_V_AT_D4:
        prob, weight = np.abs(hv) ** 2, _weight(a, "H3V4")
    elif ch is DetectionChannel.V_AT_D3_H_AT_D4:
        prob, weight = np.abs(vh) ** 2, _weight(a, "V3H4")
    elif ch is DetectionChannel.BOTH_AT_D3:
        prob, weight = np.abs(bunched) ** 2, _weight(a, "HV3")
    else:
        prob, weight = np.abs(bunched) ** 2, _weight(a, "HV4")
    return (weight * prob)[()]


def _weight(a: Optional[AnalyzerConfig], which: str) -> float:
    if a is None:
        return 1.0
    s3, c3, s4, c4 = a.coefficients()
    return {"H3V4": (s3 * c4) ** 2, "V3H4": (c3 * s4) ** 2,
            "HV3": (s3 * c3) ** 2, "HV4": (s4 * c4) ** 2}[which]


def analyzed_coincidence_probability(t3, t4, p: SourceParams, d: DelayConfig,
                                     a: Optional[AnalyzerConfig]):
    """Total coincidence density at (D3 time, D4 time), coherent over channels.

    Each detector operator is projected onto its analyzer axis,
    a_theta = cos(theta) a_V + sin(theta) a_H, before taking |.|^2.
    Without analyzers the two polarization channels add incoherently.
    """
    hv, vh, _ = detector_amplitudes(t3, t4, p, d)
    if a is None:
        return (np.abs(hv) ** 2 + np.abs(vh) ** 2)[()]
    s3, c3, s4, c4 = a.coefficients()
    return (np.abs(s3 * c4 * hv + c3 * s4 * vh) ** 2)[()]
