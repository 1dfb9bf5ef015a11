"""Coincidence and singles rates: closed form, quadrature, and pathway amplitudes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .model import (AnalyzerConfig, DelayConfig, SourceParams, amplitude_hv,
                    amplitude_vh)
from .quadrature import QuadratureError, QuadratureSpec, composite_rule, unit_rule

DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class RateResult:
    """Coincidence rate in units of the no-analyzer, no-interference background.

    ``rate_norm = background * (1 - interference_term)``; ``background`` is 1
    without analyzers and the analyzer transmission factor otherwise.
    """

    rate_norm: float
    interference_term: float
    in_triangle: bool
    background: float = 1.0


def triangle_offset(d: DelayConfig) -> float:
    """2 tau + tau2 - tau1: arrival mismatch of the two emission terms."""
    return 2.0 * d.tau + d.tau2 - d.tau1


def in_triangle(p: SourceParams, d: DelayConfig) -> bool:
    return abs(triangle_offset(d)) < p.dgd()


def coincidence_rate_analytic(p: SourceParams, d: DelayConfig) -> RateResult:
    """Closed-form normalized coincidence rate without analyzers."""
    T = p.dgd()
    off = triangle_offset(d)
    if abs(off) >= T:
        return RateResult(1.0, 0.0, False)
    k = p.ko_prime - p.ke_prime
    gauss_arg = ((2.0 * p.kp_prime - p.ko_prime - p.ke_prime) / k * d.tau
                 + (p.kp_prime - p.ko_prime) / k * (d.tau2 - d.tau1))
    envelope = (1.0 - abs(off) / T) * math.exp(-p.pump_bandwidth ** 2 / 8.0 * gauss_arg ** 2)
    term = math.cos(p.pump_phase - p.mean_frequency * (d.tau2 - d.tau1)) * envelope
    return RateResult(1.0 - term, term, True)


def coincidence_rate_simplified(p: SourceParams, d: DelayConfig) -> float:
    """Equal-path, matched-delay limit 1 - cos[phi - w (tau2 - tau1)].

    The caller is responsible for being near tau = 0 and tau1 = tau2.
    """
    return 1.0 - math.cos(p.pump_phase - p.mean_frequency * (d.tau2 - d.tau1))


# --- quadrature -------------------------------------------------------------

def _supports(p: SourceParams, d: DelayConfig):
    """Support intervals, in d = t4 - t3, of the four shifted amplitudes.

    Order: G_HV(t3, t4), G_VH(t3, t4), G_HV(t4, t3), G_VH(t4, t3). Each entry
    is (lo, hi) with the amplitude nonzero for lo <= d < hi (first two) or
    lo < d <= hi (last two).
    """
    T = p.dgd()
    s_a = d.tau2 + d.tau
    s_b = d.tau1 - d.tau
    return (
        (s_a, s_a + T),
        (s_b, s_b + T),
        (-s_a - T, -s_a),
        (-s_b - T, -s_b),
    )


def _ridge_centers(p: SourceParams, d: DelayConfig, dn: np.ndarray):
    """t3 at which each amplitude's pump envelope peaks, per outer node."""
    A, B = p.o_weight, p.e_weight
    # (o offset, e offset) of the arguments relative to t3
    offsets = (
        (0.0, dn - d.tau2 - d.tau),
        (-d.tau, dn - d.tau1),
        (dn, -d.tau2 - d.tau),
        (dn - d.tau, -d.tau1),
    )
    return [-(A * o - B * e) / (A - B) for o, e in offsets]


def coincidence_grid(p: SourceParams, d: DelayConfig, q: QuadratureSpec):
    """Iterated rule: outer over d = t4 - t3, inner over t3 per outer node.

    The outer axis is split at every rect edge of the four amplitudes, so
    each panel sees a fixed set of active amplitudes. The inner window at
    each node covers the active pump-envelope ridges padded by
    ``box_padding / sigma``. Nodes with no active amplitude are dropped.
    """
    sup = _supports(p, d)
    bps = [x for iv in sup for x in iv]
    dn, dw = composite_rule(bps, q.panels_per_axis, q.nodes_per_panel)
    centers = _ridge_centers(p, d, dn)
    active = [(dn >= lo) & (dn < hi) for lo, hi in sup[:2]]
    active += [(dn > lo) & (dn <= hi) for lo, hi in sup[2:]]
    act = np.array(active)
    cen = np.array([np.broadcast_to(c, dn.shape) for c in centers])
    any_active = act.any(axis=0)
    lo = np.where(act, cen, np.inf).min(axis=0)
    hi = np.where(act, cen, -np.inf).max(axis=0)
    pad = q.box_padding / p.pump_bandwidth
    keep = any_active
    lo = lo[keep] - pad
    span = hi[keep] + pad - lo
    xr, wr = unit_rule(q.panels_per_axis, q.nodes_per_panel)
    return (np.ascontiguousarray(dn[keep]), np.ascontiguousarray(dw[keep]),
            np.ascontiguousarray(lo), np.ascontiguousarray(span), xr, wr)


def _sums(p, d, a, q, backend):
    kern = _backend.get(backend)
    return kern.coincidence_sums(p, d, a, *coincidence_grid(p, d, q))


def _converged_sums(p, d, a, q, backend):
    coarse = _sums(p, d, a, q, backend)
    fine = _sums(p, d, a, q.refined(), backend)
    err = float(np.max(np.abs(fine - coarse)))
    if not err <= q.tol:
        raise QuadratureError(
            f"quadrature did not converge: refinement change {err:.3e} > {q.tol:.1e}",
            estimate=fine)
    return fine


def integrate_density(density, p: SourceParams, d: DelayConfig,
                      q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Integrate a vectorized ``density(t3, t4)`` over the coincidence grid."""
    dn, dw, lo, span, xr, wr = coincidence_grid(p, d, q)
    t3 = lo[:, None] + span[:, None] * xr[None, :]
    w = (dw * span)[:, None] * wr[None, :]
    return float(np.sum(w * density(t3, t3 + dn[:, None])))


def coincidence_rate_numeric(p: SourceParams, d: DelayConfig,
                             a: Optional[AnalyzerConfig] = None,
                             q: QuadratureSpec = DEFAULT_QUADRATURE,
                             backend: Optional[str] = None) -> RateResult:
    """Coincidence rate by direct quadrature of the two-time detection densities.

    Normalized by the no-analyzer integral with the HV/VH cross term
    dropped, so the non-interfering background is 1. Raises
    :class:`QuadratureError` when two refinement levels disagree by more
    than ``q.tol``.
    """
    s_hv, s_vh, s_bu, s_bg, s_coh, s_cbg = _converged_sums(p, d, a, q, backend)
    rate = s_coh / s_bg
    background = s_cbg / s_bg
    term = 1.0 - rate / background if background > 0 else 0.0
    return RateResult(rate, term, in_triangle(p, d), background)


def background_rate_numeric(p: SourceParams, d: DelayConfig,
                            q: QuadratureSpec = DEFAULT_QUADRATURE,
                            backend: Optional[str] = None) -> float:
    """Unnormalized no-analyzer background integral (1 for a normalized source)."""
    return float(_converged_sums(p, d, None, q, backend)[3])


def singles_rate_numeric(detector: str, p: SourceParams, d: DelayConfig,
                         a: Optional[AnalyzerConfig] = None,
                         q: QuadratureSpec = DEFAULT_QUADRATURE,
                         backend: Optional[str] = None) -> float:
    """Mean number of photons registered at ``detector`` ('D3' or 'D4') per pair.

    Built from the marginals of the joint densities: the H photon reaches
    D3 through the H3V4 channel or the bunched channel, the V photon
    through V3H4 or bunched, and likewise at D4. Only the analyzer in
    front of the chosen detector matters.
    """
    s_hv, s_vh, s_bu, s_bg, _, _ = _converged_sums(p, d, None, q, backend)
    if detector not in ("D3", "D4"):
        raise ValueError(f"detector must be 'D3' or 'D4', got {detector!r}")
    if detector == "D3":
        h_part, v_part = s_hv + s_bu, s_vh + s_bu
        angle = None if a is None else a.theta3
    else:
        h_part, v_part = s_vh + s_bu, s_hv + s_bu
        angle = None if a is None else a.theta4
    th, tv = (1.0, 1.0) if angle is None else (math.sin(angle) ** 2, math.cos(angle) ** 2)
    # the pair state's 1/sqrt2 weights are absorbed into s_bg, hence the 1/2
    return 0.5 * (th * h_part + tv * v_part) / s_bg


# --- pathways ---------------------------------------------------------------

REFLECT = 1j / math.sqrt(2.0)
TRANSMIT = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Pathway:
    label: str
    emission: str   # "HV": H in path 1, V in path 2; "VH" the reverse
    outcome: str    # "r-r" or "t-t" at the beamsplitter
    channel: str    # DetectionChannel value
    amplitude: complex


@dataclass(frozen=True)
class PathwaySet:
    """Four two-photon alternatives leading to a coincidence at (t, t')."""

    pathways: tuple

    def __getitem__(self, label):
        for pw in self.pathways:
            if pw.label == label:
                return pw
        raise KeyError(label)

    def pair_sums(self):
        """(Psi1 + Psi4, Psi2 + Psi3): amplitudes of the two detected channels."""
        return (self["Psi1"].amplitude + self["Psi4"].amplitude,
                self["Psi2"].amplitude + self["Psi3"].amplitude)

    def channel_probabilities(self):
        s14, s23 = self.pair_sums()
        return np.abs(s14) ** 2, np.abs(s23) ** 2


def pathway_decomposition(t, t_prime, p: SourceParams, d: DelayConfig) -> PathwaySet:
    """Amplitudes for emission (HV | VH) times beamsplitter outcome (r-r | t-t).

    ``t`` is the D3 time and ``t_prime`` the D4 time. Emission weights are
    1 (HV) and e^{i phi} (VH) in background units. In path 1 the photon
    reaches D3 by reflection; in path 2, D4 by reflection.
    """
    eiphi = complex(math.cos(p.pump_phase), math.sin(p.pump_phase))
    h3v4, v3h4 = "H_at_D3_V_at_D4", "V_at_D3_H_at_D4"
    # H1 -> D3 (r), V2 -> D4 (r); o-time is the D3 time
    psi1 = REFLECT * REFLECT * amplitude_hv(t, t_prime, p, d)
    # H1 -> D4 (t), V2 -> D3 (t); o-time is the D4 time
    psi2 = TRANSMIT * TRANSMIT * amplitude_hv(t_prime, t, p, d)
    # V1 -> D3 (r), H2 -> D4 (r)
    psi3 = eiphi * REFLECT * REFLECT * amplitude_vh(t_prime, t, p, d)
    # V1 -> D4 (t), H2 -> D3 (t)
    psi4 = eiphi * TRANSMIT * TRANSMIT * amplitude_vh(t, t_prime, p, d)
    return PathwaySet((
        Pathway("Psi1", "HV", "r-r", h3v4, psi1),
        Pathway("Psi2", "HV", "t-t", v3h4, psi2),
        Pathway("Psi3", "VH", "r-r", v3h4, psi3),
        Pathway("Psi4", "VH", "t-t", h3v4, psi4),
    ))


def pathway_rate_numeric(p: SourceParams, d: DelayConfig,
                         q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Integral of |Psi1 + Psi4|^2 + |Psi2 + Psi3|^2 over both detection times."""
    def density(t3, t4):
        p14, p23 = pathway_decomposition(t3, t4, p, d).channel_probabilities()
        return p14 + p23
    return integrate_density(density, p, d, q)
