"""Pulse-by-pulse photon counting with lossy, noisy detectors.

Each pulse emits at most one pair. The pair's exit channel is drawn from
the engine's coincidence rate R (in background units): H3V4 and V3H4 with
probability R/4 each, both photons at D3 or both at D4 with (2 - R)/4
each. Photons are then thinned by analyzer transmission and detector
efficiency, dark counts are added per detector per coincidence window,
and a coincidence is registered when both detectors click within the
window of the same pulse.

Random numbers come from numpy's Philox4x64-10 counter-based generator.
Every batch of pulses has its own stream keyed by (point seed, batch
index), so counts do not depend on how batches are scheduled.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from . import _backend
from .engine import coincidence_rate_analytic
from .model import AnalyzerConfig, DelayConfig, SourceParams
from .scan import ScanSpec, curve_from_points, outside_triangle

RNG_ALGORITHM = "Philox4x64-10 (numpy.random.Philox), SeedSequence((seed, batch))"
DEFAULT_BATCH = 1 << 16


class MCConfigError(ValueError):
    pass


@dataclass(frozen=True)
class MCConfig:
    """Counting parameters. Window and period are in ns."""

    pulses: int
    pair_prob: float
    eff3: float = 1.0
    eff4: float = 1.0
    dark_prob: float = 0.0
    coincidence_window: float = 3.0
    rep_period: float = 13.0
    seed: int = 0
    batch_size: int = DEFAULT_BATCH

    def __post_init__(self):
        if int(self.pulses) != self.pulses or self.pulses <= 0:
            raise MCConfigError("pulses must be a positive integer")
        for name in ("pair_prob", "eff3", "eff4", "dark_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise MCConfigError(f"{name} must lie in [0, 1], got {value}")
        if not 0 < self.coincidence_window < self.rep_period:
            raise MCConfigError("coincidence_window must be positive and shorter than rep_period")
        if not 0 <= self.seed < 2 ** 64:
            raise MCConfigError("seed must be an unsigned 64-bit integer")
        if self.batch_size <= 0:
            raise MCConfigError("batch_size must be positive")


@dataclass(frozen=True)
class CountRecord:
    singles3: int
    singles4: int
    coincidences: int
    pulses_simulated: int
    pairs: int = 0

    @property
    def accidental_estimate(self) -> float:
        """Chance coincidences expected from uncorrelated singles, S3 S4 / pulses."""
        if self.pulses_simulated == 0:
            return 0.0
        return self.singles3 * self.singles4 / self.pulses_simulated

    def __add__(self, other: "CountRecord") -> "CountRecord":
        return CountRecord(self.singles3 + other.singles3, self.singles4 + other.singles4,
                           self.coincidences + other.coincidences,
                           self.pulses_simulated + other.pulses_simulated,
                           self.pairs + other.pairs)


def outcome_probabilities(rate_norm: float):
    """(H3V4, V3H4, both at D3, both at D4) for one emitted pair."""
    probs = (rate_norm / 4.0, rate_norm / 4.0, (2.0 - rate_norm) / 4.0, (2.0 - rate_norm) / 4.0)
    if any(not (-1e-12 <= x <= 1.0 + 1e-12) for x in probs):
        raise MCConfigError(f"engine rate {rate_norm} gives outcome probabilities outside [0, 1]")
    return tuple(min(max(x, 0.0), 1.0) for x in probs)


def transmissions(a: Optional[AnalyzerConfig], mc: MCConfig):
    """Survival probability (t3H, t3V, t4H, t4V) of a photon up to a click."""
    if a is None:
        return (mc.eff3, mc.eff3, mc.eff4, mc.eff4)
    s3, c3, s4, c4 = a.coefficients()
    return (mc.eff3 * s3 * s3, mc.eff3 * c3 * c3, mc.eff4 * s4 * s4, mc.eff4 * c4 * c4)


def expected_per_pulse(rate_norm: float, a: Optional[AnalyzerConfig], mc: MCConfig):
    """Exact per-pulse click probabilities ``(singles3, singles4, coincidence)``."""
    q = mc.dark_prob
    t3h, t3v, t4h, t4v = transmissions(a, mc)
    outcomes = outcome_probabilities(rate_norm)
    ph = (  # (P photon click D3, P photon click D4) per outcome
        (t3h, t4v),
        (t3v, t4h),
        (1.0 - (1.0 - t3h) * (1.0 - t3v), 0.0),
        (0.0, 1.0 - (1.0 - t4h) * (1.0 - t4v)),
    )
    s3 = s4 = cc = 0.0
    for w, (x3, x4) in [(1.0 - mc.pair_prob, (0.0, 0.0))] + [
            (mc.pair_prob * po, xx) for po, xx in zip(outcomes, ph)]:
        k3 = 1.0 - (1.0 - x3) * (1.0 - q)
        k4 = 1.0 - (1.0 - x4) * (1.0 - q)
        s3 += w * k3
        s4 += w * k4
        cc += w * k3 * k4
    return s3, s4, cc


def expected_visibility(mc: MCConfig, a: Optional[AnalyzerConfig] = None,
                        baseline_rate: float = 1.0, extreme_rate: float = 0.0) -> float:
    cb = expected_per_pulse(baseline_rate, a, mc)[2]
    ce = expected_per_pulse(extreme_rate, a, mc)[2]
    return abs(ce - cb) / cb


def tune_dark_prob(target_visibility: float, mc: MCConfig,
                   a: Optional[AnalyzerConfig] = None) -> float:
    """Dark-count probability that degrades an ideal dip to ``target_visibility``.

    Solves expected_visibility(dark_prob) = target between the background
    (R = 1) and the ideal dip (R = 0). This is an engineered background,
    not a claim about the detectors used in any experiment.
    """
    def f(q):
        return expected_visibility(replace(mc, dark_prob=q), a) - target_visibility

    if not (f(0.0) > 0.0 > f(1.0)):
        raise MCConfigError(
            f"target visibility {target_visibility} is not reachable by adding dark counts")
    return brentq(f, 0.0, 1.0, xtol=1e-15)


def _batch_stream(seed: int, batch: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, batch))))


def simulate(p: SourceParams, d: DelayConfig, a: Optional[AnalyzerConfig], mc: MCConfig,
             workers: int = 1, backend: Optional[str] = None,
             rate_norm: Optional[float] = None) -> CountRecord:
    """Count singles and coincidences over ``mc.pulses`` pulses.

    ``rate_norm`` defaults to the closed-form no-analyzer rate; analyzers act
    as per-photon polarization filters on the drawn channel.
    """
    if rate_norm is None:
        rate_norm = coincidence_rate_analytic(p, d).rate_norm
    outcomes = outcome_probabilities(rate_norm)
    cum = tuple(np.cumsum(outcomes)[:3])
    trans = transmissions(a, mc)
    kern = _backend.get(backend)
    nbatch = -(-mc.pulses // mc.batch_size)

    def run(b):
        n = min(mc.batch_size, mc.pulses - b * mc.batch_size)
        u = _batch_stream(mc.seed, b).random((6, n))
        s3, s4, cc, npair = kern.mc_tally(u, mc.pair_prob, cum, trans, mc.dark_prob, mc.dark_prob)
        return CountRecord(int(s3), int(s4), int(cc), n, int(npair))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(nbatch)))
    else:
        parts = [run(b) for b in range(nbatch)]
    total = CountRecord(0, 0, 0, 0, 0)
    for part in parts:
        total = total + part
    return total


def point_seed(seed: int, index: int) -> int:
    return (seed ^ index) & 0xFFFFFFFFFFFFFFFF


def mc_scan(spec: ScanSpec, p: SourceParams, d: DelayConfig, mc: MCConfig,
            workers: int = 1, backend: Optional[str] = None):
    """One :func:`simulate` per scan point, seeded with ``seed XOR index``."""
    rows = []
    for i, tau in enumerate(spec.taus()):
        dd = spec.delays_at(float(tau), d)
        rec = simulate(p, dd, spec.analyzers, replace(mc, seed=point_seed(mc.seed, i)),
                       workers=workers, backend=backend)
        rows.append((float(tau), rec))
    return rows


def mc_visibility(rows, spec: ScanSpec, p: SourceParams, d: DelayConfig):
    """Visibility of the coincidence fraction and its binomial standard error.

    Uses the scan-harness baseline (mean over out-of-triangle points) and
    extremum (largest deviation from it).
    """
    points = [(tau, rec.coincidences / rec.pulses_simulated) for tau, rec in rows]
    mask = [outside_triangle(p, spec.delays_at(tau, d)) for tau, _ in rows]
    curve = curve_from_points(points, mask)
    n_base = sum(rec.pulses_simulated for (_, rec), m in zip(rows, mask) if m)
    n_ext = next(rec.pulses_simulated for tau, rec in rows if tau == curve.extremum[0])
    cb, ce = curve.baseline, curve.extremum[1]
    var_b = cb * (1.0 - cb) / n_base
    var_e = ce * (1.0 - ce) / n_ext
    err = math.sqrt(var_e / cb ** 2 + (ce ** 2) * var_b / cb ** 4)
    return curve.visibility, err, curve


def emit_counts_csv(rows, destination) -> None:
    try:
        with open(destination, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["tau_fs", "singles3", "singles4", "coincidences", "pulses"])
            for tau, rec in rows:
                w.writerow([repr(float(tau)), rec.singles3, rec.singles4,
                            rec.coincidences, rec.pulses_simulated])
    except OSError as exc:
        raise OSError(f"cannot write counts CSV to {destination}: {exc}") from exc
