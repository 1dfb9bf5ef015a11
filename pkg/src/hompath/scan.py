"""Delay scans: sweep the arm path difference, locate the peak or dip, write CSV."""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .engine import coincidence_rate_analytic, coincidence_rate_numeric
from .model import AnalyzerConfig, DelayConfig, SourceParams
from .quadrature import QuadratureSpec


class ScanError(ValueError):
    pass


@dataclass(frozen=True)
class ScanSpec:
    """Scan of the arm path difference tau over [tau_min, tau_max].

    ``delta_tau2`` and ``delta_tau`` model tilting the fine-delay quartz
    plates: they add to tau2 and to tau at every scan point.
    """

    tau_min: float
    tau_max: float
    steps: int
    engine: str = "analytic"
    analyzers: Optional[AnalyzerConfig] = None
    delta_tau2: float = 0.0
    delta_tau: float = 0.0
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if self.steps < 2:
            raise ScanError("steps must be >= 2")
        if not self.tau_min < self.tau_max:
            raise ScanError("tau_min must be < tau_max")
        if self.engine not in ("analytic", "numeric"):
            raise ScanError(f"engine must be 'analytic' or 'numeric', got {self.engine!r}")
        if self.engine == "analytic" and self.analyzers is not None:
            raise ScanError("the analytic engine has no analyzer model; use engine=numeric")

    def taus(self) -> np.ndarray:
        return np.linspace(self.tau_min, self.tau_max, self.steps)

    def delays_at(self, tau: float, d: DelayConfig) -> DelayConfig:
        return DelayConfig(tau=tau + self.delta_tau, tau1=d.tau1, tau2=d.tau2 + self.delta_tau2)


@dataclass(frozen=True)
class ScanCurve:
    points: tuple            # ((tau_fs, rate_norm), ...)
    baseline: float
    extremum: tuple          # (tau_fs, rate_norm)
    visibility: float


def outside_triangle(p: SourceParams, d: DelayConfig) -> bool:
    return abs(2.0 * d.tau + d.tau2 - d.tau1) >= p.dgd()


def compute_visibility(points, baseline: float) -> float:
    """|R_ext - R_base| / R_base with R_ext the point farthest from baseline."""
    if len(points) == 0:
        raise ScanError("empty curve")
    if not baseline > 0:
        raise ScanError("baseline must be positive")
    _, rate = extremum_point(points, baseline)
    return abs(rate - baseline) / baseline


def extremum_point(points, baseline: float):
    """Point of largest |rate - baseline|; the first one wins ties."""
    if len(points) == 0:
        raise ScanError("empty curve")
    rates = np.array([r for _, r in points])
    k = int(np.argmax(np.abs(rates - baseline)))
    return (float(points[k][0]), float(points[k][1]))


def curve_from_points(points, mask_out) -> ScanCurve:
    """Assemble a curve; ``mask_out`` flags points usable for the baseline."""
    rates = np.array([r for _, r in points])
    mask_out = np.asarray(mask_out, dtype=bool)
    if not mask_out.any():
        raise ScanError("no scan point lies outside the interference triangle; "
                        "widen the tau range to define a baseline")
    baseline = float(np.mean(rates[mask_out]))
    ext = extremum_point(points, baseline)
    return ScanCurve(tuple(points), baseline, ext, compute_visibility(points, baseline))


def _rate(spec: ScanSpec, p: SourceParams, dd: DelayConfig) -> float:
    if spec.engine == "analytic":
        return coincidence_rate_analytic(p, dd).rate_norm
    return float(coincidence_rate_numeric(p, dd, spec.analyzers, spec.quadrature).rate_norm)


def run_scan(spec: ScanSpec, p: SourceParams, d: DelayConfig, workers: int = 1) -> ScanCurve:
    """Evaluate the chosen engine across the scan; ``d.tau`` is replaced by each scan value."""
    taus = spec.taus()
    delays = [spec.delays_at(float(t), d) for t in taus]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rates = list(pool.map(lambda dd: _rate(spec, p, dd), delays))
    else:
        rates = [_rate(spec, p, dd) for dd in delays]
    points = [(float(t), float(r)) for t, r in zip(taus, rates)]
    return curve_from_points(points, [outside_triangle(p, dd) for dd in delays])


def emit_scan_csv(curve: ScanCurve, destination) -> None:
    try:
        with open(destination, "w", newline="") as fh:
            fh.write("tau_fs,rate_norm\n")
            for tau, rate in curve.points:
                fh.write(f"{float(tau)!r},{float(rate)!r}\n")
    except OSError as exc:
        raise OSError(f"cannot write scan CSV to {destination}: {exc}") from exc


def read_scan_csv(source):
    with open(source, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [(float(r["tau_fs"]), float(r["rate_norm"])) for r in rows]
