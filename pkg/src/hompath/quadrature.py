"""Composite Gauss-Legendre rules on breakpoint-aligned panels."""

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np


class QuadratureError(RuntimeError):
    """Refinement levels disagreed; ``estimate`` holds the finer result."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout for the coincidence integrals.

    ``box_padding`` is the half-width, in units of 1/sigma, added around the
    pump-envelope ridges on the inner (time) axis.
    """

    panels_per_axis: int = 8
    nodes_per_panel: int = 16
    box_padding: float = 8.0
    tol: float = 1e-6

    def __post_init__(self):
        if self.panels_per_axis < 4:
            raise ValueError("panels_per_axis must be >= 4")
        if self.nodes_per_panel < 2:
            raise ValueError("nodes_per_panel must be >= 2")
        if not self.box_padding >= 4:
            raise ValueError("box_padding must be >= 4")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def refined(self) -> "QuadratureSpec":
        return replace(self, panels_per_axis=2 * self.panels_per_axis)


@lru_cache(maxsize=64)
def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1]; arrays are read-only."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def unit_rule(panels: int, nodes: int):
    """Composite rule on [0, 1] with equal panels."""
    x, w = gauss_legendre(nodes)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    xs = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    return xs, ws


def composite_rule(breakpoints, panels: int, nodes: int):
    """Rule over [min(bp), max(bp)] with every breakpoint a panel edge.

    Each gap between consecutive distinct breakpoints gets ``panels`` equal
    panels, so no panel straddles a breakpoint.
    """
    bp = np.unique(np.asarray(breakpoints, dtype=float))
    if bp.size < 2:
        return np.empty(0), np.empty(0)
    ux, uw = unit_rule(panels, nodes)
    widths = np.diff(bp)
    xs = (bp[:-1, None] + widths[:, None] * ux[None, :]).ravel()
    ws = (widths[:, None] * uw[None, :]).ravel()
    return xs, ws
