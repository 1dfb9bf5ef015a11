"""Two-photon interference of distinguishable photons from pulsed type-II SPDC."""

from ._backend import kernels as _kernels
from .engine import (PathwaySet, RateResult, coincidence_rate_analytic,
                     coincidence_rate_numeric, coincidence_rate_simplified,
                     pathway_decomposition, singles_rate_numeric)
from .materials import default_source
from .model import (AnalyzerConfig, DelayConfig, DetectionChannel, InvalidParams,
                    SourceParams, amplitude_hv, amplitude_vh, pump_envelope, rect,
                    two_time_probability)
from .quadrature import QuadratureError, QuadratureSpec

BACKEND = _kernels.NAME

__all__ = [
    "AnalyzerConfig", "DelayConfig", "DetectionChannel", "InvalidParams",
    "PathwaySet", "QuadratureError", "QuadratureSpec", "RateResult", "SourceParams",
    "amplitude_hv", "amplitude_vh", "coincidence_rate_analytic",
    "coincidence_rate_numeric", "coincidence_rate_simplified", "default_source",
    "pathway_decomposition", "pump_envelope", "rect", "singles_rate_numeric",
    "two_time_probability", "BACKEND",
]
