"""Flat ``key = value`` run configuration with unit-suffixed keys.

Lines starting with ``#`` are comments. Unknown keys are rejected. ``none``
marks an unset optional value. Every run can dump its fully resolved
configuration; loading that dump reproduces the run exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import materials
from .model import AnalyzerConfig, DelayConfig, InvalidParams, SourceParams
from .montecarlo import RNG_ALGORITHM, MCConfig, MCConfigError
from .quadrature import QuadratureSpec
from .scan import ScanError, ScanSpec


class ConfigError(ValueError):
    pass


def _opt_float(s):
    return None if s.lower() == "none" else float(s)


def _int(s):
    return int(s, 0)


def _engine(s):
    if s not in ("analytic", "numeric"):
        raise ValueError("expected 'analytic' or 'numeric'")
    return s


# key -> (parser, default, description)
KEYS = {
    "crystal_length_mm": (float, materials.CRYSTAL_LENGTH_MM, "crystal length L"),
    "kp_prime_fs_per_mm": (float, materials.BBO_KP_PRIME, "pump inverse group velocity"),
    "ko_prime_fs_per_mm": (float, materials.BBO_KO_PRIME, "o-ray inverse group velocity"),
    "ke_prime_fs_per_mm": (_opt_float, None, "e-ray inverse group velocity (default BBO)"),
    "dgd_fs": (_opt_float, None, "crystal L(k'_o - k'_e); alternative to ke_prime_fs_per_mm"),
    "mean_frequency_rad_per_fs": (float, materials.mean_frequency(), "mean photon frequency"),
    "pump_bandwidth_rad_per_fs": (_opt_float, None, "pump spectral width sigma"),
    "pump_fwhm_fs": (_opt_float, None, "pump intensity FWHM; alternative to sigma (default 120)"),
    "pump_phase_rad": (float, 0.0, "phase phi between the two emission terms"),
    "tau_fs": (float, 0.0, "arm path difference over c"),
    "tau1_fs": (float, 668.0, "birefringent delay, path 1"),
    "tau2_fs": (float, 668.0, "birefringent delay, path 2"),
    "analyzer3_deg": (_opt_float, None, "analyzer axis at D3 from vertical, or none"),
    "analyzer4_deg": (_opt_float, None, "analyzer axis at D4 from vertical, or none"),
    "panels_per_axis": (_int, 8, "quadrature panels per axis"),
    "nodes_per_panel": (_int, 16, "Gauss-Legendre nodes per panel"),
    "box_padding": (float, 8.0, "inner window half-width in units of 1/sigma"),
    "quad_tol": (float, 1e-6, "refinement agreement tolerance"),
    "tau_min_fs": (float, -1000.0, "scan start"),
    "tau_max_fs": (float, 1000.0, "scan end"),
    "steps": (_int, 41, "scan points"),
    "engine": (_engine, "analytic", "analytic or numeric"),
    "delta_tau2_fs": (float, 0.0, "quartz-plate tilt: extra tau2"),
    "delta_tau_fs": (float, 0.0, "quartz-plate tilt: extra path length"),
    "pulses": (_int, 1_000_000, "pulses per Monte Carlo point"),
    "pair_prob": (float, 0.01, "pair emission probability per pulse"),
    "eff3": (float, 1.0, "detector D3 efficiency"),
    "eff4": (float, 1.0, "detector D4 efficiency"),
    "dark_prob": (float, 0.0, "dark-count probability per detector per window"),
    "target_visibility": (_opt_float, None, "if set, dark_prob is tuned to reach it"),
    "coincidence_window_ns": (float, 3.0, "coincidence window"),
    "rep_period_ns": (float, 13.0, "pump repetition period"),
    "seed": (_int, 0, "Monte Carlo seed (unsigned 64-bit)"),
    "t_fs": (float, 0.0, "pathways: detection time at D3"),
    "t_prime_fs": (float, 900.0, "pathways: detection time at D4"),
    "workers": (_int, 1, "threads for scans and Monte Carlo batches"),
}


def parse_text(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (x.strip() for x in line.split("=", 1))
        values[key] = value
    return values


def resolve(raw: dict) -> dict:
    """Apply types and defaults; raise ConfigError naming the offending key."""
    out = {}
    for key in raw:
        if key not in KEYS:
            raise ConfigError(f"unknown config key {key!r}")
    for key, (parser, default, _) in KEYS.items():
        if key in raw:
            try:
                value = parser(raw[key]) if isinstance(raw[key], str) else raw[key]
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {raw[key]!r} ({exc})") from None
            if isinstance(value, float) and not math.isfinite(value):
                raise ConfigError(f"bad value for {key!r}: must be finite")
        else:
            value = default
        out[key] = value

    if out["dgd_fs"] is not None and out["ke_prime_fs_per_mm"] is not None:
        raise ConfigError("set only one of 'dgd_fs' and 'ke_prime_fs_per_mm'")
    if out["dgd_fs"] is not None:
        out["ke_prime_fs_per_mm"] = out["ko_prime_fs_per_mm"] - out["dgd_fs"] / out["crystal_length_mm"]
    elif out["ke_prime_fs_per_mm"] is None:
        out["ke_prime_fs_per_mm"] = materials.BBO_KE_PRIME
    out["dgd_fs"] = None

    if out["pump_fwhm_fs"] is not None and out["pump_bandwidth_rad_per_fs"] is not None:
        raise ConfigError("set only one of 'pump_fwhm_fs' and 'pump_bandwidth_rad_per_fs'")
    if out["pump_bandwidth_rad_per_fs"] is None:
        fwhm = out["pump_fwhm_fs"] if out["pump_fwhm_fs"] is not None else materials.PUMP_FWHM_FS
        if not fwhm > 0:
            raise ConfigError("bad value for 'pump_fwhm_fs': must be positive")
        out["pump_bandwidth_rad_per_fs"] = materials.sigma_from_fwhm(fwhm)
    out["pump_fwhm_fs"] = None

    if (out["analyzer3_deg"] is None) != (out["analyzer4_deg"] is None):
        raise ConfigError("set both 'analyzer3_deg' and 'analyzer4_deg' or neither")
    if out["workers"] < 1:
        raise ConfigError("bad value for 'workers': must be >= 1")
    return out


@dataclass(frozen=True)
class RunConfig:
    values: dict

    @classmethod
    def from_text(cls, text: str, source: str = "<config>", overrides: Optional[dict] = None):
        raw = parse_text(text, source)
        raw.update(overrides or {})
        return cls(resolve(raw))

    @classmethod
    def load(cls, path: Optional[str], overrides: Optional[dict] = None):
        text = ""
        if path is not None:
            try:
                with open(path) as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_text(text, path or "<defaults>", overrides)

    def __getitem__(self, key):
        return self.values[key]

    def source(self) -> SourceParams:
        v = self.values
        try:
            return SourceParams(
                crystal_length=v["crystal_length_mm"], kp_prime=v["kp_prime_fs_per_mm"],
                ko_prime=v["ko_prime_fs_per_mm"], ke_prime=v["ke_prime_fs_per_mm"],
                mean_frequency=v["mean_frequency_rad_per_fs"],
                pump_bandwidth=v["pump_bandwidth_rad_per_fs"], pump_phase=v["pump_phase_rad"])
        except InvalidParams as exc:
            raise ConfigError(str(exc)) from None

    def delays(self) -> DelayConfig:
        v = self.values
        return DelayConfig(v["tau_fs"], v["tau1_fs"], v["tau2_fs"])

    def analyzers(self) -> Optional[AnalyzerConfig]:
        v = self.values
        if v["analyzer3_deg"] is None:
            return None
        return AnalyzerConfig.from_degrees(v["analyzer3_deg"], v["analyzer4_deg"])

    def quadrature(self) -> QuadratureSpec:
        v = self.values
        try:
            return QuadratureSpec(v["panels_per_axis"], v["nodes_per_panel"],
                                  v["box_padding"], v["quad_tol"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def scan(self) -> ScanSpec:
        v = self.values
        try:
            return ScanSpec(v["tau_min_fs"], v["tau_max_fs"], v["steps"], v["engine"],
                            self.analyzers(), v["delta_tau2_fs"], v["delta_tau_fs"],
                            self.quadrature())
        except ScanError as exc:
            raise ConfigError(str(exc)) from None

    def mc(self) -> MCConfig:
        v = self.values
        try:
            return MCConfig(v["pulses"], v["pair_prob"], v["eff3"], v["eff4"], v["dark_prob"],
                            v["coincidence_window_ns"], v["rep_period_ns"], v["seed"])
        except MCConfigError as exc:
            raise ConfigError(str(exc)) from None

    def with_values(self, **changes) -> "RunConfig":
        return RunConfig({**self.values, **changes})

    def dump(self) -> str:
        lines = ["# resolved configuration", f"# rng = {RNG_ALGORITHM}"]
        for key in KEYS:
            value = self.values[key]
            if value is None:
                text = "none"
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            lines.append(f"{key} = {text}")
        return "\n".join(lines) + "\n"
