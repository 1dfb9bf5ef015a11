"""Command-line front end: ``hompath {rate,scan,mc,pathways}``.

Exit codes: 0 ok, 2 config error, 3 quadrature non-convergence, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from .config import ConfigError, RunConfig
from .engine import (coincidence_rate_analytic, coincidence_rate_numeric,
                     pathway_decomposition)
from .model import DetectionChannel, InvalidParams, two_time_probability
from .montecarlo import (MCConfigError, emit_counts_csv, mc_scan, mc_visibility,
                         tune_dark_prob)
from .quadrature import QuadratureError
from .scan import ScanError, emit_scan_csv, run_scan
from .svgplot import line_plot_svg

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_IO = 0, 2, 3, 4


def _write_new(path: str, text: str) -> None:
    # outputs are write-once: never clobber an existing file
    with open(path, "x") as fh:
        fh.write(text)


def _out_dir(args, default=None):
    out = getattr(args, "out", None) or default
    if out is not None:
        os.makedirs(out, exist_ok=True)
    return out


def _dump_config(cfg: RunConfig, out) -> None:
    if out is not None:
        _write_new(os.path.join(out, "resolved-config.txt"), cfg.dump())


def cmd_rate(cfg: RunConfig, args) -> int:
    p, d, a = cfg.source(), cfg.delays(), cfg.analyzers()
    try:
        numeric = coincidence_rate_numeric(p, d, a, cfg.quadrature()).rate_norm
    except QuadratureError as exc:
        print(f"error: {exc}; estimate={exc.estimate}", file=sys.stderr)
        return EXIT_CONVERGENCE
    analytic = coincidence_rate_analytic(p, d).rate_norm if a is None else math.nan
    print(f"analytic={analytic:.9f} numeric={numeric:.9f} delta={numeric - analytic:.3e}")
    _dump_config(cfg, _out_dir(args))
    return EXIT_OK


def cmd_scan(cfg: RunConfig, args) -> int:
    spec = cfg.scan()
    try:
        curve = run_scan(spec, cfg.source(), cfg.delays(), workers=cfg["workers"])
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    out = _out_dir(args, "hompath-out")
    _dump_config(cfg, out)
    csv_path = os.path.join(out, "scan.csv")
    if os.path.exists(csv_path):
        raise FileExistsError(f"refusing to overwrite {csv_path}")
    emit_scan_csv(curve, csv_path)
    if args.svg:
        taus, rates = zip(*curve.points)
        _write_new(args.svg, line_plot_svg(taus, rates, "tau (fs)", "R/R0"))
    print(f"visibility={curve.visibility:.9f} extremum_tau_fs={curve.extremum[0]!r} "
          f"extremum_rate={curve.extremum[1]:.9f} baseline={curve.baseline:.9f}")
    return EXIT_OK


def cmd_mc(cfg: RunConfig, args) -> int:
    if args.seed is not None:
        cfg = RunConfig.from_text(cfg.dump(), overrides={"seed": args.seed})
    if cfg["target_visibility"] is not None:
        dark = tune_dark_prob(cfg["target_visibility"], cfg.mc(), cfg.analyzers())
        cfg = cfg.with_values(dark_prob=dark, target_visibility=None)
    spec, p, d, mc = cfg.scan(), cfg.source(), cfg.delays(), cfg.mc()
    rows = mc_scan(spec, p, d, mc, workers=cfg["workers"])
    out = _out_dir(args, "hompath-out")
    _dump_config(cfg, out)
    csv_path = os.path.join(out, "counts.csv")
    if os.path.exists(csv_path):
        raise FileExistsError(f"refusing to overwrite {csv_path}")
    emit_counts_csv(rows, csv_path)
    if args.svg:
        taus = [t for t, _ in rows]
        frac = [r.coincidences / r.pulses_simulated for _, r in rows]
        _write_new(args.svg, line_plot_svg(taus, frac, "tau (fs)", "coincidences per pulse"))
    vis, err, curve = mc_visibility(rows, spec, p, d)
    print(f"visibility={vis:.6f} +/- {err:.6f} extremum_tau_fs={curve.extremum[0]!r} "
          f"dark_prob={mc.dark_prob!r} seed={mc.seed}")
    return EXIT_OK


def cmd_pathways(cfg: RunConfig, args) -> int:
    p, d = cfg.source(), cfg.delays()
    t = args.t_fs if args.t_fs is not None else cfg["t_fs"]
    tp = args.tp_fs if args.tp_fs is not None else cfg["t_prime_fs"]
    ps = pathway_decomposition(t, tp, p, d)
    print("label emission outcome channel re im")
    for pw in ps.pathways:
        amp = complex(pw.amplitude)
        print(f"{pw.label} {pw.emission} {pw.outcome} {pw.channel} {amp.real:.9e} {amp.imag:.9e}")
    s14, s23 = ps.pair_sums()
    p_hv = two_time_probability(t, tp, DetectionChannel.H_AT_D3_V_AT_D4, p, d)
    p_vh = two_time_probability(t, tp, DetectionChannel.V_AT_D3_H_AT_D4, p, d)
    print(f"|Psi1+Psi4|={abs(s14):.9e} |Psi2+Psi3|={abs(s23):.9e}")
    print(f"P_HV={float(p_hv):.9e} P_VH={float(p_vh):.9e}")
    _dump_config(cfg, _out_dir(args))
    return EXIT_OK


COMMANDS = {"rate": cmd_rate, "scan": cmd_scan, "mc": cmd_mc, "pathways": cmd_pathways}


def _common(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="key = value config file")
    parser.add_argument("--out", default=default, help="output directory")
    parser.add_argument("--set", action="append", default=argparse.SUPPRESS if suppress else [],
                        metavar="KEY=VALUE", help="override a config key (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hompath",
        description="Two-photon interference of distinguishable photons from pulsed type-II SPDC.")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        _common(sp, suppress=True)
        if name in ("scan", "mc"):
            sp.add_argument("--svg", help="write an SVG plot of the curve")
        if name == "mc":
            sp.add_argument("--seed", help="override the Monte Carlo seed (u64)")
        if name == "pathways":
            sp.add_argument("--t-fs", type=float, help="detection time at D3")
            sp.add_argument("--tp-fs", type=float, help="detection time at D4")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = {}
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            k, v = item.split("=", 1)
            overrides[k.strip()] = v.strip()
        cfg = RunConfig.load(args.config, overrides)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, InvalidParams, MCConfigError, ScanError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
