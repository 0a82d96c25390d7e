"""Command-line entry point: ``dcrlab {simulate,approx-sweep,selftest,norms,info}``."""

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__, _kernels, checkpoint
from .config import ConfigError, RunConfig, parse_config
from .evolve import DiagnosticsRow, BlowupError, IntegratorSpec, run
from .experiment import approx_sweep, conservation_audit
from .field import Field, Grid1D, field_from_profiles, gaussian_mode, sobolev_and_sigma
from .hermite import build_basis
from .selftest import run_selftest

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_SELFTEST = 0, 1, 2, 3

DIAG_HEADER = ("t", "mass", "energy", "m_s", "e_s", "l6_accum", "max_amp", "boundary_mass",
               "mode_tail")
SWEEP_HEADER = ("lambda", "err_l2", "err_h1", "valid")


def fmt(x):
    """Shortest round-trip decimal for a float."""
    return repr(float(x))


def initial_field(cfg):
    if cfg.initial_kind == "checkpoint":
        f, _ = checkpoint.read(cfg.checkpoint_path)
        if f.grid.n_points != cfg.n_points or f.basis.n_modes != cfg.n_modes:
            raise ConfigError("checkpoint dimensions disagree with grid.n_points/n_modes",
                              key="initial_data.path")
        return f
    grid = Grid1D(cfg.n_points, cfg.half_length)
    basis = build_basis(cfg.n_modes)
    if cfg.initial_kind == "gaussian_mode0":
        return gaussian_mode(grid, basis, 0, cfg.sigma, cfg.amplitude)
    profiles = {}
    x = grid.x
    for n, amp, sig in cfg.modes:
        profiles[n] = profiles.get(n, 0) + amp * np.exp(-x**2 / (2 * sig**2))
    return field_from_profiles(grid, basis, profiles)


def diagnostics_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(DIAG_HEADER)
    for r in rows:
        writer.writerow([fmt(v) for v in r.as_tuple()])
    return buf.getvalue()


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_simulate(cfg, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    f0 = initial_field(cfg)
    spec = cfg.integrator()
    t0 = time.perf_counter()
    status = "ok"
    try:
        final, rows = run(f0, spec)
    except BlowupError as exc:
        rows, final, status = exc.diagnostics, None, f"blowup at t={exc.t}"
    wall = time.perf_counter() - t0
    _write_text(os.path.join(out_dir, "diagnostics.csv"), diagnostics_csv(rows))
    if final is not None:
        checkpoint.write(os.path.join(out_dir, "final.dcrf"), final, spec.t_end)
    audit = conservation_audit(rows)
    summary = {
        "config": cfg.as_dict(),
        "seed": cfg.seed,
        "backend": _kernels.BACKEND,
        "status": status,
        "steps": spec.n_steps,
        "dt_effective": spec.step,
        "wall_time_s": wall,
        "drift": audit.drifts,
    }
    _write_text(os.path.join(out_dir, "summary.json"), json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if final is None:
        print(f"error: {status}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_sweep(cfg, out_dir, lambdas):
    os.makedirs(out_dir, exist_ok=True)
    phi = initial_field(cfg)
    spec = IntegratorSpec("strang_phnls", cfg.dt, cfg.sweep_t_end)
    res = approx_sweep(phi, lambdas, cfg.sweep_t_end, spec, theta=cfg.sweep_theta)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for lam, e2, eh, ok in zip(res.lambdas, res.errors_l2, res.errors_h1, res.validity_flags):
        writer.writerow([fmt(lam), fmt(e2), fmt(eh), int(bool(ok))])
    _write_text(os.path.join(out_dir, "sweep.csv"), buf.getvalue())
    return EXIT_OK


def cmd_norms(path):
    f, t = checkpoint.read(path)
    rep = sobolev_and_sigma(f)
    print(json.dumps({"time": t, "mass": rep.mass, "lp_l2": rep.lp_l2,
                      "hermite_sobolev_1": rep.hermite_sobolev_s, "sigma": rep.sigma}, indent=2))
    return EXIT_OK


def cmd_info(path):
    info = {"version": __version__, "backend": _kernels.BACKEND}
    if path:
        with open(path, "rb") as fh:
            info["checkpoint"] = checkpoint.read_header(fh.read())
    print(json.dumps(info, indent=2))
    return EXIT_OK


def _parse_lambdas(text):
    try:
        vals = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"--lambda expects comma-separated numbers, got {text!r}") from None
    for v in vals:
        k = math.log2(v) if v > 0 else 0.5
        if abs(k - round(k)) > 1e-12:
            raise ConfigError(f"--lambda value {v} is not a power of two")
    return vals


def build_parser():
    p = argparse.ArgumentParser(prog="dcrlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("simulate", help="run one simulation")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s = sub.add_parser("approx-sweep", help="large-scale approximation sweep")
    s.add_argument("--config")
    s.add_argument("--out")
    s.add_argument("--lambda", dest="lambdas")
    s = sub.add_parser("selftest", help="run the built-in invariant suite")
    s.add_argument("--config")
    for name in ("norms", "info"):
        s = sub.add_parser(name)
        s.add_argument("--checkpoint", required=(name == "norms"))
    return p


def _load_config(path):
    if path is None:
        return RunConfig()
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            cfg = _load_config(args.config)
            ok, _ = run_selftest(cfg.seed, stream=sys.stdout)
            return EXIT_OK if ok else EXIT_SELFTEST
        if args.command == "norms":
            return cmd_norms(args.checkpoint)
        if args.command == "info":
            return cmd_info(args.checkpoint)
        cfg = _load_config(args.config)
        out_dir = args.out or cfg.output_dir
        if args.command == "simulate":
            return cmd_simulate(cfg, out_dir)
        lambdas = _parse_lambdas(args.lambdas) if args.lambdas else list(cfg.sweep_lambdas)
        return cmd_sweep(cfg, out_dir, lambdas)
    except (ConfigError, checkpoint.CheckpointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BlowupError, FloatingPointError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
