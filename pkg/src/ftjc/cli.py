"""Command-line entry point.

Subcommands:
  run      execute a sweep from a preset and/or a JSON config file,
           with individual flag overrides
  presets  list the named parameter sets
  verify   re-check a finished output directory against its manifest

Errors exit nonzero with a one-line JSON record on stderr so wrapper
scripts can parse failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from ._backend import backend_name
from .config import OBSERVABLE_NAMES, SweepConfig, preset, preset_names
from .errors import FtjcError
from .runner import run_experiment, verify_manifest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftjc",
        description="Fractional-time Jaynes-Cummings simulations")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} ({backend_name()} backend)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a sweep and write data files")
    run.add_argument("--preset", help="start from a named parameter set")
    run.add_argument("--config", help="JSON config file (overrides the preset)")
    run.add_argument("--alpha", action="append", type=float,
                     help="fractional order; repeat for several")
    run.add_argument("--mu", type=float, help="coupling strength")
    run.add_argument("--t-max", type=float, help="end of the time grid")
    run.add_argument("--dt", type=float, help="time step")
    run.add_argument("--n-max", type=int, help="photon cutoff")
    run.add_argument("--beta", type=complex, help="coherent seed amplitude")
    run.add_argument("--seed", choices=("fock_excited", "coherent"),
                     help="initial state family")
    run.add_argument("--observables",
                     help="comma-separated subset of: " + ", ".join(OBSERVABLE_NAMES))
    run.add_argument("--ml-tol", type=float,
                     help="kernel relative error tolerance")
    run.add_argument("--out", help="output directory")

    sub.add_parser("presets", help="list named parameter sets")

    ver = sub.add_parser("verify", help="check a finished output directory")
    ver.add_argument("out_dir", help="directory containing manifest.json")
    return parser


def _config_from_args(args) -> SweepConfig:
    data: dict = {}
    if args.preset:
        data = preset(args.preset).to_dict()
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            file_data = json.load(fh)
        data.update(file_data if isinstance(file_data, dict) else {})
    overrides = {
        "alpha_list": args.alpha,
        "mu": args.mu,
        "t_max": args.t_max,
        "dt": args.dt,
        "n_max": args.n_max,
        "beta": args.beta,
        "seed": args.seed,
        "ml_tol": args.ml_tol,
    }
    if args.observables is not None:
        overrides["observables"] = tuple(
            s.strip() for s in args.observables.split(",") if s.strip())
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    # the output directory alone must not select the default physics
    if not data:
        raise FtjcError("run needs --preset, --config, or explicit flags")
    if args.out is not None:
        data["output_dir"] = args.out
    return SweepConfig.from_dict(data)


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    manifest = run_experiment(config)
    print(f"wrote {len(manifest['files'])} files + manifest to "
          f"{config.output_dir}")
    return 0


def _cmd_presets() -> int:
    for name in preset_names():
        cfg = preset(name)
        alphas = ",".join(f"{a:g}" for a in cfg.alpha_list)
        print(f"{name:7s} seed={cfg.seed:13s} alpha={{{alphas}}} "
              f"t_max={cfg.t_max:g} dt={cfg.dt:g} "
              f"observables={','.join(cfg.observables)}")
    return 0


def _cmd_verify(args) -> int:
    report = verify_manifest(args.out_dir)
    n_checks = len(report["checks"])
    if report["ok"]:
        print(f"ok: {n_checks} checks passed")
        return 0
    for err in report["errors"]:
        print(f"error: {err}", file=sys.stderr)
    print(f"failed: {len(report['errors'])} errors, {n_checks} checks run",
          file=sys.stderr)
    return 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "presets":
            return _cmd_presets()
        return _cmd_verify(args)
    except FtjcError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 2
    except OSError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
