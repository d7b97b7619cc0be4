"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numeric accuracy failure
(a determinant convergence certificate could not be met).
"""

from __future__ import annotations

import argparse
import json
import sys

from ..fredholm import AccuracyError
from .experiments import ConfigError, ExperimentConfig, run_experiment

_SHARED = {
    "seed": dict(type=int, help="master seed; sample i uses stream (seed, i)"),
    "workers": dict(type=int, help="worker processes for Monte Carlo sampling"),
    "out": dict(type=str, help="output table path"),
    "format": dict(type=str, choices=("csv", "json"), help="output format"),
    "quad-order": dict(type=int, help="Nystrom quadrature order"),
    "config": dict(type=str, help="flat key=value config file; flags override"),
}


def _add(parser: argparse.ArgumentParser, name: str, **kw):
    parser.add_argument(f"--{name}", **kw)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="pnglab",
        description="Polynuclear growth, source-perturbed random matrices, and their edge laws",
    )
    sub = top.add_subparsers(dest="experiment", required=True)

    p = sub.add_parser("png-height", help="sample scaled droplet heights at the origin")
    _add(p, "q", type=float)
    _add(p, "alpha", type=float)
    _add(p, "N", type=int)
    _add(p, "samples", type=int)
    _add(p, "scaling", choices=("auto", "cube-root", "gaussian"))

    p = sub.add_parser("png-layers", help="grow a multilayer droplet and dump the profiles")
    _add(p, "q", type=float)
    _add(p, "alpha", type=float)
    _add(p, "t", type=int)
    _add(p, "layers", type=int)

    p = sub.add_parser("rmt-edge", help="sample edge-scaled largest eigenvalues")
    _add(p, "ensemble", choices=("gue", "goe", "goe2max", "gue-source"))
    _add(p, "N", type=int)
    _add(p, "Lambda", type=float)
    _add(p, "samples", type=int)
    _add(p, "method", choices=("auto", "dense", "tridiagonal"))

    p = sub.add_parser("rmt-dyson", help="sample the source-seeded matrix chain")
    _add(p, "N", type=int)
    _add(p, "times", type=str)
    _add(p, "eps", type=str)
    _add(p, "samples", type=int)

    p = sub.add_parser("dist-eval", help="tabulate a distribution function")
    _add(p, "which", type=str)
    _add(p, "s", type=str, help="grid lo:hi:step")
    _add(p, "omega", type=float)
    _add(p, "tau", type=float)
    _add(p, "Lambda", type=float)
    _add(p, "N", type=int)
    _add(p, "eps", type=str)

    p = sub.add_parser("dist-joint", help="tabulate a two-time joint distribution")
    _add(p, "kernel", choices=("transition", "finite-n"))
    _add(p, "times", type=str)
    _add(p, "s1", type=str)
    _add(p, "s2", type=str)
    _add(p, "omega", type=float)
    _add(p, "N", type=int)
    _add(p, "eps", type=str)

    p = sub.add_parser("compare", help="compare a sample table against a reference law")
    _add(p, "data", type=str)
    _add(p, "against", type=str, help="F2|GOE2|GAUSSIAN|TRANSITION|file:<joint-grid>")
    _add(p, "col", type=str)
    _add(p, "omega", type=float)
    _add(p, "tau", type=float)

    for sp in sub.choices.values():
        for name, kw in _SHARED.items():
            if not any(a.dest == name.replace("-", "_") for a in sp._actions):
                _add(sp, name, **kw)
    return top


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line {line!r}")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return values


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    params = {}
    if getattr(args, "config", None):
        try:
            params.update(_read_config_file(args.config))
        except OSError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    for key, val in vars(args).items():
        if key in ("experiment", "config") or val is None:
            continue
        params[key.replace("_", "-") if key == "quad_order" else key] = val
    try:
        summary = run_experiment(ExperimentConfig(args.experiment, params))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(summary, sort_keys=True))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
