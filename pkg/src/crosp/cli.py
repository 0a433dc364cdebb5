"""Command-line front end.

Subcommands: ``spaces``, ``constants``, ``gen``, ``energy``, ``discrepancy``,
``verify``.  Exit codes: 0 success/pass, 1 verification failure, 2 usage
error, 3 numeric or domain error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import discrepancy as disc
from . import harmonic, io, spaces, verify
from .errors import CrospError

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CROSP_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CrospError(f"CROSP_SEED must be an integer, got {env!r}") from None
    return 0


def _config_dict(args, seed) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in ("func",) and v is not None}
    cfg["seed"] = seed
    return cfg


def _emit(args, doc: dict) -> None:
    if not args.no_meta:
        doc["meta"] = {"timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z")}
    text = io.dumps_stable(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_input(args, space):
    """Point set or distance matrix from --in; returns (space, payload)."""
    path = args.infile
    if path.endswith(".csv"):
        if space is None:
            raise CrospError("distance-matrix input requires --space")
        return space, io.load_distance_matrix(path)
    pts = io.load_pointset(path)
    if space is not None and pts.space != space:
        raise CrospError(f"point set is on {pts.space}, but --space says {space}")
    return pts.space, pts


def _cmd_spaces(args):
    rows = [
        {"code": s.code, "family": s.family.value, "n": s.n,
         "d": s.d, "d0": s.d0, "m": s.m}
        for s in spaces.catalog()
    ]
    _emit(args, {"config": _config_dict(args, _resolve_seed(args)), "spaces": rows})
    return EXIT_OK


def _cmd_constants(args):
    space = spaces.parse_space(args.space)
    doc = {
        "config": _config_dict(args, _resolve_seed(args)),
        "space": space.code,
        "gamma": spaces.gamma_const(space),
        "avg_chordal": spaces.avg_chordal(space),
        "avg_symdiff": harmonic.avg_symdiff(space),
    }
    _emit(args, doc)
    return EXIT_OK


def _cmd_gen(args):
    space = spaces.parse_space(args.space)
    seed = _resolve_seed(args)
    rng = np.random.default_rng(seed)
    pts = spaces.sample_uniform(space, args.n, rng,
                                label=args.label or f"{space.code}-uniform-{args.n}")
    doc = io.pointset_to_dict(pts)
    doc = {"config": _config_dict(args, seed), **doc}
    _emit(args, doc)
    return EXIT_OK


def _cmd_energy(args):
    space = spaces.parse_space(args.space) if args.space else None
    space, payload = _load_input(args, space)
    value = disc.pair_sum(space, payload, metric=args.metric)
    n = payload.shape[0] if isinstance(payload, np.ndarray) else len(payload)
    doc = {
        "config": _config_dict(args, _resolve_seed(args)),
        "quantity": "pair_sum",
        "metric": args.metric,
        "value": value,
        "route": "direct",
        "space": space.code,
        "n_points": n,
    }
    _emit(args, doc)
    return EXIT_OK


def _cmd_discrepancy(args):
    space = spaces.parse_space(args.space) if args.space else None
    space, payload = _load_input(args, space)
    seed = _resolve_seed(args)
    n = payload.shape[0] if isinstance(payload, np.ndarray) else len(payload)
    stderr = None
    if args.route == "closed":
        value = disc.discrepancy_closed(space, payload)
    elif args.route == "series":
        value = disc.discrepancy_series(space, payload, tol=args.tol)
    elif args.route == "mc":
        if isinstance(payload, np.ndarray):
            raise CrospError("the mc route needs an explicit point set, not a matrix")
        est = disc.discrepancy_mc(space, payload, args.samples, seed=seed,
                                  workers=args.threads)
        value, stderr = est.value, est.stderr
    else:  # pragma: no cover - argparse restricts choices
        raise CrospError(f"unknown route {args.route}")
    doc = {
        "config": _config_dict(args, seed),
        "quantity": "ball_discrepancy",
        "value": value,
        "route": args.route,
        "space": space.code,
        "n_points": n,
    }
    if stderr is not None:
        doc["stderr"] = stderr
        doc["samples"] = args.samples
    _emit(args, doc)
    return EXIT_OK


def _cmd_verify(args):
    seed = _resolve_seed(args)
    kwargs = {"seed": seed, "workers": args.threads}
    if args.space:
        kwargs["space"] = spaces.parse_space(args.space)
    if args.tol is not None:
        kwargs["tol"] = args.tol
    if args.samples is not None:
        kwargs["samples"] = args.samples
    reports = verify.run_suite(args.suite, **kwargs)
    doc = {
        "config": _config_dict(args, seed),
        "suite": args.suite,
        "reports": [r.to_dict() for r in reports],
        "all_passed": all(r.passed for r in reports),
    }
    if args.format == "csv":
        lines = ["identity,verdict,max_abs_err,max_rel_err,tolerance"]
        for r in reports:
            lines.append(f"{r.identity},{r.verdict},{r.max_abs_err:.17g},"
                         f"{r.max_rel_err:.17g},{r.tolerance:.17g}")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(args, doc)
    sys.stderr.write(verify.render_reports(reports) + "\n")
    return EXIT_OK if doc["all_passed"] else EXIT_VERIFY_FAIL


_COMMON_DEFAULTS = {
    "seed": None,
    "threads": os.cpu_count() or 1,
    "out": None,
    "format": "json",
    "no_meta": False,
}


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="RNG seed (falls back to CROSP_SEED, then 0)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker count for Monte Carlo sharding")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="write output to this path")
    common.add_argument("--format", choices=("json", "csv"),
                        default=argparse.SUPPRESS)
    common.add_argument("--no-meta", action="store_true", default=argparse.SUPPRESS,
                        help="omit timestamps so outputs are byte-reproducible")

    ap = argparse.ArgumentParser(
        prog="crosp",
        description="Discrepancy, energy, and identity certification on "
                    "compact rank-one symmetric spaces",
        parents=[common],
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spaces", help="list the space catalog", parents=[common])
    p.set_defaults(func=_cmd_spaces)

    p = sub.add_parser("constants", parents=[common],
                       help="print gamma, mean chordal, mean symdiff")
    p.add_argument("--space", required=True)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("gen", parents=[common],
                       help="generate a uniform point set (JSON)")
    p.add_argument("--space", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--label", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("energy", parents=[common], help="sum of pairwise distances")
    p.add_argument("--in", dest="infile", required=True,
                   help="point-set JSON or distance-matrix CSV")
    p.add_argument("--space", default=None, help="required for CSV input")
    p.add_argument("--metric", choices=("chordal", "geodesic"), default="chordal")
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("discrepancy", parents=[common],
                       help="ball quadratic discrepancy")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--space", default=None)
    p.add_argument("--route", choices=("closed", "series", "mc"), default="closed")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_discrepancy)

    p = sub.add_parser("verify", parents=[common],
                       help="run an identity-certification suite")
    p.add_argument("suite", choices=sorted(verify.SUITES))
    p.add_argument("--space", default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    for key, default in _COMMON_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, default)
    try:
        return args.func(args)
    except CrospError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
