"""Command-line interface: ``twistlab <command> [flags]``.

Exit status is 0 on success, 2 for invalid input and 3 when an integrity
check fails.  Every JSON report carries the tool version, the resolved
configuration and the seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, bracket, construct, dynamics, ergodics, euler
from .errors import IntegrityError, TwistlabError, ValidationError
from .parallel import map_trials, thread_count, trial_seed
from .surface import B, D, ChainRep, parse_curve


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _fmt(v: float) -> str:
    return repr(float(v))


def _load_rep(path: str) -> ChainRep:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    try:
        return ChainRep.from_json(text)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"{path} is not a representation file: {exc}") from exc


def _write_json(data: dict, path: str | None) -> None:
    text = json.dumps(data, indent=2)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def _report(command: str, config: dict, result: dict) -> dict:
    return {"tool": "twistlab", "version": __version__, "command": command, "config": config, "result": result}


def _flow_curve(text: str):
    c = parse_curve(text)
    if not isinstance(c, (B, D)):
        raise ValidationError(f"flows are defined for b- and d-curves, not {text!r}")
    return c


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args) -> int:
    av = construct.AngleVector(tuple(args.alpha))
    k = av.n - 3
    rng = np.random.default_rng(args.seed)
    x = args.x if args.x is not None else list(construct.sample_polytope(av, 1, rng)[0])
    if args.twists is not None:
        t = args.twists
    else:
        t = list(rng.uniform(0.0, math.pi, size=k)) if args.seed is not None else [0.0] * k
    if len(t) == 1 and k > 1:
        t = t * k
    rep = construct.build_rep(av, x, t)
    data = rep.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(data) + "\n")
    else:
        print(json.dumps(data))
    return 0


def cmd_volume(args) -> int:
    rep = _load_rep(args.rep)
    rep_report = euler.relative_euler_class(rep)
    result = rep_report.to_dict()
    result["lambda"] = rep.lam
    result["deroin_tholozan"] = rep_report.k == rep.n - 1
    _write_json(_report("volume", {"rep": args.rep}, result), args.report)
    return 0


def cmd_flow(args) -> int:
    rep = _load_rep(args.rep)
    out = dynamics.twist_flow(rep, _flow_curve(args.curve), args.t).check()
    _write_json(out.to_dict(), args.out)
    return 0


def cmd_twist(args) -> int:
    rep = _load_rep(args.rep)
    out = dynamics.apply_twist_word(rep, dynamics.parse_twist_word(args.word)).verify()
    _write_json(out.to_dict(), args.out)
    return 0


def cmd_bracket_scan(args) -> int:
    rep = _load_rep(args.rep)
    scan = bracket.find_bracket_zeros(rep, args.i, grid=args.grid)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "residual", "fd_bracket"])
            for row in zip(scan.ts, scan.residuals, scan.fd_values):
                writer.writerow([_fmt(v) for v in row])
    config = {"rep": args.rep, "i": args.i, "grid": args.grid}
    result = {"zeros": scan.zeros, "P": scan.P, "Q": scan.Q}
    _write_json(_report("bracket-scan", config, result), args.report)
    return 0


def cmd_key_lemma(args) -> int:
    av = construct.AngleVector(tuple(args.alpha))
    seeds = [trial_seed(args.seed, k) for k in range(args.trials)]
    records = [r for rs in map_trials(lambda s: bracket.key_lemma_trial(av, s, args.grid), seeds) for r in rs]
    degenerate = [r for r in records if r.degenerate]
    finite = [r for r in records if not r.degenerate]
    result = {
        "checks": len(records),
        "max_zeros": max((r.zeros for r in records), default=0),
        "max_separation_error": max((r.separation_error for r in finite), default=0.0),
        "max_grid_match_error": max((r.grid_match_error for r in finite), default=0.0),
        "degenerate_orbits": len(degenerate),
        "all_ok": all(r.ok for r in records),
    }
    config = {"alpha": list(av.alpha), "trials": args.trials, "seed": args.seed, "grid": args.grid,
              "threads": thread_count()}
    _write_json(_report("key-lemma", config, result), args.report)
    if degenerate:
        raise IntegrityError(f"{len(degenerate)} orbits in the open polytope had an identically vanishing bracket")
    return 0


def cmd_walk(args) -> int:
    av = construct.AngleVector(tuple(args.alpha))
    families = ("b",) if args.gens == "b-only" else ("b", "d")
    cfg = ergodics.WalkConfig(av, args.steps, args.seed, tuple(dynamics.generators(av.n, families)), args.thin)
    k = av.n - 3
    with open(args.emit, "w", newline="") if args.emit else _stdout() as fh:
        writer = csv.writer(fh)
        writer.writerow(["step"] + [f"x_{j}" for j in range(1, k + 1)])
        for sample in ergodics.random_walk(cfg):
            writer.writerow([sample.step] + [_fmt(v) for v in sample.x])
    return 0


class _stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        return False


def cmd_dh_test(args) -> int:
    av = construct.AngleVector(tuple(args.alpha))
    try:
        with open(args.moments, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ValidationError(f"cannot read {args.moments}: {exc}") from exc
    x = np.array([[float(v) for v in row[1:]] for row in rows[1:]], dtype=float)
    report = ergodics.dh_test(x, av, args.threshold)
    config = {"moments": args.moments, "alpha": list(av.alpha), "threshold": args.threshold}
    _write_json(_report("dh-test", config, report.to_dict()), args.report)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistlab", description="Twist flows on Deroin-Tholozan representations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a representation from (alpha, x, t)")
    p.add_argument("--alpha", type=_floats, required=True, help="peripheral angles in radians, comma separated")
    p.add_argument("--x", type=_floats, help="action coordinates theta_{b_i}; random when omitted")
    p.add_argument("--twists", type=_floats, help="twist times t_i; a single value is broadcast")
    p.add_argument("--seed", type=int, help="seed for omitted coordinates")
    p.add_argument("--out", help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("volume", help="relative Euler class and volume of a representation")
    p.add_argument("--rep", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("flow", help="apply a twist flow for time t")
    p.add_argument("--rep", required=True)
    p.add_argument("--curve", required=True, help="b<i> or d<i>")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("twist", help="apply a word of Dehn twists, e.g. 'b1^3 d2^-1'")
    p.add_argument("--rep", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("bracket-scan", help="zeros of {theta_b, theta_d} along a b-orbit")
    p.add_argument("--rep", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--grid", type=int, default=bracket.GRID)
    p.add_argument("--csv", help="write t, residual, fd_bracket on the grid")
    p.add_argument("--report")
    p.set_defaults(func=cmd_bracket_scan)

    p = sub.add_parser("key-lemma", help="zero-count campaign over random representations")
    p.add_argument("--alpha", type=_floats, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=bracket.GRID)
    p.add_argument("--report")
    p.set_defaults(func=cmd_key_lemma)

    p = sub.add_parser("walk", help="random walk of Dehn twists, emitting moment-map samples")
    p.add_argument("--alpha", type=_floats, required=True)
    p.add_argument("--steps", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--thin", type=int, default=10)
    p.add_argument("--gens", choices=("all", "b-only"), default="all")
    p.add_argument("--emit", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("dh-test", help="KS distance of moment samples to the uniform polytope law")
    p.add_argument("--moments", required=True)
    p.add_argument("--alpha", type=_floats, required=True)
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--report")
    p.set_defaults(func=cmd_dh_test)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"twistlab: error: {exc}", file=sys.stderr)
        return 2
    except (IntegrityError, TwistlabError) as exc:
        print(f"twistlab: integrity failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
