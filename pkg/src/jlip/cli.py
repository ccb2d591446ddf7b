"""Command-line interface: ``jlip metric|apply|sup|trace|verify``.

Exit codes: 0 success, 2 usage, 3 domain violation, 4 certificate violation
(or any failed verification check).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import distortion as ds
from . import verify as vf
from .domains import HalfSpace, UnitBall, is_punctured, j_metric, rho
from .errors import DomainViolation, ParameterError, PoleError
from .quasihyperbolic import quasihyperbolic_estimate
from .sampling import log_ladder
from .specs import SpecError, parse_domain, parse_map, parse_vector

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CERT = 0, 2, 3, 4
SEED_MAX = 2**64 - 1


class UsageError(Exception):
    pass


# output ---------------------------------------------------------------------

def fmt(v) -> str:
    """Floats with 17 significant digits so they round-trip exactly."""
    return format(float(v), ".17g")


def _dump(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return _dump(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, complex):
        return _dump([obj.real, obj.imag])
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _emit(args, payload, rows=None, header=None):
    if args.format == "csv":
        text = _csv(rows or [], header or [])
    else:
        if not args.no_timestamp:
            payload = {**payload, "timestamp": datetime.now(timezone.utc).isoformat()}
        text = _dump(payload) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _points(text, dim=None):
    pts = [parse_vector(p) for p in text.split(";") if p.strip()]
    if not pts or len({p.size for p in pts}) != 1:
        raise SpecError(f"bad point list {text!r}")
    out = np.array(pts)
    if dim is not None and out.shape[1] != dim:
        raise SpecError(f"points must have {dim} coordinates")
    return out


# commands -------------------------------------------------------------------

def cmd_metric(args):
    G = parse_domain(args.domain)
    x = _points(args.x, G.dim)[0]
    y = _points(args.y, G.dim)[0]
    out = {"domain": G.spec(), "x": x, "y": y, "j": j_metric(G, x, y)}
    if args.all:
        base = G.base if is_punctured(G) else G
        if isinstance(base, (UnitBall, HalfSpace)) and not is_punctured(G):
            out["rho"] = rho(G, x, y)
        est = quasihyperbolic_estimate(G, x, y, resolution=args.resolution)
        out.update(k_est=est.value, k_upper=est.upper, k_tolerance=est.tol,
                   k_error_estimate=est.error_estimate)
    rows = [(k, v) for k, v in out.items() if isinstance(v, float)]
    _emit(args, out, rows, ["quantity", "value"])
    return EXIT_OK


def cmd_apply(args):
    m = parse_map(args.map)
    x = _points(args.x, m.dim)
    w = m.image(x)
    if not np.all(m.target.contains(w)):
        raise DomainViolation(f"image outside {m.target.spec()}")
    _emit(args, {"map": args.map, "x": x, "image": w},
          [tuple(a) + tuple(b) for a, b in zip(x, w)],
          [f"x{i}" for i in range(m.dim)] + [f"f{i}" for i in range(m.dim)])
    return EXIT_OK


def report_dict(spec, rep: ds.DistortionReport, trace_rows=False):
    c = rep.certificate
    fams = {}
    for name, tr in rep.families.items():
        fams[name] = {"role": tr["role"], "expected": tr["expected"],
                      "final_ratio": tr["ratio"][tr["final"]]}
        if trace_rows:
            fams[name]["t"] = tr["t"]
            fams[name]["ratio"] = tr["ratio"]
    return {
        "map": spec,
        "sup_estimate": rep.sup_estimate,
        "witness": [rep.witness[0], rep.witness[1]],
        "witness_phase": rep.witness_phase,
        "inf_estimate": rep.inf_estimate,
        "inf_witness": [rep.inf_witness[0], rep.inf_witness[1]],
        "samples": rep.samples,
        "refinement_iterations": rep.refinement_iterations,
        "seed": rep.seed,
        "bounds": {"lower": None if c is None else c.lower,
                   "upper": None if c is None else c.upper,
                   "source": None if c is None else c.source},
        "certified": rep.certified,
        "families": fams,
    }


def cmd_sup(args):
    m = parse_map(args.map)
    if args.samples < ds.MIN_BUDGET:
        raise UsageError(f"--samples must be at least {ds.MIN_BUDGET}")
    rep = ds.sup_estimate(m, args.samples, args.seed, args.threads)
    out = report_dict(args.map, rep, trace_rows=args.traces)
    if m.kind == "conj34":
        c = ds.conjectured_constant(m.params["a"])
        out["conjectured"] = c
        out["gap"] = c - rep.sup_estimate
    rows = [(name, t, r) for name, tr in rep.families.items()
            for t, r in zip(tr["t"], tr["ratio"])]
    _emit(args, out, rows, ["family", "t", "ratio"])
    return EXIT_OK if rep.certified else EXIT_CERT


def cmd_trace(args):
    m = parse_map(args.map)
    fams = ds.families_for(m)
    if args.family:
        fams = [f for f in fams if f.name == args.family]
        if not fams:
            raise UsageError(f"no family {args.family!r} for {args.map}")
    payload = {"map": args.map, "families": {}}
    rows = []
    for fam in fams:
        if args.t:
            ladder = parse_vector(args.t)
        else:
            ladder = log_ladder(*fam.t_range, per_decade=args.per_decade)
        t, r = ds.family_trace(m, fam, ladder)
        payload["families"][fam.name] = {"expected": fam.expected, "role": fam.role,
                                         "t": t, "ratio": r}
        rows.extend((fam.name, a, b) for a, b in zip(t, r))
    _emit(args, payload, rows, ["family", "t", "ratio"])
    return EXIT_OK


def cmd_verify(args):
    rows = []
    try:
        checks = vf.run(args.suite, args.samples, args.seed, args.threads, rows=rows)
    except KeyError:
        raise UsageError(f"unknown suite {args.suite!r}") from None
    ok = all(c.passed for c in checks)
    if args.format == "csv":
        if args.traces:
            _emit(args, {}, rows, ["family", "t", "ratio"])
        else:
            _emit(args, {}, [(c.suite, c.name, "pass" if c.passed else "fail",
                              "" if c.value is None else c.value, c.detail) for c in checks],
                  ["suite", "check", "result", "value", "detail"])
    else:
        payload = {"suite": args.suite, "seed": args.seed, "samples": args.samples,
                   "passed": ok, "failed": sum(not c.passed for c in checks),
                   "checks": [{"suite": c.suite, "name": c.name, "passed": c.passed,
                               "value": c.value, "detail": c.detail} for c in checks]}
        if args.traces:
            payload["traces"] = [list(r) for r in rows]
        _emit(args, payload)
    if not args.quiet:
        for c in checks:
            v = "" if c.value is None else f" ({fmt(c.value)})"
            print(f"{'PASS' if c.passed else 'FAIL'} [{c.suite}] {c.name}{v}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_CERT


# argument parsing -----------------------------------------------------------

def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer: {text!r}") from None
    if not 0 <= v <= SEED_MAX:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _default_seed():
    env = os.environ.get("JLIP_SEED")
    return 0 if env is None else env


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=_default_seed(),
                        help="64-bit unsigned seed (default: $JLIP_SEED or 0)")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report to this path")
    common.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp so identical runs give identical bytes")

    p = argparse.ArgumentParser(prog="jlip", description="Distance-ratio metric distortion toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("metric", parents=[common], help="j (and rho, k) between two points")
    s.add_argument("--domain", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--all", action="store_true", help="also report rho and the k estimate")
    s.add_argument("--resolution", type=_positive, default=64)
    s.set_defaults(func=cmd_metric)

    s = sub.add_parser("apply", parents=[common], help="images of points under a map")
    s.add_argument("--map", required=True)
    s.add_argument("--x", required=True, help="points separated by ';'")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("sup", parents=[common], help="estimate the supremum of the ratio")
    s.add_argument("--map", required=True)
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--traces", action="store_true", help="include full family traces")
    s.set_defaults(func=cmd_sup)

    s = sub.add_parser("trace", parents=[common], help="ratios along extremal families")
    s.add_argument("--map", required=True)
    s.add_argument("--family")
    s.add_argument("--t", help="comma-separated parameters (default: log ladder)")
    s.add_argument("--per-decade", type=_positive, default=40)
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("verify", parents=[common], help="run the verification suites")
    s.add_argument("--suite", default="all", choices=["all", *vf.SUITES])
    s.add_argument("--samples", type=_positive, default=10_000)
    s.add_argument("--traces", action="store_true", help="emit family traces")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if isinstance(args.seed, str):
            args.seed = _seed(args.seed)
    except argparse.ArgumentTypeError as e:
        print(f"jlip: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (SpecError, UsageError) as e:
        print(f"jlip: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainViolation, PoleError) as e:
        print(f"jlip: domain violation: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ParameterError as e:
        print(f"jlip: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
