"""Command line: ``splitep {generate,run,compare,counterexample,selfcheck}``.

Exit codes: 0 success or PASS, 1 invariant violation or FAIL, 3 refusal
(incompatible algorithm/instance, malformed input).
"""
from __future__ import annotations

import argparse
import json
import sys

from .counterexamples import FAIL
from .harness import ALGORITHMS, RefusalError, RunConfig, cmd_compare, cmd_counterexample, \
    cmd_run, selfcheck
from .instances import VARIANTS, InstanceSpec, generate_instance
from .serialization import InstanceFormatError, dump_instance

EXIT_VIOLATION = 1
EXIT_REFUSAL = 3


def _add_instance_args(p, required=False):
    g = p.add_argument_group("instance")
    g.add_argument("--instance", metavar="FILE", help="instance JSON written by 'generate'")
    g.add_argument("--m", type=int, help="dimension of the x-space")
    g.add_argument("--k", type=int, help="dimension of the image space")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--variant", choices=VARIANTS, default="general")
    g.add_argument("--n-f", type=int, default=1, help="components on C (variant scep)")
    g.add_argument("--n-F", type=int, default=1, help="components on Q (variant scep)")


def _spec_from_args(a):
    if a.m is None or a.k is None:
        raise RefusalError("give --instance FILE or both --m and --k")
    return InstanceSpec(a.m, a.k, a.seed, a.variant, a.n_f, a.n_F)


def _add_run_args(p):
    p.add_argument("--beta-exponent", type=float, default=0.7,
                   help="s in beta_n = 1/(n+1)^s (default 0.7)")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=None, help="default 1/||A||^2")
    p.add_argument("--r", type=float, default=1.0, help="resolvent parameter for pspm")
    p.add_argument("--max-iter", type=int, default=400)
    p.add_argument("--d-tol", type=float, default=None)
    p.add_argument("--residual-tol", type=float, default=None)
    p.add_argument("--no-timing", action="store_true",
                   help="leave elapsed_ms empty so repeated runs give identical bytes")


def _config(a, algo):
    if a.instance is not None:
        src = {"instance_path": a.instance}
    else:
        src = {"instance": _spec_from_args(a).to_dict()}
    return RunConfig(algo=algo, beta_exponent=a.beta_exponent, rho=a.rho, mu=a.mu, r=a.r,
                     max_iter=a.max_iter, d_tol=a.d_tol, residual_tol=a.residual_tol,
                     timing=not a.no_timing, **src)


def _emit(obj, path):
    text = json.dumps(obj, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def build_parser():
    p = argparse.ArgumentParser(prog="splitep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded random instance to JSON")
    _add_instance_args(g)
    g.add_argument("--out", required=True)

    r = sub.add_parser("run", help="run one algorithm, write a CSV trace and a JSON summary")
    _add_instance_args(r)
    r.add_argument("--config", metavar="FILE", help="RunConfig JSON (overrides other flags)")
    r.add_argument("--algo", choices=ALGORITHMS, default="pm")
    _add_run_args(r)
    r.add_argument("--out", metavar="CSV", help="trace CSV path")
    r.add_argument("--summary", metavar="JSON", help="summary path (default stdout)")
    r.add_argument("--store-x", metavar="CSV", help="also write every iterate x_n")
    r.add_argument("--no-check", action="store_true",
                   help="do not fail the exit code on growth-check violations")

    c = sub.add_parser("compare", help="run several algorithms on one instance")
    _add_instance_args(c)
    c.add_argument("--config", metavar="FILE", action="append",
                   help="RunConfig JSON; repeat for each run (must share one instance)")
    c.add_argument("--algos", default="pm,pspm", help="comma list when no --config is given")
    _add_run_args(c)
    c.add_argument("--threshold", type=float, default=1e-2)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", metavar="CSV")
    c.add_argument("--summary", metavar="JSON")

    x = sub.add_parser("counterexample", help="reproduce a divergence example")
    x.add_argument("name", choices=("rotation", "empty_solution"))
    x.add_argument("--steps", type=int, default=None,
                   help="default 500 for rotation, 1000 for empty_solution")
    x.add_argument("--x0", type=lambda s: [float(v) for v in s.split(",")], default=None,
                   help="start point 'a,b'")
    x.add_argument("--out", metavar="CSV")

    s = sub.add_parser("selfcheck", help="run the invariant suite")
    s.add_argument("--full", action="store_true")
    return p


def main(argv=None):
    a = build_parser().parse_args(argv)
    try:
        return _dispatch(a)
    except (RefusalError, InstanceFormatError, ValueError, OSError) as exc:
        print(f"splitep: error: {exc}", file=sys.stderr)
        return EXIT_REFUSAL


def _dispatch(a):
    if a.command == "generate":
        if a.instance is not None:
            raise RefusalError("generate builds a new instance; --instance is not accepted")
        dump_instance(generate_instance(_spec_from_args(a)), a.out)
        return 0

    if a.command == "run":
        if a.config:
            cfg = RunConfig.from_file(a.config)
            if a.no_timing:
                cfg.timing = False
        else:
            cfg = _config(a, a.algo)
        cfg.store_x = bool(a.store_x)
        summary, _ = cmd_run(cfg, a.out, None, a.store_x)
        _emit(summary, a.summary)
        if not a.no_check and cfg.check_invariants and summary["invariant_violations"]:
            return EXIT_VIOLATION
        return 0

    if a.command == "compare":
        if a.config:
            cfgs = [RunConfig.from_file(p) for p in a.config]
        else:
            cfgs = [_config(a, algo.strip()) for algo in a.algos.split(",") if algo.strip()]
        summary, _ = cmd_compare(cfgs, a.threshold, a.out, a.jobs)
        _emit(summary, a.summary)
        return EXIT_VIOLATION if any(r["invariant_violations"] for r in summary["runs"]) else 0

    if a.command == "counterexample":
        steps = a.steps or (500 if a.name == "rotation" else 1000)
        verdict, res = cmd_counterexample(a.name, steps, a.x0, a.out)
        print(json.dumps({"name": a.name, "steps": steps, "verdict": verdict,
                          "failures": res.failures[:10], **res.extra}, indent=2))
        return EXIT_VIOLATION if verdict == FAIL else 0

    if a.command == "selfcheck":
        return 0 if selfcheck(quick=not a.full) else EXIT_VIOLATION
    raise AssertionError(a.command)


if __name__ == "__main__":
    sys.exit(main())
