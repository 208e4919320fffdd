"""Benchmark harness behind the command line: configs, runs, comparisons."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import algorithms
from .bifunctions import QuadraticBifunction
from .counterexamples import (NOT_APPLICABLE, PASS, empty_solution_counterexample_run,
                              rotation_counterexample_run)
from .instances import InstanceSpec, generate_instance
from .problem import ScepInstance, SepInstance
from .schedule import ParamSchedule
from .serialization import instance_fingerprint, load_instance, write_rows_csv, write_trace_csv
from .trace import FEJER_TOL, StopRule

ALGORITHMS = ("pm", "pspm", "ppsm", "scep")


class RefusalError(ValueError):
    """The requested run is not meaningful for the given instance or configuration."""


@dataclass
class RunConfig:
    """Everything needed to reproduce one solver run.

    Exactly one of ``instance`` (an :class:`InstanceSpec` dict) and
    ``instance_path`` must be set.
    """

    instance: Optional[dict] = None
    instance_path: Optional[str] = None
    algo: str = "pm"
    beta_exponent: float = 0.7
    rho: float = 1.0
    mu: Optional[float] = None
    r: float = 1.0
    max_iter: int = 400
    d_tol: Optional[float] = None
    residual_tol: Optional[float] = None
    x0: Optional[list] = None
    timing: bool = True
    check_invariants: bool = True
    store_x: bool = False

    def __post_init__(self):
        if (self.instance is None) == (self.instance_path is None):
            raise RefusalError("give exactly one of an inline instance spec or an instance file")
        if self.algo not in ALGORITHMS:
            raise RefusalError(f"unknown algorithm {self.algo!r}; choose from {ALGORITHMS}")

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise RefusalError(f"unknown config field(s): {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return asdict(self)

    def load_instance(self):
        if self.instance_path is not None:
            return load_instance(self.instance_path)
        return generate_instance(InstanceSpec.from_dict(self.instance))

    def stop_rule(self):
        return StopRule(self.max_iter, self.d_tol, self.residual_tol)

    def schedule(self, inst):
        nA = inst.norm_A()
        if self.algo == "pspm":
            return ParamSchedule.pspm_power_law(self.beta_exponent, nA, self.rho, self.mu)
        return ParamSchedule.power_law(self.beta_exponent, nA, self.rho, self.mu)


def check_compatibility(algo, inst):
    """Raise :class:`RefusalError` if ``algo`` cannot run on ``inst``."""
    n_f, n_F = len(inst.f_list), len(inst.F_list)
    if algo in ("pm", "pspm") and (n_f, n_F) != (1, 1):
        raise RefusalError(f"{algo} needs a single bifunction on each side; "
                           f"instance has {n_f} and {n_F} (use ppsm or scep)")
    if algo == "pspm":
        F = inst.F_list[0]
        if not isinstance(F, QuadraticBifunction) or not F.resolvent_friendly:
            raise RefusalError("pspm needs the resolvent of F, which is only available for "
                               "quadratic F with equal coefficient matrices "
                               "(variant 'resolvent_friendly')")
        if not hasattr(inst.Q, "lo"):
            raise RefusalError("pspm needs a box Q for its resolvent")


def _as_sep(inst):
    if isinstance(inst, ScepInstance):
        return SepInstance(inst.C, inst.Q, inst.A, inst.f_list[0], inst.F_list[0],
                           inst.known_solution, dict(inst.meta))
    return inst


def execute(cfg: RunConfig, inst=None):
    """Run ``cfg`` (on ``inst`` if given) and return the trace."""
    inst = cfg.load_instance() if inst is None else inst
    check_compatibility(cfg.algo, inst)
    x0 = np.ones(inst.C.dim) if cfg.x0 is None else np.array(cfg.x0, dtype=float)
    if not inst.C.contains(x0):
        raise RefusalError("x0 must lie in C")
    sched = cfg.schedule(inst)
    stop = cfg.stop_rule()
    if cfg.d_tol is not None and inst.known_solution is None:
        raise RefusalError("d_tol needs an instance with a known solution")
    if cfg.algo == "pm":
        tr = algorithms.run_pm(_as_sep(inst), x0, sched, stop, cfg.store_x)
    elif cfg.algo == "pspm":
        tr = algorithms.run_pspm(_as_sep(inst), x0, sched, stop, cfg.store_x, cfg.r)
    elif cfg.algo == "ppsm":
        tr = algorithms.run_ppsm(inst, x0, sched, stop, cfg.store_x)
    else:
        tr = algorithms.run_scep(inst, x0, sched, stop, cfg.store_x)
    tr.meta["seed"] = (inst.meta.get("spec") or {}).get("seed")
    return tr


def summarize(cfg: RunConfig, trace) -> dict:
    last = trace.rows[-1] if trace.rows else None
    return {
        "algorithm": trace.algorithm,
        "iterations": len(trace),
        "stop_reason": trace.stop_reason,
        "D_final": trace.D_final,
        "residual_split_final": None if last is None else last.residual_split,
        "residual_step_final": None if last is None else last.residual_step,
        "wall_clock_s": (last.elapsed_ms / 1e3 if last else 0.0) if cfg.timing else None,
        "invariant_violations": trace.violations,
        "fejer_tol": FEJER_TOL,
        "schedule": trace.schedule,
        "seed": trace.meta.get("seed"),
    }


def cmd_run(cfg: RunConfig, csv_path=None, summary_path=None, iterates_path=None, inst=None):
    """Run one config, write the trace CSV and return the summary dict."""
    trace = execute(cfg, inst)
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            write_trace_csv(trace, fh, cfg.timing)
    if iterates_path is not None and cfg.store_x:
        np.savetxt(iterates_path, np.array([r.x_n for r in trace.rows]), delimiter=",")
    summary = summarize(cfg, trace)
    if summary_path is not None:
        with open(summary_path, "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    return summary, trace


def cmd_compare(configs, threshold=1e-2, csv_path=None, jobs=1):
    """Run several configs on one shared instance.

    Returns ``(summary, traces)``. The combined CSV has one ``D_n`` column per
    algorithm, aligned on ``n``; runs that stopped early leave blanks.
    Rankings use iterations to ``threshold`` first, wall-clock second.
    """
    if not configs:
        raise RefusalError("nothing to compare")
    insts = [c.load_instance() for c in configs]
    prints = {instance_fingerprint(i) for i in insts}
    if len(prints) != 1:
        raise RefusalError("compared configs must share one instance")
    inst = insts[0]
    if inst.known_solution is None:
        raise RefusalError("comparison needs a known solution")
    for c in configs:
        check_compatibility(c.algo, inst)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            traces = list(ex.map(lambda c: execute(c, inst), configs))
    else:
        traces = [execute(c, inst) for c in configs]

    labels = []
    for c in configs:
        label = c.algo
        while label in labels:
            label += "'"
        labels.append(label)
    per = []
    for label, c, tr in zip(labels, configs, traces):
        s = summarize(c, tr)
        s["label"] = label
        s["iterations_to_threshold"] = tr.iterations_to(threshold)
        s["ms_to_threshold"] = tr.time_to(threshold) if c.timing else None
        s["reached_threshold"] = s["iterations_to_threshold"] is not None
        per.append(s)

    def key(s):
        it = s["iterations_to_threshold"]
        ms = s["ms_to_threshold"]
        return (it is None, it if it is not None else 0, ms if ms is not None else 0.0)

    ranking = [s["label"] for s in sorted(per, key=key)]
    summary = {"threshold": threshold, "runs": per, "ranking": ranking,
               "instance": instance_fingerprint(inst)}
    if csv_path is not None:
        n_max = max(len(tr.D) for tr in traces)
        rows = []
        for n in range(n_max):
            row = {"n": n}
            for label, tr in zip(labels, traces):
                D = tr.D
                row[f"D_n[{label}]"] = float(D[n]) if n < len(D) else None
            rows.append(row)
        with open(csv_path, "w", newline="") as fh:
            write_rows_csv(rows, fh, ["n"] + [f"D_n[{lb}]" for lb in labels])
    return summary, traces


def cmd_counterexample(name, steps, x0=None, csv_path=None):
    """Run a named counterexample and return ``(verdict, result)``."""
    if steps < 1:
        raise RefusalError("steps must be >= 1")
    if name == "rotation":
        res = rotation_counterexample_run((1.0, 0.0) if x0 is None else x0, n_steps=steps)
    elif name == "empty_solution":
        res = empty_solution_counterexample_run((1.0, 0.0) if x0 is None else x0, n_steps=steps)
    else:
        raise RefusalError(f"unknown counterexample {name!r}")
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            write_rows_csv(res.rows, fh)
    return res.verdict, res


def selfcheck(quick=True, out=print):
    """Small invariant suite. Prints one line per check; returns True if all pass."""
    results = []

    def report(name, ok, detail=""):
        results.append(ok)
        out(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))

    sizes = [(5, 3), (10, 6)] if quick else [(5, 3), (10, 6), (30, 20)]
    for seed, (m, k) in enumerate(sizes):
        inst = generate_instance(InstanceSpec(m, k, seed))
        for s in (0.51, 0.7, 1.0):
            sched = ParamSchedule.power_law(s, inst.norm_A())
            tr = algorithms.run_pm(inst, np.ones(m), sched, StopRule(200))
            report(f"fejer pm m={m} k={k} seed={seed} s={s}", tr.violations == 0,
                   f"{tr.violations} violations, D_final={tr.D_final:.3e}")
        sched = ParamSchedule.power_law(0.7, inst.norm_A())
        a = algorithms.run_pm(inst, np.ones(m), sched, StopRule(100))
        b = algorithms.run_ppsm(inst, np.ones(m), sched, StopRule(100))
        c = algorithms.run_scep(inst, np.ones(m), sched, StopRule(100), theta=[1.0], tau=[1.0])
        same = (np.array_equal(a.x_final, b.x_final) and np.array_equal(a.x_final, c.x_final)
                and np.array_equal(a.D, b.D) and np.array_equal(a.D, c.D))
        report(f"parallel variants reduce to pm (seed={seed})", same)
    rot = rotation_counterexample_run((1.0, 0.0), n_steps=200 if quick else 500)
    report("rotation counterexample", rot.verdict == PASS, "; ".join(rot.failures[:2]))
    emp = empty_solution_counterexample_run((1.0, 0.0), n_steps=300 if quick else 1000)
    report("empty-solution counterexample", emp.verdict == PASS, "; ".join(emp.failures[:2]))
    return all(results)


__all__ = ["ALGORITHMS", "NOT_APPLICABLE", "PASS", "RefusalError", "RunConfig",
           "check_compatibility", "cmd_compare", "cmd_counterexample", "cmd_run", "execute",
           "selfcheck", "summarize"]
