"""Runs showing what goes wrong when the convergence hypotheses fail.

``rotation_counterexample_run``: an antisymmetric bifunction (not
paramonotone). Every projection-method step multiplies ``||x||^2`` by
``a^2 + b^2 > 1``, so nonzero starts never reach the solution at the origin.

``empty_solution_counterexample_run``: disjoint ``C`` and ``Q``. The first
coordinate of the iterates grows by more than ``1/(8 x1^2)`` per step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .algorithms import pm_step
from .instances import make_empty_solution_instance, make_rotation_instance
from .schedule import ParamSchedule

PASS, FAIL, NOT_APPLICABLE = "PASS", "FAIL", "NOT-APPLICABLE"


@dataclass
class CounterexampleResult:
    name: str
    rows: List[dict] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    verdict: str = PASS
    extra: dict = field(default_factory=dict)

    def columns(self):
        return list(self.rows[0]) if self.rows else ["n"]


def rotation_counterexample_run(x0=(1.0, 0.0), sched=None, n_steps=500, agree_tol=1e-10):
    """Projection method on the rotation instance, cross-checked in closed form.

    The closed-form recursion uses ``||w_n|| = ||x_n||`` and ``||g_n|| = ||z_n||``
    to get the step sizes, then
    ``x_{n+1} = (a x1 + b x2, -b x1 + a x2)`` with ``a = 1 - mu alpha gamma``,
    ``b = mu gamma + alpha``. Both trajectories must agree to ``agree_tol``
    and ``||x_n||`` must increase strictly at every step.
    """
    inst = make_rotation_instance()
    if sched is None:
        sched = ParamSchedule.power_law(0.7, inst.norm_A())
    x = np.array(x0, dtype=float)
    res = CounterexampleResult("rotation")
    if not np.any(x):
        res.verdict = NOT_APPLICABLE
        res.extra["reason"] = "x0 is the solution; the iterates stay there"
    xc = x.copy()
    for n in range(n_steps):
        x_next, info = pm_step(inst, x, n, sched)
        rho, beta, mu = info.rho, info.beta, info.mu
        gamma = beta / max(rho, math.hypot(xc[0], xc[1]))
        zc = np.array([xc[0] + mu * gamma * xc[1], xc[1] - mu * gamma * xc[0]])
        alpha = beta / max(rho, math.hypot(zc[0], zc[1]))
        a = 1.0 - mu * alpha * gamma
        b = mu * gamma + alpha
        xc_next = np.array([a * xc[0] + b * xc[1], -b * xc[0] + a * xc[1]])
        growth = a * a + b * b
        expanded = 1.0 + (mu * alpha * gamma) ** 2 + (mu * gamma) ** 2 + alpha ** 2
        norm, norm_next = float(np.linalg.norm(x)), float(np.linalg.norm(x_next))
        gap = float(np.max(np.abs(x_next - xc_next)))
        res.rows.append({"n": n, "x1": float(x[0]), "x2": float(x[1]), "norm_x": norm,
                         "gamma_n": info.gamma, "alpha_n": info.alpha,
                         "growth_factor": growth, "closed_form_gap": gap})
        if res.verdict != NOT_APPLICABLE:
            if not norm_next > norm:
                res.failures.append(f"n={n}: ||x_n+1|| = {norm_next!r} <= ||x_n|| = {norm!r}")
            if not growth > 1.0:
                res.failures.append(f"n={n}: a^2 + b^2 = {growth!r} <= 1")
            if abs(growth - expanded) > 1e-12 * expanded:
                res.failures.append(f"n={n}: a^2 + b^2 = {growth!r} != expansion {expanded!r}")
            if gap > agree_tol:
                res.failures.append(f"n={n}: closed form differs by {gap:.3e}")
        elif np.any(x_next):
            res.failures.append(f"n={n}: left the solution")
        x, xc = x_next, xc_next
    res.extra["x_final"] = x.tolist()
    if res.failures:
        res.verdict = FAIL
    return res


def empty_solution_counterexample_run(x0=(1.0, 0.0), n_steps=1000, sched=None):
    """Projection method on the disjoint half-line / epigraph instance.

    Checks at every step ``u1 > x1 + 1/(4 x1^2)``,
    ``x1_next > x1 + 1/(8 x1^2)`` and ``||x_next|| > ||x||`` with strict float
    comparisons. ``extra['doubled']`` records whether ``x1`` reached twice its
    start.
    """
    x = np.array(x0, dtype=float)
    if x.shape != (2,) or x[1] != 0.0 or x[0] < 1.0:
        raise ValueError("x0 must be (x1, 0) with x1 >= 1")
    inst = make_empty_solution_instance()
    if sched is None:
        sched = ParamSchedule.power_law(0.7, 1.0, mu=0.5)
    res = CounterexampleResult("empty_solution")
    for n in range(n_steps):
        x_next, info = pm_step(inst, x, n, sched)
        x1, u1, x1n = float(x[0]), float(info.u[0]), float(x_next[0])
        res.rows.append({"n": n, "x1": x1, "u1": u1, "norm_x": float(np.linalg.norm(x)),
                         "bound_u": x1 + 1.0 / (4.0 * x1 * x1),
                         "bound_x": x1 + 1.0 / (8.0 * x1 * x1)})
        if not u1 > x1 + 1.0 / (4.0 * x1 * x1):
            res.failures.append(f"n={n}: u1 = {u1!r} violates the 1/(4 x1^2) bound")
        if not x1n > x1 + 1.0 / (8.0 * x1 * x1):
            res.failures.append(f"n={n}: x1_next = {x1n!r} violates the 1/(8 x1^2) bound")
        if not np.linalg.norm(x_next) > np.linalg.norm(x):
            res.failures.append(f"n={n}: ||x|| did not increase")
        x = x_next
    res.extra["x_final"] = x.tolist()
    res.extra["doubled"] = bool(x[0] >= 2.0 * x0[0])
    if res.failures:
        res.verdict = FAIL
    return res
