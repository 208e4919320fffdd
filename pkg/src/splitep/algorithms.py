"""Iterative solvers for split equilibrium problems.

``pm_step``
    Projection method: subgradient-projection step for ``F`` on ``Q``, a
    split step pulling ``A x`` toward it, then a subgradient-projection step
    for ``f`` on ``C``. Uses projections only.
``pspm_step``
    Baseline projected subgradient-proximal method, which needs the resolvent
    of ``F``.
``ppsm_step`` / ``scep_step``
    Parallel versions for sums of bifunctions and for common solutions of
    several bifunctions.

The ``run_*`` drivers iterate a step under a :class:`~splitep.trace.StopRule`
and record a :class:`~splitep.trace.IterateTrace`. When the instance has a
known solution each row also carries the one-step growth check
``||x_{n+1} - x*||^2 <= ||x_n - x*||^2 + (1 + mu_n) delta_n``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bifunctions import QuadraticBifunction, diagonal_subgradient, eval_bifunction
from .problem import ScepInstance, SepInstance
from .qp import solve_resolvent
from .schedule import ParamSchedule, check_weights
from .trace import IterateTrace, StopRule, TraceRow


class NumericalError(ArithmeticError):
    """A non-finite value appeared in the named stage of a step."""


class IncompatibleInstanceError(ValueError):
    """The chosen algorithm cannot run on the given instance."""


@dataclass
class StepInfo:
    u: np.ndarray
    y: np.ndarray
    z: np.ndarray
    gamma: Optional[float]
    alpha: float
    residual_split: float
    residual_step: float
    rho: float
    beta: float
    eps: float
    mu: float


def _finite(v, stage):
    if not np.all(np.isfinite(v)):
        raise NumericalError(f"non-finite value in {stage}")
    return v


def _norm(v):
    return float(np.linalg.norm(v))


def _check_start(inst, x, tol=1e-10):
    if not inst.C.contains(x, tol):
        raise ValueError("iterate must lie in C")


def _split_step(inst, x, Ax, y, mu):
    return _finite(inst.C.project(x + mu * (inst.A.T @ (y - Ax))), "z_n")


def pm_step(inst: SepInstance, x_n, n, sched: ParamSchedule):
    """One iteration of the projection method. Returns ``(x_next, StepInfo)``."""
    rho, beta, eps, mu = sched.at(n)
    x = np.asarray(x_n, dtype=float)
    _check_start(inst, x)
    Ax = inst.A @ x
    u = _finite(inst.Q.project(Ax), "u_n")
    w = _finite(diagonal_subgradient(inst.F, u, eps), "w_n")
    gamma = beta / max(rho, _norm(w))
    y = _finite(inst.Q.project(u - gamma * w), "y_n")
    z = _split_step(inst, x, Ax, y, mu)
    g = _finite(diagonal_subgradient(inst.f, z, eps), "g_n")
    alpha = beta / max(rho, _norm(g))
    x_next = _finite(inst.C.project(z - alpha * g), "x_n+1")
    return x_next, StepInfo(u, y, z, gamma, alpha, _norm(u - Ax), _norm(x_next - z),
                            rho, beta, eps, mu)


def ppsm_step(inst: ScepInstance, x_n, n, sched: ParamSchedule):
    """Parallel projection step for ``f = sum f_i`` and ``F = sum F_j``.

    One shared ``gamma_n`` (largest ``||w^j||``) and one shared ``alpha_n``
    (largest ``||g^i||``); component results are averaged.
    """
    rho, beta, eps, mu = sched.at(n)
    x = np.asarray(x_n, dtype=float)
    _check_start(inst, x)
    Ax = inst.A @ x
    u = _finite(inst.Q.project(Ax), "u_n")
    ws = [_finite(diagonal_subgradient(F, u, eps), "w_n") for F in inst.F_list]
    gamma = beta / max(rho, *(_norm(w) for w in ws))
    ys = [inst.Q.project(u - gamma * w) for w in ws]
    y = _finite(np.sum(ys, axis=0) / len(ys), "y_n")
    z = _split_step(inst, x, Ax, y, mu)
    gs = [_finite(diagonal_subgradient(f, z, eps), "g_n") for f in inst.f_list]
    alpha = beta / max(rho, *(_norm(g) for g in gs))
    xs = [inst.C.project(z - alpha * g) for g in gs]
    x_next = _finite(np.sum(xs, axis=0) / len(xs), "x_n+1")
    return x_next, StepInfo(u, y, z, gamma, alpha, _norm(u - Ax), _norm(x_next - z),
                            rho, beta, eps, mu)


def scep_step(inst: ScepInstance, x_n, n, sched: ParamSchedule, theta=None, tau=None):
    """Parallel step for common solutions, with per-component step sizes.

    ``theta`` weights the ``F_j`` results, ``tau`` the ``f_i`` results; both
    default to uniform. The recorded ``gamma``/``alpha`` are the largest
    component step sizes.
    """
    M, N = len(inst.F_list), len(inst.f_list)
    theta = check_weights([1.0 / M] * M if theta is None else theta, "theta")
    tau = check_weights([1.0 / N] * N if tau is None else tau, "tau")
    if len(theta) != M or len(tau) != N:
        raise ValueError("weight vectors must match the component counts")
    rho, beta, eps, mu = sched.at(n)
    x = np.asarray(x_n, dtype=float)
    _check_start(inst, x)
    Ax = inst.A @ x
    u = _finite(inst.Q.project(Ax), "u_n")
    gammas, ys = [], []
    for F, th in zip(inst.F_list, theta):
        w = _finite(diagonal_subgradient(F, u, eps), "w_n")
        gj = beta / max(rho, _norm(w))
        gammas.append(gj)
        ys.append(th * inst.Q.project(u - gj * w))
    y = _finite(np.sum(ys, axis=0), "y_n")
    z = _split_step(inst, x, Ax, y, mu)
    alphas, xs = [], []
    for f, ta in zip(inst.f_list, tau):
        g = _finite(diagonal_subgradient(f, z, eps), "g_n")
        ai = beta / max(rho, _norm(g))
        alphas.append(ai)
        xs.append(ta * inst.C.project(z - ai * g))
    x_next = _finite(np.sum(xs, axis=0), "x_n+1")
    return x_next, StepInfo(u, y, z, max(gammas), max(alphas), _norm(u - Ax),
                            _norm(x_next - z), rho, beta, eps, mu)


def pspm_step(inst: SepInstance, x_n, n, sched: ParamSchedule, r=1.0, qp_tol=1e-12):
    """One iteration of the projected subgradient-proximal baseline.

    Requires ``F`` quadratic with equal coefficient matrices so its resolvent
    is a box-constrained prox. The recorded ``u`` is ``A y_n`` and ``z`` is
    the resolvent value; ``gamma`` is not defined for this method.
    """
    if not isinstance(inst.F, QuadraticBifunction) or not inst.F.resolvent_friendly:
        raise IncompatibleInstanceError(
            "pspm needs the resolvent of F; only quadratic F with P == R is supported "
            "(generate the instance with variant 'resolvent_friendly')")
    rho, beta, eps, mu = sched.at(n)
    x = np.asarray(x_n, dtype=float)
    _check_start(inst, x)
    w = _finite(diagonal_subgradient(inst.f, x, eps), "w_n")
    alpha = beta / max(rho, _norm(w))
    y = _finite(inst.C.project(x - alpha * w), "y_n")
    Ay = inst.A @ y
    t = _finite(solve_resolvent(inst.F, r, Ay, inst.Q, qp_tol), "resolvent")
    x_next = _finite(inst.C.project(y - mu * (inst.A.T @ (Ay - t))), "x_n+1")
    return x_next, StepInfo(Ay, y, t, None, alpha, _norm(Ay - t), _norm(x_next - y),
                            rho, beta, eps, mu)


def _run(name, step, inst, x0, sched, stop, store_x, fejer_point):
    x = np.array(x0, dtype=float)
    _check_start(inst, x)
    xstar = inst.known_solution
    if stop.d_tol is not None and xstar is None:
        raise ValueError("d_tol needs an instance with a known solution")
    trace = IterateTrace(name, schedule=sched.descriptor)
    t0 = time.perf_counter()
    D = None if xstar is None else float(np.sum((x - xstar) ** 2))
    trace.stop_reason = "max_iter"
    for n in range(stop.max_iter):
        if stop.d_tol is not None and D <= stop.d_tol:
            trace.stop_reason = "d_tol"
            break
        x_next, info = step(inst, x, n, sched)
        delta = sched.delta(n)
        D_next = fejer = fz = None
        if xstar is not None:
            D_next = float(np.sum((x_next - xstar) ** 2))
            fejer = max(0.0, D_next - D - (1.0 + info.mu) * delta)
            if fejer_point is not None:
                fz = fejer_point(info, xstar)
        trace.rows.append(TraceRow(
            n=n, D_n=D, residual_split=info.residual_split, residual_step=info.residual_step,
            gamma_n=info.gamma, alpha_n=info.alpha, delta_n=delta, mu_n=info.mu,
            beta_n=info.beta, fejer_violation=fejer,
            elapsed_ms=(time.perf_counter() - t0) * 1e3, f_z_xstar=fz,
            x_n=x.copy() if store_x else None))
        x, D = x_next, D_next
        if (stop.residual_tol is not None
                and max(info.residual_split, info.residual_step) <= stop.residual_tol):
            trace.stop_reason = "residual_tol"
            break
    else:
        if stop.d_tol is not None and D <= stop.d_tol:
            trace.stop_reason = "d_tol"
    trace.x_final = x
    trace.D_final = D
    return trace


def _f_at_z(inst):
    # f(z_n, x*): diagnostic for the limsup property; only the first component.
    f = inst.f_list[0]
    return lambda info, xstar: eval_bifunction(f, info.z, xstar)


def run_pm(inst, x0, sched, stop=StopRule(), store_x=False) -> IterateTrace:
    """Iterate :func:`pm_step` from ``x0``."""
    return _run("pm", pm_step, inst, x0, sched, stop, store_x, _f_at_z(inst))


def run_ppsm(inst, x0, sched, stop=StopRule(), store_x=False) -> IterateTrace:
    if isinstance(inst, SepInstance):
        inst = ScepInstance.from_sep(inst)
    return _run("ppsm", ppsm_step, inst, x0, sched, stop, store_x, _f_at_z(inst))


def run_scep(inst, x0, sched, stop=StopRule(), store_x=False, theta=None,
             tau=None) -> IterateTrace:
    if isinstance(inst, SepInstance):
        inst = ScepInstance.from_sep(inst)

    def step(i, x, n, s):
        th = theta(n) if callable(theta) else theta
        ta = tau(n) if callable(tau) else tau
        return scep_step(i, x, n, s, th, ta)

    return _run("scep", step, inst, x0, sched, stop, store_x, _f_at_z(inst))


def run_pspm(inst, x0, sched, stop=StopRule(), store_x=False, r=1.0) -> IterateTrace:
    def step(i, x, n, s):
        return pspm_step(i, x, n, s, r)

    return _run("pspm", step, inst, x0, sched, stop, store_x, None)
