"""Parameter sequences rho_n, beta_n, eps_n, mu_n and their admissibility checks."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional


class ScheduleError(ValueError):
    """A schedule produced a value outside its admissible range."""


def _const(v):
    return lambda n: v


@dataclass(frozen=True)
class ParamSchedule:
    """Step-size parameters of the projection methods.

    ``mu_bounds = (a, b)``: every ``mu_n`` must satisfy ``0 < a <= mu_n <= b``.
    For the projection method ``b = 1/||A||**2`` (inflated norm), for the
    subgradient-proximal baseline ``b < 2/||A||**2``.

    ``certified`` is set only by presets whose series conditions
    (sum beta/rho = inf, sum beta eps/rho < inf, sum beta^2 < inf) hold
    analytically; arbitrary callables cannot be checked by machine.
    """

    rho: Callable[[int], float]
    beta: Callable[[int], float]
    eps: Callable[[int], float]
    mu: Callable[[int], float]
    rho_min: float
    mu_bounds: tuple
    descriptor: str = "custom"
    certified: bool = False
    mu_strict_upper: bool = False

    @classmethod
    def power_law(cls, s, norm_A, rho=1.0, mu=None):
        """``beta_n = 1/(n+1)**s``, ``rho_n = rho``, ``eps_n = 0``, ``mu_n = 1/||A||**2``.

        Certified for ``s`` in ``(1/2, 1]``.
        """
        if norm_A <= 0:
            raise ValueError("norm_A must be positive")
        mu_max = 1.0 / norm_A ** 2
        mu = mu_max if mu is None else float(mu)
        certified = 0.5 < s <= 1.0 and rho > 0
        return cls(rho=_const(float(rho)), beta=lambda n: 1.0 / (n + 1) ** s, eps=_const(0.0),
                   mu=_const(mu), rho_min=float(rho), mu_bounds=(mu, mu_max),
                   descriptor=f"beta = 1/(n+1)^{s}", certified=certified)

    @classmethod
    def pspm_power_law(cls, s, norm_A, rho=1.0, mu=None):
        """Baseline variant: same sequences, but ``mu_n`` may go up to (not reach) ``2/||A||**2``."""
        base = cls.power_law(s, norm_A, rho)
        mu = 1.0 / norm_A ** 2 if mu is None else float(mu)
        return cls(rho=base.rho, beta=base.beta, eps=base.eps, mu=_const(mu),
                   rho_min=base.rho_min, mu_bounds=(mu, 2.0 / norm_A ** 2),
                   descriptor=base.descriptor, certified=base.certified, mu_strict_upper=True)

    def at(self, n):
        """Return ``(rho_n, beta_n, eps_n, mu_n)``, raising if C1 or C3 fails."""
        rho, beta, eps, mu = (float(self.rho(n)), float(self.beta(n)),
                              float(self.eps(n)), float(self.mu(n)))
        if not rho >= self.rho_min > 0:
            raise ScheduleError(f"n={n}: rho_n={rho} below rho_min={self.rho_min}")
        if not beta > 0 or not math.isfinite(beta):
            raise ScheduleError(f"n={n}: beta_n={beta} must be positive")
        if not eps >= 0 or not math.isfinite(eps):
            raise ScheduleError(f"n={n}: eps_n={eps} must be nonnegative")
        a, b = self.mu_bounds
        upper_ok = mu < b if self.mu_strict_upper else mu <= b
        if not (0 < a <= mu and upper_ok):
            raise ScheduleError(f"n={n}: mu_n={mu} outside [{a}, {b}]")
        return rho, beta, eps, mu

    def delta(self, n):
        """Perturbation ``2 beta eps / rho + 2 beta**2`` bounding one-step growth."""
        rho, beta, eps = self.rho(n), self.beta(n), self.eps(n)
        return 2.0 * beta * eps / rho + 2.0 * beta * beta

    def sanity_warnings(self, n_terms=10_000) -> list:
        """Heuristic partial-sum checks for uncertified schedules.

        Compares the second half of each partial sum with the first half;
        emits a ``UserWarning`` per suspicious series and returns the messages.
        """
        if self.certified:
            return []
        half = n_terms // 2
        s_div = [0.0, 0.0]
        s_conv = [0.0, 0.0]
        s_sq = [0.0, 0.0]
        for n in range(n_terms):
            rho, beta, eps = self.rho(n), self.beta(n), self.eps(n)
            k = 0 if n < half else 1
            s_div[k] += beta / rho
            s_conv[k] += beta * eps / rho
            s_sq[k] += beta * beta
        msgs = []
        if s_div[1] < 1e-3 * max(s_div[0], 1e-300):
            msgs.append("sum beta_n/rho_n looks convergent; it must diverge")
        if s_conv[1] > 0.5 * s_conv[0] and s_conv[1] > 0:
            msgs.append("sum beta_n eps_n/rho_n does not look summable")
        if s_sq[1] > 0.5 * s_sq[0]:
            msgs.append("sum beta_n^2 does not look summable")
        for m in msgs:
            warnings.warn(m, UserWarning, stacklevel=2)
        return msgs


def constant_weights(count):
    """Uniform convex-combination weights."""
    return [1.0 / count] * count


def check_weights(w, name="weights", lo: Optional[float] = None, hi: Optional[float] = None):
    """Validate a convex-combination weight vector with entries in ``(0, 1]``."""
    w = [float(v) for v in w]
    if not w:
        raise ScheduleError(f"{name} is empty")
    if any(not (0 < v <= 1) for v in w):
        raise ScheduleError(f"{name} entries must lie in (0, 1]: {w}")
    if lo is not None and any(v < lo for v in w) or hi is not None and any(v > hi for v in w):
        raise ScheduleError(f"{name} entries must lie in [{lo}, {hi}]: {w}")
    if abs(math.fsum(w) - 1.0) > 1e-12:
        raise ScheduleError(f"{name} must sum to 1, got {math.fsum(w)!r}")
    return w
