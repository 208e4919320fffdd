"""Per-iteration records and stopping rules."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

FEJER_TOL = 1e-9

CSV_COLUMNS = ("n", "D_n", "residual_split", "residual_step", "gamma_n", "alpha_n",
               "delta_n", "fejer_violation", "elapsed_ms")


@dataclass(frozen=True)
class StopRule:
    """Stop after ``max_iter`` steps, or earlier on ``d_tol`` / ``residual_tol``.

    ``d_tol`` needs a known solution. Small residuals do not certify that the
    iterate solves the problem; ``residual_tol`` is a convenience only.
    """

    max_iter: int = 400
    d_tol: Optional[float] = None
    residual_tol: Optional[float] = None

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass
class TraceRow:
    n: int
    D_n: Optional[float]
    residual_split: float
    residual_step: float
    gamma_n: Optional[float]
    alpha_n: float
    delta_n: float
    mu_n: float
    beta_n: float
    fejer_violation: Optional[float]
    elapsed_ms: float
    f_z_xstar: Optional[float] = None
    x_n: Optional[np.ndarray] = None


@dataclass
class IterateTrace:
    algorithm: str
    rows: List[TraceRow] = field(default_factory=list)
    x_final: Optional[np.ndarray] = None
    D_final: Optional[float] = None
    stop_reason: str = ""
    schedule: str = ""
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    def column(self, name) -> np.ndarray:
        return np.array([np.nan if getattr(r, name) is None else getattr(r, name)
                         for r in self.rows], dtype=float)

    @property
    def D(self) -> np.ndarray:
        """``D_0 .. D_N``: squared distances of every iterate, final one included."""
        if self.D_final is None:
            return np.array([])
        return np.append(self.column("D_n"), self.D_final)

    @property
    def violations(self) -> int:
        return sum(1 for r in self.rows
                   if r.fejer_violation is not None and r.fejer_violation > FEJER_TOL)

    def iterations_to(self, d_threshold):
        """First ``n`` with ``D_n <= d_threshold``, or ``None``."""
        hits = np.nonzero(self.D <= d_threshold)[0]
        return int(hits[0]) if hits.size else None

    def time_to(self, d_threshold):
        """Elapsed ms when ``D_n <= d_threshold`` was first observed, or ``None``."""
        n = self.iterations_to(d_threshold)
        if n is None:
            return None
        if n == 0:
            return 0.0
        return self.rows[n - 1].elapsed_ms


def decile_decay_ok(values, factor=10.0) -> bool:
    """Tail check: the max over the last 10% is at most ``factor`` times the
    10th percentile of the whole sequence."""
    v = np.asarray(values, dtype=float)
    if v.size < 10:
        raise ValueError("need at least 10 values")
    tail = v[-max(1, v.size // 10):]
    return bool(tail.max() <= factor * np.quantile(v, 0.1))
