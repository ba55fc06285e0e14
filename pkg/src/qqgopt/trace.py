"""Per-iteration trace row shared by the optimizers and the harness."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TraceRecord:
    iter: int
    f: float
    grad_inf_norm: float
    step_norm: float
    ls_trials: int
    updates_skipped: int
    elapsed_s: float


TRACE_HEADER = "iter,f,grad_inf_norm,step_norm,ls_trials,updates_skipped,elapsed_s"
