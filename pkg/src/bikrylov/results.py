"""Stopping rules, per-iteration records, and solver result containers."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

__all__ = [
    "Status",
    "StoppingRule",
    "ConvergenceRecord",
    "SolveResult",
    "DualSolution",
    "SolverError",
    "InitializationBreakdown",
    "StagnationError",
    "UndefinedTransferError",
]


class SolverError(RuntimeError):
    """Base class for unrecoverable solver failures."""


class InitializationBreakdown(SolverError):
    """The seed pair cannot start the process (b'c == 0)."""


class StagnationError(SolverError):
    """A factorization diagonal vanished where the recurrences require it."""


class UndefinedTransferError(SolverError):
    """Transfer to the Galerkin point requested where it does not exist."""


class Status(str, Enum):
    RUNNING = "running"
    CONVERGED = "converged"
    BREAKDOWN = "breakdown"
    MAX_ITERATIONS = "max-iterations"


@dataclass
class StoppingRule:
    """Residual-based stopping test ``rnorm <= atol + rtol * norm(rhs)``.

    Parameters
    ----------
    atol, rtol : float
        Absolute and relative tolerances.
    max_iterations : int, optional
        Iteration cap; solvers default to twice the system dimension.
    error_delay : int, optional
        Window d for the running error lower bound reported alongside the
        LQ-point history (a statistic only, never a stopping test).
    """

    atol: float = 1e-10
    rtol: float = 1e-7
    max_iterations: Optional[int] = None
    error_delay: Optional[int] = None

    def __post_init__(self):
        if self.atol < 0 or self.rtol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.error_delay is not None and self.error_delay < 2:
            raise ValueError("error_delay must be at least 2")

    def threshold(self, rhs_norm):
        return self.atol + self.rtol * float(rhs_norm)


@dataclass
class ConvergenceRecord:
    """One iteration of a solve: estimates, optional explicit checks, status."""

    iteration: int
    rnorm: float
    rnorm_explicit: Optional[float] = None
    enorm: Optional[float] = None
    error_lower_bound: Optional[float] = None
    status: Status = Status.RUNNING
    flagged: bool = False


@dataclass
class SolveResult:
    """Solution vector plus its per-iteration history."""

    x: Optional[np.ndarray]
    history: list[ConvergenceRecord] = field(default_factory=list)
    status: Status = Status.RUNNING
    detail: str = ""

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    @property
    def iterations(self) -> int:
        for rec in self.history:
            if rec.status is not Status.RUNNING:
                return rec.iteration
        return self.history[-1].iteration if self.history else 0

    @property
    def rnorm(self) -> float:
        if not self.history:
            return float("nan")
        rec = self.history[-1]
        return rec.rnorm_explicit if rec.rnorm_explicit is not None else rec.rnorm


@dataclass
class DualSolution:
    """Joint result of a paired primal/adjoint run sharing one process."""

    primal: SolveResult
    dual: SolveResult

    @property
    def x(self) -> Optional[np.ndarray]:
        return self.primal.x

    @property
    def t(self) -> Optional[np.ndarray]:
        return self.dual.x

    @property
    def converged(self) -> bool:
        return self.primal.converged and self.dual.converged
