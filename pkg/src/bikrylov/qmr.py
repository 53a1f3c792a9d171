"""Quasi-minimum-residual recurrences on the shadow side of the process.

The adjoint system A't = c is solved over the shadow space using the same
reflections that drive the LQ factorization of the primal projection: the
quasi-residual rotates through (psi, psi_bar) pairs while the W directions
recycle the LQ column entries one generation behind.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bilq import LqState
from .results import SolveResult, StoppingRule
from .rotations import GivensReflection, apply_reflection, sym_ortho

__all__ = ["QmrState", "qmr_advance", "qmr_residual_bound", "qmr_solve"]


@dataclass
class QmrState:
    """Quasi-residual scalar, two trailing W directions, iterate, and tau."""

    psi_bar: float
    w_prev: np.ndarray
    w_prev2: np.ndarray
    t: np.ndarray
    tau: float

    @property
    def quasi_residual(self) -> float:
        return abs(self.psi_bar)


def qmr_advance(state: QmrState, refl: GivensReflection, lq: LqState,
                u, unorm) -> QmrState:
    """Fold one reflection into the adjoint iterate.

    Must be called right after lq_advance at step k: the reflection is
    (c_k, s_k), u is the shadow column one behind the newest (its W
    direction only settles now), and unorm is the norm of the newest
    column counted by the residual bound.  Updates t to the quasi-optimal
    iterate of step k-1 and contracts psi_bar by exactly |s_k|.
    """
    psi, psi_bar_new = apply_reflection(refl, state.psi_bar, state.psi_bar * 0)
    w = u - lq.lam_old * state.w_prev
    w -= lq.eps_old * state.w_prev2
    w /= lq.delta
    state.t += psi * w
    state.w_prev2, state.w_prev = state.w_prev, w
    state.psi_bar = psi_bar_new
    state.tau = state.tau + unorm * unorm
    return state


def qmr_residual_bound(state: QmrState, unorm_next=None) -> float:
    """Upper bound |psi_bar| * sqrt(tau) on the true residual norm.

    With unorm_next the bound accounts for one more shadow column; for
    orthonormal columns tau is just the column count.
    """
    tau = state.tau if unorm_next is None else state.tau + unorm_next ** 2
    return abs(state.psi_bar) * np.sqrt(tau)


def qmr_flush(state: QmrState, lq: LqState, u) -> QmrState:
    """Settle the final W direction when the shadow side closes exactly.

    A lucky breakdown leaves the last projection column without its
    trailing coupling; the closing reflection is then trivial and the
    iterate lands on the exact adjoint solution.
    """
    refl, delta = sym_ortho(lq.delta_bar, lq.delta_bar * 0)
    psi, psi_bar_new = apply_reflection(refl, state.psi_bar, state.psi_bar * 0)
    w = u - lq.lam * state.w_prev
    w -= lq.eps * state.w_prev2
    w /= delta
    state.t += psi * w
    state.w_prev2, state.w_prev = state.w_prev, w
    state.psi_bar = psi_bar_new
    return state


def qmr_solve(op, b, c, rule: Optional[StoppingRule] = None, *,
              explicit_residuals: bool = False, t_star=None,
              callback=None) -> SolveResult:
    """Solve the adjoint system A't = c by quasi-minimum residual.

    Runs the biorthogonal process on (b, c) and minimizes the rotated
    quasi-residual of A't = c over the shadow space.  Driving it with
    swapped roles -- qmr_solve(op.T, c, b) -- makes the same engine solve
    A x = b, which is how the command-line front end exposes plain QMR;
    one code path therefore serves both the standalone solver and the
    adjoint half of the paired solvers.

    Parameters
    ----------
    op : LinearOperator
        Square operator; the system solved is op.adjoint(t) = c.
    b : array
        Primal-side seed driving the process.
    c : array
        Adjoint right-hand side (and shadow seed).
    rule, explicit_residuals, t_star, callback
        As in bilq_solve, applied to the adjoint system with threshold
        atol + rtol * ||c||.

    Returns
    -------
    SolveResult
        The adjoint solution and its history; in bound mode the recorded
        rnorm is the rigorous upper bound, never below the true norm in
        exact arithmetic.
    """
    from ._engine import run_bilanczos

    _, dual = run_bilanczos(
        op, b, c, rule, process="biorth", want_primal=False, want_dual=True,
        transfer=False, strict_galerkin=False,
        explicit_residuals=explicit_residuals, t_star=t_star,
        callback=callback)
    return dual
