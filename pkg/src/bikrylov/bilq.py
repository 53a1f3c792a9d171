"""LQ machinery on the biorthogonal projection, plus the BiLQ solver.

The projection T_k is factored as L_k Q_k one reflection at a time; the
minimum-norm subproblem solution z and the direction pair (d, d_bar)
advance with two short recurrences, so iterates cost O(n) per step and
no basis columns are retained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .biorth import TridiagCoeffs
from .results import (SolveResult, StagnationError, StoppingRule,
                      UndefinedTransferError)
from .rotations import GivensReflection, apply_reflection, sym_ortho

__all__ = [
    "LqState",
    "DirectionState",
    "ResidualEstimates",
    "lq_init",
    "lq_advance",
    "z_advance",
    "direction_advance",
    "bilq_residual_estimates",
    "bicg_transfer",
    "bilq_solve",
    "bicg_solve",
]


@dataclass
class LqState:
    """Scalars of the running LQ factorization and subproblem solution.

    After the advance at step k the fields hold: delta_bar = the open
    corner of L, delta = the diagonal completed this step, refl/refl_prev
    = the last two reflections, (eps, lam) = the fill-in entries of the
    current column with (eps_old, lam_old) one generation behind for the
    delayed adjoint recurrence, eta/zeta/zeta_prev = the subproblem
    right-hand-side recurrence, and znorm_sq = ||z||^2 so far.
    """

    delta_bar: float
    refl: GivensReflection
    eta: float
    beta_next: float
    gamma_next: float
    alpha: float = 0.0
    delta: float = 0.0
    refl_prev: GivensReflection = GivensReflection(-1.0, 0.0)
    eps: float = 0.0
    lam: float = 0.0
    eps_old: float = 0.0
    lam_old: float = 0.0
    zeta: float = 0.0
    zeta_prev: float = 0.0
    znorm_sq: float = 0.0
    beta: float = 0.0
    k: int = 1

    @property
    def zeta_bar(self) -> Optional[float]:
        """Last subproblem entry of the Galerkin point; None when undefined."""
        if self.delta_bar == 0:
            return None
        return self.eta / self.delta_bar


class DirectionState(NamedTuple):
    """Open direction d_bar and the running LQ iterate (both mutated in place)."""

    d_bar: np.ndarray
    x: np.ndarray


class ResidualEstimates(NamedTuple):
    lq: float
    transfer: Optional[float]
    clamped: bool


def lq_init(coeffs: TridiagCoeffs, beta1) -> LqState:
    """Seed the factorization after the first process step."""
    zero = coeffs.alpha * 0
    return LqState(
        delta_bar=coeffs.alpha,
        refl=GivensReflection(zero - 1, zero),
        eta=beta1 + zero,
        beta_next=coeffs.beta_next,
        gamma_next=coeffs.gamma_next,
        alpha=coeffs.alpha,
        eps=zero, lam=zero, eps_old=zero, lam_old=zero,
        zeta=zero, zeta_prev=zero, znorm_sq=zero, beta=zero, delta=zero,
    )


def lq_advance(state: LqState, coeffs: TridiagCoeffs) -> LqState:
    """Fold column k into the factorization.

    coeffs carries (alpha_k, beta_{k+1}, gamma_{k+1}); the sub/super
    entries (beta_k, gamma_k) folded here were cached by the previous
    advance.  The reflection annihilates gamma_k against the open corner.
    """
    alpha = coeffs.alpha
    beta_k = state.beta_next
    gamma_k = state.gamma_next
    refl, delta = sym_ortho(state.delta_bar, gamma_k)
    c_prev, s_prev = state.refl
    eps_new = s_prev * beta_k
    lam_new, delta_bar_new = apply_reflection(refl, -c_prev * beta_k, alpha)

    state.eps_old, state.lam_old = state.eps, state.lam
    state.eps, state.lam = eps_new, lam_new
    state.refl_prev, state.refl = state.refl, refl
    state.delta = delta
    state.delta_bar = delta_bar_new
    state.alpha = alpha
    state.beta = beta_k
    state.beta_next, state.gamma_next = coeffs.beta_next, coeffs.gamma_next
    state.k += 1
    return state


def z_advance(state: LqState):
    """Advance the subproblem right-hand side after lq_advance.

    Returns (zeta_{k-1}, eta_k, zeta_bar_k or None).  A vanishing
    completed diagonal would stall the whole solve and raises
    StagnationError; it cannot occur while the process itself survives.
    """
    if state.delta == 0:
        raise StagnationError("completed LQ diagonal vanished")
    zeta_new = state.eta / state.delta
    eta_new = -state.eps * state.zeta - state.lam * zeta_new
    state.zeta_prev, state.zeta = state.zeta, zeta_new
    state.eta = eta_new
    state.znorm_sq = state.znorm_sq + zeta_new * zeta_new
    return zeta_new, eta_new, state.zeta_bar


def direction_advance(dstate: DirectionState, refl: GivensReflection, v):
    """Rotate the direction pair; returns the settled direction d_{k-1}.

    The open direction d_bar is updated in place; the caller applies
    x += zeta * d.
    """
    c, s = refl
    d_bar = dstate.d_bar
    d = c * d_bar + s * v
    d_bar *= s
    d_bar -= c * v
    return d


def bilq_residual_estimates(state: LqState, coeffs: TridiagCoeffs,
                            vnorm, vnorm_next, vdot) -> ResidualEstimates:
    """Residual norms of the LQ point and (when defined) the Galerkin point.

    The LQ residual lies in span{v_k, v_{k+1}}, so its norm needs the two
    column norms and their inner product; a radicand driven slightly
    negative by rounding is clamped to zero and flagged.
    """
    c_prev, s_prev = state.refl_prev
    c_k, s_k = state.refl
    mu = state.beta * (s_prev * state.zeta_prev - c_prev * c_k * state.zeta) \
        + state.alpha * s_k * state.zeta
    omega = coeffs.beta_next * s_k * state.zeta
    radicand = (mu * vnorm) ** 2 + (omega * vnorm_next) ** 2 \
        + 2 * mu * omega * vdot
    clamped = bool(radicand < 0)
    rnorm_lq = np.sqrt(radicand) if not clamped else radicand * 0
    zeta_bar = state.zeta_bar
    rnorm_transfer = None
    if zeta_bar is not None:
        rho = coeffs.beta_next * (s_k * state.zeta - c_k * zeta_bar)
        rnorm_transfer = abs(rho) * vnorm_next
    return ResidualEstimates(rnorm_lq, rnorm_transfer, clamped)


def bicg_transfer(x, zeta_bar, d_bar):
    """Move from the LQ point to the Galerkin point x + zeta_bar * d_bar."""
    if zeta_bar is None:
        raise UndefinedTransferError(
            "Galerkin point undefined: the open LQ corner is zero")
    return x + zeta_bar * d_bar


def bilq_solve(op, b, c=None, rule: Optional[StoppingRule] = None, *,
               transfer: bool = False, explicit_residuals: bool = False,
               x_star=None, callback=None) -> SolveResult:
    """Solve A x = b over the Krylov space of the biorthogonal process.

    Parameters
    ----------
    op : LinearOperator
        Square operator providing forward and adjoint products.
    b : array
        Right-hand side (also the default shadow seed).
    c : array, optional
        Shadow seed; must not be orthogonal to b.
    rule : StoppingRule, optional
        Tolerances, iteration cap, and error-bound delay.
    transfer : bool
        Test convergence at the Galerkin (BiCG) point whenever it exists
        and return it on success; otherwise the LQ point is used.
    explicit_residuals : bool
        Compute true residual norms every iteration and stop on them
        instead of the recurrence estimates.
    x_star : array, optional
        Reference solution; enables the error-norm column of the history.
    callback : callable, optional
        Invoked as callback(k, x) with the live iterate each iteration.

    Returns
    -------
    SolveResult
        Solution (or best iterate on breakdown) plus per-iteration records.

    Notes
    -----
    An invariant subspace on the primal side terminates with the exact
    Galerkin point regardless of the transfer flag.  Mid-run breakdowns
    return the best iterate with breakdown status rather than raising.
    """
    from ._engine import run_bilanczos

    primal, _ = run_bilanczos(
        op, b, c, rule, process="biorth", want_primal=True, want_dual=False,
        transfer=transfer, strict_galerkin=False,
        explicit_residuals=explicit_residuals, x_star=x_star,
        callback=callback)
    return primal


def bicg_solve(op, b, c=None, rule: Optional[StoppingRule] = None, *,
               explicit_residuals: bool = False, x_star=None,
               callback=None) -> SolveResult:
    """BiCG emulation: track the Galerkin point and fail where BiCG fails.

    Identical recurrences to bilq_solve with transfer enforced at every
    tested iterate; an exactly vanishing LQ corner (singular leading
    T_k) surfaces as a breakdown, since the Galerkin iterate does not
    exist there and plain BiCG cannot continue past it.
    """
    from ._engine import run_bilanczos

    primal, _ = run_bilanczos(
        op, b, c, rule, process="biorth", want_primal=True, want_dual=False,
        transfer=True, strict_galerkin=True,
        explicit_residuals=explicit_residuals, x_star=x_star,
        callback=callback)
    return primal
