"""Two-sided Lanczos biorthogonalization with balanced coefficient scaling.

The process keeps only the two most recent columns of each basis.  Columns
satisfy v_j' u_i = delta_ij; the recurrence coefficients form the
tridiagonal projection that every solver in this package factorizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .results import InitializationBreakdown

__all__ = [
    "TridiagCoeffs",
    "Breakdown",
    "BiorthState",
    "biorth_init",
    "biorth_step",
]


class TridiagCoeffs(NamedTuple):
    """Coefficients produced by one process step.

    alpha is the new diagonal entry; beta_next and gamma_next scale the
    next column pair (sub- and superdiagonal of the projection).
    """

    alpha: float
    beta_next: float
    gamma_next: float


class Breakdown(Enum):
    """Termination signals raised by a process step.

    LUCKY_* marks an invariant subspace on the starred side (benign:
    the corresponding system is solvable exactly).  SERIOUS marks a
    vanishing coupling q'p with both vectors nonzero; without look-ahead
    the process cannot continue.
    """

    LUCKY_V = "lucky-v"
    LUCKY_U = "lucky-u"
    LUCKY_BOTH = "lucky-both"
    SERIOUS = "serious"

    @property
    def v_side(self) -> bool:
        return self in (Breakdown.LUCKY_V, Breakdown.LUCKY_BOTH)

    @property
    def u_side(self) -> bool:
        return self in (Breakdown.LUCKY_U, Breakdown.LUCKY_BOTH)


@dataclass
class BiorthState:
    """Two trailing column pairs plus the scalars needed to continue."""

    v_prev: np.ndarray
    v_curr: np.ndarray
    u_prev: np.ndarray
    u_curr: np.ndarray
    beta_curr: float
    gamma_curr: float
    vnorm_curr: float
    unorm_curr: float
    k: int
    eps: float
    lucky_tol: float


def biorth_init(b, c, dtype=None):
    """Start the process from the seed pair (b, c).

    Returns (state, beta_1, gamma_1) with v_1 = b / beta_1 and
    u_1 = c / gamma_1 scaled so that v_1' u_1 = 1.  Raises ValueError for
    zero seeds and InitializationBreakdown when b'c vanishes.
    """
    if dtype is None:
        dtype = np.result_type(np.asarray(b).dtype, np.asarray(c).dtype,
                               np.float32)
    b = np.ascontiguousarray(b, dtype=dtype)
    c = np.ascontiguousarray(c, dtype=dtype)
    if b.shape != c.shape or b.ndim != 1:
        raise ValueError("seed vectors must be one-dimensional and equal length")
    bnorm = np.linalg.norm(b)
    cnorm = np.linalg.norm(c)
    if bnorm == 0 or cnorm == 0:
        raise ValueError("seed vectors must be nonzero")
    eps = np.finfo(dtype).eps
    coupling = np.dot(b, c)
    if abs(coupling) <= eps * bnorm * cnorm:
        raise InitializationBreakdown(
            "seed coupling b'c vanishes; the process cannot start")
    beta1 = np.sqrt(abs(coupling))
    gamma1 = coupling / beta1
    state = BiorthState(
        v_prev=np.zeros_like(b),
        v_curr=b / beta1,
        u_prev=np.zeros_like(c),
        u_curr=c / gamma1,
        beta_curr=beta1,
        gamma_curr=gamma1,
        vnorm_curr=bnorm / beta1,
        unorm_curr=cnorm / abs(gamma1),
        k=1,
        eps=eps,
        lucky_tol=float(eps) ** 0.75,
    )
    return state, beta1, gamma1


def biorth_step(op, state: BiorthState):
    """Advance the process by one column pair.

    Returns (coeffs, breakdown).  When breakdown is None the state now
    holds (v_{k+1}, u_{k+1}) and coeffs carries (alpha_k, beta_{k+1},
    gamma_{k+1}).  On breakdown the state is left at step k and the
    returned coeffs report alpha_k with zero trailing scalings.
    """
    q = op.forward(state.v_curr)
    q -= state.gamma_curr * state.v_prev
    qscale = np.linalg.norm(q)
    alpha = np.dot(state.u_curr, q)
    p = op.adjoint(state.u_curr)
    p -= state.beta_curr * state.u_prev
    pscale = np.linalg.norm(p)
    q -= alpha * state.v_curr
    p -= alpha * state.u_curr
    qnorm = np.linalg.norm(q)
    pnorm = np.linalg.norm(p)

    zero = alpha * 0
    lucky_v = qnorm <= state.lucky_tol * (qscale + abs(alpha) * state.vnorm_curr)
    lucky_u = pnorm <= state.lucky_tol * (pscale + abs(alpha) * state.unorm_curr)
    if lucky_v or lucky_u:
        if lucky_v and lucky_u:
            brk = Breakdown.LUCKY_BOTH
        else:
            brk = Breakdown.LUCKY_V if lucky_v else Breakdown.LUCKY_U
        return TridiagCoeffs(alpha, zero, zero), brk

    coupling = np.dot(q, p)
    if abs(coupling) <= state.eps * qnorm * pnorm:
        return TridiagCoeffs(alpha, zero, zero), Breakdown.SERIOUS

    beta_next = np.sqrt(abs(coupling))
    gamma_next = coupling / beta_next
    q /= beta_next
    p /= gamma_next
    state.v_prev, state.v_curr = state.v_curr, q
    state.u_prev, state.u_curr = state.u_curr, p
    state.beta_curr, state.gamma_curr = beta_next, gamma_next
    state.vnorm_curr = qnorm / beta_next
    state.unorm_curr = pnorm / abs(gamma_next)
    state.k += 1
    return TridiagCoeffs(alpha, beta_next, gamma_next), None
