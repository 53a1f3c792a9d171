"""Orthogonal tridiagonalization from two seeds (two coupled short recurrences).

Unlike the biorthogonal process, both bases are orthonormal, the scaling
coefficients are plain norms (always positive), and an orthogonal seed pair
is allowed.  Serious breakdown cannot occur.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biorth import Breakdown, TridiagCoeffs

__all__ = ["SsyState", "ssy_init", "ssy_step"]


@dataclass
class SsyState:
    """Two trailing columns per side; v spans the range side, u the domain."""

    v_prev: np.ndarray
    v_curr: np.ndarray
    u_prev: np.ndarray
    u_curr: np.ndarray
    beta_curr: float
    gamma_curr: float
    k: int
    lucky_tol: float


def ssy_init(b, c, dtype=None):
    """Start from unit vectors of b and c; b'c = 0 is fine here.

    Returns (state, beta_1, gamma_1) with beta_1 = ||b||, gamma_1 = ||c||.
    """
    if dtype is None:
        dtype = np.result_type(np.asarray(b).dtype, np.asarray(c).dtype,
                               np.float32)
    b = np.ascontiguousarray(b, dtype=dtype)
    c = np.ascontiguousarray(c, dtype=dtype)
    if b.ndim != 1 or c.ndim != 1:
        raise ValueError("seed vectors must be one-dimensional")
    beta1 = np.linalg.norm(b)
    gamma1 = np.linalg.norm(c)
    if beta1 == 0 or gamma1 == 0:
        raise ValueError("seed vectors must be nonzero")
    state = SsyState(
        v_prev=np.zeros_like(b),
        v_curr=b / beta1,
        u_prev=np.zeros_like(c),
        u_curr=c / gamma1,
        beta_curr=beta1,
        gamma_curr=gamma1,
        k=1,
        lucky_tol=float(np.finfo(dtype).eps) ** 0.75,
    )
    return state, beta1, gamma1


def ssy_step(op, state: SsyState):
    """Advance one step; mirrors biorth_step but normalizes by plain norms.

    Only lucky breakdowns are possible: a vanishing new column means the
    corresponding side has closed an invariant subspace.
    """
    q = op.forward(state.u_curr)
    q -= state.gamma_curr * state.v_prev
    qscale = np.linalg.norm(q)
    alpha = np.dot(state.v_curr, q)
    p = op.adjoint(state.v_curr)
    p -= state.beta_curr * state.u_prev
    pscale = np.linalg.norm(p)
    q -= alpha * state.v_curr
    p -= alpha * state.u_curr
    beta_next = np.linalg.norm(q)
    gamma_next = np.linalg.norm(p)

    zero = alpha * 0
    lucky_v = beta_next <= state.lucky_tol * (qscale + abs(alpha))
    lucky_u = gamma_next <= state.lucky_tol * (pscale + abs(alpha))
    if lucky_v or lucky_u:
        if lucky_v and lucky_u:
            brk = Breakdown.LUCKY_BOTH
        else:
            brk = Breakdown.LUCKY_V if lucky_v else Breakdown.LUCKY_U
        return TridiagCoeffs(alpha, zero, zero), brk

    q /= beta_next
    p /= gamma_next
    state.v_prev, state.v_curr = state.v_curr, q
    state.u_prev, state.u_curr = state.u_curr, p
    state.beta_curr, state.gamma_curr = beta_next, gamma_next
    state.k += 1
    return TridiagCoeffs(alpha, beta_next, gamma_next), None
