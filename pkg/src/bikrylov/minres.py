"""Baseline: minimum-residual iteration on the symmetric augmented system.

Solving A x = b and A' t = c jointly can be phrased as one symmetric
system of twice the size acting on the stacked vector (t, x).  Running
a standard minimum-residual iteration on it is the natural yardstick
for the paired solvers: same products per iteration, twice the storage,
and one merged convergence path instead of two independent ones.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .linop import augmented_operator
from .results import (ConvergenceRecord, DualSolution, SolveResult, Status,
                      StoppingRule)
from .rotations import sym_ortho


def minres_augmented_solve(op, b, c, rule: Optional[StoppingRule] = None, *,
                           x_star=None, t_star=None,
                           callback: Optional[Callable] = None) -> DualSolution:
    """Solve A x = b and A' t = c via MINRES on the augmented system.

    The iteration is the classical symmetric Lanczos / QR recurrence on
    ``[[0, A], [A', 0]]`` applied to the stacked unknown ``(t, x)``.
    True residual norms of both subsystems are evaluated every
    iteration; the run stops once both meet the stopping rule (each
    against its own right-hand side norm) or the cap is reached.

    Parameters
    ----------
    op : LinearOperator
        Square operator defining both subsystems.
    b, c : ndarray
        Right-hand sides of the primal and adjoint systems.
    rule : StoppingRule, optional
        Thresholds are formed per subsystem from ``b`` and ``c``.
        ``max_iterations`` defaults to twice the augmented dimension.
    x_star, t_star : ndarray, optional
        Reference solutions; enable error-norm tracking.
    callback : callable, optional
        Called as ``callback(k, x, t)`` after each iteration.

    Returns
    -------
    DualSolution
        Per-subsystem histories; the iterates always advance jointly.
    """
    if op.n_rows != op.n_cols:
        raise ValueError("expected a square operator")
    n = op.n_cols
    rule = rule if rule is not None else StoppingRule()
    aug = augmented_operator(op)
    dtype = np.dtype(op.dtype)
    b = np.asarray(b, dtype=dtype)
    c = np.asarray(c, dtype=dtype)

    rhs = np.concatenate([b, c])
    beta1 = np.linalg.norm(rhs)
    if beta1 == 0:
        raise ValueError("both right-hand sides are zero")
    bnorm = np.linalg.norm(b)
    cnorm = np.linalg.norm(c)
    thr_p = rule.threshold(bnorm)
    thr_d = rule.threshold(cnorm)
    maxit = rule.max_iterations if rule.max_iterations is not None else 4 * n

    one = dtype.type(1)
    zero = dtype.type(0)
    eps = np.finfo(dtype).eps
    lucky_tol = eps ** 0.75

    v_prev = np.zeros(2 * n, dtype=dtype)
    v = rhs / beta1
    beta = dtype.type(beta1)
    cs, sn = -one, zero
    dbar = zero
    epsln = zero
    phibar = dtype.type(beta1)
    w1 = np.zeros(2 * n, dtype=dtype)
    w2 = np.zeros(2 * n, dtype=dtype)
    z = np.zeros(2 * n, dtype=dtype)

    primal = SolveResult(None, [], Status.RUNNING)
    dual = SolveResult(None, [], Status.RUNNING)
    p_hit = d_hit = False
    closed = False

    k = 0
    while k < maxit:
        k += 1
        q = aug.forward(v)
        qscale = np.linalg.norm(q)
        q -= beta * v_prev
        alpha = np.dot(v, q)
        q -= alpha * v
        beta_next = np.linalg.norm(q)

        # previous reflection folded into the new column, then a new one
        oldeps = epsln
        delta = cs * dbar + sn * alpha
        gbar = sn * dbar - cs * alpha
        epsln = sn * beta_next
        dbar = -cs * beta_next
        refl, gamma = sym_ortho(gbar, beta_next)
        cs, sn = refl
        phi = cs * phibar
        phibar = sn * phibar

        w_new = (v - oldeps * w1 - delta * w2) / gamma
        w1 = w2
        w2 = w_new
        z += phi * w_new

        closed = beta_next <= lucky_tol * (qscale + abs(alpha) + beta)
        if not closed:
            v_prev = v
            v = q / beta_next
            beta = beta_next

        t = z[:n]
        x = z[n:]
        rp = float(np.linalg.norm(b - op.forward(x)))
        rd = float(np.linalg.norm(c - op.adjoint(t)))
        if rp <= thr_p:
            p_hit = True
        if rd <= thr_d:
            d_hit = True
        primal.history.append(ConvergenceRecord(
            iteration=k, rnorm=rp, rnorm_explicit=rp,
            enorm=None if x_star is None else float(np.linalg.norm(x - x_star)),
            status=Status.CONVERGED if p_hit else Status.RUNNING))
        dual.history.append(ConvergenceRecord(
            iteration=k, rnorm=rd, rnorm_explicit=rd,
            enorm=None if t_star is None else float(np.linalg.norm(t - t_star)),
            status=Status.CONVERGED if d_hit else Status.RUNNING))
        if callback is not None:
            callback(k, x, t)
        if (p_hit and d_hit) or closed:
            break

    for res, hit in ((primal, p_hit), (dual, d_hit)):
        if hit:
            res.status = Status.CONVERGED
        elif closed:
            res.status = Status.BREAKDOWN
            res.detail = "invariant subspace point misses the tolerance"
            res.history[-1].status = Status.BREAKDOWN
        else:
            res.status = Status.MAX_ITERATIONS
            res.detail = "iteration cap reached"
            res.history[-1].status = Status.MAX_ITERATIONS
    primal.x = z[n:].copy()
    dual.x = z[:n].copy()
    return DualSolution(primal=primal, dual=dual)
