"""Shared iteration driver behind every process-based solver.

One loop advances the chosen tridiagonalization, the LQ factorization,
and (as requested) the primal direction recurrences and/or the adjoint
quasi-residual recurrences.  Standalone solvers and paired solvers are
thin wrappers selecting the halves they need, so a paired run reproduces
the standalone primal history bit for bit.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import Optional

import numpy as np

from .bilq import (DirectionState, bicg_transfer, bilq_residual_estimates,
                   direction_advance, lq_advance, lq_init, z_advance)
from .biorth import Breakdown, biorth_init, biorth_step
from .qmr import QmrState, qmr_advance, qmr_flush, qmr_residual_bound
from .results import (ConvergenceRecord, SolveResult, Status, StoppingRule)
from .ssy import ssy_init, ssy_step

logger = logging.getLogger("bikrylov")

# cadence of the explicit-residual drift guard in estimate mode
RECHECK_EVERY = 20


def _assess(est, explicit_fn, thr, k, explicit_mode):
    """Stopping decision for one side at one iteration.

    Returns (recorded_rnorm, explicit_or_None, converged, flagged).  In
    estimate mode the explicit residual is consulted when the estimate
    first meets the threshold (confirmation) and on a fixed cadence
    (drift guard); a confirmation miss keeps running and flags the row.
    """
    if explicit_mode:
        rexp = explicit_fn()
        return rexp, rexp, bool(rexp <= thr), False
    hit = est <= thr
    if hit or k % RECHECK_EVERY == 0:
        rexp = explicit_fn()
        converged = bool(rexp <= thr)
        return est, rexp, converged, bool(hit and not converged)
    return est, None, False, False


def run_bilanczos(op, b, c, rule: Optional[StoppingRule] = None, *,
                  process: str, want_primal: bool, want_dual: bool,
                  transfer: bool = False, strict_galerkin: bool = False,
                  explicit_residuals: bool = False, early_stop: bool = True,
                  x_star=None, t_star=None, callback=None):
    """Run the joint iteration; returns (primal SolveResult, dual SolveResult).

    Unused halves come back as None.  The primal system is A x = b over
    the direction side of the process; the dual system is A' t = c over
    the shadow side.
    """
    if op.n_rows != op.n_cols:
        raise ValueError("expected a square operator")
    n = op.n_cols
    rule = rule if rule is not None else StoppingRule()
    maxit = rule.max_iterations if rule.max_iterations is not None else 2 * n
    dtype = np.dtype(op.dtype)
    b = np.asarray(b, dtype=dtype)
    c_arr = b.copy() if c is None else np.asarray(c, dtype=dtype)

    is_biorth = process == "biorth"
    init = biorth_init if is_biorth else ssy_init
    step = biorth_step if is_biorth else ssy_step
    state, beta1, gamma1 = init(b, c_arr, dtype=dtype)

    one = dtype.type(1)
    zero = dtype.type(0)
    bnorm = np.linalg.norm(b)
    cnorm = np.linalg.norm(c_arr)
    thr_p = rule.threshold(bnorm)
    thr_d = rule.threshold(cnorm)

    # first columns, captured before the process moves past them
    v1 = state.v_curr
    u1 = state.u_curr
    unorm1 = state.unorm_curr if is_biorth else one

    coeffs, brk = step(op, state)
    lq = lq_init(coeffs, beta1)

    primal = SolveResult(None, [], Status.RUNNING) if want_primal else None
    dual = SolveResult(None, [], Status.RUNNING) if want_dual else None
    dstate = None
    qstate = None
    last_galerkin = None
    err_window = deque(maxlen=(rule.error_delay - 1) if rule.error_delay else 1)

    if want_primal:
        first_dir = v1 if is_biorth else u1
        dstate = DirectionState(d_bar=first_dir.copy(),
                                x=np.zeros(n, dtype=dtype))
    if want_dual:
        first_w = u1 if is_biorth else v1
        qstate = QmrState(psi_bar=gamma1, w_prev=np.zeros(n, dtype=dtype),
                          w_prev2=np.zeros(n, dtype=dtype),
                          t=np.zeros(n, dtype=dtype),
                          tau=unorm1 * unorm1)

    p_done = not want_primal
    d_done = not want_dual
    p_frozen = False
    d_frozen = False

    def primal_point():
        """Iterate the primal stopping test looks at, and whether it is
        the Galerkin point."""
        if (transfer or strict_galerkin) and lq.zeta_bar is not None:
            return bicg_transfer(dstate.x, lq.zeta_bar, dstate.d_bar), True
        return dstate.x, False

    def primal_explicit(point):
        return np.linalg.norm(b - op.forward(point))

    def dual_explicit():
        return np.linalg.norm(c_arr - op.adjoint(qstate.t))

    def record_primal(k, rnorm, rexp, flagged, point=None):
        enorm = None
        if x_star is not None:
            pt = point if point is not None else primal_point()[0]
            enorm = float(np.linalg.norm(pt - x_star))
        lb = float(np.sqrt(sum(err_window))) if rule.error_delay else None
        rec = ConvergenceRecord(
            iteration=k, rnorm=float(rnorm),
            rnorm_explicit=None if rexp is None else float(rexp),
            enorm=enorm, error_lower_bound=lb,
            status=Status.CONVERGED if p_done else Status.RUNNING,
            flagged=flagged)
        primal.history.append(rec)
        return rec

    def record_dual(k, rnorm, rexp, flagged):
        enorm = None
        if t_star is not None:
            enorm = float(np.linalg.norm(qstate.t - t_star))
        rec = ConvergenceRecord(
            iteration=k, rnorm=float(rnorm),
            rnorm_explicit=None if rexp is None else float(rexp),
            enorm=enorm,
            status=Status.CONVERGED if d_done else Status.RUNNING,
            flagged=flagged)
        dual.history.append(rec)
        return rec

    def settle_primal(rec, breakdownish, detail=""):
        """Final bookkeeping for a primal side that stops unconverged.

        A breakdown ends the run for good, so it reports whichever
        legitimate iterate (LQ point or Galerkin point) has the smaller
        true residual; an iteration cap keeps the mode's own point.
        """
        nonlocal p_done
        point, at_galerkin = primal_point()
        rexp = primal_explicit(point)
        if breakdownish and not at_galerkin and lq.zeta_bar is not None:
            alt = bicg_transfer(dstate.x, lq.zeta_bar, dstate.d_bar)
            alt_rexp = primal_explicit(alt)
            if alt_rexp < rexp:
                point, rexp = alt, alt_rexp
        rec.rnorm_explicit = float(rexp)
        if x_star is not None:
            rec.enorm = float(np.linalg.norm(point - x_star))
        if rexp <= thr_p:
            rec.status = Status.CONVERGED
            primal.status = Status.CONVERGED
        else:
            rec.status = Status.BREAKDOWN if breakdownish else Status.MAX_ITERATIONS
            primal.status = rec.status
            primal.detail = detail
        primal.x = point.copy() if point is dstate.x else point
        p_done = True

    def settle_primal_lucky(rec, brk):
        """The primal side closed an invariant subspace: land the exact point."""
        nonlocal p_done
        if lq.zeta_bar is None:
            settle_primal(rec, True, "invariant subspace with singular projection")
            return
        point = bicg_transfer(dstate.x, lq.zeta_bar, dstate.d_bar)
        rexp = primal_explicit(point)
        rec.rnorm_explicit = float(rexp)
        if x_star is not None:
            rec.enorm = float(np.linalg.norm(point - x_star))
        if rexp <= thr_p:
            rec.status = Status.CONVERGED
            primal.status = Status.CONVERGED
        else:
            rec.status = Status.BREAKDOWN
            primal.status = Status.BREAKDOWN
            primal.detail = "invariant subspace point misses the tolerance"
        primal.x = point
        p_done = True

    def settle_dual(rec, breakdownish, detail="", flush_col=None):
        """Final bookkeeping for the dual side.

        A breakdown reports the better of the running iterate and the
        flushed square-subproblem point; an iteration cap keeps the
        quasi-optimal point itself.
        """
        nonlocal d_done
        rexp = dual_explicit()
        if breakdownish and flush_col is not None and lq.delta_bar != 0:
            t_save = qstate.t.copy()
            qmr_flush(qstate, lq, flush_col)
            rexp_flush = dual_explicit()
            if rexp_flush < rexp:
                rexp = rexp_flush
            else:
                qstate.t = t_save
        rec.rnorm_explicit = float(rexp)
        if t_star is not None:
            rec.enorm = float(np.linalg.norm(qstate.t - t_star))
        if rexp <= thr_d:
            rec.status = Status.CONVERGED
            dual.status = Status.CONVERGED
        else:
            rec.status = Status.BREAKDOWN if breakdownish else Status.MAX_ITERATIONS
            dual.status = rec.status
            dual.detail = detail
        dual.x = qstate.t.copy()
        d_done = True

    def fire_callback(k):
        if callback is None:
            return
        if want_primal and want_dual:
            callback(k, dstate.x, qstate.t)
        elif want_primal:
            callback(k, dstate.x)
        else:
            callback(k, qstate.t)

    # ------------------------------------------------------------------
    # iteration 1: zero LQ iterate, optionally a first Galerkin point
    # ------------------------------------------------------------------
    k = 1
    rec_p = rec_d = None
    if want_primal:
        if strict_galerkin and lq.zeta_bar is None:
            rec_p = record_primal(k, bnorm, None, False, point=dstate.x)
            rec_p.status = Status.BREAKDOWN
            primal.status = Status.BREAKDOWN
            primal.detail = "Galerkin iterate undefined at iteration 1"
            primal.x = None
            p_done = True
        else:
            point, at_galerkin = primal_point()
            if at_galerkin:
                vnext = state.vnorm_curr if (is_biorth and brk is None) else one
                if brk is not None:
                    vnext = zero
                est_p = abs(coeffs.beta_next * lq.zeta_bar) * vnext
                last_galerkin = point
            else:
                est_p = bnorm
            if brk is None:
                rnorm, rexp, conv, flg = _assess(
                    est_p, lambda: primal_explicit(point), thr_p, k,
                    explicit_residuals)
                if conv:
                    p_done = True
                    primal.status = Status.CONVERGED
                    primal.x = point.copy()
                rec_p = record_primal(k, rnorm, rexp, flg, point=point)
            else:
                rec_p = record_primal(k, est_p, None, False, point=point)
    if want_dual and not d_done:
        if brk is None:
            rnorm, rexp, conv, flg = _assess(
                cnorm, dual_explicit, thr_d, k, explicit_residuals)
            if conv:
                d_done = True
                dual.status = Status.CONVERGED
                dual.x = qstate.t.copy()
            rec_d = record_dual(k, rnorm, rexp, flg)
        else:
            rec_d = record_dual(k, cnorm, None, False)
    fire_callback(k)

    if brk is not None:
        flush1 = u1 if is_biorth else v1
        if brk is Breakdown.SERIOUS:
            if want_primal and not p_done:
                settle_primal(rec_p, True, "serious breakdown at iteration 1")
            if want_dual and not d_done:
                settle_dual(rec_d, True, "serious breakdown at iteration 1",
                            flush_col=flush1)
        else:
            if want_primal and not p_done:
                if brk.v_side:
                    settle_primal_lucky(rec_p, brk)
                else:
                    settle_primal(rec_p, True,
                                  "shadow side closed before the primal system")
            if want_dual and not d_done:
                if brk.u_side:
                    settle_dual(rec_d, True,
                                "invariant subspace point misses the tolerance",
                                flush_col=flush1)
                else:
                    settle_dual(rec_d, True,
                                "primal side closed before the adjoint system",
                                flush_col=flush1)
        return _finish(primal, dual, dstate, qstate, transfer, lq, last_galerkin)

    # ------------------------------------------------------------------
    # main loop: one process step, one reflection, two half-updates
    # ------------------------------------------------------------------
    while not (p_done and d_done) and k < maxit:
        k += 1
        if is_biorth:
            dir_col = state.v_curr
            w_col = state.u_prev
            vnorm_k = state.vnorm_curr
            unorm_k = state.unorm_curr
        else:
            dir_col = state.u_curr
            w_col = state.v_prev
            vnorm_k = one
            unorm_k = one
        newest = state.u_curr if is_biorth else state.v_curr  # flush column

        coeffs, brk = step(op, state)
        lq_advance(lq, coeffs)

        p_updating = want_primal and not (p_done and early_stop) and not p_frozen
        d_updating = want_dual and not (d_done and early_stop) and not d_frozen

        est_p = None
        point = None
        at_galerkin = False
        if p_updating:
            zeta, _, _ = z_advance(lq)
            d = direction_advance(dstate, lq.refl, dir_col)
            np.add(dstate.x, zeta * d, out=dstate.x)
            if rule.error_delay:
                err_window.append(zeta * zeta)
            if brk is None and is_biorth:
                vnorm_next = state.vnorm_curr
                vdot = np.dot(dir_col, state.v_curr)
            elif brk is None:
                vnorm_next, vdot = one, zero
            else:
                vnorm_next, vdot = zero, zero
            ests = bilq_residual_estimates(lq, coeffs, vnorm_k, vnorm_next, vdot)
            if strict_galerkin and lq.zeta_bar is None:
                rec_p = record_primal(k, ests.lq, None, False, point=dstate.x)
                rec_p.status = Status.BREAKDOWN
                primal.status = Status.BREAKDOWN
                primal.detail = f"Galerkin iterate undefined at iteration {k}"
                primal.x = None if last_galerkin is None else last_galerkin
                p_done = True
                p_frozen = True
            else:
                point, at_galerkin = primal_point()
                if at_galerkin:
                    last_galerkin = point
                est_p = ests.transfer if at_galerkin else ests.lq
                if not p_done:
                    rnorm, rexp, conv, flg = _assess(
                        est_p, lambda: primal_explicit(point), thr_p, k,
                        explicit_residuals)
                    flg = flg or ests.clamped
                    if conv:
                        p_done = True
                        primal.status = Status.CONVERGED
                        primal.x = point.copy() if point is dstate.x else point
                    rec_p = record_primal(k, rnorm, rexp, flg, point=point)
                else:
                    rec_p = record_primal(k, est_p, None, ests.clamped,
                                          point=point)

        if d_updating:
            qmr_advance(qstate, lq.refl, lq, w_col, unorm_k)
            est_d = qmr_residual_bound(qstate) if is_biorth \
                else qstate.quasi_residual
            if not d_done:
                rnorm, rexp, conv, flg = _assess(
                    est_d, dual_explicit, thr_d, k, explicit_residuals)
                if conv:
                    d_done = True
                    dual.status = Status.CONVERGED
                    dual.x = qstate.t.copy()
                rec_d = record_dual(k, rnorm, rexp, flg)
            else:
                rec_d = record_dual(k, est_d, None, False)
        fire_callback(k)

        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("iter %d: primal %s dual %s", k,
                         None if rec_p is None else rec_p.rnorm,
                         None if rec_d is None else rec_d.rnorm)

        if brk is not None:
            if brk is Breakdown.SERIOUS:
                detail = f"serious breakdown at iteration {k}"
                if want_primal and not p_done:
                    settle_primal(rec_p, True, detail)
                if want_dual and not d_done:
                    settle_dual(rec_d, True, detail, flush_col=newest)
            else:
                if want_primal and not p_done:
                    if brk.v_side:
                        settle_primal_lucky(rec_p, brk)
                    else:
                        settle_primal(rec_p, True,
                                      "shadow side closed before the primal system")
                if want_dual and not d_done:
                    if brk.u_side:
                        settle_dual(rec_d, True,
                                    "invariant subspace point misses the tolerance",
                                    flush_col=newest)
                    else:
                        settle_dual(rec_d, True,
                                    "primal side closed before the adjoint system",
                                    flush_col=newest)
            break

    if want_primal and not p_done:
        settle_primal(rec_p, False, "iteration cap reached")
    if want_dual and not d_done:
        settle_dual(rec_d, False, "iteration cap reached")

    return _finish(primal, dual, dstate, qstate, transfer, lq, last_galerkin)


def _finish(primal, dual, dstate, qstate, transfer, lq, last_galerkin):
    """Fill any missing final vectors and return the pair."""
    if primal is not None and primal.x is None and primal.status is not Status.BREAKDOWN:
        point = dstate.x
        if transfer and lq.zeta_bar is not None:
            point = bicg_transfer(dstate.x, lq.zeta_bar, dstate.d_bar)
        primal.x = point.copy() if point is dstate.x else point
    if dual is not None and dual.x is None:
        dual.x = qstate.t.copy()
    return primal, dual
