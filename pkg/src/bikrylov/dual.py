"""Solvers built on the orthogonal tridiagonalization process and the
paired drivers that solve a system together with its adjoint companion."""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .results import DualSolution, SolveResult, StoppingRule


def usymlq_solve(op, b, c=None, rule: Optional[StoppingRule] = None, *,
                 transfer: bool = False, explicit_residuals: bool = False,
                 x_star=None, callback: Optional[Callable] = None) -> SolveResult:
    """Solve A x = b over the orthogonal tridiagonalization process.

    The iterate lives in the subspace grown from the shadow seed ``c``,
    while the residual is expanded in the orthonormal basis grown from
    ``b``, so residual norm estimates are exact.  With ``transfer=True``
    the Galerkin point is reported whenever it exists.

    Parameters
    ----------
    op : LinearOperator
        Square operator providing ``forward`` and ``adjoint`` products.
    b : ndarray
        Right-hand side.
    c : ndarray, optional
        Shadow seed; defaults to ``b``.  Unlike the oblique process, an
        orthogonal seed pair is allowed.
    rule : StoppingRule, optional
    transfer : bool, optional
        Test and report the Galerkin point instead of the LQ point.
    explicit_residuals : bool, optional
        Stop on true residual norms instead of recurrence estimates.
    x_star : ndarray, optional
        Reference solution; enables error-norm tracking in the history.
    callback : callable, optional
        Called as ``callback(k, x)`` after each iteration.

    Returns
    -------
    SolveResult
    """
    from ._engine import run_bilanczos
    primal, _ = run_bilanczos(op, b, c, rule, process="ssy",
                              want_primal=True, want_dual=False,
                              transfer=transfer,
                              explicit_residuals=explicit_residuals,
                              x_star=x_star, callback=callback)
    return primal


def usymqr_solve(op, b, c=None, rule: Optional[StoppingRule] = None, *,
                 explicit_residuals: bool = False, x_star=None,
                 callback: Optional[Callable] = None) -> SolveResult:
    """Solve A x = b by residual minimization over the orthogonal
    tridiagonalization process.

    The residual norm decreases monotonically and the recurrence
    estimate of it is exact, so the default estimate-based stopping is
    already reliable.

    Parameters
    ----------
    op : LinearOperator
    b : ndarray
        Right-hand side.
    c : ndarray, optional
        Shadow seed; defaults to ``b``.
    rule : StoppingRule, optional
    explicit_residuals : bool, optional
    x_star : ndarray, optional
    callback : callable, optional
        Called as ``callback(k, x)`` after each iteration.

    Returns
    -------
    SolveResult
    """
    from ._engine import run_bilanczos
    if c is None:
        c = np.asarray(b)
    _, res = run_bilanczos(op.T, c, b, rule, process="ssy",
                           want_primal=False, want_dual=True,
                           explicit_residuals=explicit_residuals,
                           t_star=x_star, callback=callback)
    return res


def bilqr_solve(op, b, c, rule: Optional[StoppingRule] = None, *,
                transfer: bool = False, explicit_residuals: bool = False,
                early_stop: bool = True, x_star=None, t_star=None,
                callback: Optional[Callable] = None) -> DualSolution:
    """Solve A x = b and A' t = c together over one oblique process.

    Both systems share the tridiagonalization and its reflections, so
    the pair costs one forward and one adjoint product per iteration,
    the same as either solver alone.  The primal half reproduces the
    standalone LQ solver bit for bit; the adjoint half reproduces the
    standalone quasi-minimum-residual solver.

    Parameters
    ----------
    op : LinearOperator
    b, c : ndarray
        Primal right-hand side and adjoint right-hand side.  Their
        coupling must not vanish.
    rule : StoppingRule, optional
    transfer : bool, optional
        Report the primal Galerkin point when it exists.
    explicit_residuals : bool, optional
    early_stop : bool, optional
        Freeze a system once it converges (default).  With ``False``
        both recurrences run until the joint stop, which keeps the
        recorded histories aligned.
    x_star, t_star : ndarray, optional
        Reference solutions for error tracking.
    callback : callable, optional
        Called as ``callback(k, x, t)`` after each iteration.

    Returns
    -------
    DualSolution
    """
    from ._engine import run_bilanczos
    primal, dual = run_bilanczos(op, b, c, rule, process="biorth",
                                 want_primal=True, want_dual=True,
                                 transfer=transfer,
                                 explicit_residuals=explicit_residuals,
                                 early_stop=early_stop,
                                 x_star=x_star, t_star=t_star,
                                 callback=callback)
    return DualSolution(primal=primal, dual=dual)


def trilqr_solve(op, b, c, rule: Optional[StoppingRule] = None, *,
                 transfer: bool = False, explicit_residuals: bool = False,
                 early_stop: bool = True, x_star=None, t_star=None,
                 callback: Optional[Callable] = None) -> DualSolution:
    """Solve A x = b and A' t = c together over one orthogonal process.

    The orthogonal variant of the paired driver: it tolerates an
    orthogonal seed pair and its residual machinery is exact, at the
    price of keeping two orthonormal bases.  The adjoint half minimizes
    the true residual of A' t = c over the basis grown from ``b``.

    Parameters
    ----------
    op : LinearOperator
    b, c : ndarray
        Primal and adjoint right-hand sides.
    rule : StoppingRule, optional
    transfer : bool, optional
    explicit_residuals : bool, optional
    early_stop : bool, optional
    x_star, t_star : ndarray, optional
    callback : callable, optional
        Called as ``callback(k, x, t)`` after each iteration.

    Returns
    -------
    DualSolution
    """
    from ._engine import run_bilanczos
    primal, dual = run_bilanczos(op, b, c, rule, process="ssy",
                                 want_primal=True, want_dual=True,
                                 transfer=transfer,
                                 explicit_residuals=explicit_residuals,
                                 early_stop=early_stop,
                                 x_star=x_star, t_star=t_star,
                                 callback=callback)
    return DualSolution(primal=primal, dual=dual)
