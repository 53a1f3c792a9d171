"""Command-line interface.

Subcommands
-----------
solve
    Run one method on a generated or Matrix Market problem and emit a
    per-iteration CSV trace.
compare
    Run several methods on the same problem and print a summary table.
superconv
    Functional-estimation refinement study on the 1-D boundary value
    problem, with observed convergence slopes.

Exit codes: 0 converged, 1 usage or file problem, 2 breakdown,
3 iteration cap.  Set ``KRYLOV_LOG=debug`` or ``info`` for diagnostics
on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional

import numpy as np

from .bilq import bicg_solve, bilq_solve
from .dual import bilqr_solve, trilqr_solve, usymlq_solve, usymqr_solve
from .functional import estimate_functional
from .linop import (MatrixMarketError, from_sparse, jacobi_scaled,
                    read_matrix_market)
from .minres import minres_augmented_solve
from .problems import convdiff_2d, ode_1d, polar_poisson
from .qmr import qmr_solve
from .results import DualSolution, SolverError, Status, StoppingRule

METHODS = ("bilq", "bicg", "qmr", "usymlq", "usymqr",
           "bilqr", "trilqr", "minres-aug")
PROBLEMS = ("polar-poisson", "ode1d", "convdiff2d")
PAIRED = ("bilqr", "trilqr", "minres-aug")


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; keep 2 for breakdowns."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _fmt(value) -> str:
    return "" if value is None else "%.17g" % value


def _configure_logging():
    level = os.environ.get("KRYLOV_LOG", "").strip().lower()
    if level in ("debug", "info"):
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG if level == "debug" else logging.INFO,
            format="%(name)s %(levelname)s: %(message)s")


def _resolve_dtype(name: str):
    if name == "single":
        return np.float32
    if name == "double":
        return np.float64
    # extended precision only counts if it is a genuine quad format
    if np.finfo(np.longdouble).nmant >= 105:
        return np.longdouble
    return None


def _load_problem(args, dtype):
    """Returns (operator, matrix_or_None, b, c, x_ref, t_ref, needs_dual)."""
    rng = np.random.default_rng(args.seed)
    if args.mm is not None:
        matrix = read_matrix_market(args.mm).astype(dtype)
        if matrix.n_rows != matrix.n_cols:
            raise ValueError("need a square matrix")
        n = matrix.n_rows
        if args.rhs is not None:
            b = np.loadtxt(args.rhs, dtype=np.float64).reshape(-1)
            if b.shape[0] != n:
                raise ValueError(
                    f"right-hand side has {b.shape[0]} entries, matrix has {n} rows")
            b = b.astype(dtype)
        else:
            b = rng.standard_normal(n).astype(dtype)
        if args.dual_rhs is not None:
            c = np.loadtxt(args.dual_rhs, dtype=np.float64).reshape(-1)
            if c.shape[0] != n:
                raise ValueError(
                    f"dual right-hand side has {c.shape[0]} entries, matrix has {n} rows")
            c = c.astype(dtype)
        else:
            c = b.copy()
        return matrix, b, c, None, None

    if args.problem == "polar-poisson":
        prob = polar_poisson(n_r=args.n, n_theta=args.n, dtype=dtype)
    elif args.problem == "ode1d":
        prob = ode_1d(n=args.n, dtype=dtype)
    elif args.problem == "convdiff2d":
        prob = convdiff_2d(n=args.n, dtype=dtype)
    else:
        raise ValueError("pick --problem or --mm")
    x_ref, t_ref = _direct_reference(prob.matrix, prob.b, prob.c)
    return prob.matrix, prob.b, prob.c, x_ref, t_ref


def _direct_reference(matrix, b, c):
    """Reference solutions from a sparse direct factorization."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.linalg import splu
    a = csr_matrix((np.asarray(matrix.data, dtype=np.float64),
                    matrix.indices, matrix.indptr),
                   shape=matrix.shape).tocsc()
    lu = splu(a)
    x_ref = lu.solve(np.asarray(b, dtype=np.float64))
    t_ref = lu.solve(np.asarray(c, dtype=np.float64), trans="T")
    return x_ref, t_ref


def _run_method(method, op, b, c, rule, explicit, x_ref, t_ref):
    """Dispatch one solver; returns (primal_result, dual_result_or_None)."""
    x_star = None if x_ref is None else np.asarray(x_ref, dtype=op.dtype)
    t_star = None if t_ref is None else np.asarray(t_ref, dtype=op.dtype)
    if method == "bilq":
        return bilq_solve(op, b, c, rule, explicit_residuals=explicit,
                          x_star=x_star), None
    if method == "bicg":
        return bicg_solve(op, b, c, rule, explicit_residuals=explicit,
                          x_star=x_star), None
    if method == "qmr":
        return qmr_solve(op.T, c, b, rule, explicit_residuals=explicit,
                         t_star=x_star), None
    if method == "usymlq":
        return usymlq_solve(op, b, c, rule, explicit_residuals=explicit,
                            x_star=x_star), None
    if method == "usymqr":
        return usymqr_solve(op, b, c, rule, explicit_residuals=explicit,
                            x_star=x_star), None
    if method == "bilqr":
        pair = bilqr_solve(op, b, c, rule, explicit_residuals=explicit,
                           x_star=x_star, t_star=t_star)
        return pair.primal, pair.dual
    if method == "trilqr":
        pair = trilqr_solve(op, b, c, rule, explicit_residuals=explicit,
                            x_star=x_star, t_star=t_star)
        return pair.primal, pair.dual
    if method == "minres-aug":
        pair = minres_augmented_solve(op, b, c, rule, x_star=x_star,
                                      t_star=t_star)
        return pair.primal, pair.dual
    raise ValueError(f"unknown method {method!r}")


def _csv_rows(primal, dual):
    """Merge per-side histories into iteration-indexed CSV rows."""
    by_iter = {}
    for rec in primal.history:
        row = by_iter.setdefault(rec.iteration, [None] * 4)
        row[0] = rec.rnorm if rec.rnorm_explicit is None else rec.rnorm_explicit
        row[2] = rec.enorm
    if dual is not None:
        for rec in dual.history:
            row = by_iter.setdefault(rec.iteration, [None] * 4)
            row[1] = rec.rnorm if rec.rnorm_explicit is None else rec.rnorm_explicit
            row[3] = rec.enorm
    lines = []
    for it in sorted(by_iter):
        rp, rd, ep, ed = by_iter[it]
        lines.append(f"{it},{_fmt(rp)},{_fmt(rd)},{_fmt(ep)},{_fmt(ed)}")
    return lines


def _exit_code(*results) -> int:
    statuses = [r.status for r in results if r is not None]
    if any(s is Status.BREAKDOWN for s in statuses):
        return 2
    if any(s is Status.MAX_ITERATIONS for s in statuses):
        return 3
    return 0


def _emit(lines, output: Optional[str]):
    text = "\n".join(lines) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _add_problem_args(p):
    p.add_argument("--problem", choices=PROBLEMS, default=None,
                   help="generated test problem")
    p.add_argument("--n", type=int, default=50,
                   help="grid parameter of the generated problem")
    p.add_argument("--mm", metavar="PATH", default=None,
                   help="Matrix Market coordinate file instead of --problem")
    p.add_argument("--rhs", metavar="PATH", default=None,
                   help="text file with the right-hand side (one value per line)")
    p.add_argument("--dual-rhs", metavar="PATH", default=None,
                   help="text file with the adjoint right-hand side")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the random right-hand side used with --mm")
    p.add_argument("--precision", choices=("single", "double", "quad"),
                   default="double")
    p.add_argument("--jacobi", action="store_true",
                   help="left diagonal scaling; traces show the scaled system")
    p.add_argument("--atol", type=float, default=1e-10)
    p.add_argument("--rtol", type=float, default=1e-7)
    p.add_argument("--maxiter", type=int, default=None)
    p.add_argument("--explicit", action="store_true",
                   help="stop on true residual norms instead of estimates")
    p.add_argument("--output", metavar="PATH", default=None,
                   help="write CSV here instead of stdout")


def main(argv=None) -> int:
    _configure_logging()
    parser = _Parser(prog="bikrylov",
                     description="Krylov solvers for a system and its adjoint")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one method", parents=[])
    p_solve.add_argument("--method", choices=METHODS, required=True)
    _add_problem_args(p_solve)

    p_cmp = sub.add_parser("compare", help="run several methods")
    p_cmp.add_argument("--methods", default=",".join(METHODS),
                       help="comma-separated method names")
    _add_problem_args(p_cmp)

    p_sup = sub.add_parser("superconv",
                           help="functional refinement study on ode1d")
    p_sup.add_argument("--sizes", default="16,32,64,128,256",
                       help="comma-separated grid sizes")
    p_sup.add_argument("--output", metavar="PATH", default=None)

    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "compare":
            return _cmd_compare(args)
        return _cmd_superconv(args)
    except (OSError, MatrixMarketError, ValueError) as exc:
        print(f"bikrylov: error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"bikrylov: breakdown: {exc}", file=sys.stderr)
        return 2


def _prepare(args):
    dtype = _resolve_dtype(args.precision)
    if dtype is None:
        raise ValueError(
            "unsupported precision: this platform has no quad float "
            f"(long double keeps {np.finfo(np.longdouble).nmant + 1} "
            "significand bits)")
    if args.problem is None and args.mm is None:
        raise ValueError("pick --problem or --mm")
    matrix, b, c, x_ref, t_ref = _load_problem(args, dtype)
    scale = None
    if args.jacobi:
        d = matrix.diagonal()
        if np.any(d == 0):
            raise ValueError("Jacobi scaling needs a nowhere-zero diagonal")
        op = jacobi_scaled(from_sparse(matrix), d)
        b = (b / d).astype(dtype)
        scale = d
    else:
        op = from_sparse(matrix)
    rule = StoppingRule(atol=args.atol, rtol=args.rtol,
                        max_iterations=args.maxiter)
    return op, b, c, rule, x_ref, t_ref, scale


def _cmd_solve(args) -> int:
    op, b, c, rule, x_ref, t_ref, scale = _prepare(args)
    if scale is not None and t_ref is not None:
        # the scaled pair's dual unknown is D times the original one
        t_ref = t_ref * scale
    primal, dual = _run_method(args.method, op, b, c, rule, args.explicit,
                               x_ref, t_ref)
    lines = ["iter,rnorm_primal,rnorm_dual,enorm_primal,enorm_dual"]
    lines += _csv_rows(primal, dual)
    _emit(lines, args.output)
    return _exit_code(primal, dual)


def _cmd_compare(args) -> int:
    op, b, c, rule, x_ref, t_ref, scale = _prepare(args)
    if scale is not None and t_ref is not None:
        t_ref = t_ref * scale
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    rows = ["method,iterations,rnorm_primal,rnorm_dual,status"]
    widths = max(len(m) for m in methods)
    print(f"{'method':<{widths}}  {'iters':>6}  {'rnorm':>12}  status")
    for m in methods:
        try:
            primal, dual = _run_method(m, op, b, c, rule, args.explicit,
                                       x_ref, t_ref)
        except SolverError as exc:
            print(f"{m:<{widths}}  {'-':>6}  {'-':>12}  breakdown: {exc}")
            rows.append(f"{m},,,,breakdown")
            continue
        its = max(primal.iterations or 0,
                  (dual.iterations or 0) if dual is not None else 0)
        rn = primal.rnorm
        rd = None if dual is None else dual.rnorm
        status = primal.status.value
        if dual is not None and dual.status is not primal.status:
            status = f"{primal.status.value}/{dual.status.value}"
        print(f"{m:<{widths}}  {its:>6}  {rn:>12.3e}  {status}")
        rows.append(f"{m},{its},{_fmt(rn)},{_fmt(rd)},{status}")
    if args.output is not None:
        _emit(rows, args.output)
    return 0


def _cmd_superconv(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if len(sizes) < 2:
        raise ValueError("need at least two grid sizes")
    lines = ["N,h,naive_error,corrected_error,status"]
    hs, naive_err, corr_err = [], [], []
    for n in sizes:
        prob = ode_1d(n=n)
        dense = prob.matrix.to_dense()
        x_h = np.linalg.solve(dense, prob.b)
        t_h = np.linalg.solve(dense.T, prob.c)
        est = estimate_functional(prob, x_h, t_h)
        j_star = prob.meta["J_star"]
        en = abs(est.naive - j_star)
        ec = abs(est.corrected - j_star)
        hs.append(est.h)
        naive_err.append(en)
        corr_err.append(ec)
        lines.append(f"{n},{_fmt(est.h)},{_fmt(en)},{_fmt(ec)},ok")
    slope_naive = np.polyfit(np.log(hs), np.log(naive_err), 1)[0]
    slope_corr = np.polyfit(np.log(hs), np.log(corr_err), 1)[0]
    lines.append(f"slope,,{_fmt(slope_naive)},{_fmt(slope_corr)},")
    _emit(lines, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
