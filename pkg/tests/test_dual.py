import numpy as np
import pytest

from bikrylov import (Status, StoppingRule, bilq_solve, bilqr_solve, qmr_solve,
                      ssy_init, ssy_step, trilqr_solve, usymlq_solve,
                      usymqr_solve)

from conftest import dense_operator, run_process, tridiag, well_conditioned


def test_paired_oblique_run_reproduces_standalone_bitwise(rng):
    n = 35
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    c = rng.standard_normal(n)
    pair = bilqr_solve(op, b, c)
    alone_p = bilq_solve(op, b, c)
    alone_d = qmr_solve(op, b, c)
    assert np.array_equal(pair.x, alone_p.x)
    assert np.array_equal(pair.t, alone_d.x)
    assert [r.rnorm for r in pair.primal.history] == \
        [r.rnorm for r in alone_p.history]
    assert [r.rnorm for r in pair.dual.history] == \
        [r.rnorm for r in alone_d.history]


def test_paired_orthogonal_run_reproduces_standalone_bitwise(rng):
    n = 25
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    c = rng.standard_normal(n)
    pair = trilqr_solve(op, b, c)
    alone_p = usymlq_solve(op, b, c)
    alone_d = usymqr_solve(op.T, c, b)  # the adjoint system, same process
    assert np.array_equal(pair.x, alone_p.x)
    assert np.array_equal(pair.t, alone_d.x)
    assert [r.rnorm for r in pair.primal.history] == \
        [r.rnorm for r in alone_p.history]
    assert [r.rnorm for r in pair.dual.history] == \
        [r.rnorm for r in alone_d.history]


def test_orthogonal_seed_pair_is_allowed(rng):
    n = 20
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    c = rng.standard_normal(n)
    c -= (np.dot(b, c) / np.dot(b, b)) * b
    assert abs(np.dot(b, c)) < 1e-12
    pair = trilqr_solve(op, b, c)
    assert pair.converged
    assert np.linalg.norm(b - a @ pair.x) <= 1e-6
    assert np.linalg.norm(c - a.T @ pair.t) <= 1e-6


def test_early_stop_freezes_the_finished_system(rng):
    n = 40
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    c = rng.standard_normal(n)
    pair = bilqr_solve(op, b, c, early_stop=True)
    for res in (pair.primal, pair.dual):
        assert res.status is Status.CONVERGED
        assert res.history[-1].iteration == res.iterations
        assert res.history[-1].status is Status.CONVERGED


def test_run_to_completion_keeps_both_histories_aligned(rng):
    n = 40
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    c = rng.standard_normal(n)
    frozen = bilqr_solve(op, b, c, early_stop=True)
    full = bilqr_solve(op, b, c, early_stop=False)
    assert full.primal.iterations == frozen.primal.iterations
    assert full.dual.iterations == frozen.dual.iterations
    joint = max(full.primal.iterations, full.dual.iterations)
    assert full.primal.history[-1].iteration == joint
    assert full.dual.history[-1].iteration == joint
    # statuses stay converged once a system has converged
    hit = [r.status for r in full.primal.history]
    first = hit.index(Status.CONVERGED)
    assert all(s is Status.CONVERGED for s in hit[first:])
    # the frozen run is a prefix of the full run
    for r_f, r_full in zip(frozen.primal.history, full.primal.history):
        assert r_f.rnorm == r_full.rnorm


def test_symmetric_matrix_coincidences(rng):
    # on a symmetric system with matching seeds the oblique and the
    # orthogonal processes collapse to the same symmetric Lanczos run
    n = 30
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    a = q @ np.diag(np.linspace(1, 3, n)) @ q.T
    op = dense_operator(a)
    b = rng.standard_normal(n)

    r_lq = bilq_solve(op, b, b)
    r_ulq = usymlq_solve(op, b, b)
    assert np.linalg.norm(r_lq.x - r_ulq.x) <= 1e-8 * np.linalg.norm(r_ulq.x)
    for ra, rb in zip(r_lq.history, r_ulq.history):
        assert ra.rnorm == pytest.approx(rb.rnorm, rel=1e-6, abs=1e-10)

    # the two minimum-residual runs stop on different estimators, so pin
    # the iteration count and compare the iterates themselves
    rule = StoppingRule(atol=0.0, rtol=0.0, max_iterations=12)
    r_qmr = qmr_solve(op.T, b, b, rule=rule)  # minimum-residual run for A x = b
    r_uqr = usymqr_solve(op, b, b, rule=rule)
    assert np.linalg.norm(r_qmr.x - r_uqr.x) <= 1e-8 * np.linalg.norm(r_uqr.x)


def test_usymqr_residuals_are_monotone(rng):
    n = 35
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    res = usymqr_solve(op, rng.standard_normal(n), rng.standard_normal(n),
                       explicit_residuals=True)
    rnorms = [r.rnorm_explicit for r in res.history]
    assert all(later <= earlier + 1e-10
               for earlier, later in zip(rnorms, rnorms[1:]))


def test_usymlq_galerkin_transfer_matches_dense_solve(rng):
    n = 25
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    c = rng.standard_normal(n)
    _, u, alphas, betas, gammas = run_process(ssy_init, ssy_step,
                                              op, b, c, 10)[:5]
    for k in (4, 9):
        t_sq = tridiag(alphas[:k], betas[:k + 1], gammas[:k + 1])[:k, :]
        rhs = np.zeros(k)
        rhs[0] = betas[0]
        y = np.linalg.solve(t_sq, rhs)
        oracle = u[:, :k] @ y
        res = usymlq_solve(op, b, c, StoppingRule(atol=0.0, rtol=0.0,
                                                  max_iterations=k),
                           transfer=True)
        assert np.linalg.norm(res.x - oracle) <= 1e-8 * np.linalg.norm(oracle)


def test_dual_solution_properties(rng):
    n = 15
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    pair = bilqr_solve(op, b, b)
    assert pair.x is pair.primal.x
    assert pair.t is pair.dual.x
    assert pair.converged
