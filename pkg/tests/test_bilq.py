import numpy as np
import pytest

from bikrylov import (Status, StoppingRule, UndefinedTransferError, bicg_solve,
                      bilq_solve, biorth_init, biorth_step)
from bikrylov.bilq import bicg_transfer, lq_advance, lq_init, z_advance

from conftest import dense_operator, run_process, tridiag, well_conditioned


def worked_2x2():
    a = np.array([[0.0, -1.0], [1.0, 1.0]])
    return dense_operator(a), np.array([1.0, 0.0])


def test_worked_2x2_transfer_lands_exactly():
    op, b = worked_2x2()
    res = bilq_solve(op, b, b, transfer=True)
    assert res.status is Status.CONVERGED
    assert res.iterations == 2
    assert np.array_equal(res.x, [1.0, -1.0])
    assert np.linalg.norm(b - op.forward(res.x)) == 0.0


def test_worked_2x2_lq_iterate_path():
    op, b = worked_2x2()
    seen = []
    bilq_solve(op, b, b, callback=lambda k, x: seen.append((k, x.copy())))
    assert seen[0] == (1, pytest.approx([0.0, 0.0]))
    assert seen[1][0] == 2
    assert np.array_equal(seen[1][1], [0.0, -1.0])


def test_worked_2x2_galerkin_undefined_at_first_step():
    # the Galerkin point does not exist at k = 1 here, so the strict
    # variant must stop with no iterate rather than improvise one
    op, b = worked_2x2()
    res = bicg_solve(op, b, b)
    assert res.status is Status.BREAKDOWN
    assert res.x is None
    assert "iteration 1" in res.detail


def test_lucky_breakdown_converges_without_transfer_flag():
    # closing the invariant subspace must land the exact point even when
    # the caller asked for the LQ iterate
    op, b = worked_2x2()
    res = bilq_solve(op, b, b, transfer=False)
    assert res.status is Status.CONVERGED
    assert np.array_equal(res.x, [1.0, -1.0])


def test_identity_converges_in_one_step():
    op = dense_operator(np.eye(5))
    b = np.arange(1.0, 6.0)
    res = bilq_solve(op, b, b)
    assert res.status is Status.CONVERGED
    assert res.iterations == 1
    assert np.allclose(res.x, b, rtol=1e-14)


def test_estimated_residuals_match_explicit(rng):
    n = 40
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    c = rng.standard_normal(n)
    est = bilq_solve(op, b, c).history
    exp = bilq_solve(op, b, c, explicit_residuals=True).history
    bnorm = np.linalg.norm(b)
    for r_est, r_exp in zip(est, exp):
        assert r_est.iteration == r_exp.iteration
        assert r_est.rnorm == pytest.approx(r_exp.rnorm,
                                            rel=1e-6, abs=1e-10 * bnorm)


def test_galerkin_point_matches_dense_tridiagonal_solve(rng):
    # the transferred point is V_k y with T_k y = beta_1 e_1
    n = 30
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    c = rng.standard_normal(n)
    v, _, alphas, betas, gammas = run_process(biorth_init, biorth_step,
                                              op, b, c, 12)[:5]
    for k in (3, 7, 11):
        t_full = tridiag(alphas[:k], betas[:k + 1], gammas[:k + 1])
        y = np.linalg.solve(t_full[:k, :], betas[0] * np.eye(k + 1, 1)[:k, 0])
        oracle = v[:, :k] @ y
        res = bicg_solve(op, b, c, StoppingRule(atol=0.0, rtol=0.0,
                                                max_iterations=k))
        assert res.status is Status.MAX_ITERATIONS
        assert np.linalg.norm(res.x - oracle) <= 1e-8 * np.linalg.norm(oracle)


def test_transfer_and_strict_galerkin_agree(rng):
    n = 25
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    r1 = bilq_solve(op, b, b, transfer=True)
    r2 = bicg_solve(op, b, b)
    assert np.array_equal(r1.x, r2.x)
    assert [r.rnorm for r in r1.history] == [r.rnorm for r in r2.history]


def test_solution_norm_accumulator_is_monotone(rng):
    n = 30
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    state, beta1, _ = biorth_init(rng.standard_normal(n),
                                  rng.standard_normal(n))
    coeffs, _ = biorth_step(op, state)
    lq = lq_init(coeffs, beta1)
    norms = []
    for _ in range(12):
        coeffs, brk = biorth_step(op, state)
        lq_advance(lq, coeffs)
        z_advance(lq)
        norms.append(float(lq.znorm_sq))
        if brk is not None:
            break
    assert all(b >= a for a, b in zip(norms, norms[1:]))


def test_transfer_requires_defined_point():
    with pytest.raises(UndefinedTransferError):
        bicg_transfer(np.zeros(2), None, np.ones(2))


def test_error_delay_statistic_recorded(rng):
    n = 20
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    b = rng.standard_normal(n)
    res = bilq_solve(op, b, b, StoppingRule(error_delay=4))
    assert all(r.error_lower_bound is not None for r in res.history)
    assert all(r.error_lower_bound >= 0 for r in res.history)
