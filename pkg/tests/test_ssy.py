import numpy as np
import pytest

from bikrylov import Breakdown, ssy_init, ssy_step

from conftest import dense_operator, run_process, tridiag, well_conditioned


def test_orthogonal_seeds_are_fine():
    # the oblique process rejects b ! c = 0; this one does not care
    state, beta1, gamma1 = ssy_init(np.array([2.0, 0.0]), np.array([0.0, 3.0]))
    assert beta1 == 2.0 and gamma1 == 3.0
    assert np.array_equal(state.v_curr, [1.0, 0.0])
    assert np.array_equal(state.u_curr, [0.0, 1.0])


def test_both_bases_orthonormal(rng):
    n, k = 30, 12
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    v, u = run_process(ssy_init, ssy_step, op, rng.standard_normal(n),
                       rng.standard_normal(n), k)[:2]
    assert np.max(np.abs(v.T @ v - np.eye(k + 1))) < 1e-10
    assert np.max(np.abs(u.T @ u - np.eye(k + 1))) < 1e-10


def test_coupled_relations(rng):
    # A U_k = V_{k+1} T_{k+1,k} and A^T V_k = U_{k+1} T_{k,k+1}^T
    n, k = 25, 10
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    v, u, alphas, betas, gammas = run_process(ssy_init, ssy_step,
                                              op, rng.standard_normal(n),
                                              rng.standard_normal(n), k)[:5]
    t = tridiag(alphas, betas, gammas)
    s = tridiag(alphas, gammas, betas)
    anorm = np.linalg.norm(a)
    assert np.linalg.norm(a @ u[:, :k] - v @ t) <= 1e-12 * anorm
    assert np.linalg.norm(a.T @ v[:, :k] - u @ s) <= 1e-12 * anorm


def test_worked_identity_chain():
    # A = I with orthogonal unit seeds: alpha_k = 0 throughout and the
    # process closes both sides at step 2 with beta_2 = gamma_2 = 1
    op = dense_operator(np.eye(2))
    state, _, _ = ssy_init(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    coeffs, brk = ssy_step(op, state)
    assert brk is None
    assert coeffs.alpha == 0.0
    assert coeffs.beta_next == 1.0 and coeffs.gamma_next == 1.0
    coeffs, brk = ssy_step(op, state)
    assert coeffs.alpha == 0.0
    assert brk is Breakdown.LUCKY_BOTH


def test_lucky_is_the_only_breakdown(rng):
    # run to the full dimension: termination must be a lucky breakdown
    n = 8
    a = well_conditioned(n, rng)
    op = dense_operator(a)
    brk = run_process(ssy_init, ssy_step, op, rng.standard_normal(n),
                      rng.standard_normal(n), 3 * n)[-1]
    assert brk is not None
    assert brk is not Breakdown.SERIOUS


def test_zero_seed_rejected():
    with pytest.raises(ValueError):
        ssy_init(np.zeros(3), np.ones(3))
