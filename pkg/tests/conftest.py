import numpy as np
import pytest

from bikrylov import SparseMatrix, from_sparse


def well_conditioned(n, rng, spread=(1.0, 2.0)):
    """Diagonalizable nonsymmetric matrix with eigenvalues in [spread]."""
    x = np.eye(n) + 0.1 * rng.standard_normal((n, n))
    return x @ np.diag(np.linspace(spread[0], spread[1], n)) @ np.linalg.inv(x)


def dense_operator(a, dtype=None):
    """Wrap a dense matrix as a LinearOperator through the CSR path."""
    a = np.asarray(a)
    n_rows, n_cols = a.shape
    rows, cols = np.nonzero(np.ones_like(a, dtype=bool))
    m = SparseMatrix.from_coo(rows, cols, a.ravel(), (n_rows, n_cols),
                              dtype=dtype)
    return from_sparse(m)


def run_process(init, step, op, b, c, k_max):
    """Drive a tridiagonalization, retaining the bases and coefficients.

    Returns (V, U, alphas, betas, gammas, breakdown) where V has the
    first columns v_1..v_j, betas = [beta_1..beta_{j+1}] and gammas
    likewise, stopping early on breakdown.
    """
    state, beta1, gamma1 = init(b, c)
    vs = [state.v_curr.copy()]
    us = [state.u_curr.copy()]
    alphas, betas, gammas = [], [beta1], [gamma1]
    brk = None
    for _ in range(k_max):
        coeffs, brk = step(op, state)
        alphas.append(coeffs.alpha)
        betas.append(coeffs.beta_next)
        gammas.append(coeffs.gamma_next)
        if brk is not None:
            break
        vs.append(state.v_curr.copy())
        us.append(state.u_curr.copy())
    return (np.array(vs).T, np.array(us).T,
            np.array(alphas), np.array(betas), np.array(gammas), brk)


def tridiag(alphas, betas, gammas, dtype=None):
    """Assemble T_{k+1,k} from the recurrence coefficients."""
    k = len(alphas)
    t = np.zeros((k + 1, k), dtype=dtype)
    for i in range(k):
        t[i, i] = alphas[i]
        t[i + 1, i] = betas[i + 1]
        if i + 1 < k:
            t[i, i + 1] = gammas[i + 1]
    return t


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
