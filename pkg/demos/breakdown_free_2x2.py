"""A two-by-two system where the Galerkin iterate does not exist.

With A = [[0, -1], [1, 1]] and b = c = (1, 0), the first projected
matrix T_1 = [0] is singular: the Galerkin (BiCG) iterate is undefined
at k = 1 and the method has nothing to return.  BiLQ sidesteps the
singular leading minor by solving the least-norm subproblem instead,
and lands on the exact solution when the process closes at k = 2.

Run with: python3 demos/breakdown_free_2x2.py
"""

import numpy as np

from bikrylov import SparseMatrix, bicg_solve, bilq_solve, from_sparse, qmr_solve

a = np.array([[0.0, -1.0], [1.0, 1.0]])
m = SparseMatrix.from_coo(*np.nonzero(a), a[np.nonzero(a)], a.shape)
op = from_sparse(m)
b = np.array([1.0, 0.0])

print("A =")
print(a)
print("b = c =", b)
print()

r = bicg_solve(op, b, b.copy())
print(f"bicg : status={r.status.value!r}  x={r.x}  ({r.detail})")

r = bilq_solve(op, b, b.copy())
res = np.linalg.norm(b - a @ r.x)
print(f"bilq : status={r.status.value!r}  x={r.x}  |b - Ax| = {res:.2e}")

# the adjoint system A't = c is just as solvable
r = qmr_solve(op, b, b.copy())
res = np.linalg.norm(b - a.T @ r.x)
print(f"qmr  : status={r.status.value!r}  t={r.x}  |c - A't| = {res:.2e}")

print()
print("The Galerkin point exists only when the leading projection is")
print("nonsingular; the least-norm and quasi-residual subproblems always do.")
