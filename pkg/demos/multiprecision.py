"""One set of recurrences, any floating-point width.

Every kernel in the package works on whatever dtype the operator
carries: the recurrence scalars, the basis vectors, and the reflection
coefficients all stay in that precision.  This demo solves the same
boundary value problem in binary32, binary64, and the platform's
extended long double, with tolerances scaled to each unit roundoff.

Run with: python3 demos/multiprecision.py
"""

import numpy as np

from bikrylov import StoppingRule, bilq_solve, ode_1d

print(f"{'dtype':<10} {'eps':>10} {'iters':>6} {'final rnorm':>12} "
      f"{'threshold':>12}")
for dtype in (np.float32, np.float64, np.longdouble):
    eps = float(np.finfo(dtype).eps)
    prob = ode_1d(40, dtype=dtype)
    rule = StoppingRule(atol=0.0, rtol=1e3 * eps)
    thr = 1e3 * eps * float(np.linalg.norm(prob.b))
    res = bilq_solve(prob.operator, prob.b, prob.c, rule,
                     explicit_residuals=True)
    assert res.x.dtype == np.dtype(dtype)
    print(f"{np.dtype(dtype).name:<10} {eps:>10.2e} {res.iterations:>6} "
          f"{res.rnorm:>12.3e} {thr:>12.3e}")

nmant = np.finfo(np.longdouble).nmant
print()
print(f"(long double on this platform keeps {nmant + 1} significand bits; "
      "a true binary128")
print("would be detected and used the same way where the platform "
      "provides it.)")
