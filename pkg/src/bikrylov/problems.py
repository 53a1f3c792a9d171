"""Generated test problems with manufactured solutions.

Each constructor returns a :class:`TestProblem` bundling the sparse
matrix, the primal right-hand side ``b``, a companion adjoint
right-hand side ``c``, and problem metadata (grids, coefficients,
manufactured fields) used by the functional-estimation pipeline and
the demos.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from .linop import LinearOperator, SparseMatrix, from_sparse


@dataclass
class TestProblem:
    """A linear system (or adjoint pair) ready for the solvers."""

    name: str
    matrix: SparseMatrix
    b: np.ndarray
    c: np.ndarray
    meta: Dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.matrix.n_rows

    @property
    def operator(self) -> LinearOperator:
        return from_sparse(self.matrix)


def ode_1d(n: int = 50, chi=(1.0, 1.0, 1.0), dtype=np.float64) -> TestProblem:
    """Two-point boundary value problem on (0, 1) with central differences.

    Discretizes ``chi1 u'' + chi2 u' + chi3 u = f`` with homogeneous
    Dirichlet ends on ``n`` interior nodes.  The manufactured solution
    is ``u(x) = sin(pi x)`` and the adjoint load is ``g(x) = exp(x)``;
    ``b`` carries ``h^2 f`` and ``c`` carries ``h^2 g`` so the adjoint
    system discretizes the adjoint equation ``chi1 v'' - chi2 v' +
    chi3 v = g``.

    Parameters
    ----------
    n : int
        Number of interior grid nodes.
    chi : tuple of float
        Coefficients (chi1, chi2, chi3) of the differential operator.
    dtype : numpy dtype

    Returns
    -------
    TestProblem
        ``meta`` holds ``h``, ``nodes``, ``chi``, the callables ``f``,
        ``g``, ``u_exact``, and the exact functional value ``J_star``
        of ``integral(g * u)``.
    """
    if n < 2:
        raise ValueError("need at least two interior nodes")
    chi1, chi2, chi3 = (float(v) for v in chi)
    h = 1.0 / (n + 1)
    nodes = (np.arange(1, n + 1) * h).astype(dtype)

    def f(x):
        x = np.asarray(x, dtype=dtype)
        return (-chi1 * np.pi ** 2 * np.sin(np.pi * x)
                + chi2 * np.pi * np.cos(np.pi * x)
                + chi3 * np.sin(np.pi * x))

    def g(x):
        return np.exp(np.asarray(x, dtype=dtype))

    def u_exact(x):
        return np.sin(np.pi * np.asarray(x, dtype=dtype))

    lower = chi1 - 0.5 * chi2 * h
    diag = -2.0 * chi1 + chi3 * h * h
    upper = chi1 + 0.5 * chi2 * h

    idx = np.arange(n)
    rows = np.concatenate([idx, idx[1:], idx[:-1]])
    cols = np.concatenate([idx, idx[1:] - 1, idx[:-1] + 1])
    vals = np.concatenate([np.full(n, diag),
                           np.full(n - 1, lower),
                           np.full(n - 1, upper)]).astype(dtype)
    matrix = SparseMatrix.from_coo(rows, cols, vals, (n, n), dtype=dtype)

    b = (h * h * f(nodes)).astype(dtype)
    c = (h * h * g(nodes)).astype(dtype)
    j_star = float(np.pi * (np.e + 1.0) / (np.pi ** 2 + 1.0))
    meta = {"h": h, "nodes": nodes, "chi": (chi1, chi2, chi3),
            "f": f, "g": g, "u_exact": u_exact, "J_star": j_star}
    return TestProblem("ode1d", matrix, b, c, meta)


def convdiff_2d(n: int = 50, kappa=(1.0, 1.0), dtype=np.float64) -> TestProblem:
    """Convection-diffusion on the unit square, five-point stencil.

    Discretizes ``kappa1 (u_xx + u_yy) + kappa2 (u_x + u_y) = f`` with
    homogeneous Dirichlet boundary on an ``n`` by ``n`` interior grid,
    h = 1/(n+1), rows ordered x-fastest.  Manufactured solution
    ``u = sin(pi x) sin(pi y)``; adjoint load ``g = exp(x + y)``.

    Returns
    -------
    TestProblem
        ``meta`` holds ``h``, ``n_side``, the node coordinate arrays,
        and the manufactured callables.
    """
    if n < 2:
        raise ValueError("need at least a 2 by 2 interior grid")
    k1, k2 = (float(v) for v in kappa)
    h = 1.0 / (n + 1)
    coords = np.arange(1, n + 1) * h
    xg, yg = np.meshgrid(coords, coords, indexing="xy")
    xs = xg.ravel().astype(dtype)
    ys = yg.ravel().astype(dtype)

    def f(x, y):
        sx, sy = np.sin(np.pi * x), np.sin(np.pi * y)
        cx, cy = np.cos(np.pi * x), np.cos(np.pi * y)
        return (-2.0 * k1 * np.pi ** 2 * sx * sy
                + k2 * np.pi * (cx * sy + sx * cy))

    def g(x, y):
        return np.exp(x + y)

    def u_exact(x, y):
        return np.sin(np.pi * x) * np.sin(np.pi * y)

    diag = -4.0 * k1
    plus = k1 + 0.5 * k2 * h
    minus = k1 - 0.5 * k2 * h

    rows = [np.arange(n * n)]
    cols = [np.arange(n * n)]
    vals = [np.full(n * n, diag)]
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="xy")
    ii, jj = ii.ravel(), jj.ravel()
    base = jj * n + ii
    east = ii < n - 1
    rows += [base[east], base[east] + 1]
    cols += [base[east] + 1, base[east]]
    vals += [np.full(east.sum(), plus), np.full(east.sum(), minus)]
    north = jj < n - 1
    rows += [base[north], base[north] + n]
    cols += [base[north] + n, base[north]]
    vals += [np.full(north.sum(), plus), np.full(north.sum(), minus)]

    matrix = SparseMatrix.from_coo(np.concatenate(rows), np.concatenate(cols),
                                   np.concatenate(vals).astype(dtype),
                                   (n * n, n * n), dtype=dtype)
    b = (h * h * f(xs, ys)).astype(dtype)
    c = (h * h * g(xs, ys)).astype(dtype)
    meta = {"h": h, "n_side": n, "x": xs, "y": ys,
            "f": f, "g": g, "u_exact": u_exact}
    return TestProblem("convdiff2d", matrix, b, c, meta)


def polar_poisson(n_r: int = 50, n_theta: int = 50, radius: float = 1.0,
                  f: Optional[Callable] = None, g: Optional[Callable] = None,
                  dtype=np.float64) -> TestProblem:
    """Poisson equation on a disk in polar coordinates.

    Finite differences on the half-shifted radial grid
    ``r_i = (i - 1/2) dr``, which needs no pole condition: the
    coefficient tying ring 1 to the pole vanishes identically.  The
    azimuthal direction is periodic; the Dirichlet value ``g(theta)``
    at ``r = radius`` is folded through a ghost ring.  The resulting
    matrix is nonsymmetric.

    Defaults manufacture ``u = r (radius - r) cos(theta) / radius`` via
    ``f = -3 cos(theta) / radius`` and ``g = 0`` (stated for
    ``radius = 1``; general radii rescale).  ``c`` defaults to a copy
    of ``b`` so adjoint-seeded methods run unchanged.

    Parameters
    ----------
    n_r, n_theta : int
        Radial rings and azimuthal sectors.
    radius : float
        Disk radius.
    f : callable, optional
        Right-hand side ``f(r, theta)``.
    g : callable, optional
        Boundary values ``g(theta)``.

    Returns
    -------
    TestProblem
        ``meta`` holds the grids and, for the default data, the exact
        solution callable.
    """
    if n_r < 2 or n_theta < 3:
        raise ValueError("need at least 2 rings and 3 sectors")
    dr = radius / n_r
    dth = 2.0 * np.pi / n_theta
    r = (np.arange(1, n_r + 1) - 0.5) * dr
    theta = np.arange(n_theta) * dth

    default_data = f is None and g is None
    if f is None:
        def f(rr, tt):
            return -3.0 * np.cos(tt) / radius
    if g is None:
        def g(tt):
            return np.zeros_like(np.asarray(tt, dtype=dtype))

    def u_exact(rr, tt):
        return rr * (radius - rr) * np.cos(tt) / radius

    a_minus = (r - 0.5 * dr) / (r * dr * dr)
    a_plus = (r + 0.5 * dr) / (r * dr * dr)
    a_theta = 1.0 / (r * r * dth * dth)

    nn = n_r * n_theta
    rows, cols, vals = [], [], []
    rg, tg = np.meshgrid(np.arange(n_r), np.arange(n_theta), indexing="xy")
    rg, tg = rg.ravel(), tg.ravel()
    base = tg * n_r + rg

    diag = -(a_minus[rg] + a_plus[rg]) - 2.0 * a_theta[rg]
    outer = rg == n_r - 1
    diag = diag - np.where(outer, a_plus[rg], 0.0)
    rows.append(base)
    cols.append(base)
    vals.append(diag)

    inner = rg > 0
    rows.append(base[inner])
    cols.append(base[inner] - 1)
    vals.append(a_minus[rg[inner]])
    has_out = rg < n_r - 1
    rows.append(base[has_out])
    cols.append(base[has_out] + 1)
    vals.append(a_plus[rg[has_out]])

    left = ((tg - 1) % n_theta) * n_r + rg
    right = ((tg + 1) % n_theta) * n_r + rg
    rows += [base, base]
    cols += [left, right]
    vals += [a_theta[rg], a_theta[rg]]

    matrix = SparseMatrix.from_coo(np.concatenate(rows), np.concatenate(cols),
                                   np.concatenate(vals).astype(dtype),
                                   (nn, nn), dtype=dtype)

    b = np.asarray(f(r[rg], theta[tg]), dtype=dtype).copy()
    gb = np.asarray(g(theta[tg]), dtype=dtype)
    b[outer] -= 2.0 * a_plus[n_r - 1] * gb[outer]
    c = b.copy()
    meta = {"dr": dr, "dtheta": dth, "r": r, "theta": theta,
            "n_r": n_r, "n_theta": n_theta, "radius": radius}
    if default_data:
        meta["u_exact"] = u_exact
    return TestProblem("polar-poisson", matrix, b, c, meta)
