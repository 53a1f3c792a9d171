import numpy as np
import pytest

from bikrylov import convdiff_2d, ode_1d, polar_poisson


def max_err(u, u_ref):
    return float(np.max(np.abs(u - u_ref)))


class TestOde1d:
    def test_shape_and_nnz(self):
        p = ode_1d(50)
        assert p.matrix.shape == (50, 50)
        assert p.matrix.nnz == 148  # 3n - 2
        assert p.b.shape == (50,) and p.c.shape == (50,)

    def test_stencil_entries(self):
        a = ode_1d(50).matrix.to_dense()
        # chi = (1, 1, 1), h = 1/51
        assert a[3, 2] == pytest.approx(0.99019607843137258, rel=1e-15)
        assert a[3, 3] == pytest.approx(-1.9996155324875049, rel=1e-15)
        assert a[3, 4] == pytest.approx(1.0098039215686274, rel=1e-15)

    def test_manufactured_solution_second_order(self):
        # frozen dense-solve errors; ratio tracks (h_coarse/h_fine)^2
        expected = {25: 1.385500e-03, 50: 3.600711e-04, 100: 9.179047e-05}
        errs = {}
        for n, e in expected.items():
            p = ode_1d(n)
            u = np.linalg.solve(p.matrix.to_dense(), p.b)
            errs[n] = max_err(u, p.meta["u_exact"](p.meta["nodes"]))
            assert errs[n] == pytest.approx(e, rel=1e-4)
        assert errs[25] / errs[50] == pytest.approx((51 / 26) ** 2, rel=0.01)
        assert errs[50] / errs[100] == pytest.approx((101 / 51) ** 2, rel=0.01)

    def test_adjoint_system_discretizes_adjoint_equation(self):
        # closed form for v'' - v' + v = exp(x), v(0) = v(1) = 0
        om = np.sqrt(3.0) / 2.0
        d1 = (np.cos(om) - np.sqrt(np.e)) / np.sin(om)

        def v_exact(x):
            return np.exp(x) + np.exp(x / 2) * (d1 * np.sin(om * x)
                                                - np.cos(om * x))

        errs = {}
        for n in (25, 50):
            p = ode_1d(n)
            v = np.linalg.solve(p.matrix.to_dense().T, p.c)
            errs[n] = max_err(v, v_exact(p.meta["nodes"]))
        assert errs[50] == pytest.approx(1.615100e-05, rel=1e-4)
        assert errs[25] / errs[50] == pytest.approx((51 / 26) ** 2, rel=0.01)

    def test_functional_value(self):
        # integral of exp(x) sin(pi x) over (0, 1)
        p = ode_1d(8)
        assert p.meta["J_star"] == pytest.approx(1.0746781985085538, rel=1e-15)

    def test_general_coefficients(self):
        p = ode_1d(40, chi=(2.0, -1.5, 0.5))
        a = p.matrix.to_dense()
        u = np.linalg.solve(a, p.b)
        assert max_err(u, p.meta["u_exact"](p.meta["nodes"])) < 1e-3

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValueError):
            ode_1d(1)


class TestConvdiff2d:
    def test_nnz_formula(self):
        assert convdiff_2d(50).matrix.nnz == 12300  # 5 n^2 - 4 n
        assert convdiff_2d(12).matrix.nnz == 5 * 144 - 48

    def test_stencil_entries(self):
        n = 4
        a = convdiff_2d(n).matrix.to_dense()
        h = 1.0 / (n + 1)
        k = n + 1  # interior node (1, 1), x-fastest ordering
        assert a[k, k] == pytest.approx(-4.0, rel=1e-15)
        assert a[k, k + 1] == pytest.approx(1 + 0.5 * h, rel=1e-15)
        assert a[k, k - 1] == pytest.approx(1 - 0.5 * h, rel=1e-15)
        assert a[k, k + n] == pytest.approx(1 + 0.5 * h, rel=1e-15)
        assert a[k, k - n] == pytest.approx(1 - 0.5 * h, rel=1e-15)

    def test_manufactured_solution_second_order(self):
        expected = {12: 4.997606e-03, 24: 1.350240e-03}
        errs = {}
        for n, e in expected.items():
            p = convdiff_2d(n)
            u = np.linalg.solve(p.matrix.to_dense(), p.b)
            errs[n] = max_err(u, p.meta["u_exact"](p.meta["x"], p.meta["y"]))
            assert errs[n] == pytest.approx(e, rel=1e-4)
        assert errs[12] / errs[24] == pytest.approx((25 / 13) ** 2, rel=0.02)

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValueError):
            convdiff_2d(1)


class TestPolarPoisson:
    def test_nnz(self):
        assert polar_poisson(50, 50).matrix.nnz == 12400
        p = polar_poisson(10, 8)
        # diag + inner + outer + two periodic neighbours
        assert p.matrix.nnz == 80 + 72 + 72 + 160

    def test_nonsymmetric(self):
        a = polar_poisson(8, 8).matrix.to_dense()
        assert not np.allclose(a, a.T)

    def test_dual_seed_copies_b(self):
        p = polar_poisson(6, 6)
        assert np.array_equal(p.b, p.c)
        assert p.c is not p.b

    def test_manufactured_solution_second_order(self):
        expected = {10: 4.489694e-03, 20: 1.108167e-03, 40: 2.766604e-04}
        errs = {}
        for n, e in expected.items():
            p = polar_poisson(n, n)
            u = np.linalg.solve(p.matrix.to_dense(), p.b)
            m = p.meta
            rg, tg = np.meshgrid(np.arange(n), np.arange(n), indexing="xy")
            uex = m["u_exact"](m["r"][rg.ravel()], m["theta"][tg.ravel()])
            errs[n] = max_err(u, uex)
            assert errs[n] == pytest.approx(e, rel=1e-4)
        assert errs[10] / errs[20] == pytest.approx(4.0, rel=0.05)
        assert errs[20] / errs[40] == pytest.approx(4.0, rel=0.05)

    def test_constant_boundary_reproduced_exactly(self):
        # f = 0 with g = 1 makes u = 1 an exact discrete solution, which
        # pins down the ghost-ring fold at the outer boundary
        p = polar_poisson(12, 16,
                          f=lambda r, t: np.zeros_like(r),
                          g=lambda t: np.ones_like(t))
        u = np.linalg.solve(p.matrix.to_dense(), p.b)
        assert np.allclose(u, 1.0, atol=1e-11)

    def test_custom_data_has_no_exact_solution(self):
        p = polar_poisson(6, 6, f=lambda r, t: r)
        assert "u_exact" not in p.meta

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValueError):
            polar_poisson(1, 8)
        with pytest.raises(ValueError):
            polar_poisson(8, 2)


def test_operator_matches_matrix(rng):
    p = ode_1d(20)
    x = rng.standard_normal(20)
    a = p.matrix.to_dense()
    assert np.allclose(p.operator.forward(x), a @ x)
    assert np.allclose(p.operator.adjoint(x), a.T @ x)
    assert p.n == 20
