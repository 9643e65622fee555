import math

import numpy as np
import pytest

from delaylab import dmc, optimize
from delaylab.exponents import channel_capacity_fast, gallager_e0, sphere_packing


class TestMaximizeConcave1d:
    def test_quadratic(self):
        res = optimize.maximize_concave_1d(lambda x: -(x - 2.0) ** 2, 0.0, 5.0, tol=1e-10)
        assert res.argmax == pytest.approx(2.0, abs=1e-8)
        assert res.value == pytest.approx(0.0, abs=1e-15)

    def test_gallager_bracket_vs_grid(self, bsc002):
        # oracle: dense grid scan of E0(rho) - rho R
        r = 0.3
        q = np.array([0.5, 0.5])
        rhos = np.linspace(0.0, 4.0, 1_000_001)
        inner = (q[:, None, None] * bsc002.rows[:, None, :] **
                 (1.0 / (1.0 + rhos[None, :, None]))).sum(axis=0)
        e0 = -np.log((inner ** (1.0 + rhos[:, None])).sum(axis=1))
        grid_best = float(np.max(e0 - rhos * r))
        res = optimize.maximize_concave_1d(
            lambda rho: gallager_e0(bsc002, rho, q) - rho * r, 0.0, 4.0, tol=1e-9)
        assert res.value == pytest.approx(grid_best, abs=1e-6)

    def test_constant_returns_smallest(self):
        res = optimize.maximize_concave_1d(lambda x: 1.0, 0.25, 9.0, tol=1e-10)
        assert res.argmax == pytest.approx(0.25, abs=1e-9)

    def test_random_concave_quadratics_vs_grid(self):
        rng = np.random.default_rng(3)
        tol = 1e-8
        for _ in range(100):
            a = rng.uniform(0.1, 5.0)
            b = rng.uniform(-1.0, 6.0)
            c = rng.uniform(-2.0, 2.0)
            f = lambda x: -a * (x - b) ** 2 + c
            xs = np.linspace(0.0, 5.0, 1_000_001)
            grid_best = float(np.max(-a * (xs - b) ** 2 + c))
            res = optimize.maximize_concave_1d(f, 0.0, 5.0, tol=tol)
            assert res.value >= grid_best - 10 * tol

    def test_all_nonfinite_raises(self):
        with pytest.raises(ValueError):
            optimize.maximize_concave_1d(lambda x: -math.inf, 0.0, 1.0)


class TestMaximizeOverSimplex:
    def test_mutual_information_bsc(self, bsc002):
        q, val = optimize.maximize_over_simplex(
            lambda q: dmc.mutual_information(bsc002, q), 2, tol=1e-12)
        assert val == pytest.approx(0.5951080672802133, abs=1e-9)
        assert q == pytest.approx([0.5, 0.5], abs=1e-5)

    def test_dim_one(self):
        q, val = optimize.maximize_over_simplex(lambda q: 3.14, 1)
        assert q.tolist() == [1.0]
        assert val == 3.14

    def test_e0_at_rho_one(self, bsc002):
        # oracle: ln 2 - ln(1 + 2 sqrt(p(1-p)))
        expected = math.log(2) - math.log(1 + 2 * math.sqrt(0.02 * 0.98))
        q, val = optimize.maximize_over_simplex(
            lambda q: gallager_e0(bsc002, 1.0, q), 2, tol=1e-12)
        assert val == pytest.approx(expected, abs=1e-9)
        assert q == pytest.approx([0.5, 0.5], abs=1e-4)

    def test_dim3_vs_barycentric_grid(self):
        rng = np.random.default_rng(5)
        center = rng.dirichlet(np.ones(3))
        f = lambda q: -float(np.sum((q - center) ** 2))
        # dense barycentric grid oracle
        steps = np.linspace(0.0, 1.0, 401)
        best = -math.inf
        for q0 in steps:
            q1 = np.linspace(0.0, 1.0 - q0, 201)
            q2 = 1.0 - q0 - q1
            vals = -((q0 - center[0]) ** 2 + (q1 - center[1]) ** 2 + (q2 - center[2]) ** 2)
            best = max(best, float(vals.max()))
        _, val = optimize.maximize_over_simplex(f, 3, tol=1e-10)
        assert val >= best - 1e-4


class TestMinimizeOverChannels:
    def test_capacity_constrained_matches_sphere_packing(self, bsc002):
        # E+ search on an output-symmetric channel must land on E_sp (oracle
        # via the rho form)
        r = 0.3
        target = sphere_packing(bsc002, r)

        def objective(g):
            return max(dmc.divergence_rows(g.rows[x], bsc002.rows[x]) for x in range(2))

        def excess(g):
            return max(0.0, channel_capacity_fast(g) - r)

        g, val = optimize.minimize_over_channels(
            objective, lambda g: excess(g) <= 1e-9, (2, 2), restarts=24, seed=0,
            penalty=lambda g: excess(g) ** 2)
        assert val == pytest.approx(target, abs=1e-3)

    def test_unconstrained_finds_p(self, bsc002):
        uni = np.array([0.5, 0.5])
        g, val = optimize.minimize_over_channels(
            lambda g: dmc.divergence_conditional(g, bsc002, uni),
            lambda g: True, (2, 2), restarts=8, seed=0)
        assert val == pytest.approx(0.0, abs=1e-8)
        assert np.allclose(g.rows, bsc002.rows, atol=1e-3)

    def test_bec_at_half_bit(self, bec04):
        # oracle: D(1/2 || 0.6) binary divergence
        r = 0.5 * math.log(2)
        target = 0.5 * math.log(0.5 / 0.6) + 0.5 * math.log(0.5 / 0.4)

        def objective(g):
            return max(dmc.divergence_rows(g.rows[x], bec04.rows[x]) for x in range(2))

        def excess(g):
            return max(0.0, channel_capacity_fast(g) - r)

        _, val = optimize.minimize_over_channels(
            objective, lambda g: excess(g) <= 1e-9, (2, 3), restarts=24, seed=0,
            penalty=lambda g: excess(g) ** 2, row_supports=bec04.row_supports())
        assert val == pytest.approx(target, abs=1e-3)

    def test_monotone_in_restarts_and_reproducible(self, bsc002):
        r = 0.25

        def objective(g):
            return max(dmc.divergence_rows(g.rows[x], bsc002.rows[x]) for x in range(2))

        def excess(g):
            return max(0.0, channel_capacity_fast(g) - r)

        vals = []
        for restarts in (2, 8, 16):
            _, val = optimize.minimize_over_channels(
                objective, lambda g: excess(g) <= 1e-9, (2, 2), restarts=restarts,
                seed=7, penalty=lambda g: excess(g) ** 2)
            vals.append(val)
        assert vals[1] <= vals[0] + 1e-12
        assert vals[2] <= vals[1] + 1e-12
        _, again = optimize.minimize_over_channels(
            objective, lambda g: excess(g) <= 1e-9, (2, 2), restarts=16,
            seed=7, penalty=lambda g: excess(g) ** 2)
        assert again == vals[2]

    def test_dims_cap(self):
        with pytest.raises(ValueError):
            optimize.minimize_over_channels(lambda g: 0.0, lambda g: True, (5, 2))
