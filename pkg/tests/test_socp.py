import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from socprec.errors import DomainError
from socprec.socp import (operator_norm, optimality_diagnostics, project_ball,
                          reference_solve, shrink, solve_socp)


def random_instance(rng, n, m, k, sigma=1.0, spike=None, noise=True):
    if spike is None:
        spike = 40.0 / np.sqrt(n)
    x_tilde = np.zeros(n)
    x_tilde[n - k:] = spike
    A = rng.standard_normal((m, n))
    v = sigma * rng.standard_normal(m) if noise else np.zeros(m)
    return A, x_tilde, A @ x_tilde + v


class TestPieces:
    def test_operator_norm_close_to_svd(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((30, 50))
        exact = float(np.linalg.svd(A, compute_uv=False)[0])
        est = operator_norm(A)
        assert est <= exact + 1e-9
        assert est >= 0.99 * exact

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_ball_projection(self, seed):
        rng = np.random.default_rng(seed)
        y = rng.standard_normal(8)
        z = 3.0 * rng.standard_normal(8)
        r = float(rng.uniform(0.1, 3.0))
        p = project_ball(z, y, r)
        assert np.linalg.norm(y - p) <= r * (1 + 1e-12)
        if np.linalg.norm(y - z) <= r:
            assert np.array_equal(p, z)

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_shrink_is_prox(self, seed):
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(6)
        t = float(rng.uniform(0.01, 2.0))
        for signed in (False, True):
            x = shrink(v, t, signed)
            if signed:
                assert np.all(x >= 0.0)
            # prox optimality: objective at x no worse than at jittered points
            def obj(u):
                if signed and np.any(u < 0):
                    return np.inf
                return t * np.abs(u).sum() + 0.5 * np.sum((u - v) ** 2)
            base = obj(x)
            for _ in range(10):
                u = x + 0.1 * rng.standard_normal(6)
                assert base <= obj(u) + 1e-9


class TestZeroSolution:
    def test_zero_returned_exactly(self):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((10, 25))
        y = 0.1 * rng.standard_normal(10)
        r = float(np.linalg.norm(y)) + 1.0
        for solver in (solve_socp, reference_solve):
            sol = solver(A, y, r)
            assert np.all(sol.x_rec == 0.0)
            assert sol.converged

    def test_fobj_against_known_signal(self):
        rng = np.random.default_rng(2)
        A, x_tilde, y = random_instance(rng, 30, 15, 3)
        r = float(np.linalg.norm(y)) * 1.01
        sol = solve_socp(A, y, r, x_tilde=x_tilde)
        assert sol.f_obj == pytest.approx(-float(np.abs(x_tilde).sum()))


class TestCrossMethod:
    def test_objective_agreement_30_instances(self):
        # acceptance-grade: two structurally different methods agree
        rng = np.random.default_rng(3)
        for trial in range(30):
            n = int(rng.integers(24, 200))
            m = max(6, int(n * float(rng.uniform(0.3, 0.7))))
            k = max(1, int(n * float(rng.uniform(0.02, 0.15))))
            signed = bool(trial % 3 == 0)
            A, x_tilde, y = random_instance(rng, n, m, k)
            r = float(rng.uniform(0.5, 1.2)) * np.sqrt(m)
            a = solve_socp(A, y, r, signed=signed)
            b = reference_solve(A, y, r, signed=signed)
            assert a.converged and b.converged
            oa = float(np.abs(a.x_rec).sum())
            ob = float(np.abs(b.x_rec).sum())
            assert abs(oa - ob) / max(1.0, abs(oa)) < 1e-5

    def test_certificate_gap(self):
        rng = np.random.default_rng(4)
        A, x_tilde, y = random_instance(rng, 60, 30, 5)
        sol = solve_socp(A, y, float(np.sqrt(30)), x_tilde=x_tilde, certify=True)
        assert sol.certificate_gap is not None
        assert sol.certificate_gap < 1e-5


class TestFeasibilityAndInvariants:
    def test_feasibility_every_converged_solve(self):
        rng = np.random.default_rng(5)
        for _ in range(15):
            n = int(rng.integers(30, 150))
            m = max(6, n // 2)
            k = max(1, n // 12)
            A, x_tilde, y = random_instance(rng, n, m, k)
            r = float(rng.uniform(0.3, 1.1)) * np.sqrt(m)
            sol = solve_socp(A, y, r)
            assert sol.converged
            assert sol.residual_norm <= r * (1 + 1e-6)

    def test_l1_nonincreasing_in_r(self):
        rng = np.random.default_rng(6)
        A, x_tilde, y = random_instance(rng, 80, 40, 8)
        objs = []
        for c in (0.2, 0.4, 0.6, 0.8, 1.0):
            sol = solve_socp(A, y, float(np.sqrt(c * 40)))
            assert sol.converged
            objs.append(float(np.abs(sol.x_rec).sum()))
        for o1, o2 in zip(objs, objs[1:]):
            assert o2 <= o1 + 1e-7

    def test_signed_at_least_unsigned_objective(self):
        rng = np.random.default_rng(7)
        for seed in range(5):
            A, x_tilde, y = random_instance(np.random.default_rng(seed), 60, 30, 6)
            r = float(np.sqrt(30))
            unsigned = solve_socp(A, y, r)
            signed = solve_socp(A, y, r, signed=True)
            assert np.min(signed.x_rec) >= -1e-9
            assert (np.abs(signed.x_rec).sum()
                    >= np.abs(unsigned.x_rec).sum() - 1e-7)

    def test_scale_equivariance(self):
        # homogeneity of the program itself; verified at tight solver
        # tolerance since the default stopping rule only pins x to ~1e-4
        rng = np.random.default_rng(8)
        A, x_tilde, y = random_instance(rng, 50, 25, 5)
        r = float(np.sqrt(25))
        tight = dict(eps_abs=1e-12, eps_rel=1e-10)
        base = solve_socp(A, y, r, **tight)
        c = 3.7
        scaled = solve_socp(A, c * y, c * r, **tight)
        assert np.linalg.norm(scaled.x_rec - c * base.x_rec) \
            <= 1e-6 * max(1.0, c * float(np.linalg.norm(base.x_rec)))

    def test_signed_feasible_with_generous_radius(self):
        # x_tilde itself is feasible w.h.p. at r = 1.5*sigma*sqrt(m)
        for seed in range(5):
            local = np.random.default_rng(100 + seed)
            A, x_tilde, y = random_instance(local, 80, 40, 8)
            v_norm_bound = 1.5 * np.sqrt(40)
            solver = reference_solve if seed == 0 else solve_socp
            sol = solver(A, y, float(v_norm_bound), signed=True)
            assert sol.converged
            assert sol.residual_norm <= v_norm_bound * (1 + 1e-6)

    def test_domain_errors(self):
        A = np.ones((3, 4))
        with pytest.raises(DomainError):
            solve_socp(A, np.ones(3), 0.0)
        with pytest.raises(DomainError):
            solve_socp(A, np.ones(2), 1.0)
        with pytest.raises(DomainError):
            reference_solve(A, np.ones(3), -1.0)


class TestDiagnostics:
    def test_hand_built_two_variable_instance(self):
        # min |x1|+|x2| s.t. |4 - x1 - 2 x2| <= 1: optimum (0, 1.5),
        # multiplier 0.5, subgradient (0.5, 1.0)
        A = np.array([[1.0, 2.0]])
        y = np.array([4.0])
        sol = solve_socp(A, y, 1.0)
        assert sol.converged
        assert sol.x_rec == pytest.approx([0.0, 1.5], abs=1e-5)
        diag = optimality_diagnostics(A, y, 1.0, sol)
        assert diag.violation_score < 1e-4
        assert diag.multiplier == pytest.approx(0.5, abs=1e-4)
        assert abs(diag.slack) < 1e-5

    def test_interior_zero_solution(self):
        A = np.ones((2, 3))
        y = np.array([0.1, -0.1])
        r = 1.0
        sol = solve_socp(A, y, r)
        diag = optimality_diagnostics(A, y, r, sol)
        assert diag.slack > 0
        assert diag.multiplier == 0.0
        assert diag.violation_score == 0.0

    def test_random_converged_instance(self):
        rng = np.random.default_rng(10)
        A, x_tilde, y = random_instance(rng, 100, 50, 10)
        r = float(np.sqrt(50))
        # the violation score tracks the solver stopping tolerance
        sol = solve_socp(A, y, r, eps_abs=1e-12, eps_rel=1e-9)
        diag = optimality_diagnostics(A, y, r, sol)
        assert diag.violation_score < 1e-4
        assert diag.residual_ratio <= 1 + 1e-6
        loose = optimality_diagnostics(A, y, r, solve_socp(A, y, r))
        assert loose.violation_score < 1e-2


class TestNonConvergence:
    def test_iteration_cap_reported(self):
        rng = np.random.default_rng(11)
        A, x_tilde, y = random_instance(rng, 60, 30, 6)
        sol = solve_socp(A, y, float(np.sqrt(30)), max_iterations=3)
        assert not sol.converged
        assert sol.iterations == 3
