import json

import numpy as np
import pytest

from socprec.errors import AggregateError, DomainError
from socprec.experiments import (RunConfig, gen_instance, parse_r_mode,
                                 run_trials, scaled_radius)
from socprec.tables import (contour_beta, reproduce_table, rows_to_csv,
                            table_spec, theory_row)


class TestRMode:
    def test_parsing(self):
        assert parse_r_mode("sqrt-m").kind == "sqrt-m"
        assert parse_r_mode("opt").kind == "opt"
        mode = parse_r_mode("scaled:0.6")
        assert mode.kind == "scaled" and mode.c == 0.6
        assert str(mode) == "scaled:0.6"

    @pytest.mark.parametrize("bad", ["", "sqrtm", "scaled:", "scaled:0", "scaled:1.5"])
    def test_bad_modes(self, bad):
        with pytest.raises(DomainError):
            parse_r_mode(bad)

    def test_scaled_radius_values(self):
        assert scaled_radius(parse_r_mode("sqrt-m"), 0.5, 0.1, 2.0, False) \
            == pytest.approx(2.0 * np.sqrt(0.5))
        assert scaled_radius(parse_r_mode("scaled:0.2"), 0.5, 0.1, 1.0, False) \
            == pytest.approx(np.sqrt(0.1))


class TestGenInstance:
    def test_dimensions_and_spike(self):
        inst = gen_instance(400, 0.5, 0.1, 1.0, None, "sqrt-m", False, 0, 0)
        m, n = inst.shape
        assert (m, n) == (200, 400)
        assert int(np.count_nonzero(inst.x_tilde)) == 40
        assert np.all(inst.x_tilde[-40:] == 2.0)  # 40/sqrt(400)
        assert np.all(inst.x_tilde[:-40] == 0.0)
        assert inst.r == pytest.approx(np.sqrt(200))

    def test_construction_identity(self):
        inst = gen_instance(100, 0.5, 0.1, 0.7, None, "sqrt-m", False, 3, 5)
        assert np.array_equal(inst.y, inst.A @ inst.x_tilde + inst.v)

    def test_zero_spike(self):
        inst = gen_instance(100, 0.5, 0.1, 1.0, 0.0, "sqrt-m", False, 0, 0)
        assert np.array_equal(inst.y, inst.v)

    def test_determinism(self):
        a = gen_instance(60, 0.5, 0.1, 1.0, None, "sqrt-m", False, 11, 4)
        b = gen_instance(60, 0.5, 0.1, 1.0, None, "sqrt-m", False, 11, 4)
        assert np.array_equal(a.A, b.A) and np.array_equal(a.v, b.v)

    def test_trials_differ(self):
        a = gen_instance(60, 0.5, 0.1, 1.0, None, "sqrt-m", False, 11, 4)
        b = gen_instance(60, 0.5, 0.1, 1.0, None, "sqrt-m", False, 11, 5)
        assert not np.array_equal(a.A, b.A)
        assert not np.array_equal(a.v, b.v)

    def test_opt_radius_mode(self):
        from socprec.theory import optimal_radius
        inst = gen_instance(200, 0.5, 0.067465, 1.0, None, "opt", False, 0, 0)
        expected = np.sqrt(200) * optimal_radius(0.5, 0.067465, 1.0, False)
        assert inst.r == pytest.approx(expected, rel=1e-12)

    def test_gaussian_sanity(self):
        inst = gen_instance(300, 0.5, 0.1, 1.0, None, "sqrt-m", False, 21, 0)
        entries = inst.A.ravel()
        assert abs(entries.mean()) < 4.0 / np.sqrt(entries.size)
        assert abs(entries.var() - 1.0) < 0.05

    def test_noise_scale(self):
        inst = gen_instance(400, 0.5, 0.1, 3.0, 0.0, "sqrt-m", False, 2, 0)
        assert abs(np.std(inst.v) - 3.0) < 0.5

    def test_invalid_dimensions(self):
        with pytest.raises(DomainError):
            gen_instance(10, 0.5, 0.01, 1.0, None, "sqrt-m", False, 0, 0)


class TestRunTrials:
    CFG = dict(alpha=0.5, beta_w=0.05, n=200, seed=3, sigma=1.0,
               r_mode="sqrt-m", signed=False)

    def test_genie_report(self):
        rep = run_trials(RunConfig(trials=30, engines=("genie",), **self.CFG))
        assert set(rep.empirical) == {"nu_gen", "w_norm_genie", "xi_over_sqrt_n"}
        assert rep.theory.w_norm == pytest.approx(0.9005, abs=1e-3)
        assert rep.failures["count"] <= 3

    def test_socp_report(self):
        rep = run_trials(RunConfig(trials=10, engines=("socp",), **self.CFG))
        assert set(rep.empirical) == {"w_norm_socp", "neg_fobj_over_sqrt_n"}
        for mean, stderr in rep.empirical.values():
            assert np.isfinite(mean) and stderr >= 0.0

    def test_both_engines(self):
        rep = run_trials(RunConfig(trials=5, engines=("socp", "genie"), **self.CFG))
        assert len(rep.empirical) == 5

    def test_determinism_and_thread_invariance(self):
        base = run_trials(RunConfig(trials=20, engines=("genie",), **self.CFG))
        again = run_trials(RunConfig(trials=20, engines=("genie",), **self.CFG))
        threaded = run_trials(RunConfig(trials=20, engines=("genie",),
                                        threads=4, **self.CFG))
        assert base.to_json() == again.to_json() == threaded.to_json()

    def test_json_schema(self):
        rep = run_trials(RunConfig(trials=5, engines=("genie",), **self.CFG))
        doc = json.loads(rep.to_json())
        assert set(doc) == {"regime", "n", "trials", "seed", "empirical",
                            "theory", "failures"}
        assert set(doc["failures"]) == {"count", "reasons"}
        for stat in doc["empirical"].values():
            assert set(stat) == {"mean", "stderr"}

    def test_engine_cross_agreement(self):
        # the solver's objective statistic concentrates on the dual value
        socp = run_trials(RunConfig(alpha=0.5, beta_w=0.1, n=400, trials=100,
                                    seed=5, engines=("socp",)))
        genie = run_trials(RunConfig(alpha=0.5, beta_w=0.1, n=1000, trials=200,
                                     seed=5, engines=("genie",)))
        f_mean = socp.empirical["neg_fobj_over_sqrt_n"][0]
        xi_mean = -genie.empirical["xi_over_sqrt_n"][0]
        assert abs(f_mean - xi_mean) / abs(xi_mean) < 0.05

    def test_zero_trials(self):
        with pytest.raises(DomainError):
            run_trials(RunConfig(trials=0, engines=("genie",), **self.CFG))

    def test_bad_engines(self):
        with pytest.raises(DomainError):
            run_trials(RunConfig(trials=5, engines=("nope",), **self.CFG))

    def test_aggregate_error_when_unsolvable(self):
        # iteration cap of 1 fails every solve; failures exceed 10%
        cfg = RunConfig(trials=5, engines=("socp",), **self.CFG)
        import socprec.experiments as exp
        import socprec.socp as socp_mod
        orig = socp_mod.DEFAULT_MAX_ITER
        try:
            socp_mod.DEFAULT_MAX_ITER = 1

            def strict(*args, **kwargs):
                kwargs["max_iterations"] = 1
                return orig_solve(*args, **kwargs)

            orig_solve = socp_mod.solve_socp
            exp.socp.solve_socp = strict
            with pytest.raises(AggregateError):
                run_trials(cfg)
        finally:
            socp_mod.DEFAULT_MAX_ITER = orig
            exp.socp.solve_socp = orig_solve


class TestTables:
    def test_registry_shapes(self):
        assert len(table_spec(1).rows) == 9
        assert len(table_spec(2).rows) == 3
        assert len(table_spec(3).rows) == 9
        assert len(table_spec(8).rows) == 9
        assert table_spec(5).signed and not table_spec(4).signed
        with pytest.raises(Exception):
            table_spec(9)

    def test_contour_rows_hit_exact_ratio(self):
        # iso-error construction: optimal-radius error norm equals rho
        for table_id, rho in ((2, 2.0), (4, 3.0), (6, 2.0), (8, 3.0)):
            spec = table_spec(table_id)
            for alpha in (0.3, 0.5, 0.7):
                beta = contour_beta(alpha, rho, spec.signed)
                tp = theory_row(alpha, beta, "opt", spec.signed)
                assert abs(tp.w_norm - rho) < 1e-3
                assert abs(tp.xi_prim_limit) < 1e-6

    def test_flagged_rows(self):
        assert [r.flagged for r in table_spec(4).rows] == [False] * 6 + [True] * 3
        t8 = table_spec(8)
        assert all(r.flagged == (r.alpha >= 0.5) for r in t8.rows)
        assert all(r.trials_socp == 100 for r in t8.rows if r.alpha == 0.7)

    def test_reproduce_table_structure_and_csv(self):
        rows = reproduce_table(1, seed=1, engines=("genie",),
                               n_genie=500, trials_genie=20)
        assert len(rows) == 9
        for row in rows:
            assert row.error is None
            assert {c.stat for c in row.cells} \
                == {"nu_gen", "w_norm_genie", "xi_over_sqrt_n"}
        text = rows_to_csv(rows)
        header, *lines = text.strip().split("\n")
        assert header == "alpha,beta_over_alpha,r_mode,stat,empirical,stderr,theory,pass"
        assert len(lines) == 27
        for line in lines:
            parts = line.split(",")
            float(parts[4]), float(parts[6])  # parse back cleanly
            assert parts[7] in ("True", "False")

    def test_reproduce_table_determinism(self):
        a = reproduce_table(1, seed=9, engines=("genie",), n_genie=400,
                            trials_genie=10)
        b = reproduce_table(1, seed=9, engines=("genie",), n_genie=400,
                            trials_genie=10)
        assert rows_to_csv(a) == rows_to_csv(b)
