"""Excess function, convexity hypothesis, scans, and candidate classification."""

import numpy as np
import pytest

from tsvar import (
    GridFunction,
    SlopeKind,
    VariationalProblem,
    Verdict,
    check_convexity_condition,
    classify_candidate,
    default_q_grid,
    excess,
    make_dense,
    make_geometric,
    make_uniform,
    parse_lagrangian,
    solve_el_discrete,
    weierstrass_scan,
)
from conftest import SMOOTH_TEMPLATES, random_point


class TestExcess:
    def test_vanishes_on_diagonal(self, rng):
        for src in SMOOTH_TEMPLATES:
            L = parse_lagrangian(src)
            for _ in range(10):
                t, x, r = random_point(rng)
                assert abs(excess(L, t, x, r, r)) <= 1e-12

    def test_quadratic_closed_form(self, rng):
        L = parse_lagrangian("r^2")
        for _ in range(100):
            r, q = rng.uniform(-5, 5, 2)
            assert excess(L, 0.0, 0.0, float(r), float(q)) == pytest.approx(
                (q - r) ** 2, abs=1e-12
            )

    def test_quartic_at_rest(self):
        L = parse_lagrangian("r^2 - r^4")
        assert excess(L, 0.0, 0.0, 0.0, 2.0) == -12.0
        assert excess(L, 0.0, 0.0, 0.0, -2.0) == -12.0

    def test_scaling_covariance(self, rng):
        L = parse_lagrangian("r^2 - r^4 + x*r")
        L3 = parse_lagrangian("3 * (r^2 - r^4 + x*r)")
        for _ in range(50):
            t, x, r = random_point(rng)
            q = float(rng.uniform(-3, 3))
            e = excess(L, t, x, r, q)
            assert excess(L3, t, x, r, q) == pytest.approx(3.0 * e, abs=1e-12 * max(1, abs(e)))


class TestConvexityCondition:
    def test_convex_quadratic_passes(self, harmonic_problem):
        P = VariationalProblem(
            harmonic_problem.scale, 0.0, 1.0, parse_lagrangian("r^2"), 0.0, 0.0
        )
        report = check_convexity_condition(P, [-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [0.25, 0.5])
        assert report.ok and report.counterexample is None
        assert report.checks > 0

    def test_quartic_fails_with_midpoint_witness(self, harmonic_problem):
        report = check_convexity_condition(harmonic_problem, [0.0], [-2.0, 2.0], [0.5])
        assert not report.ok
        cx = report.counterexample
        assert (cx.r1, cx.r2, cx.gamma) == (-2.0, 2.0, 0.5)
        assert cx.lhs == 0.0  # f(0)
        assert cx.rhs == pytest.approx(-12.0, abs=1e-12)

    def test_vacuous_on_dense_scale(self):
        P = VariationalProblem(
            make_dense(0.0, 1.0, 50), 0.0, 1.0, parse_lagrangian("r^2 - r^4"), 0.0, 0.0
        )
        report = check_convexity_condition(P, [0.0], [-2.0, 2.0], [0.5])
        assert report.ok
        assert report.checks == 0  # mu = 0 everywhere: condition holds trivially


class TestScan:
    def test_zero_trajectory_on_harmonic(self, harmonic_problem):
        kappa = harmonic_problem.scale.kappa_points(0.0, 1.0)
        violations = weierstrass_scan(
            harmonic_problem, harmonic_problem.zero_trajectory(), q_grid=[-2.0, 2.0]
        )
        assert len(violations) == 2 * len(kappa)
        assert all(abs(v.E + 12.0) <= 1e-9 for v in violations)
        assert all(v.slope_kind is SlopeKind.TWO_SIDED for v in violations)
        # deterministic order
        keys = [(v.t, v.q) for v in violations]
        assert keys == sorted(keys)

    def test_extremal_of_quadratic_is_clean(self):
        P = VariationalProblem(
            make_uniform(0.0, 4.0, 1.0), 0.0, 4.0, parse_lagrangian("r^2"), 0.0, 4.0
        )
        x = GridFunction.from_callable(P.scale, lambda t: t)
        assert weierstrass_scan(P, x, q_grid=np.linspace(-10, 10, 41)) == []

    def test_diagonal_grid_is_empty(self):
        P = VariationalProblem(
            make_uniform(0.0, 4.0, 1.0), 0.0, 4.0, parse_lagrangian("r^2 - r^4"), 0.0, 4.0
        )
        x = GridFunction.from_callable(P.scale, lambda t: t)
        assert weierstrass_scan(P, x, q_grid=[1.0]) == []  # q equals the slope everywhere

    def test_break_points_scan_both_sides(self):
        ts = make_dense(0.0, 1.0, 10)
        P = VariationalProblem(ts, 0.0, 1.0, parse_lagrangian("0 - r^2"), 0.0, 0.0)
        x = GridFunction.from_callable(ts, lambda t: abs(t - 0.5), break_points=(0.5,))
        violations = weierstrass_scan(P, x, q_grid=[5.0])
        at_break = [v for v in violations if v.t == 0.5]
        assert {v.slope_kind for v in at_break} == {SlopeKind.LEFT, SlopeKind.RIGHT}
        assert {round(v.r, 6) for v in at_break} == {-1.0, 1.0}

    def test_left_dense_window_end_uses_left_limit(self):
        ts = make_dense(0.0, 1.0, 10)
        P = VariationalProblem(ts, 0.0, 1.0, parse_lagrangian("0 - r^2"), 0.0, 1.0)
        x = GridFunction.from_callable(ts, lambda t: t)
        violations = weierstrass_scan(P, x, q_grid=[4.0])
        end = [v for v in violations if v.t == 1.0]
        assert len(end) == 1 and end[0].slope_kind is SlopeKind.LEFT

    def test_convex_integrand_never_violates(self, rng):
        # excess of an integrand convex in the slope is a perfect square here
        P = VariationalProblem(
            make_uniform(0.0, 6.0, 1.0), 0.0, 6.0, parse_lagrangian("r^2 + x*r"), 0.0, 3.0
        )
        for _ in range(10):
            vals = rng.uniform(-2, 2, 7)
            vals[0], vals[-1] = 0.0, 3.0
            x = GridFunction(P.scale, vals)
            assert weierstrass_scan(P, x, q_grid=np.linspace(-8, 8, 33), tol=1e-10) == []


class TestQScaleCase:
    def test_scan_uses_quantum_slopes(self):
        ts = make_geometric(1.0, 16.0, 2.0)
        P = VariationalProblem(ts, 1.0, 16.0, parse_lagrangian("0 - r^2"), 1.0, 16.0)
        x = GridFunction.from_callable(ts, lambda t: t * t)
        violations = weierstrass_scan(P, x, q_grid=[100.0])
        slopes = {v.t: v.r for v in violations}
        assert slopes == {t: 3.0 * t for t in (1.0, 2.0, 4.0, 8.0)}

    def test_functional_is_mu_weighted_sum(self):
        ts = make_geometric(1.0, 16.0, 2.0)
        P = VariationalProblem(ts, 1.0, 16.0, parse_lagrangian("t*r^2"), 1.0, 16.0)
        x = GridFunction.from_callable(ts, lambda t: t)
        from tsvar import functional

        # oracle: sum over {1,2,4,8} of (q-1) t * (t * 1)
        oracle = sum((2.0 - 1.0) * t * t for t in (1.0, 2.0, 4.0, 8.0))
        assert functional(P, x) == pytest.approx(oracle, abs=1e-12)


class TestClassification:
    def test_consistent_verdict_for_quadratic_extremal(self):
        P = VariationalProblem(
            make_uniform(0.0, 4.0, 1.0), 0.0, 4.0, parse_lagrangian("r^2"), 0.0, 4.0
        )
        x = solve_el_discrete(P).trajectory
        report = classify_candidate(P, x, q_grid=np.linspace(-10, 10, 41))
        assert report.verdict is Verdict.CONSISTENT_WITH_STRONG_MIN
        assert report.el_max_residual <= 1e-10
        assert report.convexity_ok
        assert report.weierstrass_violations == ()

    def test_hypothesis_not_met_for_quartic(self, harmonic_problem):
        report = classify_candidate(
            harmonic_problem, harmonic_problem.zero_trajectory(), q_grid=[-2.0, 2.0]
        )
        assert report.verdict is Verdict.HYPOTHESIS_NOT_MET
        assert not report.convexity_ok
        assert report.convexity_counterexample is not None
        # scan results still reported as informational
        assert len(report.weierstrass_violations) > 0

    def test_violated_verdict_when_hypothesis_sampled_convex(self):
        # f is convex for |r| <= sqrt(2/0.012) ~ 12.9, so the default samples
        # pass, but large comparison slopes still expose E < 0
        P = VariationalProblem(
            make_uniform(0.0, 4.0, 1.0),
            0.0,
            4.0,
            parse_lagrangian("r^2 - 0.001*r^4"),
            0.0,
            0.0,
        )
        report = classify_candidate(P, P.zero_trajectory(), q_grid=np.linspace(-40, 40, 41))
        assert report.verdict is Verdict.NECESSARY_CONDITION_VIOLATED
        assert report.convexity_ok
        assert len(report.weierstrass_violations) > 0

    def test_nonextremal_reports_residual(self):
        P = VariationalProblem(
            make_uniform(0.0, 4.0, 1.0), 0.0, 4.0, parse_lagrangian("r^2"), 0.0, 16.0
        )
        x = GridFunction.from_callable(P.scale, lambda t: t * t)
        report = classify_candidate(P, x)
        assert report.el_max_residual > 0.0
        assert report.verdict is Verdict.CONSISTENT_WITH_STRONG_MIN  # verdict ignores EL

    def test_default_q_grid_contains_slopes(self):
        grid = default_q_grid([1.0, 2.0, -0.5])
        for s in (1.0, 2.0, -0.5):
            assert np.any(grid == s)
        assert grid.size >= 41

    def test_default_q_grid_degenerate_slopes(self):
        grid = default_q_grid([2.0, 2.0, 2.0])
        assert grid.min() == pytest.approx(-3.0)
        assert grid.max() == pytest.approx(7.0)
