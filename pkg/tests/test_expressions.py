"""Expression parsing, evaluation, and dual-number differentiation."""

import math

import pytest

from tsvar import (
    DomainError,
    Dual,
    ExpressionSyntaxError,
    NonDifferentiablePoint,
    UnknownIdentifier,
    parse_lagrangian,
)
from tsvar.dual import primal_value, tangent_of
from conftest import SMOOTH_TEMPLATES, random_point


class TestParsing:
    def test_polynomial(self):
        L = parse_lagrangian("r^2 - r^4")
        assert L.eval(0.0, 0.0, 2.0) == -12.0

    def test_constant_zero(self):
        assert parse_lagrangian("0").eval(1.0, 2.0, 3.0) == 0.0

    def test_mixed_expression(self):
        L = parse_lagrangian("t*(x^2) + sin(r)")
        assert L.eval(1.0, 2.0, 0.0) == pytest.approx(4.0, abs=1e-15)

    def test_whitespace_insensitive(self):
        a = parse_lagrangian("r^2-r^4")
        b = parse_lagrangian("  r ^ 2   -  r ^ 4 ")
        for r in (-2.0, 0.5, 3.0):
            assert a.eval(0, 0, r) == b.eval(0, 0, r)

    def test_power_binds_tighter_than_unary_minus(self):
        assert parse_lagrangian("-x^2").eval(0.0, 3.0, 0.0) == -9.0
        assert parse_lagrangian("(-x)^2").eval(0.0, 3.0, 0.0) == 9.0

    def test_power_right_associative(self):
        assert parse_lagrangian("x^x^2").eval(0.0, 2.0, 0.0) == 16.0  # 2^(2^2)

    def test_left_associative_subtraction(self):
        assert parse_lagrangian("x - x - x").eval(0.0, 5.0, 0.0) == -5.0

    def test_division_chain(self):
        assert parse_lagrangian("x / 2 / 2").eval(0.0, 8.0, 0.0) == 2.0

    def test_scientific_notation(self):
        assert parse_lagrangian("1e-3 + 2.5e2").eval(0, 0, 0) == pytest.approx(250.001)

    def test_syntax_error_carries_position(self):
        with pytest.raises(ExpressionSyntaxError) as exc:
            parse_lagrangian("r + ")
        assert exc.value.position == 4
        with pytest.raises(ExpressionSyntaxError):
            parse_lagrangian("(r + 1")
        with pytest.raises(ExpressionSyntaxError):
            parse_lagrangian("")
        with pytest.raises(ExpressionSyntaxError):
            parse_lagrangian("r @ 2")

    def test_unknown_identifier(self):
        with pytest.raises(UnknownIdentifier):
            parse_lagrangian("y + 1")
        with pytest.raises(UnknownIdentifier):
            parse_lagrangian("foo(r)")


class TestEvaluation:
    def test_spike_slope_value(self):
        # the d/mu = 6 term of the harmonic spike
        assert parse_lagrangian("r^2 - r^4").eval(0, 0, 6.0) == -1260.0

    def test_projection(self):
        L = parse_lagrangian("x")
        for xv in (-3.0, 0.0, 7.5):
            assert L.eval(0.0, xv, 1.0) == xv

    def test_even_symmetry(self):
        assert parse_lagrangian("r^2").eval(0, 0, -2.0) == 4.0

    def test_negative_base_integer_power(self):
        assert parse_lagrangian("r^3").eval(0, 0, -2.0) == -8.0

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            parse_lagrangian("log(r)").eval(0, 0, -1.0)
        with pytest.raises(DomainError):
            parse_lagrangian("sqrt(r)").eval(0, 0, -1.0)
        with pytest.raises(DomainError):
            parse_lagrangian("1 / r").eval(0, 0, 0.0)
        with pytest.raises(DomainError):
            parse_lagrangian("r^-1").eval(0, 0, 0.0)
        with pytest.raises(DomainError):
            parse_lagrangian("r^0.5").eval(0, 0, -4.0)

    def test_domain_error_names_offending_node(self):
        with pytest.raises(DomainError) as exc:
            parse_lagrangian("x + log(r - 1)").eval(0.0, 0.0, 0.5)
        assert "log" in str(exc.value)


class TestPartials:
    def test_quartic_slope_derivative_at_zero(self):
        _, _, f_r = parse_lagrangian("r^2 - r^4").partials(0.0, 0.0, 0.0)
        assert f_r == 0.0

    def test_quartic_slope_derivative(self):
        _, _, f_r = parse_lagrangian("r^2 - r^4").partials(0.0, 0.0, 2.0)
        assert f_r == -28.0  # 2*2 - 4*8

    def test_bilinear(self):
        f, f_x, f_r = parse_lagrangian("x*r").partials(0.0, 3.0, 5.0)
        assert (f, f_x, f_r) == (15.0, 5.0, 3.0)

    def test_primal_matches_eval(self, rng):
        for src in SMOOTH_TEMPLATES:
            L = parse_lagrangian(src)
            for _ in range(10):
                t, x, r = random_point(rng)
                f, _, _ = L.partials(t, x, r)
                assert abs(f - L.eval(t, x, r)) <= 1e-14

    def test_abs_not_differentiable_at_zero(self):
        L = parse_lagrangian("abs(r)")
        assert L.eval(0, 0, 0.0) == 0.0
        with pytest.raises(NonDifferentiablePoint):
            L.partials(0.0, 0.0, 0.0)
        assert L.partials(0.0, 0.0, 2.0)[2] == 1.0
        assert L.partials(0.0, 0.0, -2.0)[2] == -1.0

    def test_matches_central_differences(self, rng):
        h = 1e-6
        for src in SMOOTH_TEMPLATES:
            L = parse_lagrangian(src)
            for _ in range(20):
                t, x, r = random_point(rng)
                _, f_x, f_r = L.partials(t, x, r)
                fd_x = (L.eval(t, x + h, r) - L.eval(t, x - h, r)) / (2 * h)
                fd_r = (L.eval(t, x, r + h) - L.eval(t, x, r - h)) / (2 * h)
                assert abs(f_x - fd_x) <= 1e-5 * max(1.0, abs(f_x))
                assert abs(f_r - fd_r) <= 1e-5 * max(1.0, abs(f_r))


class TestRoundTrip:
    def test_reparse_evaluates_identically(self, rng):
        for src in SMOOTH_TEMPLATES:
            L = parse_lagrangian(src)
            re_parsed = parse_lagrangian(L.to_source())
            for _ in range(10):
                t, x, r = random_point(rng)
                assert re_parsed.eval(t, x, r) == L.eval(t, x, r)


class TestDualNumbers:
    def test_arithmetic_chain_rule(self):
        u = Dual(2.0, 1.0)
        y = u * u * u  # d/du u^3 = 3u^2
        assert y.primal == 8.0 and y.tangent == 12.0

    def test_division(self):
        y = Dual(1.0, 1.0) / Dual(2.0, 0.0)
        assert y.primal == 0.5 and y.tangent == 0.5

    def test_transcendentals(self):
        from tsvar.dual import cos, exp, log, sin, sqrt

        u = Dual(0.7, 1.0)
        assert sin(u).tangent == pytest.approx(math.cos(0.7), abs=1e-15)
        assert cos(u).tangent == pytest.approx(-math.sin(0.7), abs=1e-15)
        assert exp(u).tangent == pytest.approx(math.exp(0.7), abs=1e-15)
        assert log(u).tangent == pytest.approx(1 / 0.7, abs=1e-15)
        assert sqrt(u).tangent == pytest.approx(0.5 / math.sqrt(0.7), abs=1e-15)

    def test_nested_duals_give_second_derivative(self):
        # f(u) = u^3, f''(2) = 12, via a dual whose components are dual
        u = Dual(Dual(2.0, 1.0), Dual(1.0, 0.0))
        y = u * u * u
        assert primal_value(y) == 8.0
        assert y.tangent.tangent == 12.0

    def test_partials_accept_dual_inputs_without_confusion(self):
        # seeding r with an outer tangent must flow through f_r, not leak
        # into the other arguments' slots
        L = parse_lagrangian("r^2")
        _, _, f_r = L.partials(0.0, 0.0, Dual(3.0, 1.0))
        assert primal_value(f_r) == 6.0
        assert primal_value(tangent_of(f_r)) == 2.0  # d(2r)/dr

        L2 = parse_lagrangian("x*r")
        _, f_x, f_r2 = L2.partials(0.0, Dual(3.0, 1.0), 5.0)
        assert primal_value(f_x) == 5.0
        assert primal_value(tangent_of(f_x)) == 0.0  # f_x = r, independent of x
        assert primal_value(f_r2) == 3.0
        assert primal_value(tangent_of(f_r2)) == 1.0  # f_r = x, seeded on x

    def test_pow_dual_exponent_requires_positive_base(self):
        L = parse_lagrangian("x^r")
        f, _, f_r = L.partials(0.0, 2.0, 3.0)
        assert f == pytest.approx(8.0, rel=1e-14)
        assert primal_value(f_r) == pytest.approx(8.0 * math.log(2.0), rel=1e-12)
        with pytest.raises(DomainError):
            L.partials(0.0, -2.0, 3.0)
