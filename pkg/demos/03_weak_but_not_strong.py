"""A weak local minimum that is not a strong one.

Minimize the functional with integrand (x^D)^2 - (x^D)^4 over trajectories
on the harmonic scale {1/n} + {0} with x(0) = x(1) = 0.

The zero trajectory is a weak local minimum: any competitor within
weak-norm distance 1 has |x^D| <= 1 everywhere, so every term
mu * (s^2 - s^4) of the functional is nonnegative and L[x] >= 0 = L[0].

It is not a strong local minimum: the strong norm only sees values, not
slopes, and because the graininess mu shrinks toward 0 a tiny one-point
spike can have an enormous slope. Push |x^D| past 1 and the quartic term
wins, driving the functional negative inside every strong-norm ball.
"""

import numpy as np

import tsvar as tv

problem = tv.VariationalProblem(
    tv.make_harmonic(50), 0.0, 1.0, tv.parse_lagrangian("r^2 - r^4"), 0.0, 0.0
)
zero = problem.zero_trajectory()
print("L[zero] =", tv.functional(problem, zero))

# Weak-ball evidence: random admissible trajectories with |x^D| <= 1.
rng = np.random.default_rng(0)
values = [
    tv.functional(problem, tv.random_bounded_slope_trajectory(problem, rng))
    for _ in range(200)
]
print(f"200 random trajectories with |x^D| <= 1: min L = {min(values):.6f} (>= 0)")

# The spike: height d at sigma(1/3) = 1/2, zero elsewhere.
spike = tv.spike_perturbation(problem, zero, t_at=1 / 3, d=1.0)
print("\nspike at sigma(1/3) with d = 1:")
print("  strong norm:", tv.norm_strong(spike, 0, 1), " weak norm:", tv.norm_weak(spike, 0, 1))
print("  slopes:", tv.delta_derivative(spike, 1 / 3).value, "and", tv.delta_derivative(spike, 0.5).value)
print("  L[spike] =", tv.functional(problem, spike), " (hand sum: -210 + -6 = -216)")

# Strong-ball falsification: inside every strong-norm radius there is a
# spike with negative functional, because near 0 the graininess is tiny.
print("\nstrong-norm balls all contain a negative competitor:")
for delta in (0.5, 0.1, 0.01):
    w = tv.find_spike_below(problem, delta)
    print(
        f"  radius {delta}: spike at t={w.t_at:g} with d={w.d:.5g} "
        f"(strong norm {abs(w.d):.5g} < {delta}), L = {w.functional_value:.5g}"
    )

# The classifier reaches the same conclusion from the excess function.
report = tv.classify_candidate(problem, zero, q_grid=[-2.0, 2.0])
print("\nclassifier verdict:", report.verdict.value)
cx = report.convexity_counterexample
print(
    f"convexity of the integrand fails in the slope: at r1={cx.r1:g}, r2={cx.r2:g}, "
    f"gamma={cx.gamma:g}: f(mid)={cx.lhs:g} > {cx.rhs:g}"
)
print(
    f"and the excess scan still finds {len(report.weierstrass_violations)} "
    f"samples with E < 0 (E = q^2 - q^4 = -12 at q = +-2)"
)
