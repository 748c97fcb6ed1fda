"""Delta derivatives and delta integrals across scale types.

The delta derivative generalizes both the forward difference and the
ordinary derivative: at a right-scattered point it is the exact quotient
(x(sigma(t)) - x(t)) / mu(t), at a right-dense point the usual limit
(approximated here on the quadrature nodes). The delta integral is the
matching antiderivative notion: a mu-weighted sum over scattered points
plus Riemann integration over dense parts.
"""

import numpy as np

import tsvar as tv

# On the integers, x(t) = t^2 has delta derivative x(t+1)^2 - x(t)^2 = 2t + 1.
ts = tv.make_uniform(0, 5, 1)
x = tv.GridFunction.from_callable(ts, lambda t: t * t)
print("integers, x = t^2:")
for t in (0.0, 1.0, 2.0, 3.0):
    print(f"  x^D({t:g}) = {tv.delta_derivative(x, t).value:g}   (2t+1 = {2 * t + 1:g})")

# On the geometric scale with ratio q, the same function has derivative
# (q+1) t: the q-derivative of quantum calculus.
q = 2.0
g = tv.make_geometric(1, 16, q)
xq = tv.GridFunction.from_callable(g, lambda t: t * t)
print("\ngeometric scale, x = t^2:")
for t in (1.0, 2.0, 4.0, 8.0):
    print(f"  x^D({t:g}) = {tv.delta_derivative(xq, t).value:g}   ((q+1)t = {(q + 1) * t:g})")

# On a dense interval the delta integral reduces to the Riemann integral.
dense = tv.make_dense(0.0, 1.0, 1000)
f = tv.GridFunction.from_callable(dense, lambda t: t)
print("\ndense [0,1]: integral of t dt =", tv.delta_integral(f, 0.0, 1.0), "(exact 1/2)")

# The one-step identity: integrating across a single jump picks up
# mu(t) * g(t) exactly.
h = tv.make_harmonic(10)
gfun = tv.GridFunction.zeros(h).with_value_at(1 / 3, 5.0)
step = tv.delta_integral(gfun, 1 / 3, 1 / 2)
print("\nharmonic: integral over one jump =", step, "= mu(1/3) * 5 =", h.mu(1 / 3) * 5)

# Fundamental theorem on a discrete scale: exact telescoping.
rng = np.random.default_rng(7)
pts = np.cumsum(rng.uniform(0.1, 1.0, 12))
ts = tv.make_points(pts)
F = tv.GridFunction(ts, rng.uniform(-1, 1, len(ts)))
deriv = tv.GridFunction(
    ts, [tv.delta_derivative(F, float(t)).value for t in ts.points[:-1]] + [0.0]
)
lhs = tv.delta_integral(deriv, ts.min, ts.max)
rhs = F.value_at(ts.max) - F.value_at(ts.min)
print(f"\nfundamental theorem, random discrete scale: {lhs:.15g} == {rhs:.15g}")

# Strong and weak norms of a trajectory: sup |x(sigma(t))| and that plus
# sup |x^D(t)|. The weak norm sees slopes the strong norm cannot.
spikey = tv.GridFunction.zeros(h).with_value_at(1 / 3, 0.05)
print("\nsmall spike on the harmonic scale:")
print("  strong norm:", tv.norm_strong(spikey, 0.0, 1.0))
print("  weak norm:  ", tv.norm_weak(spikey, 0.0, 1.0))
