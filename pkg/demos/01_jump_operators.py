"""Tour of time scales and their jump operators.

A time scale is a closed, bounded subset of the reals. The forward jump
sigma(t) is the nearest scale point strictly above t, the backward jump
rho(t) the nearest strictly below, and the graininess mu(t) = sigma(t) - t
measures how far the scale is from being an interval at t. On an interval
mu is 0 everywhere; on the integers mu is 1; mixed scales interpolate
between difference and differential calculus.
"""

import tsvar as tv


def table(ts, title):
    print(f"\n{title}")
    print(f"{'t':>10} {'sigma':>10} {'rho':>10} {'mu':>10}  class")
    for t in ts.points:
        t = float(t)
        cls = ts.classify(t)
        print(
            f"{t:>10.5g} {ts.sigma(t):>10.5g} {ts.rho(t):>10.5g} "
            f"{ts.mu(t):>10.5g}  {cls.describe()}"
        )


# The integers between 0 and 5: sigma(t) = t+1, mu = 1.
table(tv.make_uniform(0, 5, 1), "integer window 0..5")

# A geometric scale (the backbone of quantum calculus): sigma(t) = 2t,
# mu(t) = t.
table(tv.make_geometric(1, 16, 2), "geometric scale 1, 2, 4, 8, 16")

# The harmonic scale {1/n} with 0 added to keep the set closed. The
# graininess shrinks quadratically toward 0: mu(1/n) = 1/(n(n-1)).
ts = tv.make_harmonic(8)
table(ts, "harmonic scale, n <= 8")
print("\nmu(1/n) == t^2/(1-t):")
for n in (2, 3, 5, 8):
    t = 1.0 / n
    print(f"  n={n}: mu={ts.mu(t):.6g}  t^2/(1-t)={t * t / (1 - t):.6g}")

# Mixed scale: one isolated point, then a genuine interval. Interior
# points of the interval are dense (mu = 0) regardless of the quadrature
# resolution; only integration uses the nodes.
mixed = tv.union(tv.make_points([-1.0]), tv.make_dense(0.0, 1.0, 4))
table(mixed, "mixed scale {-1} + [0, 1]")
print("\nsigma is exact between nodes too: sigma(0.37) =", mixed.sigma(0.37))
