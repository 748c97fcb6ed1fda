"""Excess-function analysis: the executable necessary condition for strong minima.

The excess function E(t, x, r, q) = f(t,x,q) - f(t,x,r) - (q-r) f_r(t,x,r)
measures how far f is from supporting its tangent line in the slope
argument. Along a candidate trajectory of a problem whose integrand
satisfies the graininess-weighted convexity hypothesis, a strong local
minimum forces E >= 0 for every slope q; finding E < 0 therefore certifies
that the candidate is not a strong local minimum. The checks here are
sampling-based: "no violation found" is the strongest positive statement
they ever make.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .calculus import delta_derivative
from .errors import InvalidParameter
from .expressions import Lagrangian
from .timescale import POINT_TOLERANCE
from .variational import Trajectory, VariationalProblem, candidate_slope, el_residual


class SlopeKind(str, Enum):
    TWO_SIDED = "two-sided"
    LEFT = "left"
    RIGHT = "right"


class Verdict(str, Enum):
    CONSISTENT_WITH_STRONG_MIN = "consistent-with-strong-min"
    NECESSARY_CONDITION_VIOLATED = "necessary-condition-violated"
    HYPOTHESIS_NOT_MET = "hypothesis-not-met"


@dataclass(frozen=True)
class ExcessSample:
    t: float
    x_sigma: float
    r: float
    q: float
    E: float
    slope_kind: SlopeKind


@dataclass(frozen=True)
class ConvexityCounterexample:
    t: float
    x: float
    r1: float
    r2: float
    gamma: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class ConvexityReport:
    ok: bool
    counterexample: Optional[ConvexityCounterexample]
    checks: int

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class AnalysisReport:
    """Combined Euler-Lagrange, convexity-hypothesis, and excess-scan outcome.

    The verdict is hypothesis-not-met when the sampled convexity condition
    fails, necessary-condition-violated when the hypothesis held but the
    scan found E < -tol, and consistent-with-strong-min otherwise. No
    verdict ever certifies that the candidate IS a strong minimum.
    """

    el_max_residual: float
    convexity_ok: bool
    convexity_counterexample: Optional[ConvexityCounterexample]
    weierstrass_violations: tuple[ExcessSample, ...]
    verdict: Verdict


def excess(lagr: Lagrangian, t: float, x: float, r: float, q: float) -> float:
    """E(t, x, r, q) = f(t,x,q) - f(t,x,r) - (q-r) f_r(t,x,r)."""
    f_at_q = lagr.eval(t, x, q)
    f_at_r, _, f_r = lagr.partials(t, x, r)
    return float(f_at_q - f_at_r - (q - r) * f_r)


def _kappa_indices(problem: VariationalProblem) -> range:
    ts = problem.scale
    i0, i1 = problem.window()
    if ts.rho(float(ts.points[i1])) < ts.points[i1] - POINT_TOLERANCE:
        i1 -= 1
    return range(i0, i1 + 1)


def check_convexity_condition(
    problem: VariationalProblem,
    x_samples: Sequence[float],
    r_samples: Sequence[float],
    gamma_samples: Sequence[float],
    tol: float = 1e-10,
) -> ConvexityReport:
    """Sample the graininess-weighted convexity hypothesis on [t0, t1]^kappa.

    At right-dense points the weighted condition holds vacuously (mu = 0);
    at right-scattered points it is plain convexity of f in the slope, so
    the midpoint inequality is tested over all sampled (x, r1, r2, gamma).
    Returns the first counterexample found, in deterministic scan order.
    """
    if not len(x_samples) or not len(r_samples) or not len(gamma_samples):
        raise InvalidParameter("sample lists must be nonempty")
    ts = problem.scale
    lagr = problem.lagrangian
    checks = 0
    for i in _kappa_indices(problem):
        t = float(ts.points[i])
        if ts.mu(t) == 0.0:
            continue  # condition trivially satisfied
        for xv in x_samples:
            for r1 in r_samples:
                for r2 in r_samples:
                    if r1 == r2:
                        continue
                    f1 = lagr.eval(t, xv, r1)
                    f2 = lagr.eval(t, xv, r2)
                    for g in gamma_samples:
                        checks += 1
                        mid = g * r1 + (1.0 - g) * r2
                        lhs = lagr.eval(t, xv, mid)
                        rhs = g * f1 + (1.0 - g) * f2
                        if lhs > rhs + tol:
                            return ConvexityReport(
                                False,
                                ConvexityCounterexample(
                                    t, float(xv), float(r1), float(r2), float(g), float(lhs), float(rhs)
                                ),
                                checks,
                            )
    return ConvexityReport(True, None, checks)


def _candidate_slopes(
    problem: VariationalProblem, x: Trajectory, i: int
) -> list[tuple[float, SlopeKind]]:
    ts = problem.scale
    t = float(ts.points[i])
    if i == problem.window()[1]:
        # left-dense window end: the scan takes the limit from the left
        return [(delta_derivative(x, t, side="left").value, SlopeKind.LEFT)]
    if x.is_break(t):
        return [
            (delta_derivative(x, t, side="left").value, SlopeKind.LEFT),
            (delta_derivative(x, t, side="right").value, SlopeKind.RIGHT),
        ]
    return [(candidate_slope(x, t), SlopeKind.TWO_SIDED)]


def weierstrass_scan(
    problem: VariationalProblem,
    x: Trajectory,
    q_grid: Sequence[float],
    tol: float = 1e-9,
) -> list[ExcessSample]:
    """Evaluate the excess along a trajectory; collect samples with E < -tol.

    Every point of [t0, t1]^kappa is visited with its candidate slope
    x^Delta(t); registered break points contribute both one-sided slopes,
    and a left-dense window end uses the left limit. Violations are sorted
    by (t, q) so concurrent evaluation would merge deterministically.
    """
    if not len(q_grid):
        raise InvalidParameter("q_grid must be nonempty")
    if tol < 0:
        raise InvalidParameter("tol must be nonnegative")
    ts = problem.scale
    lagr = problem.lagrangian
    kappa = _kappa_indices(problem)
    violations: list[ExcessSample] = []
    for i in kappa:
        t = float(ts.points[i])
        scattered = i + 1 < len(ts) and not ts.right_dense_mask[i]
        x_sigma = float(x.values[i + 1]) if scattered else float(x.values[i])
        for r, kind in _candidate_slopes(problem, x, i):
            for q in q_grid:
                e = excess(lagr, t, x_sigma, r, float(q))
                if e < -tol:
                    violations.append(ExcessSample(t, x_sigma, r, float(q), e, kind))
    violations.sort(key=lambda s: (s.t, s.q, s.slope_kind.value))
    return violations


def observed_slopes(problem: VariationalProblem, x: Trajectory) -> np.ndarray:
    """All candidate slopes along the trajectory (both sides at breaks)."""
    kappa = _kappa_indices(problem)
    out: list[float] = []
    for i in kappa:
        out.extend(s for s, _ in _candidate_slopes(problem, x, i))
    return np.array(out)


def default_q_grid(slopes: Iterable[float], count: int = 41, width: float = 5.0) -> np.ndarray:
    """Comparison-slope grid spanning the observed slopes plus width*spread.

    The necessary condition quantifies over every real q, which is not
    machine checkable; the default covers a generous neighbourhood of the
    trajectory's own slopes and always includes those slopes exactly.
    """
    s = np.asarray(list(slopes), dtype=float)
    if s.size == 0:
        raise InvalidParameter("need at least one observed slope")
    spread = float(np.std(s))
    if spread < 1e-9:
        spread = 1.0
    grid = np.linspace(s.min() - width * spread, s.max() + width * spread, count)
    return np.union1d(grid, s)


def _default_x_samples(x_sigma_values: np.ndarray) -> np.ndarray:
    lo, hi = float(np.min(x_sigma_values)), float(np.max(x_sigma_values))
    if hi - lo < 1e-9:
        return np.array([lo - 1.0, lo, lo + 1.0])
    return np.linspace(lo, hi, 3)


def _default_r_samples(slopes: np.ndarray) -> np.ndarray:
    base = np.array([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])
    return np.union1d(base, np.array([slopes.min(), slopes.max()]))


DEFAULT_GAMMAS = (0.25, 0.5, 0.75)


def classify_candidate(
    problem: VariationalProblem,
    x: Trajectory,
    q_grid: Optional[Sequence[float]] = None,
    x_samples: Optional[Sequence[float]] = None,
    r_samples: Optional[Sequence[float]] = None,
    gamma_samples: Sequence[float] = DEFAULT_GAMMAS,
    scan_tol: float = 1e-9,
    convexity_tol: float = 1e-10,
) -> AnalysisReport:
    """Run the Euler-Lagrange, convexity, and excess checks on a candidate.

    A violated excess condition under a satisfied hypothesis certifies the
    candidate is NOT a strong local minimum; all other outcomes are
    inconclusive in the positive direction.
    """
    residual = el_residual(problem, x)
    el_max = float(np.max(np.abs(residual.values)))
    slopes = observed_slopes(problem, x)
    ts = problem.scale
    sig = ts.sigma_indices()
    kappa = _kappa_indices(problem)
    xsig_vals = x.values[sig[kappa.start : kappa.stop]]
    convexity = check_convexity_condition(
        problem,
        x_samples if x_samples is not None else _default_x_samples(xsig_vals),
        r_samples if r_samples is not None else _default_r_samples(slopes),
        gamma_samples,
        tol=convexity_tol,
    )
    violations = tuple(
        weierstrass_scan(
            problem, x, q_grid if q_grid is not None else default_q_grid(slopes), tol=scan_tol
        )
    )
    if not convexity.ok:
        verdict = Verdict.HYPOTHESIS_NOT_MET
    elif violations:
        verdict = Verdict.NECESSARY_CONDITION_VIOLATED
    else:
        verdict = Verdict.CONSISTENT_WITH_STRONG_MIN
    return AnalysisReport(
        el_max_residual=el_max,
        convexity_ok=convexity.ok,
        convexity_counterexample=convexity.counterexample,
        weierstrass_violations=violations,
        verdict=verdict,
    )
