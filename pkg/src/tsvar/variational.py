"""The basic variational problem on a bounded time scale.

minimize  L[x] = integral from t0 to t1 of f(t, x(sigma(t)), x^Delta(t))
subject to x(t0) = alpha, x(t1) = beta,

over trajectories sampled on the scale. Provides functional evaluation,
admissibility, the Euler-Lagrange residual f_r^Delta - f_x, a damped-Newton
solver for discrete scales, spike perturbations, and the constructive
searches used to falsify strong/weak local minimality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .calculus import GridFunction, delta_derivative
from .dual import Dual, primal_value, tangent_of
from .errors import (
    EmptyInterval,
    InsufficientPoints,
    InvalidParameter,
    InvalidSpikeLocation,
    NonConvergence,
    SingularJacobian,
)
from .expressions import Lagrangian
from .timescale import POINT_TOLERANCE, TimeScale, make_points

# A trajectory is just a grid function; corners are registered as its
# break points.
Trajectory = GridFunction

ADMISSIBILITY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class VariationalProblem:
    """Scale, endpoints, integrand, and boundary values of the basic problem."""

    scale: TimeScale
    t0: float
    t1: float
    lagrangian: Lagrangian
    alpha: float
    beta: float

    def __post_init__(self):
        if self.t1 <= self.t0:
            raise EmptyInterval(f"problem requires t0 < t1, got [{self.t0!r}, {self.t1!r}]")
        i0 = self.scale.index_of(self.t0)
        i1 = self.scale.index_of(self.t1)
        object.__setattr__(self, "t0", float(self.scale.points[i0]))
        object.__setattr__(self, "t1", float(self.scale.points[i1]))

    def window(self) -> tuple[int, int]:
        return self.scale.index_of(self.t0), self.scale.index_of(self.t1)

    def linear_trajectory(self) -> Trajectory:
        """Straight line from (t0, alpha) to (t1, beta), extended constantly."""
        t = np.clip(self.scale.points, self.t0, self.t1)
        vals = self.alpha + (self.beta - self.alpha) * (t - self.t0) / (self.t1 - self.t0)
        return GridFunction(self.scale, vals, name="linear")

    def zero_trajectory(self) -> Trajectory:
        return GridFunction.zeros(self.scale, name="zero")


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_admissible(problem: VariationalProblem, x: Trajectory) -> Admissibility:
    """Check the boundary conditions x(t0) = alpha, x(t1) = beta."""
    reasons = []
    left = x.value_at(problem.t0)
    if abs(left - problem.alpha) > ADMISSIBILITY_TOLERANCE:
        reasons.append(f"left boundary: x(t0)={left!r}, expected alpha={problem.alpha!r}")
    right = x.value_at(problem.t1)
    if abs(right - problem.beta) > ADMISSIBILITY_TOLERANCE:
        reasons.append(f"right boundary: x(t1)={right!r}, expected beta={problem.beta!r}")
    return Admissibility(not reasons, tuple(reasons))


def candidate_slope(x: Trajectory, t: float, at_window_end: bool = False) -> float:
    """x^Delta(t) with the conventions used for integration and scans.

    Scattered points use the exact forward quotient. Registered breaks at
    right-dense points take the right-sided value (the integration
    direction); the window end takes the left-sided value.
    """
    if at_window_end:
        return delta_derivative(x, t, side="left").value
    ts = x.scale
    i = ts.index_of(t)
    if i + 1 < len(ts) and not ts.right_dense_mask[i]:
        return float((x.values[i + 1] - x.values[i]) / (ts.points[i + 1] - ts.points[i]))
    if x.is_break(t):
        return delta_derivative(x, t, side="right").value
    return delta_derivative(x, t).value


def functional(problem: VariationalProblem, x: Trajectory) -> float:
    """L[x], the delta integral of f(t, x^sigma(t), x^Delta(t)) over [t0, t1).

    Scattered points contribute mu(t) * f(...); dense segments contribute
    composite-trapezoid quadrature at their configured resolution.
    """
    ts = problem.scale
    lagr = problem.lagrangian
    i0, i1 = problem.window()
    pts, v = ts.points, x.values
    rd = ts.right_dense_mask
    total = 0.0
    last_integrand = None  # trapezoid neighbour carried across dense nodes
    for i in range(i0, i1):
        gap = pts[i + 1] - pts[i]
        if not rd[i]:
            slope = (v[i + 1] - v[i]) / gap
            total += gap * float(lagr.eval(float(pts[i]), float(v[i + 1]), float(slope)))
            last_integrand = None
            continue
        if last_integrand is None:
            last_integrand = float(
                lagr.eval(float(pts[i]), float(v[i]), candidate_slope(x, float(pts[i])))
            )
        nxt = float(
            lagr.eval(
                float(pts[i + 1]),
                float(v[i + 1]),
                candidate_slope(x, float(pts[i + 1]), at_window_end=(i + 1 == i1) or not rd[i + 1]),
            )
        )
        total += 0.5 * gap * (last_integrand + nxt)
        last_integrand = nxt
    return float(total)


def el_residual(problem: VariationalProblem, x: Trajectory) -> GridFunction:
    """Euler-Lagrange residual f_r^Delta(t) - f_x(t, x^sigma(t), x^Delta(t)).

    Evaluated at every point of [t0, t1]^kappa whose successor is also in
    the window, i.e. all window points except the last two on a discrete
    scale. The result is returned as a grid function over those points.
    """
    ts = problem.scale
    i0, i1 = problem.window()
    if i1 - i0 + 1 < 3:
        raise InsufficientPoints("el_residual needs at least 3 scale points in [t0, t1]")
    kappa_end = i1
    if ts.rho(float(ts.points[i1])) < ts.points[i1] - POINT_TOLERANCE:
        kappa_end -= 1
    pts, v = ts.points, x.values
    fr = np.empty(kappa_end - i0 + 1)
    fx = np.empty_like(fr)
    for k, i in enumerate(range(i0, kappa_end + 1)):
        t = float(pts[i])
        scattered = i + 1 < len(ts) and not ts.right_dense_mask[i]
        x_sigma = float(v[i + 1]) if scattered else float(v[i])
        slope = candidate_slope(x, t, at_window_end=(i == i1))
        _, fx[k], fr[k] = problem.lagrangian.partials(t, x_sigma, slope)
    res_pts = pts[i0:kappa_end]
    res = (fr[1:] - fr[:-1]) / np.diff(pts[i0 : kappa_end + 1]) - fx[:-1]
    return GridFunction(make_points(res_pts), res, name="el_residual")


# -- discrete Euler-Lagrange solver -------------------------------------------


@dataclass(frozen=True)
class SolveResult:
    trajectory: Trajectory
    iterations: int
    residual_max: float
    converged: bool = True


def _residual_entries(lagr: Lagrangian, pts: np.ndarray, xvals: Sequence) -> list:
    """EL residual entries over a purely discrete window; dual-safe.

    xvals may mix floats and Dual seeds; the returned entries then carry the
    corresponding Jacobian tangents.
    """
    n = len(xvals)
    mu = [float(pts[i + 1] - pts[i]) for i in range(n - 1)]
    fr, fx = [], []
    for i in range(n - 1):
        slope = (xvals[i + 1] - xvals[i]) / mu[i]
        _, fxi, fri = lagr.partials(float(pts[i]), xvals[i + 1], slope)
        fr.append(fri)
        fx.append(fxi)
    return [(fr[i + 1] - fr[i]) / mu[i] - fx[i] for i in range(n - 2)]


def _window_is_discrete(ts: TimeScale, t0: float, t1: float) -> bool:
    return not any(
        lo < t1 - POINT_TOLERANCE and hi > t0 + POINT_TOLERANCE for lo, hi in ts.dense_spans
    )


def solve_el_discrete(
    problem: VariationalProblem,
    x_init: Optional[Trajectory] = None,
    tol: float = 1e-10,
    max_iter: int = 100,
) -> SolveResult:
    """Solve the discrete Euler-Lagrange equations by damped Newton iteration.

    Interior values are the unknowns; boundary values stay pinned to alpha
    and beta. The Jacobian is exact, obtained by seeding dual-number
    tangents on each unknown and pushing them through the residual. Steps
    are halved until the residual max-norm decreases.

    Raises NonConvergence (carrying the best iterate and diagnostics) or
    SingularJacobian.
    """
    ts = problem.scale
    if not _window_is_discrete(ts, problem.t0, problem.t1):
        raise InvalidParameter("solve_el_discrete handles discrete scales only")
    i0, i1 = problem.window()
    n = i1 - i0 + 1
    if n < 3:
        raise InsufficientPoints("solver needs at least 3 scale points in [t0, t1]")
    pts = ts.points[i0 : i1 + 1]
    base = x_init if x_init is not None else problem.linear_trajectory()
    xw = base.values[i0 : i1 + 1].astype(float).copy()
    xw[0], xw[-1] = problem.alpha, problem.beta

    def assemble(values: np.ndarray) -> np.ndarray:
        return np.array(
            [primal_value(e) for e in _residual_entries(problem.lagrangian, pts, list(values))]
        )

    def jacobian(values: np.ndarray) -> np.ndarray:
        m = n - 2
        jac = np.zeros((m, m))
        for j in range(m):
            seeded: list = list(values)
            seeded[j + 1] = Dual(float(values[j + 1]), 1.0)
            entries = _residual_entries(problem.lagrangian, pts, seeded)
            jac[:, j] = [primal_value(tangent_of(e)) for e in entries]
        return jac

    def rebuild(values: np.ndarray) -> Trajectory:
        full = base.values.copy()
        full[i0 : i1 + 1] = values
        return GridFunction(ts, full, name="el_solution")

    residual = assemble(xw)
    res_max = float(np.max(np.abs(residual)))
    best, best_max = xw.copy(), res_max
    iterations = 0
    for _ in range(max_iter):
        if res_max <= tol:
            return SolveResult(rebuild(xw), iterations, res_max)
        try:
            step = np.linalg.solve(jacobian(xw), residual)
        except np.linalg.LinAlgError as e:
            raise SingularJacobian(f"Jacobian is singular: {e}") from None
        lam = 1.0
        while True:
            trial = xw.copy()
            trial[1:-1] -= lam * step
            trial_res = assemble(trial)
            trial_max = float(np.max(np.abs(trial_res)))
            if trial_max < res_max or trial_max <= tol:
                break
            lam *= 0.5
            if lam < 1e-10:
                raise NonConvergence(
                    "Newton stalled: no step reduces the residual",
                    best=rebuild(best),
                    iterations=iterations,
                    residual_max=best_max,
                )
        xw, residual, res_max = trial, trial_res, trial_max
        iterations += 1
        if res_max < best_max:
            best, best_max = xw.copy(), res_max
    if res_max <= tol:
        return SolveResult(rebuild(xw), iterations, res_max)
    raise NonConvergence(
        f"no convergence within {max_iter} iterations (residual {best_max:.3e})",
        best=rebuild(best),
        iterations=iterations,
        residual_max=best_max,
    )


# -- spike perturbations and minimality falsification --------------------------


def spike_perturbation(
    problem: VariationalProblem, base: Trajectory, t_at: float, d: float
) -> Trajectory:
    """Add d to the trajectory value at sigma(t_at).

    t_at must be a right-scattered interior point with sigma(t_at) != t1;
    the perturbation then leaves both boundary values untouched while its
    delta derivative takes the values d/mu(t_at) at t_at and
    -d/mu(sigma(t_at)) at sigma(t_at) (for a flat base).
    """
    if d == 0:
        raise InvalidParameter("spike height d must be nonzero")
    ts = problem.scale
    i = ts.index_of(t_at)
    t_at = float(ts.points[i])
    if not (problem.t0 + POINT_TOLERANCE < t_at < problem.t1 - POINT_TOLERANCE):
        raise InvalidSpikeLocation(f"t_at={t_at!r} must lie strictly inside (t0, t1)")
    if ts.mu(t_at) == 0.0:
        raise InvalidSpikeLocation(f"t_at={t_at!r} is right-dense; a spike needs mu(t_at) > 0")
    s = ts.sigma(t_at)
    if abs(s - problem.t1) <= POINT_TOLERANCE:
        raise InvalidSpikeLocation("sigma(t_at) coincides with t1; the spike would move the boundary")
    return base.with_value_at(s, base.value_at(s) + d)


@dataclass(frozen=True)
class SpikeWitness:
    """A spike that certifies the zero of the strong-norm ball: small height, negative value."""

    t_at: float
    d: float
    functional_value: float
    slope_ratio: float  # d / mu(sigma(t_at)), chosen > 1


def find_spike_below(
    problem: VariationalProblem,
    delta: float,
    base: Optional[Trajectory] = None,
) -> Optional[SpikeWitness]:
    """Search for a spike with |d| < delta and functional below the base value.

    Candidates are the admissible spike locations ordered by the local
    graininess max(mu(t_at), mu(sigma(t_at))); the first location where that
    graininess drops below delta admits a height d with d/mu(sigma(t_at)) > 1,
    which is returned once the functional decrease is verified numerically.
    """
    if delta <= 0:
        raise InvalidParameter("delta must be positive")
    ts = problem.scale
    base = base if base is not None else problem.zero_trajectory()
    base_value = functional(problem, base)
    i0, i1 = problem.window()
    candidates = []
    for i in range(i0 + 1, i1):
        t = float(ts.points[i])
        mu0 = ts.mu(t)
        if mu0 == 0.0:
            continue
        s = ts.sigma(t)
        if abs(s - problem.t1) <= POINT_TOLERANCE:
            continue
        mu1 = ts.mu(s)
        if mu1 == 0.0:
            continue
        candidates.append((max(mu0, mu1), t, mu1))
    candidates.sort()
    for mu_max, t, mu1 in candidates:
        if mu_max >= delta:
            continue
        d = 0.5 * (mu_max + delta)
        spike = spike_perturbation(problem, base, t, d)
        value = functional(problem, spike)
        if value < base_value:
            return SpikeWitness(t_at=t, d=d, functional_value=value, slope_ratio=d / mu1)
    return None


def random_bounded_slope_trajectory(
    problem: VariationalProblem,
    rng: np.random.Generator,
    slope_bound: float = 1.0,
) -> Trajectory:
    """Random admissible trajectory with |x^Delta| <= slope_bound everywhere.

    Draws slopes uniformly, projects them so the boundary conditions hold
    exactly, then rescales the fluctuation so the bound is respected.
    """
    ts = problem.scale
    i0, i1 = problem.window()
    pts = ts.points[i0 : i1 + 1]
    gaps = np.diff(pts)
    span = problem.t1 - problem.t0
    c = (problem.beta - problem.alpha) / span
    if abs(c) > slope_bound:
        raise InvalidParameter("boundary slope exceeds the requested bound")
    u = rng.uniform(-1.0, 1.0, gaps.size)
    v = u - float(u @ gaps) / span
    m = float(np.max(np.abs(v)))
    room = slope_bound - abs(c)
    s = c + v * (min(1.0, room / m) if m > 0 else 0.0)
    window_vals = problem.alpha + np.concatenate(([0.0], np.cumsum(s * gaps)))
    full = np.empty(len(ts))
    full[:i0] = problem.alpha
    full[i0 : i1 + 1] = window_vals
    full[i1 + 1 :] = window_vals[-1]
    return GridFunction(ts, full, name="random")
