"""Delta derivative, delta integral, and the strong/weak norms.

Grid functions carry one value per representative point of a time scale.
At right-scattered points the delta derivative is the exact forward
quotient (x(sigma(t)) - x(t)) / mu(t); at right-dense points it is a
difference approximation over the neighbouring quadrature nodes (symmetric
where both neighbours are dense, second-order one-sided at segment
boundaries). The delta integral is the mu-weighted sum over scattered
points plus composite trapezoid quadrature over dense segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import (
    AtScaleMaximum,
    InvalidParameter,
    PointNotInScale,
    ReversedBounds,
)
from .timescale import POINT_TOLERANCE, TimeScale


class DerivativeKind(str, Enum):
    EXACT_SCATTERED = "exact-scattered"
    DENSE_APPROX = "dense-approx"
    LEFT_LIMIT = "left-limit"
    RIGHT_LIMIT = "right-limit"
    UNDEFINED_AT_BREAK = "undefined-at-break"


@dataclass(frozen=True)
class DerivativeValue:
    """A delta-derivative sample together with how it was obtained."""

    value: float
    kind: DerivativeKind

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class GridFunction:
    """A real-valued function sampled on the representative points of a scale.

    break_points lists the finitely many points where the delta derivative
    of the underlying function does not exist (corners of a piecewise
    trajectory); sup-norms and scans take one-sided values there.
    """

    scale: TimeScale
    values: np.ndarray
    name: Optional[str] = None
    break_points: tuple[float, ...] = ()

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (len(self.scale),):
            raise InvalidParameter(
                f"expected {len(self.scale)} values (one per scale point), got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidParameter("grid values must all be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        canon = tuple(
            float(self.scale.points[self.scale.index_of(b)]) for b in self.break_points
        )
        object.__setattr__(self, "break_points", canon)

    @classmethod
    def from_callable(
        cls,
        scale: TimeScale,
        fn: Callable[[float], float],
        name: Optional[str] = None,
        break_points: tuple[float, ...] = (),
    ) -> "GridFunction":
        return cls(scale, np.array([fn(float(t)) for t in scale.points]), name, break_points)

    @classmethod
    def zeros(cls, scale: TimeScale, name: Optional[str] = None) -> "GridFunction":
        return cls(scale, np.zeros(len(scale)), name)

    def value_at(self, t: float) -> float:
        return float(self.values[self.scale.index_of(t)])

    __call__ = value_at

    def value_at_sigma(self, t: float) -> float:
        """x(sigma(t)), the composition with the forward jump."""
        return float(self.values[self.scale.index_of(self.scale.sigma(t))])

    def with_value_at(self, t: float, value: float) -> "GridFunction":
        i = self.scale.index_of(t)
        vals = self.values.copy()
        vals[i] = value
        return GridFunction(self.scale, vals, self.name, self.break_points)

    def with_break_points(self, break_points: tuple[float, ...]) -> "GridFunction":
        return GridFunction(self.scale, self.values.copy(), self.name, break_points)

    def is_break(self, t: float) -> bool:
        return any(abs(t - b) <= POINT_TOLERANCE for b in self.break_points)


def _dense_slope(x: GridFunction, i: int, direction: int = 0) -> float:
    """Difference approximation at a right-dense node (or a left-dense maximum).

    direction 0 chooses the best available stencil, +1 forces forward,
    -1 forces backward. One-sided stencils are second order when two
    uniformly spaced neighbours are available on that side.
    """
    ts = x.scale
    pts, v = ts.points, x.values
    n = pts.size
    has_left = ts.left_dense_mask[i]
    has_right = ts.right_dense_mask[i]
    if direction == 0 and has_left and has_right:
        return float((v[i + 1] - v[i - 1]) / (pts[i + 1] - pts[i - 1]))
    if direction >= 0 and has_right:
        h = pts[i + 1] - pts[i]
        if i + 2 < n and ts.right_dense_mask[i + 1] and abs(pts[i + 2] - pts[i + 1] - h) <= 1e-9 * h:
            return float((-3.0 * v[i] + 4.0 * v[i + 1] - v[i + 2]) / (2.0 * h))
        return float((v[i + 1] - v[i]) / h)
    if has_left:
        h = pts[i] - pts[i - 1]
        if i - 2 >= 0 and ts.left_dense_mask[i - 1] and abs(pts[i - 1] - pts[i - 2] - h) <= 1e-9 * h:
            return float((3.0 * v[i] - 4.0 * v[i - 1] + v[i - 2]) / (2.0 * h))
        return float((v[i] - v[i - 1]) / h)
    raise PointNotInScale(f"no dense neighbourhood around t={pts[i]!r}")


def delta_derivative(x: GridFunction, t: float, side: Optional[str] = None) -> DerivativeValue:
    """Delta derivative of a grid function at a representative point.

    side may be "left" or "right" to request a one-sided value at a break
    point of a piecewise function; with side=None a registered break at a
    right-dense point yields kind undefined-at-break (value NaN).

    Raises AtScaleMaximum when t is a left-scattered maximum (t outside
    T^kappa, where the delta derivative is not defined).
    """
    ts = x.scale
    i = ts.index_of(t)
    pts, v = ts.points, x.values
    last = pts.size - 1
    if i == last and not ts.left_dense_mask[i]:
        raise AtScaleMaximum(
            f"t={t!r} is the left-scattered maximum; the delta derivative needs t in T^kappa"
        )
    if side == "right":
        if i == last:
            raise InvalidParameter("no right neighbour at the scale maximum")
        if ts.right_dense_mask[i]:
            return DerivativeValue(_dense_slope(x, i, direction=+1), DerivativeKind.RIGHT_LIMIT)
        return DerivativeValue(
            float((v[i + 1] - v[i]) / (pts[i + 1] - pts[i])), DerivativeKind.RIGHT_LIMIT
        )
    if side == "left":
        if i == 0:
            raise InvalidParameter("no left neighbour at the scale minimum")
        if ts.left_dense_mask[i]:
            return DerivativeValue(_dense_slope(x, i, direction=-1), DerivativeKind.LEFT_LIMIT)
        return DerivativeValue(
            float((v[i] - v[i - 1]) / (pts[i] - pts[i - 1])), DerivativeKind.LEFT_LIMIT
        )
    if side is not None:
        raise InvalidParameter(f"side must be None, 'left' or 'right', got {side!r}")
    if i < last and not ts.right_dense_mask[i]:
        mu = pts[i + 1] - pts[i]
        return DerivativeValue(float((v[i + 1] - v[i]) / mu), DerivativeKind.EXACT_SCATTERED)
    if x.is_break(t):
        return DerivativeValue(math.nan, DerivativeKind.UNDEFINED_AT_BREAK)
    return DerivativeValue(_dense_slope(x, i), DerivativeKind.DENSE_APPROX)


def delta_integral(g: GridFunction, c: float, d: float) -> float:
    """Delta integral of g from c to d (both representative points, c <= d).

    Reversed bounds raise ReversedBounds rather than flipping the sign.
    """
    ts = g.scale
    ic, id_ = ts.index_of(c), ts.index_of(d)
    if id_ < ic:
        raise ReversedBounds(f"integration bounds reversed: c={c!r} > d={d!r}")
    if ic == id_:
        return 0.0
    pts, v = ts.points, g.values
    gaps = np.diff(pts[ic : id_ + 1])
    rd = ts.right_dense_mask[ic:id_]
    left_vals = v[ic:id_]
    right_vals = v[ic + 1 : id_ + 1]
    pieces = np.where(rd, 0.5 * gaps * (left_vals + right_vals), gaps * left_vals)
    return float(pieces.sum())


def _kappa_index_range(ts: TimeScale, t0: float, t1: float) -> tuple[int, int]:
    """Inclusive index range of [t0, t1]^kappa."""
    i0, i1 = ts.window_indices(t0, t1)
    if ts.rho(float(ts.points[i1])) < ts.points[i1] - POINT_TOLERANCE:
        i1 -= 1
    return i0, i1


def norm_strong(x: GridFunction, t0: float, t1: float) -> float:
    """Strong norm: sup of |x(sigma(t))| over [t0, t1]^kappa."""
    ts = x.scale
    i0, i1 = _kappa_index_range(ts, t0, t1)
    sig = ts.sigma_indices()[i0 : i1 + 1]
    return float(np.max(np.abs(x.values[sig])))


def norm_weak(x: GridFunction, t0: float, t1: float) -> float:
    """Weak norm: norm_strong plus sup of |x^Delta| over [t0, t1]^kappa.

    Points where the derivative does not exist (registered breaks at
    right-dense points) are excluded from the second supremum.
    """
    ts = x.scale
    i0, i1 = _kappa_index_range(ts, t0, t1)
    sup_slope = 0.0
    for i in range(i0, i1 + 1):
        d = delta_derivative(x, float(ts.points[i]))
        if d.kind is DerivativeKind.UNDEFINED_AT_BREAK:
            continue
        sup_slope = max(sup_slope, abs(d.value))
    return norm_strong(x, t0, t1) + sup_slope
