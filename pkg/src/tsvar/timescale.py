"""Bounded time scales built from computable segments.

A time scale is a nonempty closed subset of the reals. Here it is a finite
union of segments: explicit point lists, uniform and geometric progressions,
and dense intervals. Jump operators are exact: interior points of a dense
interval have sigma(t) = t and mu(t) = 0 regardless of the quadrature
resolution attached to the interval; the resolution only controls how dense
segments are sampled and integrated.

Values are immutable after construction, so every operation is pure and safe
to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import EmptyInterval, InvalidParameter, PointNotInScale

# Absolute tolerance for point membership and deduplication. All scale points
# are canonicalized at construction, so repeated sigma/rho chains cannot drift.
POINT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DiscretePoints:
    """A finite, strictly increasing list of isolated points."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise InvalidParameter("DiscretePoints requires at least one point")
        if any(not math.isfinite(p) for p in pts):
            raise InvalidParameter("DiscretePoints must be finite")
        if any(b - a <= POINT_TOLERANCE for a, b in zip(pts, pts[1:])):
            raise InvalidParameter("DiscretePoints must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def realize(self) -> np.ndarray:
        return np.array(self.points, dtype=float)

    def bounds(self) -> tuple[float, float]:
        return self.points[0], self.points[-1]


@dataclass(frozen=True)
class Uniform:
    """Arithmetic progression from start to end with positive step."""

    start: float
    end: float
    step: float

    def __post_init__(self):
        if self.step <= 0:
            raise InvalidParameter("Uniform step must be positive")
        if self.end <= self.start:
            raise InvalidParameter("Uniform requires end > start")
        k = round((self.end - self.start) / self.step)
        if k < 1 or abs(self.start + k * self.step - self.end) > POINT_TOLERANCE:
            raise InvalidParameter(
                "Uniform span must be an integer multiple of the step"
            )
        object.__setattr__(self, "_count", int(k) + 1)

    def realize(self) -> np.ndarray:
        return np.linspace(self.start, self.end, self._count)

    def bounds(self) -> tuple[float, float]:
        return self.start, self.end


@dataclass(frozen=True)
class Geometric:
    """Geometric progression minimum, minimum*ratio, ..., maximum."""

    minimum: float
    maximum: float
    ratio: float

    def __post_init__(self):
        if self.minimum <= 0:
            raise InvalidParameter("Geometric minimum must be positive")
        if self.ratio <= 1:
            raise InvalidParameter("Geometric ratio must exceed 1")
        if self.maximum < self.minimum:
            raise InvalidParameter("Geometric requires maximum >= minimum")
        k = round(math.log(self.maximum / self.minimum) / math.log(self.ratio))
        if abs(self.minimum * self.ratio**k - self.maximum) > 1e-12 * abs(self.maximum):
            raise InvalidParameter(
                "Geometric maximum must equal minimum * ratio**k for integer k"
            )
        object.__setattr__(self, "_count", int(k) + 1)

    def realize(self) -> np.ndarray:
        pts = self.minimum * self.ratio ** np.arange(self._count, dtype=float)
        pts[-1] = self.maximum
        return pts

    def bounds(self) -> tuple[float, float]:
        return self.minimum, self.maximum


@dataclass(frozen=True)
class DenseInterval:
    """A real interval [lo, hi], sampled on resolution+1 quadrature nodes.

    The interval itself belongs to the scale; the nodes are only the
    representative points used for grid functions and quadrature.
    """

    lo: float
    hi: float
    resolution: int = 1000

    def __post_init__(self):
        if self.hi <= self.lo:
            raise InvalidParameter("DenseInterval requires lo < hi")
        if int(self.resolution) != self.resolution or self.resolution < 1:
            raise InvalidParameter("DenseInterval resolution must be a positive integer")
        object.__setattr__(self, "resolution", int(self.resolution))

    def realize(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.resolution + 1)

    def bounds(self) -> tuple[float, float]:
        return self.lo, self.hi


Segment = Union[DiscretePoints, Uniform, Geometric, DenseInterval]


class Side(str, Enum):
    SCATTERED = "scattered"
    DENSE = "dense"


@dataclass(frozen=True)
class PointClass:
    """Right/left classification of a scale point.

    A point is right-scattered iff sigma(t) > t and left-scattered iff
    rho(t) < t. At the scale extrema the jump operators return the point
    itself, so minima are left-dense and maxima right-dense by convention.
    """

    right: Side
    left: Side

    @property
    def is_isolated(self) -> bool:
        return self.right is Side.SCATTERED and self.left is Side.SCATTERED

    def describe(self) -> str:
        return f"right-{self.right.value}, left-{self.left.value}"


class TimeScale:
    """Immutable bounded time scale with exact jump operators.

    Parameters
    ----------
    segments :
        Nonempty iterable of segments. Segments must be pairwise disjoint;
        they may share endpoints, which are deduplicated.
    metadata :
        Free-form construction notes (e.g. the truncation parameter of a
        harmonic scale).
    """

    def __init__(self, segments: Iterable[Segment], metadata: Optional[dict] = None):
        segs = tuple(segments)
        if not segs:
            raise InvalidParameter("TimeScale requires at least one segment")
        segs = tuple(sorted(segs, key=lambda s: s.bounds()[0]))
        for a, b in zip(segs, segs[1:]):
            if b.bounds()[0] < a.bounds()[1] - POINT_TOLERANCE:
                raise InvalidParameter(
                    f"segments overlap near t={b.bounds()[0]!r}; "
                    "segments may only share endpoints"
                )
        pts = np.sort(np.concatenate([s.realize() for s in segs]))
        keep = np.concatenate(([True], np.diff(pts) > POINT_TOLERANCE))
        pts = np.ascontiguousarray(pts[keep])
        pts.setflags(write=False)

        spans = tuple(
            (s.lo, s.hi) for s in segs if isinstance(s, DenseInterval)
        )
        right_dense = np.zeros(pts.size, dtype=bool)
        left_dense = np.zeros(pts.size, dtype=bool)
        for lo, hi in spans:
            i0 = int(np.searchsorted(pts, lo - POINT_TOLERANCE))
            i1 = int(np.searchsorted(pts, hi + POINT_TOLERANCE))
            inside = pts[i0:i1]
            right_dense[i0:i1] |= inside < hi - POINT_TOLERANCE
            left_dense[i0:i1] |= inside > lo + POINT_TOLERANCE
        right_dense.setflags(write=False)
        left_dense.setflags(write=False)

        self._segments = segs
        self._points = pts
        self._spans = spans
        self._right_dense = right_dense
        self._left_dense = left_dense
        self.metadata = MappingProxyType(dict(metadata or {}))

    # -- basic introspection -------------------------------------------------

    @property
    def segments(self) -> tuple[Segment, ...]:
        return self._segments

    @property
    def points(self) -> np.ndarray:
        """All representative points, sorted (dense-segment nodes included)."""
        return self._points

    @property
    def dense_spans(self) -> tuple[tuple[float, float], ...]:
        return self._spans

    @property
    def min(self) -> float:
        return float(self._points[0])

    @property
    def max(self) -> float:
        return float(self._points[-1])

    @property
    def right_dense_mask(self) -> np.ndarray:
        """True per node when the node is right-dense (strictly below a dense-span top)."""
        return self._right_dense

    @property
    def left_dense_mask(self) -> np.ndarray:
        return self._left_dense

    def __len__(self) -> int:
        return self._points.size

    def __repr__(self) -> str:
        kind = self.metadata.get("kind", "timescale")
        return (
            f"TimeScale({kind}, {self._points.size} points on "
            f"[{self.min:g}, {self.max:g}])"
        )

    # -- membership ----------------------------------------------------------

    def node_index(self, t: float) -> Optional[int]:
        """Index of the representative point equal to t (within tolerance), else None."""
        i = int(np.searchsorted(self._points, t))
        for j in (i - 1, i):
            if 0 <= j < self._points.size and abs(self._points[j] - t) <= POINT_TOLERANCE:
                return j
        return None

    def _span_interior(self, t: float) -> Optional[tuple[float, float]]:
        for lo, hi in self._spans:
            if lo + POINT_TOLERANCE < t < hi - POINT_TOLERANCE:
                return (lo, hi)
        return None

    def contains(self, t: float) -> bool:
        return self.node_index(t) is not None or self._span_interior(t) is not None

    def index_of(self, t: float) -> int:
        """Index of the representative point t; raises PointNotInScale."""
        i = self.node_index(t)
        if i is None:
            raise PointNotInScale(f"t={t!r} is not a representative point of the scale")
        return i

    def _canonical(self, t: float) -> tuple[float, Optional[int]]:
        """Snap t to its stored node value; (t, None) for dense-span interiors."""
        i = self.node_index(t)
        if i is not None:
            return float(self._points[i]), i
        if self._span_interior(t) is not None:
            return float(t), None
        raise PointNotInScale(f"t={t!r} is not in the scale")

    # -- jump operators ------------------------------------------------------

    def sigma(self, t: float) -> float:
        """Least scale point strictly above t; t itself at the maximum."""
        t, i = self._canonical(t)
        if i is None or self._right_dense[i] or i == self._points.size - 1:
            return t
        return float(self._points[i + 1])

    def rho(self, t: float) -> float:
        """Greatest scale point strictly below t; t itself at the minimum."""
        t, i = self._canonical(t)
        if i is None or self._left_dense[i] or i == 0:
            return t
        return float(self._points[i - 1])

    def mu(self, t: float) -> float:
        """Graininess sigma(t) - t; zero at right-dense points and at the maximum."""
        t, i = self._canonical(t)
        if i is None or self._right_dense[i] or i == self._points.size - 1:
            return 0.0
        return float(self._points[i + 1] - self._points[i])

    def classify(self, t: float) -> PointClass:
        t, _ = self._canonical(t)
        return PointClass(
            right=Side.SCATTERED if self.sigma(t) > t else Side.DENSE,
            left=Side.SCATTERED if self.rho(t) < t else Side.DENSE,
        )

    # -- windows -------------------------------------------------------------

    def window_indices(self, t0: float, t1: float) -> tuple[int, int]:
        """Inclusive node-index range of [t0, t1]; endpoints must be nodes."""
        if t1 <= t0:
            raise EmptyInterval(f"interval requires t0 < t1, got [{t0!r}, {t1!r}]")
        return self.index_of(t0), self.index_of(t1)

    def kappa_points(self, t0: float, t1: float) -> np.ndarray:
        """Representative points of [t0, t1]^kappa.

        All points of [t0, t1] intersected with the scale, dropping t1 when
        it is left-scattered. Dense segments contribute their quadrature
        nodes.
        """
        i0, i1 = self.window_indices(t0, t1)
        if self.rho(float(self._points[i1])) < self._points[i1] - POINT_TOLERANCE:
            i1 -= 1
        return self._points[i0 : i1 + 1].copy()

    # -- vectorized helpers (used by the calculus layer) ----------------------

    def mu_values(self) -> np.ndarray:
        """Graininess per representative point, as an array."""
        gaps = np.diff(self._points)
        mu = np.zeros_like(self._points)
        mu[:-1] = np.where(self._right_dense[:-1], 0.0, gaps)
        return mu

    def sigma_indices(self) -> np.ndarray:
        """Per-node index of sigma(node): the node itself when right-dense or last."""
        idx = np.arange(self._points.size)
        shift = ~self._right_dense
        shift[-1] = False
        return idx + shift


def make_points(values: Sequence[float], metadata: Optional[dict] = None) -> TimeScale:
    """Scale consisting of the given strictly increasing points."""
    return TimeScale([DiscretePoints(tuple(values))], metadata=metadata)


def make_uniform(start: float, end: float, step: float) -> TimeScale:
    """Arithmetic-progression scale, e.g. a bounded window of h*Z."""
    return TimeScale(
        [Uniform(start, end, step)],
        metadata={"kind": "uniform", "start": start, "end": end, "step": step},
    )


def make_geometric(minimum: float, maximum: float, ratio: float) -> TimeScale:
    """Geometric-progression scale, a bounded window of q**N with q = ratio.

    On this scale sigma(t) = ratio*t and mu(t) = (ratio-1)*t exactly for all
    interior points.
    """
    return TimeScale(
        [Geometric(minimum, maximum, ratio)],
        metadata={"kind": "geometric", "minimum": minimum, "maximum": maximum, "ratio": ratio},
    )


def make_dense(lo: float, hi: float, resolution: int = 1000) -> TimeScale:
    """Dense interval [lo, hi] with the given quadrature resolution."""
    return TimeScale(
        [DenseInterval(lo, hi, resolution)],
        metadata={"kind": "dense", "lo": lo, "hi": hi, "resolution": resolution},
    )


def make_harmonic(n_max: int) -> TimeScale:
    """The harmonic scale {1/n : 1 <= n <= n_max} together with 0.

    The untruncated object {1/n : n in N} union {0} is closed with 0 as an
    accumulation point; any computable representation must cut the sequence
    at some n_max, which is recorded in the metadata. At the truncation
    point 0 the computed graininess 1/n_max is an artifact of the cut.
    """
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 2:
        raise InvalidParameter("make_harmonic requires an integer n_max >= 2")
    pts = [0.0] + [1.0 / n for n in range(int(n_max), 0, -1)]
    return TimeScale(
        [DiscretePoints(tuple(pts))],
        metadata={"kind": "harmonic", "n_max": int(n_max), "truncation_point": 0.0},
    )


def union(*scales: TimeScale, metadata: Optional[dict] = None) -> TimeScale:
    """Union of several time scales (segments merged and re-validated)."""
    if not scales:
        raise InvalidParameter("union requires at least one scale")
    segs: list[Segment] = []
    for s in scales:
        segs.extend(s.segments)
    return TimeScale(segs, metadata=metadata)
