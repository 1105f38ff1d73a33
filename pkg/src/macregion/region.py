"""Rate-region geometry: pentagons per policy and the convex hull of their union."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .information import cond_mutual_info
from .model import S, XA, XB, Y, MacModel, ModelError, TeamPolicy, build_joint, validate_policy

PENTAGON_TOL = 1e-9
COLLINEAR_TOL = 1e-12


class RatePair(NamedTuple):
    r_a: float
    r_b: float


@dataclass(frozen=True)
class Pentagon:
    """R_a <= i_a, R_b <= i_b, R_a + R_b <= i_sum in the nonnegative quadrant."""

    i_a: float
    i_b: float
    i_sum: float

    def __post_init__(self):
        vals = (self.i_a, self.i_b, self.i_sum)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"pentagon bounds must be finite, got {vals}")
        if min(vals) < -PENTAGON_TOL:
            raise ValueError(f"pentagon bounds must be nonnegative, got {vals}")
        if max(self.i_a, self.i_b) > self.i_sum + PENTAGON_TOL:
            raise ValueError(f"sum bound {self.i_sum} below a single-rate bound in {vals}")
        if self.i_sum > self.i_a + self.i_b + PENTAGON_TOL:
            raise ValueError(f"sum bound {self.i_sum} exceeds i_a + i_b in {vals}")

    def corner_a(self) -> RatePair:
        """Dominant corner maximizing R_a first."""
        return RatePair(self.i_a, min(self.i_b, max(self.i_sum - self.i_a, 0.0)))

    def corner_b(self) -> RatePair:
        return RatePair(min(self.i_a, max(self.i_sum - self.i_b, 0.0)), self.i_b)

    def corners(self) -> list[RatePair]:
        return [RatePair(0.0, 0.0), RatePair(self.i_a, 0.0), self.corner_a(),
                self.corner_b(), RatePair(0.0, self.i_b)]


def pentagon_of_policy(model: MacModel, policy: TeamPolicy) -> Pentagon:
    problems = validate_policy(policy, model)
    if problems:
        raise ModelError("; ".join(problems))
    joint = build_joint(model, policy)
    return Pentagon(
        i_a=cond_mutual_info(joint, [XA], [Y], [XB, S]),
        i_b=cond_mutual_info(joint, [XB], [Y], [XA, S]),
        i_sum=cond_mutual_info(joint, [XA, XB], [Y], [S]),
    )


@dataclass(frozen=True)
class Polygon:
    """Down-closed convex region given by its counterclockwise vertex chain from the origin."""

    vertices: tuple[RatePair, ...]

    def edges(self):
        n = len(self.vertices)
        for i in range(n):
            yield self.vertices[i], self.vertices[(i + 1) % n]


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _not_left_turn(o, a, b, tol: float) -> bool:
    # tolerance on the sine of the turn angle, so it is scale free
    scale = math.hypot(a[0] - o[0], a[1] - o[1]) * math.hypot(b[0] - o[0], b[1] - o[1])
    return _cross(o, a, b) <= tol * scale


def convex_hull(points: Sequence[tuple[float, float]], tol: float = COLLINEAR_TOL) -> list[RatePair]:
    """Andrew's monotone chain; counterclockwise, collinear points dropped."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return [RatePair(*p) for p in pts]
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _not_left_turn(lower[-2], lower[-1], p, tol):
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _not_left_turn(upper[-2], upper[-1], p, tol):
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return [RatePair(*p) for p in hull]


def hull_union(pentagons: Sequence[Pentagon]) -> Polygon:
    """Convex hull of the union of pentagons (time-sharing closure)."""
    if not pentagons:
        raise ValueError("hull_union needs at least one pentagon")
    points = [(0.0, 0.0)]
    for p in pentagons:
        points.extend(p.corners())
    hull = convex_hull(points)
    # rotate so the chain starts at the origin
    start = hull.index(min(hull, key=lambda v: (v[0] + v[1], v[0])))
    return Polygon(tuple(hull[start:] + hull[:start]))


def _segment_distance(p, a, b) -> float:
    ax, ay = b[0] - a[0], b[1] - a[1]
    denom = ax * ax + ay * ay
    if denom == 0.0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    t = min(1.0, max(0.0, ((p[0] - a[0]) * ax + (p[1] - a[1]) * ay) / denom))
    return math.hypot(p[0] - a[0] - t * ax, p[1] - a[1] - t * ay)


def contains(region: Polygon, point, tol: float = 1e-9) -> bool:
    """True iff ``point`` lies in the region or within ``tol`` of its boundary."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    verts = region.vertices
    if len(verts) >= 3 and all(_cross(a, b, point) >= 0.0 for a, b in region.edges()):
        return True
    if len(verts) == 1:
        return math.hypot(point[0] - verts[0][0], point[1] - verts[0][1]) <= tol
    return min(_segment_distance(point, a, b) for a, b in region.edges()) <= tol


def _check_weight(weight) -> tuple[float, float]:
    la, lb = float(weight[0]), float(weight[1])
    if la < 0 or lb < 0:
        raise ValueError(f"weights must be nonnegative, got {(la, lb)}")
    if la == 0 and lb == 0:
        raise ValueError("weights must not both be zero")
    return la, lb


def pentagon_support(p: Pentagon, weight) -> tuple[float, RatePair]:
    la, lb = _check_weight(weight)
    corner = p.corner_a() if la >= lb else p.corner_b()
    return la * corner.r_a + lb * corner.r_b, corner


def support(pentagons: Sequence[Pentagon], weight) -> tuple[float, RatePair]:
    """max over the pentagons of lambda . r; first pentagon wins ties."""
    if not pentagons:
        raise ValueError("support needs at least one pentagon")
    best = None
    for p in pentagons:
        cand = pentagon_support(p, weight)
        if best is None or cand[0] > best[0]:
            best = cand
    return best


def polygon_support(region: Polygon, weight) -> float:
    la, lb = _check_weight(weight)
    return max(la * v.r_a + lb * v.r_b for v in region.vertices)


def inflate(region: Polygon, delta: float) -> Polygon:
    """Shift every vertex by ``delta`` in both coordinates, keeping the origin (Minkowski sum with a box)."""
    pts = [(0.0, 0.0)]
    for v in region.vertices:
        pts += [(v.r_a + delta, v.r_b + delta), (v.r_a + delta, 0.0), (0.0, v.r_b + delta)]
    hull = convex_hull(pts)
    start = hull.index(min(hull, key=lambda v: (v[0] + v[1], v[0])))
    return Polygon(tuple(hull[start:] + hull[:start]))
