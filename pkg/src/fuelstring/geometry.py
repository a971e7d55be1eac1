"""Planar points and polyline paths with arc-length addressing."""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

EPS_GEOM = 1e-9


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def distance_to(self, other: Point2D) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_list(self) -> list[float]:
        return [self.x, self.y]


def distance(a: Point2D, b: Point2D) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


class Polyline:
    """Piecewise-linear path addressed by arc length from its first vertex.

    Vertices are fixed at construction; consecutive duplicates are rejected
    so every edge has positive length.  Non-consecutive repeats are fine
    (a path may cross or double back over itself).
    """

    __slots__ = ("vertices", "cumulative_arc")

    def __init__(self, vertices: list[Point2D] | tuple[Point2D, ...]):
        if len(vertices) < 2:
            raise ValueError("polyline needs at least 2 vertices")
        cum = [0.0]
        for a, b in zip(vertices, vertices[1:]):
            d = distance(a, b)
            if d <= EPS_GEOM:
                raise ValueError(f"zero-length edge at ({a.x}, {a.y})")
            cum.append(cum[-1] + d)
        self.vertices = tuple(vertices)
        self.cumulative_arc = tuple(cum)

    @property
    def length(self) -> float:
        return self.cumulative_arc[-1]

    def point_at_arc(self, s: float) -> Point2D:
        """Interpolated point at arc length s from the start.

        s is clamped within EPS_GEOM of the valid range; anything further
        outside raises.
        """
        if s < -EPS_GEOM or s > self.length + EPS_GEOM:
            raise ValueError(f"arc {s} outside [0, {self.length}]")
        s = min(max(s, 0.0), self.length)
        i = bisect_right(self.cumulative_arc, s) - 1
        if i >= len(self.vertices) - 1:
            return self.vertices[-1]
        if s == self.cumulative_arc[i]:
            return self.vertices[i]
        a, b = self.vertices[i], self.vertices[i + 1]
        t = (s - self.cumulative_arc[i]) / (self.cumulative_arc[i + 1] - self.cumulative_arc[i])
        return Point2D(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))

    def sub_polyline(self, s0: float, s1: float) -> Polyline:
        """Portion of the path between arcs s0 < s1, endpoints interpolated."""
        if s1 - s0 <= EPS_GEOM:
            raise ValueError(f"empty sub-polyline [{s0}, {s1}]")
        pts = [self.point_at_arc(s0)]
        for v, arc in zip(self.vertices, self.cumulative_arc):
            if s0 + EPS_GEOM < arc < s1 - EPS_GEOM:
                pts.append(v)
        pts.append(self.point_at_arc(s1))
        return Polyline(pts)

    def reversed(self) -> Polyline:
        return Polyline(list(reversed(self.vertices)))

    def __repr__(self):
        return f"Polyline({len(self.vertices)} vertices, length {self.length:.3f})"


def polyline_length(points: list[Point2D]) -> float:
    """Total length of the open path through points, in order."""
    return sum(distance(a, b) for a, b in zip(points, points[1:]))


def step_toward(pos: Point2D, goal: Point2D, step: float) -> Point2D:
    """Move pos straight toward goal by at most step, clamping at goal."""
    d = distance(pos, goal)
    if d <= step or d <= EPS_GEOM:
        return goal
    f = step / d
    return Point2D(pos.x + f * (goal.x - pos.x), pos.y + f * (goal.y - pos.y))
