"""Offline mission planning: visit order, then fuel-feasible segmentation.

Processing costs are unknown before flight, so the plan assumes visits are
free: it only budgets fuel for distance.  The online layer deals with the
difference once costs start revealing themselves.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import EPS_GEOM, Point2D, Polyline, distance
from .model import Scenario, VehicleParams

DEFAULT_CUT_SPACING = 0.5


class PlanningError(Exception):
    """Raised when no fuel-feasible plan exists for a scenario."""


@dataclass(frozen=True)
class Tour:
    """Closed visit order: path starts and ends at the depot, each target
    appears exactly once at a strictly increasing arc."""

    path: Polyline
    visits: tuple[tuple[int, float], ...]  # (target id, arc along path)

    @property
    def length(self) -> float:
        return self.path.length


@dataclass(frozen=True)
class SegmentPlan:
    """One refuel-to-refuel leg.  The path runs from the previous refuel site
    to this segment's site; target_arcs locate this segment's targets on it.

    Offline plans keep every target arc strictly inside (0, length); segments
    rebuilt online may start directly on a deferred target (arc 0).
    """

    index: int
    path: Polyline
    target_arcs: tuple[tuple[int, float], ...] = field(default_factory=tuple)

    @property
    def length(self) -> float:
        return self.path.length

    @property
    def start(self) -> Point2D:
        return self.path.vertices[0]

    @property
    def site(self) -> Point2D:
        return self.path.vertices[-1]

    def target_ids(self) -> list[int]:
        return [tid for tid, _ in self.target_arcs]


@dataclass(frozen=True)
class MissionPlan:
    segments: tuple[SegmentPlan, ...]

    @property
    def sites(self) -> list[Point2D]:
        """Refuel sites in visit order; the last one is the final rendezvous."""
        return [seg.site for seg in self.segments]

    @property
    def total_length(self) -> float:
        return sum(seg.length for seg in self.segments)

    def target_ids(self) -> list[int]:
        out: list[int] = []
        for seg in self.segments:
            out.extend(seg.target_ids())
        return out


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        if self.ok:
            return "plan ok"
        return "\n".join(f"{v.kind}: {v.message}" for v in self.violations)


def build_tour(scenario: Scenario) -> Tour:
    """Nearest-neighbour order from the depot, then first-improvement 2-opt.

    Distance ties in the greedy pass go to the lowest target id; 2-opt
    restarts its scan after each applied move, so the result is fully
    deterministic.
    """
    depot = scenario.depot
    order: list[int] = []
    remaining = {t.id: t for t in scenario.targets}
    cur = depot
    while remaining:
        best_id = None
        best_d = None
        for tid in sorted(remaining):
            d = distance(cur, remaining[tid].position)
            if best_d is None or d < best_d - EPS_GEOM:
                best_id, best_d = tid, d
        order.append(best_id)
        cur = remaining.pop(best_id).position

    pos = {t.id: t.position for t in scenario.targets}
    order = _two_opt(order, pos, depot)

    points = [depot] + [pos[tid] for tid in order] + [depot]
    path = Polyline(points)
    visits = tuple(
        (tid, path.cumulative_arc[i + 1]) for i, tid in enumerate(order)
    )
    return Tour(path=path, visits=visits)


def _two_opt(order: list[int], pos: dict[int, Point2D], depot: Point2D) -> list[int]:
    if len(order) < 3:
        return order
    pts = [depot] + [pos[t] for t in order] + [depot]
    n = len(pts)
    improved = True
    while improved:
        improved = False
        for i in range(n - 3):
            for j in range(i + 2, n - 1):
                old = distance(pts[i], pts[i + 1]) + distance(pts[j], pts[j + 1])
                new = distance(pts[i], pts[j]) + distance(pts[i + 1], pts[j + 1])
                if new < old - EPS_GEOM:
                    pts[i + 1:j + 1] = pts[i + 1:j + 1][::-1]
                    order[i:j] = order[i:j][::-1]
                    improved = True
                    break
            if improved:
                break
    return order


def _cut_candidates(tour: Tour, spacing: float) -> list[float]:
    """Arcs where a refuel site may be placed: every vertex, a regular grid,
    and the tour end.  Arcs on a target are excluded so a site never lands
    on an unprocessed target; the depot arc at the very end stays in."""
    total = tour.length
    arcs = set(tour.path.cumulative_arc)
    k = 1
    while k * spacing < total - EPS_GEOM:
        arcs.add(k * spacing)
        k += 1
    arcs.add(total)
    target_arcs = [arc for _, arc in tour.visits]
    out = []
    for a in sorted(arcs):
        if any(abs(a - ta) <= EPS_GEOM for ta in target_arcs) and a < total - EPS_GEOM:
            continue
        if out and a - out[-1] <= EPS_GEOM:
            continue
        out.append(a)
    return out


def split_tour(tour: Tour, params: VehicleParams,
               cut_spacing: float = DEFAULT_CUT_SPACING) -> MissionPlan:
    """Greedy farthest-feasible segmentation of the tour.

    From each cut, the next refuel site goes at the farthest candidate arc
    whose segment fits in one tank and whose site the ground vehicle can
    reach from the previous one.  Raises PlanningError when no candidate
    advances the cut.
    """
    candidates = _cut_candidates(tour, cut_spacing)
    reach = params.reach_radius
    max_len = params.flight_range
    total = tour.length

    cuts = [0.0]
    while cuts[-1] < total - EPS_GEOM:
        a_prev = cuts[-1]
        here = tour.path.point_at_arc(a_prev)
        best = None
        for a in candidates:
            if a <= a_prev + EPS_GEOM:
                continue
            if a - a_prev > max_len + EPS_GEOM:
                break
            if distance(here, tour.path.point_at_arc(a)) <= reach + EPS_GEOM:
                best = a
        if best is None:
            raise PlanningError(
                f"cannot place a refuel site after arc {a_prev:.6g}: no candidate "
                f"within range {max_len:.6g} is inside reach radius {reach:.6g}"
            )
        cuts.append(best)

    segments = []
    for i, (a0, a1) in enumerate(zip(cuts, cuts[1:])):
        inside = tuple(
            (tid, arc - a0) for tid, arc in tour.visits
            if a0 + EPS_GEOM < arc < a1 - EPS_GEOM
        )
        segments.append(SegmentPlan(
            index=i,
            path=tour.path.sub_polyline(a0, a1),
            target_arcs=inside,
        ))
    return MissionPlan(segments=tuple(segments))


def plan_mission(scenario: Scenario,
                 cut_spacing: float = DEFAULT_CUT_SPACING) -> MissionPlan:
    """Tour construction plus splitting in one call."""
    return split_tour(build_tour(scenario), scenario.params, cut_spacing)


def validate_plan(plan: MissionPlan, scenario: Scenario) -> ValidationReport:
    """Structural audit of a plan against its scenario.

    Collects every violation rather than stopping at the first, so a bad
    plan can be reported in full.
    """
    v: list[Violation] = []
    params = scenario.params
    segs = plan.segments
    if not segs:
        return ValidationReport(violations=(Violation("empty", "plan has no segments"),))

    if distance(segs[0].start, scenario.depot) > EPS_GEOM:
        v.append(Violation("start", "first segment does not start at the depot"))
    if distance(segs[-1].site, scenario.depot) > EPS_GEOM:
        v.append(Violation("end", "last segment does not end at the depot"))

    for a, b in zip(segs, segs[1:]):
        if distance(a.site, b.start) > EPS_GEOM:
            v.append(Violation(
                "chain",
                f"segment {b.index} starts at ({b.start.x:.6g}, {b.start.y:.6g}) "
                f"but segment {a.index} ends at ({a.site.x:.6g}, {a.site.y:.6g})"))

    for seg in segs:
        if seg.length > params.flight_range + EPS_GEOM:
            v.append(Violation(
                "over-length",
                f"segment {seg.index} length {seg.length:.6g} exceeds "
                f"flight range {params.flight_range:.6g}"))
        gap = distance(seg.start, seg.site)
        if gap > params.reach_radius + EPS_GEOM:
            v.append(Violation(
                "site-gap",
                f"segment {seg.index} site gap {gap:.6g} exceeds "
                f"reach radius {params.reach_radius:.6g}"))
        prev = 0.0
        for tid, arc in seg.target_arcs:
            if not (EPS_GEOM < arc < seg.length - EPS_GEOM):
                v.append(Violation(
                    "target-arc",
                    f"target {tid} at arc {arc:.6g} not strictly inside "
                    f"segment {seg.index} (length {seg.length:.6g})"))
            if arc <= prev + EPS_GEOM and prev > 0.0:
                v.append(Violation(
                    "target-order",
                    f"target {tid} arc {arc:.6g} not strictly after previous "
                    f"arc {prev:.6g} in segment {seg.index}"))
            prev = arc
            try:
                at = seg.path.point_at_arc(arc)
                actual = scenario.target_by_id(tid).position
                if distance(at, actual) > 1e-6:
                    v.append(Violation(
                        "target-position",
                        f"target {tid} arc {arc:.6g} maps to ({at.x:.6g}, {at.y:.6g}), "
                        f"expected ({actual.x:.6g}, {actual.y:.6g})"))
            except (ValueError, KeyError) as exc:
                v.append(Violation("target-position", f"target {tid}: {exc}"))

    planned = plan.target_ids()
    dupes = {t for t in planned if planned.count(t) > 1}
    for t in sorted(dupes):
        v.append(Violation("duplicate-target", f"target {t} appears in more than one segment"))
    missing = {t.id for t in scenario.targets} - set(planned)
    for t in sorted(missing):
        v.append(Violation("missing-target", f"target {t} not covered by any segment"))
    unknown = set(planned) - {t.id for t in scenario.targets}
    for t in sorted(unknown):
        v.append(Violation("unknown-target", f"plan references target {t} not in scenario"))

    return ValidationReport(violations=tuple(v))
