"""Online replanning during segment execution.

Remaining fuel behaves like a string tied between the UAV and its refuel
site, measured along the segment path: while slack remains the site stays
put; once taut, every unit burned in place drags the site back toward the
UAV.  Everything here works from revealed information only -- processing
costs enter as per-tick burn amounts and a done flag, never as totals.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .geometry import EPS_GEOM, Point2D, Polyline, distance, step_toward
from .model import EPS_FUEL, EPS_TIME, VehicleParams
from .offline import PlanningError, SegmentPlan

DEFAULT_CUT_SPACING = 0.5


class Case(enum.IntEnum):
    """Segment outcome classes, in escalating order of disruption."""

    NO_REPLAN = 1            # slack covered all processing, site never moved
    BACKTRACK_ALL_VISITED = 2  # site moved but every target still got visited
    BACKTRACK_SKIP = 3       # site passed pending targets; they were deferred
    ABANDON_RENDEZVOUS = 4   # processing cut short to keep the site reachable
    SEGMENT_REPAIR = 5       # rebuilt segment exceeded the tank and was trimmed


class Mode(enum.Enum):
    TRANSIT = "transit"
    PROCESSING = "processing"
    TO_RENDEZVOUS = "to_rendezvous"
    WAIT = "wait"


@dataclass
class SegmentState:
    """Live execution state of one segment.

    pending holds (target id, arc) pairs not yet visited, ascending by arc;
    deferred collects targets pushed out of this segment, kept in original
    visit order as (id, position) pairs ready to prefix the next segment.
    """

    plan: SegmentPlan
    ordinal: int
    uav_arc: float = 0.0
    fuel: float = 0.0
    site_arc: float = 0.0
    pending: list[tuple[int, float]] = field(default_factory=list)
    current: int | None = None
    current_arc: float = 0.0
    mode: Mode = Mode.TRANSIT
    site_moved: bool = False
    site_arc_seen: float = 0.0  # low-water mark; backtracking is one-way
    skipped: list[int] = field(default_factory=list)
    abandoned: bool = False
    repaired: bool = False
    deferred: list[tuple[int, Point2D]] = field(default_factory=list)

    @classmethod
    def begin(cls, plan: SegmentPlan, ordinal: int, fuel: float,
              repaired: bool = False) -> SegmentState:
        return cls(
            plan=plan,
            ordinal=ordinal,
            uav_arc=0.0,
            fuel=fuel,
            site_arc=plan.length,
            site_arc_seen=plan.length,
            pending=list(plan.target_arcs),
            mode=Mode.TRANSIT,
            repaired=repaired,
        )

    @property
    def site_position(self) -> Point2D:
        return self.plan.path.point_at_arc(self.site_arc)

    @property
    def uav_position(self) -> Point2D:
        return self.plan.path.point_at_arc(self.uav_arc)

    def string_gap(self) -> float:
        return self.site_arc - self.uav_arc


def slack(plan: SegmentPlan, params: VehicleParams) -> float:
    """Fuel left over after flying the whole segment, before any processing."""
    need = plan.length * params.fuel_per_meter
    if need > params.fuel_capacity + EPS_FUEL:
        raise ValueError(
            f"segment length {plan.length:.6g} exceeds flight range "
            f"{params.flight_range:.6g}; repair it first")
    return params.fuel_capacity - need


def backtrack_site(state: SegmentState, params: VehicleParams) -> float:
    """Arc the site must retreat to so remaining fuel still spans the string."""
    reachable = state.uav_arc + max(state.fuel, 0.0) / params.fuel_per_meter
    return max(min(state.site_arc, reachable), state.uav_arc)


def ugv_reachable(ugv_pos: Point2D, site_pos: Point2D, fuel: float,
                  params: VehicleParams) -> bool:
    """Can the ground vehicle make the site before the UAV would run dry
    hovering there?  Boundary equality counts as reachable."""
    if fuel < 0.0:
        return False
    travel = distance(ugv_pos, site_pos) / params.v_ugv
    return travel <= fuel / params.burn_rate + EPS_TIME


def on_transit_tick(state: SegmentState, fuel_budget: float,
                    params: VehicleParams) -> tuple[float, str | None]:
    """Advance along the path using at most fuel_budget.

    Stops exactly at the next pending target or the site, whichever comes
    first, and reports ("target" | "site") so the caller can split the tick
    there.  The site never backtracks in transit.
    """
    if state.mode is Mode.TRANSIT and state.pending:
        next_arc = state.pending[0][1]
        kind = "target"
    else:
        next_arc = state.site_arc
        kind = "site"
    d_next = max(next_arc - state.uav_arc, 0.0)
    d_step = fuel_budget / params.fuel_per_meter
    if d_next > d_step + EPS_GEOM:
        state.uav_arc += d_step
        state.fuel -= fuel_budget
        return fuel_budget, None
    state.uav_arc = next_arc
    used = d_next * params.fuel_per_meter
    state.fuel -= used
    if kind == "target":
        tid, arc = state.pending.pop(0)
        state.current = tid
        state.current_arc = arc
        state.mode = Mode.PROCESSING
    return used, kind


def on_processing_tick(state: SegmentState, fuel_used: float, done: bool,
                       params: VehicleParams) -> list[int]:
    """Apply one (possibly split) processing burn at the current target.

    Burns the fuel, drags the site back if the string is taut, and defers
    any pending target the site has passed.  Returns target ids skipped by
    this tick.  Completion flips the mode back to transit; it takes
    precedence over any same-tick abandonment, which the caller checks
    separately at tick end.
    """
    if state.mode is not Mode.PROCESSING:
        raise ValueError("processing tick outside processing mode")
    state.fuel -= fuel_used
    skipped_now: list[int] = []
    new_site = backtrack_site(state, params)
    if new_site < state.site_arc - EPS_GEOM:
        state.site_moved = True
    state.site_arc = new_site
    if state.pending:
        keep = [p for p in state.pending if p[1] <= state.site_arc + EPS_GEOM]
        passed = [p for p in state.pending if p[1] > state.site_arc + EPS_GEOM]
        if passed:
            state.pending = keep
            group = [(tid, state.plan.path.point_at_arc(arc)) for tid, arc in passed]
            state.deferred = group + state.deferred
            skipped_now = [tid for tid, _ in passed]
            state.skipped.extend(skipped_now)
    if done:
        state.current = None
        state.mode = Mode.TRANSIT
    return skipped_now


def check_abandonment(state: SegmentState, ugv_pos: Point2D, dt: float,
                      params: VehicleParams) -> list[int] | None:
    """One-tick lookahead: would another full processing tick leave the site
    out of the ground vehicle's reach?

    Evaluated at tick end with the UGV's latest position; the prediction
    advances the UGV one pursuit step so it matches what the next tick will
    actually do.  If the answer is yes, abandon now: the current target and
    all pending ones are deferred and the UAV heads for the site.  Returns
    the newly deferred target ids, or None when processing may continue.
    """
    if state.mode is not Mode.PROCESSING:
        return None
    tick_fuel = params.burn_rate * dt
    fuel_next = state.fuel - tick_fuel
    if fuel_next < 0.0:
        doomed = True
    else:
        site_next = max(
            min(state.site_arc, state.uav_arc + fuel_next / params.fuel_per_meter),
            state.uav_arc)
        ugv_next = step_toward(ugv_pos, state.site_position, params.v_ugv * dt)
        site_next_pos = state.plan.path.point_at_arc(site_next)
        doomed = not ugv_reachable(ugv_next, site_next_pos, fuel_next, params)
    if not doomed:
        return None
    head = [(state.current, state.plan.path.point_at_arc(state.current_arc))]
    body = [(tid, state.plan.path.point_at_arc(arc)) for tid, arc in state.pending]
    state.deferred = head + body + state.deferred
    state.pending = []
    state.current = None
    state.abandoned = True
    state.mode = Mode.TO_RENDEZVOUS
    return [tid for tid, _ in head + body]


def transfer_and_repair(start: Point2D,
                        deferred: list[tuple[int, Point2D]],
                        next_plan: SegmentPlan | None,
                        depot: Point2D,
                        params: VehicleParams,
                        ordinal: int,
                        cut_spacing: float = DEFAULT_CUT_SPACING,
                        ) -> tuple[SegmentPlan, list[tuple[int, Point2D]], bool]:
    """Build the segment the UAV will fly after refueling at start.

    Deferred targets are prefixed, in order, to the next planned segment
    (or to a bare run back to the depot when none remains).  If the result
    does not fit one tank, or its site falls outside the ground vehicle's
    reach, the terminal site is walked back along the path; targets past
    any feasible site are shed, last first, onto the following segment.
    When even a single target cannot head toward the terminal, the leg
    gives up on the terminal entirely and doubles back toward its start.
    Returns (plan, shed targets, whether anything had to change).

    Raises PlanningError only when that last resort fails too, i.e. the
    out-and-back distance exceeds range plus reach: no path from this
    start visits the target and ends at any reachable site.
    """
    entries = list(deferred)
    if next_plan is not None:
        entries += [(tid, next_plan.path.point_at_arc(arc))
                    for tid, arc in next_plan.target_arcs]
        terminal = next_plan.site
    else:
        terminal = depot

    reach = params.reach_radius
    max_len = params.flight_range
    shed: list[tuple[int, Point2D]] = []
    modified = False

    while True:
        pts, arcs = _thread_path(start, [p for _, p in entries], terminal)
        total = arcs[-1]
        target_arcs = arcs[1:-1]
        last_target_arc = target_arcs[-1] if target_arcs else 0.0
        hi = min(total, max_len)
        best = _best_site_arc(pts, last_target_arc, hi, reach, cut_spacing)
        if best is not None:
            path = Polyline(pts)
            if best < total - EPS_GEOM:
                path = path.sub_polyline(0.0, best)
                modified = True
            plan = SegmentPlan(
                index=ordinal,
                path=path,
                target_arcs=tuple((tid, arc) for (tid, _), arc in zip(entries, target_arcs)),
            )
            return plan, shed, modified
        if not entries:
            raise PlanningError(
                f"no refuel site reachable on the leg from ({start.x:.6g}, "
                f"{start.y:.6g}) within range {max_len:.6g} and reach {reach:.6g}")
        if len(entries) == 1:
            return _out_and_back(start, entries[0], params, ordinal,
                                 cut_spacing, shed)
        shed.insert(0, entries.pop())
        modified = True


def _out_and_back(start: Point2D, entry: tuple[int, Point2D],
                  params: VehicleParams, ordinal: int, cut_spacing: float,
                  shed: list[tuple[int, Point2D]],
                  ) -> tuple[SegmentPlan, list[tuple[int, Point2D]], bool]:
    """Last-resort single-target leg: fly out, then double back toward the
    start until a site fits both range and reach."""
    tid, tpos = entry
    reach = params.reach_radius
    max_len = params.flight_range
    pts, arcs = _thread_path(start, [tpos], start)
    hi = min(arcs[-1], max_len)
    best = _best_site_arc(pts, arcs[1], hi, reach, cut_spacing)
    if best is None:
        raise PlanningError(
            f"target {tid} permanently infeasible: from ({start.x:.6g}, "
            f"{start.y:.6g}) even an out-and-back leg through it has no "
            f"refuel site within range {max_len:.6g} and reach {reach:.6g}")
    path = Polyline(pts)
    if best < arcs[-1] - EPS_GEOM:
        path = path.sub_polyline(0.0, best)
    plan = SegmentPlan(index=ordinal, path=path, target_arcs=((tid, arcs[1]),))
    return plan, shed, True


def _thread_path(start: Point2D, waypoints: list[Point2D],
                 terminal: Point2D) -> tuple[list[Point2D], list[float]]:
    """Arc-annotate start -> waypoints -> terminal.

    Coincident neighbours collapse into one vertex (a deferred target can
    sit exactly at the rendezvous); every stop still gets an arc.  Returns
    (unique vertices, arcs of start + each waypoint + terminal).
    """
    uniq = [start]
    for p in waypoints + [terminal]:
        if distance(uniq[-1], p) > EPS_GEOM:
            uniq.append(p)
    cum = [0.0]
    for a, b in zip(uniq, uniq[1:]):
        cum.append(cum[-1] + distance(a, b))
    arcs = [0.0]
    j = 0
    for p in waypoints + [terminal]:
        if distance(uniq[j], p) > EPS_GEOM:
            j += 1
        arcs.append(cum[j])
    return uniq, arcs


def _best_site_arc(pts: list[Point2D], last_target_arc: float, hi: float,
                   reach: float, cut_spacing: float) -> float | None:
    """Farthest arc in (last_target_arc, hi] whose point lies within reach
    of the path start.  Candidates: path vertices, a regular grid, hi."""
    if hi <= last_target_arc + EPS_GEOM or len(pts) < 2:
        return None
    path = Polyline(pts)
    start = pts[0]
    cands = set()
    for arc in path.cumulative_arc:
        if last_target_arc + EPS_GEOM < arc <= hi + EPS_GEOM:
            cands.add(min(arc, hi))
    k = int(last_target_arc / cut_spacing)
    while k * cut_spacing <= hi + EPS_GEOM:
        a = k * cut_spacing
        if a > last_target_arc + EPS_GEOM:
            cands.add(min(a, hi))
        k += 1
    cands.add(hi)
    best = None
    for a in sorted(cands):
        if a <= last_target_arc + EPS_GEOM:
            continue
        if distance(start, path.point_at_arc(a)) <= reach + EPS_GEOM:
            best = a
    return best


def classify_segment_outcome(state: SegmentState) -> Case:
    """Outcome class for a finished segment (rendezvous reached)."""
    if state.abandoned:
        return Case.ABANDON_RENDEZVOUS
    if state.skipped:
        return Case.BACKTRACK_SKIP
    if state.site_moved:
        return Case.BACKTRACK_ALL_VISITED
    return Case.NO_REPLAN
