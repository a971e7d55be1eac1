"""Deterministic fixed-step mission simulator.

One tick: the UAV consumes its time slice in exact sub-steps (transit,
processing, hovering -- split at target arrivals and completions), the UGV
takes one pursuit step toward the current site, then the abandonment
lookahead and rendezvous resolution run.  Identical inputs give identical
traces, byte for byte.

Processing costs stay hidden from the planning layer: the simulator reveals
them strictly one tick of burn at a time through TargetTracker.reveal, and
forwards only the amount burned plus a done flag.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .geometry import EPS_GEOM, Point2D, distance, step_toward
from .model import EPS_FUEL, EPS_TIME, Scenario
from .offline import MissionPlan, PlanningError, SegmentPlan, plan_mission, validate_plan
from .online import (
    Case,
    Mode,
    SegmentState,
    check_abandonment,
    classify_segment_outcome,
    on_processing_tick,
    on_transit_tick,
    transfer_and_repair,
    ugv_reachable,
)

TICK_FIELDS = ("t", "uav", "fuel", "ugv", "seg", "site", "mode")
EVENT_FIELDS = ("t", "kind", "detail")
METRIC_KEYS = (
    "abandonments", "backtrack_episodes", "case_1", "case_2", "case_3",
    "case_4", "case_5", "mission_time", "rendezvous_count",
    "targets_deferred", "uav_distance", "ugv_distance",
)


class InvariantViolation(RuntimeError):
    """A physical or bookkeeping invariant broke; the run is aborted."""


@dataclass
class SimConfig:
    dt: float = 0.05
    eps_pos: float = 0.1
    refuel_duration: float = 0.0
    max_mission_time: float | None = None  # None: 10x offline flight time
    resume_progress: bool = True
    check_invariants: bool = False
    keep_trace: bool = True
    cut_spacing: float = 0.5


class TargetTracker:
    """Simulator-private processing state; the only place tau is read."""

    __slots__ = ("tau", "progress", "visited")

    def __init__(self, tau: float, progress: float = 0.0):
        self.tau = tau
        self.progress = progress
        self.visited = False

    @property
    def done(self) -> bool:
        # a zero-cost target still needs its visit before it counts
        return self.visited and self.progress >= self.tau

    def reveal(self, fuel_avail: float) -> tuple[float, bool]:
        """Consume up to fuel_avail of processing; exact completion splits
        the tick, refunding the unused remainder to the caller."""
        self.visited = True
        rem = self.tau - self.progress
        if rem <= fuel_avail + EPS_FUEL:
            self.progress = self.tau
            return max(rem, 0.0), True
        self.progress += fuel_avail
        return fuel_avail, False


def reveal_processing(tracker: TargetTracker, fuel_avail: float) -> tuple[float, bool]:
    return tracker.reveal(fuel_avail)


class MetricsFold:
    """Running metrics as a pure fold over trace records.

    Distances are sums of per-tick straight-line deltas; a backtrack episode
    is a maximal run of consecutive same-segment ticks in which the site
    moved.  Feeding the written trace back in reproduces the run's metrics
    exactly.
    """

    def __init__(self):
        self._m = {k: 0 if not k.endswith("distance") and k != "mission_time" else 0.0
                   for k in METRIC_KEYS}
        self._last_tick = None
        self._in_episode = False

    def add_tick(self, t, ux, uy, fuel, gx, gy, seg, sx, sy, mode):
        last = self._last_tick
        if last is not None:
            lt, lux, luy, lgx, lgy, lseg, lsx, lsy = last
            self._m["uav_distance"] += ((ux - lux) ** 2 + (uy - luy) ** 2) ** 0.5
            self._m["ugv_distance"] += ((gx - lgx) ** 2 + (gy - lgy) ** 2) ** 0.5
            site_moved = (seg == lseg
                          and ((sx - lsx) ** 2 + (sy - lsy) ** 2) ** 0.5 > EPS_GEOM)
            if site_moved and not self._in_episode:
                self._m["backtrack_episodes"] += 1
            self._in_episode = site_moved
        self._m["mission_time"] = t
        self._last_tick = (t, ux, uy, gx, gy, seg, sx, sy)

    def add_event(self, kind: str, detail: dict):
        if kind == "abandon":
            self._m["abandonments"] += 1
            self._m["targets_deferred"] += len(detail["targets"])
        elif kind == "skip":
            self._m["targets_deferred"] += len(detail["targets"])
        elif kind == "refuel":
            self._m["rendezvous_count"] += 1
        elif kind == "case":
            self._m[f"case_{detail['case']}"] += 1

    def result(self) -> dict:
        return dict(self._m)


def fold_records(records) -> dict:
    """Recompute the metrics block from trace records (dicts, as parsed
    back from the JSONL trace)."""
    fold = MetricsFold()
    for rec in records:
        if "kind" in rec:
            fold.add_event(rec["kind"], rec["detail"])
        else:
            fold.add_tick(rec["t"], rec["uav"][0], rec["uav"][1], rec["fuel"],
                          rec["ugv"][0], rec["ugv"][1], rec["seg"],
                          rec["site"][0], rec["site"][1], rec["mode"])
    return fold.result()


def fold_jsonl(lines) -> dict:
    return fold_records(json.loads(line) for line in lines if line.strip())


@dataclass
class RunReport:
    status: str
    metrics: dict
    events: list[dict]
    trace: list[dict] | None
    unprocessed: list[int] = field(default_factory=list)

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    @property
    def case_histogram(self) -> dict[int, int]:
        return {k: self.metrics[f"case_{k}"] for k in range(1, 6)
                if self.metrics[f"case_{k}"]}

    def segment_cases(self) -> list[tuple[int, int]]:
        return [(e["detail"]["segment"], e["detail"]["case"])
                for e in self.events if e["kind"] == "case"]


class WorldState:
    """Everything the simulator tracks while a mission runs."""

    def __init__(self, scenario: Scenario, plan: MissionPlan, config: SimConfig,
                 trace_file=None):
        self.scenario = scenario
        self.params = scenario.params
        self.config = config
        self.clock = 0.0
        self.trackers = {t.id: TargetTracker(t.tau) for t in scenario.targets}
        self.queue: list[SegmentPlan] = list(plan.segments[1:])
        self.active = SegmentState.begin(plan.segments[0], 0,
                                         fuel=self.params.fuel_capacity)
        self.ugv_pos = scenario.depot
        self.carry: list[tuple[int, Point2D]] = []
        self.refuel_hold = 0.0
        self.mission_complete = False
        self.final_time: float | None = None
        self.abandoned_this_tick = False
        self.events: list[dict] = []
        self.trace: list[dict] | None = [] if config.keep_trace else None
        self.fold = MetricsFold()
        self._trace_file = trace_file

    # -- recording ---------------------------------------------------------

    def emit_event(self, t: float, kind: str, detail: dict):
        rec = {"t": t, "kind": kind, "detail": detail}
        self.events.append(rec)
        self.fold.add_event(kind, detail)
        if self._trace_file is not None:
            self._trace_file.write(json.dumps(rec, separators=(",", ":")) + "\n")

    def record_tick(self):
        st = self.active
        uav = st.uav_position
        site = st.site_position
        mode = st.mode.value
        self.fold.add_tick(self.clock, uav.x, uav.y, st.fuel,
                           self.ugv_pos.x, self.ugv_pos.y, st.ordinal,
                           site.x, site.y, mode)
        if self.trace is not None or self._trace_file is not None:
            rec = {
                "t": self.clock,
                "uav": [uav.x, uav.y],
                "fuel": st.fuel,
                "ugv": [self.ugv_pos.x, self.ugv_pos.y],
                "seg": st.ordinal,
                "site": [site.x, site.y],
                "mode": mode,
            }
            if self.trace is not None:
                self.trace.append(rec)
            if self._trace_file is not None:
                self._trace_file.write(json.dumps(rec, separators=(",", ":")) + "\n")

    # -- helpers -----------------------------------------------------------

    def all_processed(self) -> bool:
        return all(tr.done for tr in self.trackers.values())

    def unprocessed_ids(self) -> list[int]:
        return sorted(tid for tid, tr in self.trackers.items() if not tr.done)

    def fault(self, message: str):
        st = self.active
        raise InvariantViolation(
            f"{message} [t={self.clock:.6g} seg={st.ordinal} mode={st.mode.value} "
            f"uav_arc={st.uav_arc:.6g} fuel={st.fuel:.6g} site_arc={st.site_arc:.6g} "
            f"ugv=({self.ugv_pos.x:.6g}, {self.ugv_pos.y:.6g})]")


def step(world: WorldState, dt: float | None = None):
    """Advance the world by one tick."""
    cfg = world.config
    dt = cfg.dt if dt is None else dt
    t0 = world.clock
    world.abandoned_this_tick = False

    if world.refuel_hold > EPS_TIME:
        world.refuel_hold = max(0.0, world.refuel_hold - dt)
        world.clock = t0 + dt
        world.record_tick()
        return

    _uav_phase(world, t0, dt)
    if world.mission_complete:
        world.clock = world.final_time
        world.record_tick()
        return

    goal = world.active.site_position
    world.ugv_pos = step_toward(world.ugv_pos, goal, world.params.v_ugv * dt)

    deferred_now = check_abandonment(world.active, world.ugv_pos, dt, world.params)
    if deferred_now is not None:
        world.abandoned_this_tick = True
        st = world.active
        site = st.site_position
        world.emit_event(t0 + dt, "abandon", {
            "segment": st.ordinal,
            "targets": deferred_now,
            "site": [site.x, site.y],
        })

    st = world.active
    if st.mode is Mode.WAIT and distance(world.ugv_pos, st.site_position) <= cfg.eps_pos:
        _refuel(world, t0 + dt)

    world.clock = t0 + dt
    if cfg.check_invariants:
        _check_invariants(world)
    world.record_tick()


def _uav_phase(world: WorldState, t0: float, dt: float):
    params = world.params
    cfg = world.config
    t_rem = dt
    while t_rem > EPS_TIME and not world.mission_complete and world.refuel_hold <= EPS_TIME:
        st = world.active
        if st.mode is Mode.PROCESSING:
            tracker = world.trackers[st.current]
            avail = params.burn_rate * t_rem
            used, done = tracker.reveal(avail)
            if used > st.fuel + EPS_FUEL:
                world.fault(f"processing target {st.current} would exhaust fuel")
            target_id = st.current
            skipped_now = on_processing_tick(st, used, done, params)
            t_rem -= used / params.burn_rate
            t_now = t0 + (dt - max(t_rem, 0.0))
            if skipped_now:
                if not cfg.resume_progress:
                    for tid in skipped_now:
                        world.trackers[tid].progress = 0.0
                world.emit_event(t_now, "skip", {
                    "segment": st.ordinal,
                    "targets": skipped_now,
                    "site_arc": st.site_arc,
                })
            if done:
                world.emit_event(t_now, "complete", {
                    "segment": st.ordinal, "target": target_id,
                })
        elif st.mode in (Mode.TRANSIT, Mode.TO_RENDEZVOUS):
            budget = params.burn_rate * t_rem
            used, arrival = on_transit_tick(st, budget, params)
            if st.fuel < -EPS_FUEL:
                world.fault("fuel exhausted in transit")
            t_rem -= used / params.burn_rate
            t_now = t0 + (dt - max(t_rem, 0.0))
            if arrival == "target":
                used0, done0 = world.trackers[st.current].reveal(0.0)
                if done0:
                    world.emit_event(t_now, "complete", {
                        "segment": st.ordinal, "target": st.current,
                    })
                    st.current = None
                    st.mode = Mode.TRANSIT
            elif arrival == "site":
                _handle_site_arrival(world, t_now)
            else:
                break  # budget spent mid-path
        elif st.mode is Mode.WAIT:
            burn = params.burn_rate * t_rem
            if st.fuel - burn < -EPS_FUEL:
                world.fault("fuel exhausted hovering at refuel site")
            st.fuel -= burn
            t_rem = 0.0


def _handle_site_arrival(world: WorldState, t_now: float):
    st = world.active
    site = st.site_position
    at_depot = distance(site, world.scenario.depot) <= EPS_GEOM
    if (at_depot and not world.queue and not st.deferred and not world.carry
            and world.all_processed()):
        case = classify_segment_outcome(st)
        world.emit_event(t_now, "case", {"segment": st.ordinal, "case": int(case)})
        world.mission_complete = True
        world.final_time = t_now
        return
    if distance(world.ugv_pos, site) <= world.config.eps_pos:
        _refuel(world, t_now)
    else:
        st.mode = Mode.WAIT


def _refuel(world: WorldState, t_now: float):
    """Rendezvous reached: classify the finished segment, top the tank up,
    and activate the next segment (rebuilt around deferred targets)."""
    st = world.active
    params = world.params
    site = st.site_position
    case = classify_segment_outcome(st)
    world.emit_event(t_now, "case", {"segment": st.ordinal, "case": int(case)})
    world.emit_event(t_now, "refuel", {
        "segment": st.ordinal,
        "site": [site.x, site.y],
        "fuel": params.fuel_capacity,
    })
    if not world.config.resume_progress:
        for tid, _ in st.deferred:
            world.trackers[tid].progress = 0.0

    deferred_all = st.deferred + world.carry
    next_plan = world.queue.pop(0) if world.queue else None
    new_plan, shed, modified = transfer_and_repair(
        site, deferred_all, next_plan, world.scenario.depot, params,
        ordinal=st.ordinal + 1, cut_spacing=world.config.cut_spacing)
    world.carry = shed
    if modified:
        world.emit_event(t_now, "case", {
            "segment": st.ordinal + 1, "case": int(Case.SEGMENT_REPAIR),
        })
    world.active = SegmentState.begin(new_plan, st.ordinal + 1,
                                      fuel=params.fuel_capacity,
                                      repaired=modified)
    world.refuel_hold = world.config.refuel_duration


def _check_invariants(world: WorldState):
    st = world.active
    params = world.params
    if st.fuel < -EPS_FUEL:
        world.fault("negative fuel")
    gap = st.string_gap()
    if st.fuel / params.fuel_per_meter < gap - 1e-9:
        world.fault(f"string invariant broken: fuel spans {st.fuel / params.fuel_per_meter:.9g} "
                    f"of a {gap:.9g} gap")
    if not (-EPS_GEOM <= st.uav_arc <= st.site_arc + EPS_GEOM):
        world.fault("uav ahead of its refuel site")
    if st.site_arc > st.site_arc_seen + 1e-9:
        world.fault(f"refuel site moved forward along the path "
                    f"({st.site_arc_seen:.9g} -> {st.site_arc:.9g})")
    st.site_arc_seen = min(st.site_arc_seen, st.site_arc)
    if st.mode in (Mode.WAIT, Mode.TO_RENDEZVOUS) and st.pending:
        world.fault("pending targets while heading to rendezvous")
    if not world.abandoned_this_tick:
        if not ugv_reachable(world.ugv_pos, st.site_position, st.fuel, params):
            world.fault("refuel site out of ground-vehicle reach")
    ids = set()
    for tid in (tid for tid, _ in st.pending):
        ids.add(tid)
    if st.current is not None:
        ids.add(st.current)
    for tid, _ in st.deferred:
        ids.add(tid)
    for tid, _ in world.carry:
        ids.add(tid)
    for seg in world.queue:
        ids.update(seg.target_ids())
    done_ids = {tid for tid, tr in world.trackers.items() if tr.done}
    expected = set(world.trackers)
    live = ids | done_ids
    if live != expected or len(done_ids & ids) > 0:
        world.fault(f"target conservation broken: live={sorted(live)} "
                    f"done-and-tracked={sorted(done_ids & ids)}")


def run(scenario: Scenario, config: SimConfig | None = None,
        plan: MissionPlan | None = None, trace_file=None) -> RunReport:
    """Plan (unless given) and fly the whole mission.

    Returns a completed or timeout report; raises PlanningError when no
    feasible plan exists and InvariantViolation on internal faults.
    """
    cfg = config if config is not None else SimConfig()
    if plan is None:
        plan = plan_mission(scenario, cut_spacing=cfg.cut_spacing)
    audit = validate_plan(plan, scenario)
    if not audit.ok:
        raise PlanningError("invalid mission plan:\n" + audit.describe())

    world = WorldState(scenario, plan, cfg, trace_file=trace_file)
    max_t = cfg.max_mission_time
    if max_t is None:
        max_t = 10.0 * plan.total_length / scenario.params.v_uav
    world.record_tick()
    while not world.mission_complete and world.clock < max_t - EPS_TIME:
        step(world)

    status = "completed" if world.mission_complete else "timeout"
    return RunReport(
        status=status,
        metrics=world.fold.result(),
        events=world.events,
        trace=world.trace,
        unprocessed=world.unprocessed_ids(),
    )


def metrics_to_text(metrics: dict) -> str:
    """Flat key-value block, keys sorted, one per line."""
    return "\n".join(f"{k} = {metrics[k]!r}" for k in sorted(metrics)) + "\n"
