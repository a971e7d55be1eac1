"""Scenario and plan documents: JSON on disk, validated on the way in.

A scenario file looks like:

    {
      "world": {"width": 50.0, "height": 50.0},
      "depot": {"x": 0.0, "y": 0.0},
      "vehicle": {"v_uav": 2.0, "v_ugv": 1.0, "fuel_capacity": 50.0,
                  "fuel_per_meter": 1.0},
      "targets": [{"id": 1, "x": 10.0, "y": 5.0, "tau": 3.5}, ...],
      "cost_model": {"kind": "uniform", "low": 0.0, "high": 20.0, "seed": 7}
    }

Processing costs come either from per-target "tau" values or from the cost
model, sampled once at load time with the declared seed; an explicit tau
always wins over the model.  Supported kinds: "explicit" (every target must
carry tau), "uniform" (low, high), "lognormal" (mu, sigma).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .geometry import Point2D, Polyline, distance
from .model import Scenario, Target, VehicleParams, World
from .offline import MissionPlan, SegmentPlan
from .rng import SplitMix64

DEFAULT_MIN_SEPARATION = 1.0
_PLACEMENT_ATTEMPTS = 10000


class ScenarioFormatError(ValueError):
    """Input document is malformed; the message names the offending field."""


@dataclass(frozen=True)
class CostModel:
    kind: str  # explicit | uniform | lognormal
    low: float = 0.0
    high: float = 0.0
    mu: float = 0.0
    sigma: float = 0.0
    seed: int = 0


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise ScenarioFormatError(f"{where}: missing field '{key}'")
    return obj[key]


def _num(obj: dict, key: str, where: str) -> float:
    v = _need(obj, key, where)
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
        raise ScenarioFormatError(f"{where}: field '{key}' must be a finite number, got {v!r}")
    return float(v)


def parse_cost_model(obj: dict) -> CostModel:
    kind = _need(obj, "kind", "cost_model")
    if kind == "explicit":
        return CostModel(kind="explicit")
    if kind == "uniform":
        low = _num(obj, "low", "cost_model")
        high = _num(obj, "high", "cost_model")
        if high < low:
            raise ScenarioFormatError("cost_model: uniform high < low")
        return CostModel(kind="uniform", low=low, high=high,
                         seed=int(obj.get("seed", 0)))
    if kind == "lognormal":
        return CostModel(kind="lognormal", mu=_num(obj, "mu", "cost_model"),
                         sigma=_num(obj, "sigma", "cost_model"),
                         seed=int(obj.get("seed", 0)))
    raise ScenarioFormatError(f"cost_model: unknown kind {kind!r}")


def sample_costs(model: CostModel, target_ids: list[int]) -> dict[int, float]:
    """Draw a cost per target, in ascending id order, from one seeded stream."""
    rng = SplitMix64(model.seed)
    out = {}
    for tid in sorted(target_ids):
        if model.kind == "uniform":
            out[tid] = rng.uniform(model.low, model.high)
        else:
            out[tid] = rng.lognormal(model.mu, model.sigma)
    return out


def parse_scenario(text: str, seed_override: int | None = None) -> Scenario:
    """Parse and validate a scenario document.

    Errors carry the field (and target id or entry number) at fault.
    seed_override replaces the cost model's seed, for sweep harnesses.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"not valid JSON: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ScenarioFormatError("top level must be an object")

    wobj = _need(doc, "world", "scenario")
    world = World(width=_num(wobj, "width", "world"), height=_num(wobj, "height", "world"))
    dobj = _need(doc, "depot", "scenario")
    depot = Point2D(_num(dobj, "x", "depot"), _num(dobj, "y", "depot"))

    vobj = _need(doc, "vehicle", "scenario")
    kwargs = {}
    for name in ("v_uav", "v_ugv", "fuel_capacity", "fuel_per_meter"):
        kwargs[name] = _num(vobj, name, "vehicle")
    if "r_max" in vobj and vobj["r_max"] is not None:
        kwargs["r_max"] = _num(vobj, "r_max", "vehicle")
    try:
        params = VehicleParams(**kwargs)
    except ValueError as exc:
        raise ScenarioFormatError(f"vehicle: {exc}") from None

    model = parse_cost_model(_need(doc, "cost_model", "scenario"))
    if seed_override is not None:
        model = CostModel(kind=model.kind, low=model.low, high=model.high,
                          mu=model.mu, sigma=model.sigma, seed=seed_override)

    raw_targets = _need(doc, "targets", "scenario")
    if not isinstance(raw_targets, list):
        raise ScenarioFormatError("targets: must be a list")
    entries = []
    for i, tobj in enumerate(raw_targets):
        where = f"targets[{i}]"
        if not isinstance(tobj, dict):
            raise ScenarioFormatError(f"{where}: must be an object")
        tid = _need(tobj, "id", where)
        if not isinstance(tid, int) or isinstance(tid, bool):
            raise ScenarioFormatError(f"{where}: field 'id' must be an integer")
        x = _num(tobj, "x", f"target {tid}")
        y = _num(tobj, "y", f"target {tid}")
        tau = None
        if "tau" in tobj and tobj["tau"] is not None:
            tau = _num(tobj, "tau", f"target {tid}")
            if tau < 0:
                raise ScenarioFormatError(f"target {tid}: tau must be >= 0")
        entries.append((tid, x, y, tau))

    missing = [tid for tid, _, _, tau in entries if tau is None]
    if model.kind == "explicit" and missing:
        raise ScenarioFormatError(
            f"cost_model is explicit but target {missing[0]} has no tau")
    sampled = sample_costs(model, missing) if missing else {}

    targets = []
    for tid, x, y, tau in entries:
        targets.append(Target(id=tid, position=Point2D(x, y),
                              tau=tau if tau is not None else sampled[tid]))
    try:
        return Scenario(world=world, depot=depot, params=params, targets=tuple(targets))
    except ValueError as exc:
        raise ScenarioFormatError(str(exc)) from None


def emit_scenario(scenario: Scenario) -> str:
    """Serialize with explicit taus so parse(emit(s)) rebuilds s exactly."""
    doc = {
        "world": {"width": scenario.world.width, "height": scenario.world.height},
        "depot": {"x": scenario.depot.x, "y": scenario.depot.y},
        "vehicle": {
            "v_uav": scenario.params.v_uav,
            "v_ugv": scenario.params.v_ugv,
            "fuel_capacity": scenario.params.fuel_capacity,
            "fuel_per_meter": scenario.params.fuel_per_meter,
        },
        "targets": [
            {"id": t.id, "x": t.position.x, "y": t.position.y, "tau": t.tau}
            for t in scenario.targets
        ],
        "cost_model": {"kind": "explicit"},
    }
    if scenario.params.r_max is not None:
        doc["vehicle"]["r_max"] = scenario.params.r_max
    return json.dumps(doc, indent=2) + "\n"


def generate_scenario(n_targets: int, seed: int,
                      world: World | None = None,
                      params: VehicleParams | None = None,
                      cost_model: CostModel | None = None,
                      min_separation: float = DEFAULT_MIN_SEPARATION) -> Scenario:
    """Uniformly scatter targets with a minimum pairwise separation.

    Fully determined by the seed (positions) and the cost model's own seed
    (taus).  The depot sits at the world center.  Raises when n_targets < 1
    or the bounds cannot fit that many separated points.
    """
    if n_targets < 1:
        raise ValueError(f"n_targets must be >= 1, got {n_targets}")
    world = world if world is not None else World()
    params = params if params is not None else VehicleParams()
    cost_model = cost_model if cost_model is not None else CostModel(
        kind="uniform", low=0.0, high=20.0, seed=seed)

    rng = SplitMix64(seed)
    depot = Point2D(world.width / 2.0, world.height / 2.0)
    placed: list[Point2D] = [depot]
    for i in range(n_targets):
        ok = None
        for _ in range(_PLACEMENT_ATTEMPTS):
            cand = Point2D(rng.next_float() * world.width,
                           rng.next_float() * world.height)
            if all(distance(cand, p) >= min_separation for p in placed):
                ok = cand
                break
        if ok is None:
            raise ValueError(
                f"cannot place {n_targets} targets with separation "
                f"{min_separation} in {world.width}x{world.height} bounds "
                f"(stuck at target {i + 1})")
        placed.append(ok)

    ids = list(range(1, n_targets + 1))
    costs = sample_costs(cost_model, ids)
    targets = tuple(
        Target(id=tid, position=pos, tau=costs[tid])
        for tid, pos in zip(ids, placed[1:])
    )
    return Scenario(world=world, depot=depot, params=params, targets=targets)


def plan_to_doc(plan: MissionPlan) -> dict:
    return {
        "segments": [
            {
                "index": seg.index,
                "vertices": [[v.x, v.y] for v in seg.path.vertices],
                "targets": [{"id": tid, "arc": arc} for tid, arc in seg.target_arcs],
            }
            for seg in plan.segments
        ],
    }


def emit_plan(plan: MissionPlan) -> str:
    return json.dumps(plan_to_doc(plan), indent=2) + "\n"


def parse_plan(text: str) -> MissionPlan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"not valid JSON: line {exc.lineno}: {exc.msg}") from None
    segs = []
    for i, sobj in enumerate(_need(doc, "segments", "plan")):
        verts = [Point2D(float(x), float(y)) for x, y in _need(sobj, "vertices", f"segments[{i}]")]
        arcs = tuple((int(t["id"]), float(t["arc"])) for t in sobj.get("targets", []))
        segs.append(SegmentPlan(index=int(sobj.get("index", i)),
                                path=Polyline(verts), target_arcs=arcs))
    if not segs:
        raise ScenarioFormatError("plan: no segments")
    return MissionPlan(segments=tuple(segs))
