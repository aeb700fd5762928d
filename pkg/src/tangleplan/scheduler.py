"""Timestamped motion schedules from an acyclic network interaction graph.

Robots travel at one shared speed.  A robot holding a lower priority at a
crossing waits at the crossing point itself and departs exactly when the
priority constraint allows ("no earlier than" the source robot's departure,
so simultaneous passages are legal).  Robots pruned into the bent list walk
their own cable lines one at a time after everyone else has arrived.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CyclicInput, NonPositiveSpeed
from .exact import Radical, rad
from .geometry import Point, polyline_length, segment_length
from .nig import EventNode, NetworkInteractionGraph, NodeKey
from .pig import BentEntry
from .scene import Scene


@dataclass(frozen=True, slots=True)
class TimelineEntry:
    point: Point
    kind: str  # "start" | "cross" | "vertex" | "target"
    arrive: Radical
    depart: Radical  # equals arrive except while waiting at a crossing


@dataclass
class Timeline:
    robot: int
    entries: list[TimelineEntry]

    @property
    def arrival_time(self) -> Radical:
        return self.entries[-1].arrive

    def waits(self) -> list[tuple[Point, Radical]]:
        out = []
        for e in self.entries:
            d = e.depart - e.arrive
            if not d.is_zero():
                out.append((e.point, d))
        return out


@dataclass(frozen=True, slots=True)
class BentPhase:
    robot: int
    path: tuple[Point, ...]
    start_time: Radical
    duration: Radical


@dataclass
class Schedule:
    speed: Fraction
    timelines: dict[int, Timeline]
    bent_phases: list[BentPhase] = field(default_factory=list)

    @property
    def makespan(self) -> Radical:
        t = rad(0)
        for tl in self.timelines.values():
            if (tl.arrival_time - t).sign() > 0:
                t = tl.arrival_time
        for ph in self.bent_phases:
            end = ph.start_time + ph.duration
            if (end - t).sign() > 0:
                t = end
        return t


def makespan(schedule: Schedule) -> Radical:
    """Latest completion time, bent phases included."""
    return schedule.makespan


def assign_weights(nig: NetworkInteractionGraph, speed) -> dict[NodeKey, Radical]:
    """Node weight = travel time from the chain predecessor; start weighs 0."""
    speed = Fraction(speed)
    if speed <= 0:
        raise NonPositiveSpeed(f"speed {speed} must be positive")
    weights: dict[NodeKey, Radical] = {}
    for rid, chain in nig.chains.items():
        path = nig.paths[rid]
        marks = [_arclength_to(path, n.point) for n in chain]
        for node, here, prev in zip(chain, marks, [rad(0)] + marks[:-1]):
            weights[node.key] = (here - prev) / speed
    return weights


def _arclength_to(path, p: Point) -> Radical:
    pts = path.points
    total = rad(0)
    from .geometry import on_segment_closed

    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        if on_segment_closed(p, a, b):
            return total + segment_length(a, p) if p != a else total
        total = total + segment_length(a, b)
    raise ValueError(f"point {p} not on path")


def compute_schedule(nig: NetworkInteractionGraph,
                     weights: dict[NodeKey, Radical],
                     bent: list[BentEntry],
                     scene: Scene,
                     speed) -> Schedule:
    """Process chain roots in rounds: a root departs once every incoming
    inter-chain source has been processed, waiting at the crossing when it
    arrives before the source's departure time."""
    speed = Fraction(speed)
    if speed <= 0:
        raise NonPositiveSpeed(f"speed {speed} must be positive")
    incoming: dict[NodeKey, list[NodeKey]] = {}
    for a, b in nig.inter_edges:
        incoming.setdefault(b, []).append(a)

    cursor = {rid: 0 for rid in nig.chains}
    clock: dict[int, Radical] = {rid: rad(0) for rid in nig.chains}
    stamped: dict[NodeKey, Radical] = {}
    passage: dict[int, list[tuple[EventNode, Radical, Radical]]] = {
        rid: [] for rid in nig.chains}

    total = sum(len(c) for c in nig.chains.values())
    done = 0
    while done < total:
        progressed = False
        for rid in sorted(nig.chains):
            chain = nig.chains[rid]
            while cursor[rid] < len(chain):
                node = chain[cursor[rid]]
                sources = incoming.get(node.key, [])
                if any(src not in stamped for src in sources):
                    break  # blocked until the priority robot has been handled
                arrive = clock[rid] + weights[node.key]
                depart = arrive
                for src in sources:
                    if (stamped[src] - depart).sign() > 0:
                        depart = stamped[src]
                stamped[node.key] = depart
                clock[rid] = depart
                passage[rid].append((node, arrive, depart))
                cursor[rid] += 1
                done += 1
                progressed = True
        if not progressed:
            raise CyclicInput("network interaction graph still has a cycle")

    timelines: dict[int, Timeline] = {}
    for rid in sorted(nig.chains):
        timelines[rid] = _timeline_with_vertices(
            nig, rid, passage[rid], speed)

    phases: list[BentPhase] = []
    t = rad(0)
    for tl in timelines.values():
        if (tl.arrival_time - t).sign() > 0:
            t = tl.arrival_time
    for entry in bent:
        duration = polyline_length(entry.path) / speed
        phases.append(BentPhase(entry.robot, entry.path, t, duration))
        t = t + duration
    return Schedule(speed, timelines, phases)


def _timeline_with_vertices(nig, rid, passages, speed) -> Timeline:
    """Merge crossing passages with the path's own bend vertices so the
    timeline describes the full piecewise-linear trajectory."""
    from .nig import _position_on_path

    path = nig.paths[rid]
    pts = path.points
    tagged = []
    for node, arrive, depart in passages:
        if node.kind == "start":
            pos = (0, Fraction(0))
        elif node.kind == "target":
            pos = (len(pts) - 2, Fraction(1))
        else:
            pos = _position_on_path(path, node.point)
        tagged.append((pos, node.point, node.kind, arrive, depart))
    for i in range(1, len(pts) - 1):
        tagged.append(((i, Fraction(0)), pts[i], "vertex", None, None))
    tagged.sort(key=lambda item: item[0])

    entries: list[TimelineEntry] = []
    prev_point = pts[0]
    prev_depart = tagged[0][4]
    for pos, point, kind, arrive, depart in tagged:
        if kind == "vertex":
            t = prev_depart + segment_length(prev_point, point) / speed
            arrive = depart = t
        entries.append(TimelineEntry(point, kind, arrive, depart))
        prev_point, prev_depart = point, depart
    return Timeline(rid, entries)


# ---------------------------------------------------------------------------
# Fixed-mode schedules (comparison table, counterfactual simulations)
# ---------------------------------------------------------------------------


def _walk_entries(points, t0: Radical, speed) -> list[TimelineEntry]:
    """Entries for walking the polyline, parked at the first point until t0."""
    entries = [TimelineEntry(points[0], "start", rad(0), t0)]
    t = t0
    for a, b in zip(points, points[1:]):
        t = t + segment_length(a, b) / speed
        kind = "target" if b == points[-1] else "vertex"
        entries.append(TimelineEntry(b, kind, t, t))
    return entries


def straight_concurrent_naive(scene: Scene, speed) -> Schedule:
    """Everyone departs at t=0 along its motion path, no coordination."""
    speed = Fraction(speed)
    from .scene import shortest_motion_path

    timelines = {}
    for rid in scene.robot_ids:
        pts = shortest_motion_path(scene, rid).points
        timelines[rid] = Timeline(rid, _walk_entries(pts, rad(0), speed))
    return Schedule(speed, timelines)


def straight_sequential(scene: Scene, order, speed) -> Schedule:
    """One robot at a time along its motion path, in the given order."""
    speed = Fraction(speed)
    from .scene import shortest_motion_path

    timelines = {}
    t = rad(0)
    for rid in order:
        pts = shortest_motion_path(scene, rid).points
        entries = _walk_entries(pts, t, speed)
        timelines[rid] = Timeline(rid, entries)
        t = entries[-1].arrive
    return Schedule(speed, timelines)


def bent_sequential(scene: Scene, order, speed) -> Schedule:
    """One robot at a time along its target cable line."""
    speed = Fraction(speed)
    timelines = {}
    t = rad(0)
    for rid in order:
        pts = list(scene.robot(rid).cable)
        entries = _walk_entries(pts, t, speed)
        timelines[rid] = Timeline(rid, entries)
        t = entries[-1].arrive
    return Schedule(speed, timelines)


def bent_concurrent(scene: Scene, speed) -> Schedule:
    """Everyone walks its target cable line starting at t=0."""
    speed = Fraction(speed)
    timelines = {}
    for rid in scene.robot_ids:
        pts = list(scene.robot(rid).cable)
        timelines[rid] = Timeline(rid, _walk_entries(pts, rad(0), speed))
    return Schedule(speed, timelines)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _time_json(t: Radical) -> dict:
    return {
        "exact": repr(t),
        "terms": [[s, str(c)] for s, c in t.terms()],
        "approx": float(t),
    }


def schedule_to_dict(schedule: Schedule) -> dict:
    return {
        "speed": str(schedule.speed),
        "timelines": [
            {
                "robot": rid,
                "entries": [
                    {
                        "point": [str(e.point.x), str(e.point.y)],
                        "kind": e.kind,
                        "arrive": _time_json(e.arrive),
                        "depart": _time_json(e.depart),
                    }
                    for e in tl.entries
                ],
            }
            for rid, tl in sorted(schedule.timelines.items())
        ],
        "bent_phases": [
            {
                "robot": ph.robot,
                "path": [[str(p.x), str(p.y)] for p in ph.path],
                "start": _time_json(ph.start_time),
                "duration": _time_json(ph.duration),
            }
            for ph in schedule.bent_phases
        ],
        "makespan": _time_json(schedule.makespan),
    }


def schedule_from_dict(data: dict) -> Schedule:
    from .geometry import pt

    def parse_time(d) -> Radical:
        t = Radical()
        for s, c in d["terms"]:
            t = t + Radical({int(s): Fraction(c)})
        return t

    timelines = {}
    for tl in data["timelines"]:
        entries = [
            TimelineEntry(pt(*e["point"]), e["kind"],
                          parse_time(e["arrive"]), parse_time(e["depart"]))
            for e in tl["entries"]
        ]
        timelines[int(tl["robot"])] = Timeline(int(tl["robot"]), entries)
    phases = [
        BentPhase(int(ph["robot"]),
                  tuple(pt(*p) for p in ph["path"]),
                  parse_time(ph["start"]),
                  parse_time(ph["duration"]))
        for ph in data.get("bent_phases", [])
    ]
    return Schedule(Fraction(data["speed"]), timelines, phases)
