"""Problem-instance data model: robots, cables, obstacles, validation,
cable polygons, and cable retraction (shortest homotopic paths)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import GeneralPositionError, DegenerateContact, UnsupportedScene
from .geometry import (
    Containment,
    Point,
    Segment,
    convex_chain,
    frac,
    on_segment_closed,
    orient_sign,
    point_in_polygon,
    point_in_triangle_strict,
    polyline_length,
    segment_crossing,
    validate_polyline,
    vec,
    in_ccw_sector,
)

TURN_NAMES = {1: "ccw", -1: "cw"}
TURN_VALUES = {"ccw": 1, "cw": -1}


@dataclass(frozen=True, slots=True)
class Anchor:
    """Interior vertex of a target cable line: the pin it bends around."""

    kind: str  # "robot" | "obstacle"
    robot: int | None
    obstacle: int | None
    vertex: int | None
    turn: int  # +1 ccw, -1 cw

    def key(self):
        if self.kind == "robot":
            return ("robot", self.robot)
        return ("obstacle", self.obstacle, self.vertex)


@dataclass(frozen=True, slots=True)
class Robot:
    rid: int
    start: Point
    target: Point
    cable: tuple[Point, ...]
    anchors: tuple[Anchor, ...]


@dataclass(frozen=True, slots=True)
class Scene:
    name: str
    robots: tuple[Robot, ...]
    obstacles: tuple[tuple[Point, ...], ...]

    def robot(self, rid: int) -> Robot:
        for r in self.robots:
            if r.rid == rid:
                return r
        raise KeyError(f"no robot {rid}")

    @property
    def robot_ids(self) -> list[int]:
        return [r.rid for r in self.robots]

    def entity_at(self, p: Point):
        """Pin identity at an exact position: robot target or obstacle vertex."""
        for r in self.robots:
            if r.target == p:
                return ("robot", r.rid)
        for oi, poly in enumerate(self.obstacles):
            for vi, v in enumerate(poly):
                if v == p:
                    return ("obstacle", oi, vi)
        return None

    def obstacle_vertices(self) -> list[tuple[Point, int, int]]:
        out = []
        for oi, poly in enumerate(self.obstacles):
            for vi, v in enumerate(poly):
                out.append((v, oi, vi))
        return out


# ---------------------------------------------------------------------------
# Scene file I/O (JSON; coordinates are decimal or p/q strings parsed exactly)
# ---------------------------------------------------------------------------


def _parse_point(v) -> Point:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ValueError(f"coordinate pair expected, got {v!r}")
    return Point(frac(v[0]), frac(v[1]))


def scene_from_dict(data: dict) -> Scene:
    robots = []
    for rd in data.get("robots", []):
        rid = int(rd["id"])
        start = _parse_point(rd["start"])
        target = _parse_point(rd["target"])
        cable = tuple(_parse_point(p) for p in rd.get("cable", [rd["start"], rd["target"]]))
        anchors = []
        for ad in rd.get("anchors", []):
            kind = ad["kind"]
            turn = TURN_VALUES[ad["turn"]]
            if kind == "robot_target":
                anchors.append(Anchor("robot", int(ad["ref"]), None, None, turn))
            elif kind == "obstacle_vertex":
                o, v = ad["ref"]
                anchors.append(Anchor("obstacle", None, int(o), int(v), turn))
            else:
                raise ValueError(f"unknown anchor kind {kind!r}")
        robots.append(Robot(rid, start, target, cable, tuple(anchors)))
    obstacles = tuple(
        tuple(_parse_point(p) for p in poly) for poly in data.get("obstacles", [])
    )
    robots.sort(key=lambda r: r.rid)
    return Scene(data.get("name", "scene"), tuple(robots), obstacles)


def load_scene(path) -> Scene:
    with open(path) as f:
        data = json.load(f, parse_float=str)
    return scene_from_dict(data)


def _coord(c: Fraction) -> str:
    return str(c)


def scene_to_dict(scene: Scene) -> dict:
    return {
        "name": scene.name,
        "robots": [
            {
                "id": r.rid,
                "start": [_coord(r.start.x), _coord(r.start.y)],
                "target": [_coord(r.target.x), _coord(r.target.y)],
                "cable": [[_coord(p.x), _coord(p.y)] for p in r.cable],
                "anchors": [
                    {
                        "kind": "robot_target" if a.kind == "robot" else "obstacle_vertex",
                        "ref": a.robot if a.kind == "robot" else [a.obstacle, a.vertex],
                        "turn": TURN_NAMES[a.turn],
                    }
                    for a in r.anchors
                ],
            }
            for r in scene.robots
        ],
        "obstacles": [
            [[_coord(p.x), _coord(p.y)] for p in poly] for poly in scene.obstacles
        ],
    }


def dump_scene(scene: Scene, path) -> None:
    with open(path, "w") as f:
        json.dump(scene_to_dict(scene), f, indent=2)
        f.write("\n")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Violation:
    code: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        return "ValidationReport(\n  " + "\n  ".join(
            f"{v.code}: {v.message}" for v in self.violations) + "\n)"


def _direction_key(d) -> tuple:
    """Canonical key for a direction modulo sign (collinearity bucketing)."""
    dx, dy = d
    if dx == 0:
        return (0, 1)
    if dy == 0:
        return (1, 0)
    q = dy / dx
    return (q.numerator, q.denominator)


def _collinear_triples(points: Sequence[Point]) -> list[tuple[Point, Point, Point]]:
    """All collinear triples among distinct points, found in O(N^2)."""
    bad = []
    pts = list(points)
    for i, p in enumerate(pts):
        buckets: dict[tuple, list[Point]] = {}
        for q in pts[i + 1:]:
            key = _direction_key((q.x - p.x, q.y - p.y))
            buckets.setdefault(key, []).append(q)
        for group in buckets.values():
            if len(group) >= 2:
                bad.append((p, group[0], group[1]))
    return bad


def cable_polygon(scene: Scene, rid: int) -> list[Point]:
    """Closed boundary of robot's cable polygon: the target cable line
    followed implicitly by the segment (target, start)."""
    return list(scene.robot(rid).cable)


def validate_scene(scene: Scene) -> ValidationReport:
    """Check every scene assumption; the report lists all violations found."""
    report = ValidationReport()
    _check_structure(scene, report)
    if not report.ok:
        return report  # structural breakage makes geometric checks unreliable
    _check_general_position(scene, report)
    _check_assumption_start_positions(scene, report)
    _check_obstacles(scene, report)
    from .config_check import check_configuration  # cycle-breaking import

    try:
        verdict = check_configuration(scene)
    except GeneralPositionError as exc:
        report.add("GeneralPosition", f"configuration check: {exc}")
    else:
        for (i, j), where in verdict.intersections:
            report.add("CableIntersection",
                       f"cables {i} and {j} intersect at {where}")
    return report


def _check_structure(scene: Scene, report: ValidationReport) -> None:
    seen_ids = set()
    for r in scene.robots:
        if r.rid in seen_ids:
            report.add("DuplicateRobotId", f"robot id {r.rid} repeated")
        seen_ids.add(r.rid)
        if len(r.cable) < 2:
            report.add("CableTooShort", f"robot {r.rid} cable has <2 vertices")
            continue
        if r.cable[0] != r.start:
            report.add("CableEndpointMismatch",
                       f"robot {r.rid} cable does not begin at its start")
        if r.cable[-1] != r.target:
            report.add("CableEndpointMismatch",
                       f"robot {r.rid} cable does not end at its target")
        if len(r.anchors) != len(r.cable) - 2:
            report.add("AnchorMismatch",
                       f"robot {r.rid}: {len(r.anchors)} anchors for "
                       f"{len(r.cable) - 2} interior vertices")
            continue
        if len(set(r.cable)) != len(r.cable):
            report.add("SelfLoop",
                       f"robot {r.rid} target cable line repeats a waypoint")
        try:
            validate_polyline(r.cable)
        except GeneralPositionError as exc:
            report.add("GeneralPosition", f"robot {r.rid} cable: {exc}")
        for k, a in enumerate(r.anchors):
            p = r.cable[k + 1]
            if a.kind == "robot":
                if a.robot == r.rid:
                    report.add("SelfLoop",
                               f"robot {r.rid} cable anchored at its own target")
                    continue
                try:
                    ref = scene.robot(a.robot).target
                except KeyError:
                    report.add("AnchorMismatch",
                               f"robot {r.rid} anchor references missing robot {a.robot}")
                    continue
            else:
                try:
                    ref = scene.obstacles[a.obstacle][a.vertex]
                except IndexError:
                    report.add("AnchorMismatch",
                               f"robot {r.rid} anchor references missing obstacle vertex")
                    continue
            if ref != p:
                report.add("AnchorMismatch",
                           f"robot {r.rid} anchor {k} position {p} does not equal "
                           f"referenced pin {ref}")
            if len(r.cable) >= 3:
                t = orient_sign(r.cable[k], p, r.cable[k + 2])
                if t != a.turn and t != 0:
                    report.add("AnchorMismatch",
                               f"robot {r.rid} anchor {k}: declared turn "
                               f"{TURN_NAMES[a.turn]} but geometry turns {TURN_NAMES[t]}")


def _scene_points(scene: Scene) -> list[Point]:
    pts: list[Point] = []
    for r in scene.robots:
        pts.append(r.start)
        pts.append(r.target)
    for poly in scene.obstacles:
        pts.extend(poly)
    return pts


def _check_general_position(scene: Scene, report: ValidationReport) -> None:
    pts = _scene_points(scene)
    seen: dict[Point, int] = {}
    for p in pts:
        seen[p] = seen.get(p, 0) + 1
    for p, k in seen.items():
        if k > 1:
            report.add("DuplicatePoint", f"scene point {p} used {k} times")
    if any(k > 1 for k in seen.values()):
        return
    for a, b, c in _collinear_triples(pts):
        report.add("CollinearTriple", f"collinear scene points {a}, {b}, {c}")
    # no scene point may sit on the interior of a foreign cable edge or
    # straight motion segment
    segments: list[tuple[Point, Point, str]] = []
    for r in scene.robots:
        for i in range(len(r.cable) - 1):
            segments.append((r.cable[i], r.cable[i + 1], f"cable {r.rid}"))
        segments.append((r.start, r.target, f"path {r.rid}"))
    for poly in scene.obstacles:
        n = len(poly)
        for i in range(n):
            segments.append((poly[i], poly[(i + 1) % n], "obstacle edge"))
    for p in pts:
        for a, b, what in segments:
            if p == a or p == b:
                continue
            if on_segment_closed(p, a, b):
                report.add("PointOnForeignSegment",
                           f"scene point {p} lies on {what} ({a}-{b})")


def _check_assumption_start_positions(scene: Scene, report: ValidationReport) -> None:
    for r in scene.robots:
        for other in scene.robots:
            if other.rid == r.rid:
                continue
            c = point_in_polygon(r.start, cable_polygon(scene, other.rid))
            if c == Containment.INSIDE:
                report.add("StartInsidePolygon",
                           f"start of robot {r.rid} lies inside cable polygon "
                           f"of robot {other.rid}")
            elif c == Containment.ON_BOUNDARY:
                report.add("GeneralPosition",
                           f"start of robot {r.rid} lies on the boundary of "
                           f"cable polygon of robot {other.rid}")


def _check_obstacles(scene: Scene, report: ValidationReport) -> None:
    for oi, poly in enumerate(scene.obstacles):
        if len(poly) < 3:
            report.add("ObstacleNotSimple", f"obstacle {oi} has <3 vertices")
            continue
        n = len(poly)
        for i in range(n):
            if orient_sign(poly[i - 1], poly[i], poly[(i + 1) % n]) == 0:
                report.add("ObstacleNotSimple",
                           f"obstacle {oi} has collinear corner at {poly[i]}")
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                try:
                    x = segment_crossing(Segment(poly[i], poly[(i + 1) % n]),
                                         Segment(poly[j], poly[(j + 1) % n]))
                except DegenerateContact:
                    x = poly[i]
                if x is not None:
                    report.add("ObstacleNotSimple",
                               f"obstacle {oi} boundary self-intersects")
    # cables and scene points versus obstacle interiors
    for r in scene.robots:
        for name, p in (("start", r.start), ("target", r.target)):
            for oi, poly in enumerate(scene.obstacles):
                if point_in_polygon(p, poly) != Containment.OUTSIDE:
                    report.add("PointInsideObstacle",
                               f"{name} of robot {r.rid} touches obstacle {oi}")
        for i in range(len(r.cable) - 1):
            a, b = r.cable[i], r.cable[i + 1]
            for oi, poly in enumerate(scene.obstacles):
                n = len(poly)
                for j in range(n):
                    u, v = poly[j], poly[(j + 1) % n]
                    if a in (u, v) or b in (u, v):
                        continue
                    try:
                        x = segment_crossing(Segment(a, b), Segment(u, v))
                    except DegenerateContact:
                        report.add("GeneralPosition",
                                   f"cable {r.rid} touches obstacle {oi} degenerately")
                        continue
                    if x is not None:
                        report.add("CableObstacleCrossing",
                                   f"cable {r.rid} crosses obstacle {oi}")
                mid = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
                if point_in_polygon(mid, poly) == Containment.INSIDE:
                    report.add("CableObstacleCrossing",
                               f"cable {r.rid} edge passes through obstacle {oi}")
    # obstacle-vertex anchors must bend through the exterior wedge
    for r in scene.robots:
        for k, a in enumerate(r.anchors):
            if a.kind != "obstacle":
                continue
            poly = scene.obstacles[a.obstacle]
            n = len(poly)
            v = poly[a.vertex]
            u = poly[(a.vertex - 1) % n]
            w = poly[(a.vertex + 1) % n]
            if _polygon_signed_area(poly) < 0:
                u, w = w, u  # normalise to ccw
            ray_u = vec(v, u)
            ray_w = vec(v, w)
            for nb in (r.cable[k], r.cable[k + 2]):
                if not in_ccw_sector(ray_u, vec(v, nb), ray_w):
                    report.add("ObstacleAnchorPenetration",
                               f"cable {r.rid} enters obstacle {a.obstacle} "
                               f"interior at vertex {v}")


def _polygon_signed_area(poly: Sequence[Point]) -> Fraction:
    total = Fraction(0)
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        total += a.x * b.y - b.x * a.y
    return total / 2


# ---------------------------------------------------------------------------
# Retraction: shortest path homotopic to the target cable line when some
# robots are removed from the workspace.
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RetractedCable:
    points: tuple[Point, ...]
    anchors: tuple[Anchor, ...]  # aligned with interior vertices


def retract_cable(scene: Scene, rid: int, removed: Iterable[int]) -> RetractedCable:
    """Shortest path from start to target homotopic to the target cable line
    in the workspace punctured at surviving anchor pins and obstacles.

    Implemented as iterative rubber-band relaxation: each vertex whose pin
    was removed is shortcut across its wedge, catching any surviving pins
    inside the wedge triangle on the taut convex chain.
    """
    removed = frozenset(removed)
    if rid in removed:
        raise ValueError("cannot retract a removed robot's own cable")
    robot = scene.robot(rid)
    pts: list[Point] = list(robot.cable)
    anchors: list[Anchor | None] = [None] + list(robot.anchors) + [None]

    pin_entities: dict[Point, Anchor] = {}
    for a in robot.anchors:
        if a.kind == "robot" and a.robot not in removed:
            pin_entities[scene.robot(a.robot).target] = a
    for p, oi, vi in scene.obstacle_vertices():
        pin_entities.setdefault(p, Anchor("obstacle", None, oi, vi, 0))

    while True:
        k = next((k for k in range(1, len(pts) - 1)
                  if anchors[k] is not None
                  and anchors[k].kind == "robot"
                  and anchors[k].robot in removed), None)
        if k is None:
            break
        prev, v, nxt = pts[k - 1], pts[k], pts[k + 1]
        turn = orient_sign(prev, v, nxt)
        if turn == 0:
            raise GeneralPositionError("straight wedge in retraction")
        caught = []
        for p in pin_entities:
            if p in (prev, v, nxt):
                continue
            if point_in_triangle_strict(p, prev, v, nxt):
                caught.append(p)
            elif (on_segment_closed(p, prev, nxt)
                  or on_segment_closed(p, prev, v)
                  or on_segment_closed(p, v, nxt)):
                raise GeneralPositionError(
                    f"pin {p} on retraction wedge boundary of cable {rid}")
        chain = convex_chain(prev, nxt, caught, turn)
        new_anchors = []
        for p in chain:
            base = pin_entities[p]
            new_anchors.append(Anchor(base.kind, base.robot, base.obstacle,
                                      base.vertex, turn))
        _check_chain_against_obstacles(scene, [prev] + chain + [nxt], rid)
        pts[k:k + 1] = chain
        anchors[k:k + 1] = new_anchors

    interior = anchors[1:-1]
    if len(set(pts)) != len(pts):
        raise UnsupportedScene(
            f"retraction of cable {rid} wraps a pin twice (self loop)")
    if len(pts) >= 2:
        validate_polyline(pts)
    return RetractedCable(tuple(pts), tuple(a for a in interior if a is not None))


def _check_chain_against_obstacles(scene: Scene, chain: list[Point], rid: int) -> None:
    for i in range(len(chain) - 1):
        a, b = chain[i], chain[i + 1]
        for oi, poly in enumerate(scene.obstacles):
            n = len(poly)
            for j in range(n):
                u, v = poly[j], poly[(j + 1) % n]
                if a in (u, v) or b in (u, v):
                    continue
                try:
                    x = segment_crossing(Segment(a, b), Segment(u, v))
                except DegenerateContact as exc:
                    raise GeneralPositionError(
                        f"retracted cable {rid} grazes obstacle {oi}: {exc}")
                if x is not None:
                    raise UnsupportedScene(
                        f"retracted cable {rid} is blocked by an edge of "
                        f"obstacle {oi} with no pin inside the wedge")
            mid = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
            if point_in_polygon(mid, poly) == Containment.INSIDE:
                raise UnsupportedScene(
                    f"retracted cable {rid} passes through obstacle {oi}")


def shortest_motion_path(scene: Scene, rid: int) -> RetractedCable:
    """Path the robot follows in straight/concurrent mode: its cable
    retracted with every other robot removed (a straight segment unless an
    obstacle interferes)."""
    others = [r for r in scene.robot_ids if r != rid]
    return retract_cable(scene, rid, others)


# ---------------------------------------------------------------------------
# Containment with pin-wrap awareness (used by the interaction graphs).
# ---------------------------------------------------------------------------


def containment_level(scene: Scene, point: Point, boundary: Sequence[Point],
                      anchors: Sequence[Anchor], owner: int) -> str:
    """Classify `point` against a cable polygon: 'out', 'in', or 'anchor'.

    A target the cable explicitly wraps counts as enclosed even though it is
    a boundary vertex; any other boundary incidence is a general-position
    failure.
    """
    ent = None
    for a in anchors:
        if a.kind == "robot" and scene.robot(a.robot).target == point:
            ent = a
            break
    if ent is not None:
        return "anchor"
    c = point_in_polygon(point, boundary)
    if c == Containment.INSIDE:
        return "in"
    if c == Containment.OUTSIDE:
        return "out"
    raise GeneralPositionError(
        f"target {point} lies on the boundary of cable polygon {owner} "
        f"without being wrapped")


def straight_length(scene: Scene, rid: int):
    r = scene.robot(rid)
    return polyline_length([r.start, r.target])


def bent_length(scene: Scene, rid: int):
    return polyline_length(scene.robot(rid).cable)
