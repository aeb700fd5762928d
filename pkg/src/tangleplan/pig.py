"""Pair Interaction Graph: per-pair motion priorities and pair deadlocks.

For each robot pair the interaction type is fixed by where each target sits
relative to the other robot's cable polygon.  Crossing motion paths with a
one-way containment yield a priority edge at the crossing point; mutual
containment with disjoint paths is a pair deadlock (bidirectional edge) and
one of the two robots must fall back to walking its own cable line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TrichotomyViolation, UnsupportedScene
from .exact import Radical
from .geometry import Point, Segment, polyline_length, segment_crossing
from .scene import (
    RetractedCable,
    Scene,
    containment_level,
    retract_cable,
    shortest_motion_path,
)


@dataclass(frozen=True, slots=True)
class DirectedEdge:
    src: int  # passes the crossing first
    dst: int
    point: Point


@dataclass
class PairInteractionGraph:
    vertices: list[int]
    directed: list[DirectedEdge] = field(default_factory=list)
    bidirectional: list[tuple[int, int]] = field(default_factory=list)

    def directed_between(self, i: int, j: int) -> DirectedEdge | None:
        for e in self.directed:
            if {e.src, e.dst} == {i, j}:
                return e
        return None

    def dump(self) -> str:
        lines = [f"vertices: {' '.join(str(v) for v in self.vertices)}"]
        for e in sorted(self.directed, key=lambda e: (e.src, e.dst)):
            lines.append(f"v{e.src} ->({e.point.x},{e.point.y}) v{e.dst}")
        for i, j in sorted(self.bidirectional):
            lines.append(f"v{i} <-> v{j}")
        return "\n".join(lines)


@dataclass(frozen=True, slots=True)
class BentEntry:
    robot: int
    reason: str  # "pair_deadlock" | "network_deadlock"
    path: tuple[Point, ...]  # the robot's target cable line


def path_crossing(path_a, path_b) -> Point | None:
    """Unique proper crossing of two motion-path polylines.

    Edge pairs incident to a shared vertex never properly cross; more than
    one crossing is outside the supported model (single priority per pair).
    """
    crossings: list[Point] = []
    for i in range(len(path_a) - 1):
        for j in range(len(path_b) - 1):
            ea = (path_a[i], path_a[i + 1])
            eb = (path_b[j], path_b[j + 1])
            if set(ea) & set(eb):
                continue
            x = segment_crossing(Segment(*ea), Segment(*eb))
            if x is not None:
                crossings.append(x)
    if not crossings:
        return None
    if len(crossings) > 1:
        raise UnsupportedScene(
            f"motion paths cross {len(crossings)} times; one crossing per "
            f"pair is supported")
    return crossings[0]


def _interaction(scene: Scene, i: int, j: int,
                 paths: dict[int, RetractedCable],
                 polygons: dict[int, RetractedCable]):
    """Classify the pair and return ('none'|'directed'|'deadlock', edge)."""
    pi = polygons[i]
    pj = polygons[j]
    ti = scene.robot(i).target
    tj = scene.robot(j).target
    c_ij = containment_level(scene, ti, pj.points, pj.anchors, j)
    c_ji = containment_level(scene, tj, pi.points, pi.anchors, i)
    x = path_crossing(paths[i].points, paths[j].points)
    if x is not None:
        if c_ij != "out" and c_ji == "out":
            return "directed", DirectedEdge(j, i, x)
        if c_ji != "out" and c_ij == "out":
            return "directed", DirectedEdge(i, j, x)
        raise TrichotomyViolation(
            f"pair ({i},{j}): paths cross but containments are "
            f"({c_ij},{c_ji})")
    if c_ij != "out" and c_ji != "out":
        return "deadlock", (min(i, j), max(i, j))
    if c_ij != "out" or c_ji != "out":
        raise TrichotomyViolation(
            f"pair ({i},{j}): one-way containment ({c_ij},{c_ji}) but the "
            f"motion paths do not cross")
    return "none", None


def build_pig(scene: Scene, robots: list[int] | None = None,
              removed: frozenset[int] = frozenset()) -> PairInteractionGraph:
    """Algorithm: for every pair, add a priority edge at the path crossing or
    a bidirectional edge on mutual containment.

    `removed` robots are erased from the workspace: surviving cable polygons
    are retracted around the remaining pins before containment tests.
    """
    if robots is None:
        robots = [r for r in scene.robot_ids if r not in removed]
    paths = {r: shortest_motion_path(scene, r) for r in robots}
    polygons = {r: retract_cable(scene, r, removed) for r in robots}
    g = PairInteractionGraph(list(robots))
    for ai in range(len(robots)):
        for aj in range(ai + 1, len(robots)):
            kind, payload = _interaction(scene, robots[ai], robots[aj],
                                         paths, polygons)
            if kind == "directed":
                g.directed.append(payload)
            elif kind == "deadlock":
                g.bidirectional.append(payload)
    return g


def find_pair_deadlocks(g: PairInteractionGraph) -> list[tuple[int, int]]:
    return sorted(g.bidirectional)


def detour_ratio_key(scene: Scene, rid: int):
    """Exact comparison key pieces for the detour-ratio tie break."""
    bent = polyline_length(scene.robot(rid).cable)
    straight = polyline_length(shortest_motion_path(scene, rid).points)
    return bent, straight


def _ratio_greater(a: tuple[Radical, Radical], b: tuple[Radical, Radical]) -> int:
    """Compare a0/a1 ? b0/b1 exactly (all lengths positive)."""
    left = a[0] * b[1]
    right = b[0] * a[1]
    return (left - right).sign()


def select_victim(scene: Scene, counts: dict[int, int]) -> int:
    """Deadlock victim: most deadlocks, then largest detour ratio, then
    lowest id."""
    best = None
    best_key = None
    for rid in sorted(counts):
        key = (counts[rid], detour_ratio_key(scene, rid))
        if best is None:
            best, best_key = rid, key
            continue
        if key[0] > best_key[0]:
            best, best_key = rid, key
        elif key[0] == best_key[0] and _ratio_greater(key[1], best_key[1]) > 0:
            best, best_key = rid, key
    return best


def prune_pair_deadlocks(g: PairInteractionGraph, scene: Scene,
                         removed: frozenset[int] = frozenset()
                         ) -> tuple[PairInteractionGraph, list[BentEntry]]:
    """Remove robots until no bidirectional edge remains.

    Each removal erases the victim from the workspace, so surviving cable
    polygons are recomputed retracted before re-testing containments.
    """
    bent: list[BentEntry] = []
    removed = set(removed)
    current = g
    while current.bidirectional:
        counts: dict[int, int] = {}
        for i, j in current.bidirectional:
            counts[i] = counts.get(i, 0) + 1
            counts[j] = counts.get(j, 0) + 1
        victim = select_victim(scene, counts)
        bent.append(BentEntry(victim, "pair_deadlock",
                              scene.robot(victim).cable))
        removed.add(victim)
        current = build_pig(scene, removed=frozenset(removed))
    return current, bent
