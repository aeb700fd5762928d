"""Non-intersection test for a target cable configuration.

Two cable routes can meet at shared nodes (one route's pin is the other's
goal or a shared obstacle corner) and can even run along shared edges.
Whether they actually cross is decided locally at each meeting by angular
sector tests, plus plain proper-crossing tests for all non-adjacent edge
pairs.  The five node-meeting cases and the shared-run tests follow the
route-intersection analysis, including the corrected forms for the cases
where a route terminates at the meeting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateContact, GeneralPositionError
from .geometry import (
    Point,
    Segment,
    ccw_angle_gt_pi,
    cw_angle_gt_pi,
    in_ccw_sector,
    in_concave_sector,
    in_convex_sector,
    in_cw_sector,
    segment_crossing,
    vec,
)
from .scene import Scene, cable_polygon, containment_level


@dataclass(frozen=True, slots=True)
class RouteMeeting:
    """One shared node between two routes, classified by edge sharing."""

    node: Point
    route_a: int
    route_b: int
    shared: str  # "none" | "one_edge" | "both_edges"
    case: str  # "C1a" | "C1b" | "C2a" | "C2b" | "C2c"


def _edges_at(points: Sequence[Point], idx: int) -> list[Point]:
    """Neighbouring vertices of points[idx] (1 for a terminus, else 2)."""
    out = []
    if idx > 0:
        out.append(points[idx - 1])
    if idx < len(points) - 1:
        out.append(points[idx + 1])
    return out


def _undirected(a: Point, b: Point):
    ka = (a.x, a.y)
    kb = (b.x, b.y)
    return (ka, kb) if ka <= kb else (kb, ka)


def _route_index(points: Sequence[Point]) -> dict[Point, int]:
    idx = {}
    for i, p in enumerate(points):
        if p in idx:
            raise GeneralPositionError(f"route visits node {p} twice")
        idx[p] = i
    return idx


def classify_meeting(routes: tuple[Sequence[Point], Sequence[Point]],
                     node: Point,
                     ids: tuple[int, int] = (0, 1)) -> RouteMeeting:
    """Classify how two routes meet at a node they both visit."""
    a_pts, b_pts = routes
    ia = _route_index(a_pts)[node]
    ib = _route_index(b_pts)[node]
    nbrs_a = _edges_at(a_pts, ia)
    nbrs_b = _edges_at(b_pts, ib)
    shared_edges = sum(1 for p in nbrs_a for q in nbrs_b
                       if _undirected(node, p) == _undirected(node, q))
    terminal = len(nbrs_a) == 1 or len(nbrs_b) == 1
    if len(nbrs_a) == 1 and len(nbrs_b) == 1:
        raise GeneralPositionError("both routes terminate at the same node")
    if terminal:
        case = "C1b" if shared_edges >= 1 else "C1a"
        shared = "one_edge" if shared_edges >= 1 else "none"
    else:
        if shared_edges >= 2:
            case, shared = "C2c", "both_edges"
        elif shared_edges == 1:
            case, shared = "C2b", "one_edge"
        else:
            case, shared = "C2a", "none"
    return RouteMeeting(node, ids[0], ids[1], shared, case)


# ---------------------------------------------------------------------------
# Meeting tests
# ---------------------------------------------------------------------------


def _test_c1a(node: Point, a_nbr: Point, b_prev: Point, b_next: Point) -> bool:
    """Route A terminates at a pin route B bends around.

    B's strand hugs the pin on the inside of its turn (the < pi sector), so
    A's terminal edge crosses it exactly when it arrives through that sector.
    """
    return in_convex_sector(vec(node, b_prev), vec(node, a_nbr), vec(node, b_next))


def _test_c2a(node: Point, a1: Point, a2: Point, b1: Point, b2: Point) -> bool:
    """Both routes pass through the node with four distinct edges: they cross
    iff the edge pairs interleave around the node."""
    u = vec(node, a1)
    v = vec(node, a2)
    first = in_ccw_sector(u, vec(node, b1), v)
    second = in_ccw_sector(u, vec(node, b2), v)
    return first != second


@dataclass(frozen=True, slots=True)
class _Run:
    """Maximal shared subchain, oriented along route A."""

    nodes: tuple[Point, ...]  # n0 .. nm in A's order, m >= 1
    a_before: Point | None  # A's vertex before n0 (None: A terminates at n0)
    a_after: Point | None  # A's vertex after nm
    b_at_start: Point | None  # B's non-run neighbour at n0
    b_at_end: Point | None  # B's non-run neighbour at nm


def _run_reversed(run: _Run) -> _Run:
    return _Run(tuple(reversed(run.nodes)), run.a_after, run.a_before,
                run.b_at_end, run.b_at_start)


def _run_intersects(run: _Run) -> bool:
    n0 = run.nodes[0]
    nm = run.nodes[-1]
    fc = vec(n0, run.nodes[1])
    lc = vec(nm, run.nodes[-2])

    if run.a_before is None:
        if run.a_after is None:
            raise GeneralPositionError("route coincides entirely with a run")
        return _run_intersects(_run_reversed(run))
    a1 = vec(n0, run.a_before)

    if run.a_after is None:
        # A's goal is at the far end of the shared run: case 1(b) family
        if run.b_at_end is None:
            raise GeneralPositionError("two routes end at the same pin")
        b2 = vec(nm, run.b_at_end)
        if run.b_at_start is not None:
            b1 = vec(n0, run.b_at_start)
            # corrected test: matched rotation at both ends of the run
            if in_cw_sector(b1, a1, fc) and cw_angle_gt_pi(lc, b2):
                return True
            if in_ccw_sector(b1, a1, fc) and ccw_angle_gt_pi(lc, b2):
                return True
            return False
        # B also terminates, at the near end: supplemented test
        return ((cw_angle_gt_pi(a1, fc) and cw_angle_gt_pi(lc, b2))
                or (ccw_angle_gt_pi(a1, fc) and ccw_angle_gt_pi(lc, b2)))

    # A passes through both ends: case 2(b) family
    if run.b_at_start is None:
        return _run_intersects(_run_reversed(run))
    a2 = vec(nm, run.a_after)
    b1 = vec(n0, run.b_at_start)
    if run.b_at_end is not None:
        b2 = vec(nm, run.b_at_end)
        if (in_concave_sector(a1, b1, fc)
                and in_concave_sector(b1, a1, fc)):
            return True
        if in_cw_sector(fc, b1, a1) and in_ccw_sector(a2, b2, lc):
            return True
        if in_ccw_sector(fc, b1, a1) and in_cw_sector(a2, b2, lc):
            return True
        return False
    # B's goal sits at the far end of the run: revised clause (b2).
    # "ccw angle from a2 to lc < pi" is "cw angle from a2 to lc > pi".
    if in_cw_sector(fc, b1, a1) and cw_angle_gt_pi(a2, lc):
        return True
    if in_ccw_sector(fc, b1, a1) and ccw_angle_gt_pi(a2, lc):
        return True
    return False


def _find_runs_and_nodes(a_pts, b_pts):
    """Shared structure between two routes: maximal runs plus isolated nodes."""
    ia = _route_index(a_pts)
    ib = _route_index(b_pts)
    shared_nodes = [p for p in a_pts if p in ib]
    b_edges = {_undirected(b_pts[i], b_pts[i + 1]): i
               for i in range(len(b_pts) - 1)}
    shared_edge_flags = []
    for i in range(len(a_pts) - 1):
        shared_edge_flags.append(_undirected(a_pts[i], a_pts[i + 1]) in b_edges)
    runs: list[_Run] = []
    in_run_nodes: set[Point] = set()
    i = 0
    while i < len(shared_edge_flags):
        if not shared_edge_flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(shared_edge_flags) and shared_edge_flags[j + 1]:
            j += 1
        nodes = tuple(a_pts[i:j + 2])
        b_positions = [ib[p] for p in nodes]
        steps = {b_positions[k + 1] - b_positions[k]
                 for k in range(len(b_positions) - 1)}
        if steps not in ({1}, {-1}):
            raise GeneralPositionError(
                "shared edges are not contiguous in the second route")
        in_run_nodes.update(nodes)
        a_before = a_pts[i - 1] if i > 0 else None
        a_after = a_pts[j + 2] if j + 2 < len(a_pts) else None
        runs.append(_Run(
            nodes, a_before, a_after,
            _b_other_neighbour(b_pts, ib, nodes[0], nodes[1]),
            _b_other_neighbour(b_pts, ib, nodes[-1], nodes[-2]),
        ))
        i = j + 2
    isolated = [p for p in shared_nodes if p not in in_run_nodes]
    return runs, isolated


def _b_other_neighbour(b_pts, ib, node: Point, run_nbr: Point) -> Point | None:
    nbrs = _edges_at(b_pts, ib[node])
    others = [p for p in nbrs if p != run_nbr]
    if len(others) == len(nbrs):
        raise GeneralPositionError("run edge missing from second route")
    return others[0] if others else None


def meeting_intersects(meeting: RouteMeeting,
                       routes: tuple[Sequence[Point], Sequence[Point]]) -> bool:
    """Do the two routes cross at/through this meeting?"""
    a_pts, b_pts = routes
    node = meeting.node
    if meeting.case == "C2c":
        return False  # run-interior nodes are resolved at the run's ends
    if meeting.case in ("C1b", "C2b"):
        runs, _ = _find_runs_and_nodes(a_pts, b_pts)
        for run in runs:
            if node in run.nodes:
                return _run_intersects(run)
        raise GeneralPositionError("shared-edge meeting without a run")
    ia = _route_index(a_pts)[node]
    ib = _route_index(b_pts)[node]
    nbrs_a = _edges_at(a_pts, ia)
    nbrs_b = _edges_at(b_pts, ib)
    if meeting.case == "C1a":
        if len(nbrs_a) == 1:
            return _test_c1a(node, nbrs_a[0], nbrs_b[0], nbrs_b[1])
        return _test_c1a(node, nbrs_b[0], nbrs_a[0], nbrs_a[1])
    # C2a
    return _test_c2a(node, nbrs_a[0], nbrs_a[1], nbrs_b[0], nbrs_b[1])


def routes_cross(a_pts: Sequence[Point], b_pts: Sequence[Point]):
    """Full crossing test between two routes.

    Returns None when the routes do not intersect, else a witness location
    (a shared node or an interior crossing point).
    """
    ia = _route_index(a_pts)
    ib = _route_index(b_pts)

    runs, isolated = _find_runs_and_nodes(a_pts, b_pts)
    for run in runs:
        if _run_intersects(run):
            return run.nodes[0]
    for node in isolated:
        meeting = classify_meeting((a_pts, b_pts), node)
        if meeting.case in ("C1b", "C2b", "C2c"):
            raise GeneralPositionError(
                "edge-sharing classification for an isolated node")
        if meeting_intersects(meeting, (a_pts, b_pts)):
            return node

    shared_nodes = set(isolated)
    for run in runs:
        shared_nodes.update(run.nodes)
    b_edge_keys = {_undirected(b_pts[i], b_pts[i + 1])
                   for i in range(len(b_pts) - 1)}
    for i in range(len(a_pts) - 1):
        ea = (a_pts[i], a_pts[i + 1])
        if _undirected(*ea) in b_edge_keys:
            continue
        for j in range(len(b_pts) - 1):
            eb = (b_pts[j], b_pts[j + 1])
            if set(ea) & set(eb):
                continue  # adjacency through a shared node: handled above
            x = segment_crossing(Segment(*ea), Segment(*eb))
            if x is not None:
                return x
    return None


# ---------------------------------------------------------------------------
# Scene-level checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ConfigVerdict:
    intersections: tuple[tuple[tuple[int, int], Point], ...]

    @property
    def non_intersecting(self) -> bool:
        return not self.intersections


def check_configuration(scene: Scene) -> ConfigVerdict:
    """Test every route pair for crossings (node meetings and interiors)."""
    found = []
    robots = scene.robots
    for i in range(len(robots)):
        for j in range(i + 1, len(robots)):
            a, b = robots[i], robots[j]
            w = routes_cross(a.cable, b.cable)
            if w is not None:
                found.append(((a.rid, b.rid), w))
    return ConfigVerdict(tuple(found))


@dataclass
class PropertyReport:
    checked_pairs: int = 0
    violations: list[str] = None

    def __post_init__(self):
        if self.violations is None:
            self.violations = []

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_parity_propositions(scene: Scene) -> PropertyReport:
    """Cross-check the pair containment/crossing trichotomy on every pair.

    On a valid non-intersecting configuration these are theorems; a failure
    indicates an upstream geometry bug, never a legal scene.
    """
    report = PropertyReport()
    robots = scene.robots
    for i in range(len(robots)):
        for j in range(i + 1, len(robots)):
            a, b = robots[i], robots[j]
            report.checked_pairs += 1
            ca = containment_level(scene, a.target, cable_polygon(scene, b.rid),
                                   b.anchors, b.rid)
            cb = containment_level(scene, b.target, cable_polygon(scene, a.rid),
                                   a.anchors, a.rid)
            try:
                x = segment_crossing(Segment(a.start, a.target),
                                     Segment(b.start, b.target))
            except DegenerateContact as exc:
                report.violations.append(
                    f"pair ({a.rid},{b.rid}): degenerate path contact: {exc}")
                continue
            enclosed = (ca != "out", cb != "out")
            if enclosed == (False, False) and x is not None:
                report.violations.append(
                    f"pair ({a.rid},{b.rid}): no containment but paths cross at {x}")
            elif sum(enclosed) == 1 and x is None:
                report.violations.append(
                    f"pair ({a.rid},{b.rid}): one-way containment but paths disjoint")
            elif enclosed == (True, True) and x is not None:
                report.violations.append(
                    f"pair ({a.rid},{b.rid}): mutual containment but paths cross at {x}")
    return report
