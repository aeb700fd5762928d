"""Network Interaction Graph: event nodes "robot passes point", chained per
robot in path order, with inter-chain edges carrying the pair priorities.
A directed cycle in this graph is a network deadlock."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SharedCrossingPoint
from .geometry import Point, dot, on_segment_closed, vec
from .pig import BentEntry, PairInteractionGraph, build_pig, select_victim
from .scene import RetractedCable, Scene, shortest_motion_path

NodeKey = tuple  # (robot, "start"|"cross"|"target", point or None)


@dataclass(frozen=True, slots=True)
class EventNode:
    robot: int
    kind: str  # "start" | "cross" | "target"
    point: Point

    @property
    def key(self) -> NodeKey:
        if self.kind == "cross":
            return (self.robot, "cross", (self.point.x, self.point.y))
        return (self.robot, self.kind, None)


@dataclass
class NetworkInteractionGraph:
    chains: dict[int, list[EventNode]]
    inter_edges: list[tuple[NodeKey, NodeKey]]
    paths: dict[int, RetractedCable]

    def nodes(self) -> list[EventNode]:
        out = []
        for rid in sorted(self.chains):
            out.extend(self.chains[rid])
        return out

    def adjacency(self) -> dict[NodeKey, list[NodeKey]]:
        adj: dict[NodeKey, list[NodeKey]] = {n.key: [] for n in self.nodes()}
        for rid in sorted(self.chains):
            chain = self.chains[rid]
            for a, b in zip(chain, chain[1:]):
                adj[a.key].append(b.key)
        for a, b in self.inter_edges:
            adj[a].append(b)
        return adj

    def dump(self) -> str:
        lines = []
        for rid in sorted(self.chains):
            parts = []
            for n in self.chains[rid]:
                if n.kind == "cross":
                    parts.append(f"({rid},{n.point.x},{n.point.y})")
                else:
                    parts.append(f"({rid},{n.kind})")
            lines.append("chain " + " -> ".join(parts))
        for a, b in sorted(self.inter_edges):
            lines.append(f"edge {a} -> {b}")
        return "\n".join(lines)


def _position_on_path(path: RetractedCable, p: Point) -> tuple[int, Fraction]:
    """(edge index, normalised parameter) of a point on the path polyline."""
    pts = path.points
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        if on_segment_closed(p, a, b):
            d = vec(a, b)
            t = dot(vec(a, p), d) / dot(d, d)
            return i, t
    raise SharedCrossingPoint(f"crossing point {p} not on the motion path")


def build_nig(g: PairInteractionGraph, scene: Scene) -> NetworkInteractionGraph:
    """Chain each robot's crossings in arclength order; add one inter-chain
    edge per directed priority edge, connecting the two passage events."""
    paths = {rid: shortest_motion_path(scene, rid) for rid in g.vertices}
    crossings: dict[int, list[tuple[tuple[int, Fraction], Point]]] = {
        rid: [] for rid in g.vertices}
    for e in g.directed:
        for rid in (e.src, e.dst):
            pos = _position_on_path(paths[rid], e.point)
            if pos[1] == 0 or pos[1] == 1:
                raise SharedCrossingPoint(
                    f"crossing {e.point} coincides with a path vertex of "
                    f"robot {rid}")
            crossings[rid].append((pos, e.point))
    chains: dict[int, list[EventNode]] = {}
    for rid in g.vertices:
        robot = scene.robot(rid)
        items = sorted(crossings[rid], key=lambda it: it[0])
        for (pos_a, pa), (pos_b, pb) in zip(items, items[1:]):
            if pos_a == pos_b:
                raise SharedCrossingPoint(
                    f"two crossings of robot {rid} share point {pa}")
        chain = [EventNode(rid, "start", robot.start)]
        chain += [EventNode(rid, "cross", p) for _, p in items]
        chain.append(EventNode(rid, "target", robot.target))
        chains[rid] = chain
    inter = []
    for e in g.directed:
        a = EventNode(e.src, "cross", e.point).key
        b = EventNode(e.dst, "cross", e.point).key
        inter.append((a, b))
    return NetworkInteractionGraph(chains, inter, paths)


# ---------------------------------------------------------------------------
# Cycle detection
# ---------------------------------------------------------------------------


@dataclass
class DeadlockReport:
    acyclic: bool
    cycles: list[list[NodeKey]] = field(default_factory=list)

    def robots(self) -> list[int]:
        seen = []
        for cyc in self.cycles:
            for key in cyc:
                if key[0] not in seen:
                    seen.append(key[0])
        return sorted(seen)


def topological_order(adj: dict[NodeKey, list[NodeKey]]) -> list[NodeKey] | None:
    """Kahn's algorithm; None when the graph has a cycle."""
    indeg = {k: 0 for k in adj}
    for k, outs in adj.items():
        for o in outs:
            indeg[o] += 1
    queue = sorted([k for k, d in indeg.items() if d == 0])
    order = []
    while queue:
        k = queue.pop(0)
        order.append(k)
        for o in adj[k]:
            indeg[o] -= 1
            if indeg[o] == 0:
                queue.append(o)
    if len(order) != len(adj):
        return None
    return order


def simple_cycles(adj: dict[NodeKey, list[NodeKey]], cap: int = 10000
                  ) -> list[list[NodeKey]]:
    """All simple directed cycles (up to `cap`), canonicalised to start at
    their smallest node."""
    nodes = sorted(adj)
    cycles: list[list[NodeKey]] = []

    def dfs(start, node, path, on_path):
        if len(cycles) >= cap:
            return
        for nxt in sorted(adj.get(node, ())):
            if nxt == start:
                cycles.append(path[:])
            elif nxt > start and nxt not in on_path:
                on_path.add(nxt)
                path.append(nxt)
                dfs(start, nxt, path, on_path)
                path.pop()
                on_path.discard(nxt)

    for start in nodes:
        dfs(start, start, [start], {start})
    return cycles


def detect_network_deadlock(nig: NetworkInteractionGraph) -> DeadlockReport:
    adj = nig.adjacency()
    if topological_order(adj) is not None:
        return DeadlockReport(True)
    return DeadlockReport(False, simple_cycles(adj))


def prune_network_deadlocks(nig: NetworkInteractionGraph, scene: Scene,
                            bent: list[BentEntry],
                            removed: frozenset[int] = frozenset()
                            ) -> tuple[NetworkInteractionGraph, list[BentEntry]]:
    """Remove robots involved in cycles until the NIG is acyclic."""
    bent = list(bent)
    removed = set(removed)
    current = nig
    while True:
        report = detect_network_deadlock(current)
        if report.acyclic:
            return current, bent
        counts: dict[int, int] = {}
        for cyc in report.cycles:
            for rid in {key[0] for key in cyc}:
                counts[rid] = counts.get(rid, 0) + 1
        victim = select_victim(scene, counts)
        bent.append(BentEntry(victim, "network_deadlock",
                              scene.robot(victim).cable))
        removed.add(victim)
        pig = build_pig(scene, removed=frozenset(removed))
        if pig.bidirectional:
            # a removal should never create new pair deadlocks, but stay safe
            from .pig import prune_pair_deadlocks

            pig, extra = prune_pair_deadlocks(pig, scene, frozenset(removed))
            for e in extra:
                bent.append(e)
                removed.add(e.robot)
        current = build_nig(pig, scene)
