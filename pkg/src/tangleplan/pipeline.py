"""End-to-end planning: validate, build and prune the interaction graphs,
schedule, and verify the schedule against the taut-cable simulator."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import nig as nig_mod
from . import pig as pig_mod
from .errors import TangleError
from .nig import NetworkInteractionGraph, detect_network_deadlock
from .pig import BentEntry, PairInteractionGraph
from .scene import Scene, ValidationReport, validate_scene
from .scheduler import Schedule, assign_weights, compute_schedule
from .simulator import SimResult, configs_equal, simulate

VERDICT_STRAIGHT = "realizable_straight_concurrent"
VERDICT_BENT_FALLBACK = "realizable_with_bent_fallback"
VERDICT_INVALID = "invalid"


@dataclass
class Diagnostics:
    pair_deadlocks: list[tuple[int, int]] = field(default_factory=list)
    network_cycles: list[list] = field(default_factory=list)
    straight_sequential_deadlock: bool = False


@dataclass
class PlanResult:
    verdict: str
    reasons: list[str] = field(default_factory=list)
    validation: ValidationReport | None = None
    pig: PairInteractionGraph | None = None
    pruned_pig: PairInteractionGraph | None = None
    nig: NetworkInteractionGraph | None = None
    final_nig: NetworkInteractionGraph | None = None
    bent: list[BentEntry] = field(default_factory=list)
    schedule: Schedule | None = None
    diagnostics: Diagnostics = field(default_factory=Diagnostics)
    simulation: SimResult | None = None
    verified: bool = False

    @property
    def realizable(self) -> bool:
        return self.verdict != VERDICT_INVALID


def straight_sequential_precedence(scene: Scene,
                                   g: PairInteractionGraph) -> dict[int, set[int]]:
    """Precedence digraph for one-at-a-time straight motion: a robot moves
    before every robot its cable bends around, plus the crossing-pair
    priorities."""
    adj: dict[int, set[int]] = {rid: set() for rid in scene.robot_ids}
    for r in scene.robots:
        for a in r.anchors:
            if a.kind == "robot":
                adj[r.rid].add(a.robot)
    for e in g.directed:
        adj[e.src].add(e.dst)
    return adj


def _digraph_has_cycle(adj: dict[int, set[int]]) -> bool:
    indeg = {k: 0 for k in adj}
    for outs in adj.values():
        for o in outs:
            indeg[o] += 1
    queue = [k for k, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        k = queue.pop()
        seen += 1
        for o in adj[k]:
            indeg[o] -= 1
            if indeg[o] == 0:
                queue.append(o)
    return seen != len(adj)


def find_precedence_cycle(adj: dict[int, set[int]]) -> list[int] | None:
    """One directed cycle of the precedence digraph, if any."""
    state: dict[int, int] = {}

    def dfs(node, stack):
        state[node] = 1
        stack.append(node)
        for nxt in sorted(adj[node]):
            if state.get(nxt) == 1:
                return stack[stack.index(nxt):]
            if nxt not in state:
                got = dfs(nxt, stack)
                if got:
                    return got
        stack.pop()
        state[node] = 2
        return None

    for start in sorted(adj):
        if start not in state:
            got = dfs(start, [])
            if got:
                return got
    return None


def plan(scene: Scene, speed=Fraction(1), skip_validation: bool = False,
         verify: bool = True) -> PlanResult:
    """Run the full pipeline on a scene."""
    result = PlanResult(VERDICT_INVALID)
    if not skip_validation:
        report = validate_scene(scene)
        result.validation = report
        if not report.ok:
            result.reasons = [f"{v.code}: {v.message}" for v in report.violations]
            return result
    try:
        g = pig_mod.build_pig(scene)
        result.pig = g
        result.diagnostics.pair_deadlocks = pig_mod.find_pair_deadlocks(g)
        prec = straight_sequential_precedence(scene, g)
        result.diagnostics.straight_sequential_deadlock = _digraph_has_cycle(prec)

        pruned, bent = pig_mod.prune_pair_deadlocks(g, scene)
        result.pruned_pig = pruned
        net = nig_mod.build_nig(pruned, scene)
        result.nig = net
        report = detect_network_deadlock(net)
        result.diagnostics.network_cycles = report.cycles
        final_net, bent = nig_mod.prune_network_deadlocks(net, scene, bent)
        result.final_nig = final_net
        result.bent = bent

        weights = assign_weights(final_net, speed)
        schedule = compute_schedule(final_net, weights, bent, scene, speed)
        result.schedule = schedule
    except TangleError as exc:
        result.reasons = [f"{type(exc).__name__}: {exc}"]
        return result

    result.verdict = VERDICT_STRAIGHT if not bent else VERDICT_BENT_FALLBACK
    if verify:
        sim = simulate(scene, schedule)
        result.simulation = sim
        result.verified = configs_equal(sim, scene)
    return result
