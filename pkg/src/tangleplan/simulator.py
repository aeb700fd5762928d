"""Event-driven quasi-static simulation of taut cables under a schedule.

Robots move piecewise-linearly between timeline waypoints.  Each cable is the
taut chain base -> pivots -> robot, where every pivot is pinned to a live
entity (a robot's current position or an obstacle vertex).  Topology changes
only at events:

* acquire - a point entity and a cable segment's interior meet transversally
  (a robot pushing a cable, or a sweeping cable wrapping a parked robot or an
  obstacle corner), or a robot rounds a bent-path corner occupied by an
  entity, which hooks its own cable onto that entity;
* release - the bend at a pivot opens to a straight angle and the cable
  separates from the pin.

Between events every position is affine in time, so incidence conditions are
polynomials of degree <= 2 with exact radical coefficients; event times are
their isolated roots, ordered exactly.  Contacts that occur precisely at
waypoint times (a waiting robot departing across a cable that covers its
crossing point, or a bent path rounding an occupied corner) are resolved by
a contact scan at that instant; simultaneous passage through a crossing is
resolved in favour of the robot that reached it first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SimulationDegeneracy, SimulationStall
from .exact import (
    Radical,
    TimeValue,
    compare_times,
    isolate_roots,
    rad,
    sign_of_poly_at,
)
from .geometry import Point, segment_length
from .scene import Scene
from .scheduler import Schedule, TimelineEntry

Entity = tuple  # ("robot", rid) | ("obstacle", oi, vi)

_ZERO = rad(0)


# ---------------------------------------------------------------------------
# Affine kinematics and incidence polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Affine:
    """Position (bx + vx*t, by + vy*t), valid within one window."""

    bx: Radical
    vx: Radical
    by: Radical
    vy: Radical

    @property
    def moving(self) -> bool:
        return bool(self.vx) or bool(self.vy)

    def at(self, t: Radical) -> tuple[Radical, Radical]:
        return (self.bx + self.vx * t, self.by + self.vy * t)


def _affine_static(p: Point) -> Affine:
    return Affine(rad(p.x), _ZERO, rad(p.y), _ZERO)


def _affine_leg(a: Point, b: Point, t0: Radical, speed: Fraction) -> Affine:
    scale = rad(speed) / segment_length(a, b)
    vx = scale * (b.x - a.x)
    vy = scale * (b.y - a.y)
    return Affine(rad(a.x) - vx * t0, vx, rad(a.y) - vy * t0, vy)


Poly = tuple[Radical, Radical, Radical]  # c2*t^2 + c1*t + c0


def _diff(p: Affine, q: Affine):
    return (p.bx - q.bx, p.vx - q.vx, p.by - q.by, p.vy - q.vy)


def _cross_poly(u, w) -> Poly:
    ubx, uvx, uby, uvy = u
    wbx, wvx, wby, wvy = w
    return (uvx * wvy - uvy * wvx,
            ubx * wvy + uvx * wby - uby * wvx - uvy * wbx,
            ubx * wby - uby * wbx)


def _dot_poly(u, w) -> Poly:
    ubx, uvx, uby, uvy = u
    wbx, wvx, wby, wvy = w
    return (uvx * wvx + uvy * wvy,
            ubx * wvx + uvx * wbx + uby * wvy + uvy * wby,
            ubx * wbx + uby * wby)


def _poly_sub(p: Poly, q: Poly) -> Poly:
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _poly_is_zero(p: Poly) -> bool:
    return p[0].is_zero() and p[1].is_zero() and p[2].is_zero()


def _sign_after(p: Poly, t: TimeValue) -> int:
    """Sign of the polynomial immediately after time t."""
    v = sign_of_poly_at(*p, t)
    if v != 0:
        return v
    v = sign_of_poly_at(_ZERO, p[0] * 2, p[1], t)
    if v != 0:
        return v
    return p[0].sign()


def _roots_in_window(p: Poly, t_lo: TimeValue, t_hi: Radical,
                     include_lo: bool):
    out = []
    for r in isolate_roots(*p):
        c = compare_times(r, t_lo)
        if (c > 0 or (include_lo and c == 0)) and compare_times(r, t_hi) <= 0:
            out.append(r)
    return out


def _orient_rad(p, q, r) -> int:
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return v.sign()


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Leg:
    t0: Radical
    t1: Radical
    a: Point
    b: Point


@dataclass
class Mover:
    rid: int
    legs: list[Leg]
    speed: Fraction
    waypoints: dict[Point, list]  # point -> [(kind, arrive, depart)]

    def leg_after(self, t: TimeValue) -> Leg | None:
        for leg in self.legs:
            if compare_times(t, leg.t1) < 0 and compare_times(t, leg.t0) >= 0:
                return leg
        return None

    def affine_after(self, t: TimeValue) -> Affine:
        leg = self.leg_after(t)
        if leg is None:
            return _affine_static(self.legs[-1].b)
        if leg.a == leg.b:
            return _affine_static(leg.a)
        return _affine_leg(leg.a, leg.b, leg.t0, self.speed)

    def point_at_exact(self, t: Radical):
        return self.affine_after(t).at(t)

    @property
    def final_point(self) -> Point:
        return self.legs[-1].b


def _build_mover(rid: int, entries, speed: Fraction) -> Mover:
    legs: list[Leg] = []
    waypoints: dict[Point, list] = {}
    for e in entries:
        waypoints.setdefault(e.point, []).append((e.kind, e.arrive, e.depart))
    for e in entries:
        if (e.depart - e.arrive).sign() > 0:
            legs.append(Leg(e.arrive, e.depart, e.point, e.point))
    for e1, e2 in zip(entries, entries[1:]):
        if e1.point != e2.point:
            legs.append(Leg(e1.depart, e2.arrive, e1.point, e2.point))
    legs.sort(key=lambda leg: float(leg.t0))
    return Mover(rid, legs, speed, waypoints)


def _bent_entries(phase, speed: Fraction) -> list[TimelineEntry]:
    entries = [TimelineEntry(phase.path[0], "start", rad(0), phase.start_time)]
    t = phase.start_time
    for a, b in zip(phase.path, phase.path[1:]):
        t = t + segment_length(a, b) / speed
        kind = "target" if b == phase.path[-1] else "vertex"
        entries.append(TimelineEntry(b, kind, t, t))
    return entries


# ---------------------------------------------------------------------------
# Cable state and results
# ---------------------------------------------------------------------------


@dataclass
class Pivot:
    entity: Entity
    turn: int


@dataclass
class SimCable:
    owner: int
    base: Point
    pivots: list[Pivot] = field(default_factory=list)

    def chain_entities(self) -> list[Entity | None]:
        """None marks the static base; the owner robot closes the chain."""
        return [None] + [p.entity for p in self.pivots] + [("robot", self.owner)]


@dataclass(frozen=True, slots=True)
class FinalCable:
    owner: int
    pivots: tuple[tuple[Entity, int], ...]


@dataclass
class SimResult:
    cables: dict[int, FinalCable]
    positions: dict[int, Point]
    trace: list[str]
    events: int

    def dump_trace(self) -> str:
        return "\n".join(self.trace)


def configs_equal(result: SimResult, scene: Scene) -> bool:
    """Exact comparison: every robot at its target with the pivot identity
    sequence and turn directions of its target cable line."""
    for r in scene.robots:
        if result.positions.get(r.rid) != r.target:
            return False
        want = tuple((a.key(), a.turn) for a in r.anchors)
        if result.cables[r.rid].pivots != want:
            return False
    return True


# ---------------------------------------------------------------------------
# The simulator
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class _Candidate:
    time: TimeValue
    kind: str  # "release" | "acquire"
    owner: int
    seg: int
    entity: Entity | None
    turn: int

    def order_key(self):
        return (0 if self.kind == "release" else 1, self.owner, self.seg,
                () if self.entity is None else self.entity)


class Simulator:
    def __init__(self, scene: Scene, schedule: Schedule, collect_trace=False,
                 max_events: int | None = None):
        self.scene = scene
        self.schedule = schedule
        self.trace: list[str] = []
        self.collect_trace = collect_trace
        self.events = 0
        self.max_events = max_events or (1000 + 300 * len(scene.robots))
        self.movers: dict[int, Mover] = {}
        bent_ids = {ph.robot for ph in schedule.bent_phases}
        for rid in sorted(r.rid for r in scene.robots):
            if rid in bent_ids:
                ph = next(p for p in schedule.bent_phases if p.robot == rid)
                self.movers[rid] = _build_mover(
                    rid, _bent_entries(ph, schedule.speed), schedule.speed)
            elif rid in schedule.timelines:
                self.movers[rid] = _build_mover(
                    rid, schedule.timelines[rid].entries, schedule.speed)
            else:
                raise SimulationDegeneracy(f"schedule has no plan for robot {rid}")
        self.cables = {r.rid: SimCable(r.rid, r.start) for r in scene.robots}
        self.obstacle_points = {("obstacle", oi, vi): p
                                for p, oi, vi in scene.obstacle_vertices()}
        self._exempt: set = set()  # same-instant suppression keys

    # -- logging ------------------------------------------------------------

    def _log(self, t: TimeValue, msg: str) -> None:
        if self.collect_trace:
            self.trace.append(f"t={float(t):.9f} {msg}")

    def _bump(self) -> None:
        self.events += 1
        if self.events > self.max_events:
            raise SimulationStall(
                f"simulation exceeded {self.max_events} events")

    # -- kinematics -----------------------------------------------------------

    def _entity_affine(self, entity: Entity | None, cable: SimCable,
                       t: TimeValue) -> Affine:
        if entity is None:
            return _affine_static(cable.base)
        if entity[0] == "robot":
            return self.movers[entity[1]].affine_after(t)
        return _affine_static(self.obstacle_points[entity])

    def _segment_affines(self, cable: SimCable, t: TimeValue):
        ents = cable.chain_entities()
        affs = [self._entity_affine(e, cable, t) for e in ents]
        return ents, affs

    # -- candidate generation ---------------------------------------------------

    def _collect(self, t_lo: TimeValue, t_hi: Radical,
                 include_lo: bool) -> list[_Candidate]:
        out: list[_Candidate] = []
        point_affs = {}
        for rid in sorted(self.movers):
            point_affs[("robot", rid)] = self.movers[rid].affine_after(t_lo)
        for key in sorted(self.obstacle_points):
            point_affs[key] = _affine_static(self.obstacle_points[key])
        for rid in sorted(self.cables):
            cable = self.cables[rid]
            ents, affs = self._segment_affines(cable, t_lo)
            moving = [a.moving for a in affs]
            for k in range(1, len(ents) - 1):
                if not (moving[k - 1] or moving[k] or moving[k + 1]):
                    continue
                if ("rel", rid, ents[k]) in self._exempt:
                    continue
                g = _cross_poly(_diff(affs[k], affs[k - 1]),
                                _diff(affs[k + 1], affs[k - 1]))
                if _poly_is_zero(g):
                    continue
                for root in _roots_in_window(g, t_lo, t_hi, include_lo):
                    out.append(_Candidate(root, "release", rid, k, ents[k], 0))
                    break
            for k in range(len(ents) - 1):
                e1, e2 = ents[k], ents[k + 1]
                a1, a2 = affs[k], affs[k + 1]
                seg_moving = a1.moving or a2.moving
                for ent, qa in point_affs.items():
                    if ent == e1 or ent == e2 or ent == ("robot", rid):
                        continue
                    if not (seg_moving or qa.moving):
                        continue
                    if ("acq", rid, ent) in self._exempt:
                        continue
                    g = _cross_poly(_diff(a2, a1), _diff(qa, a1))
                    if _poly_is_zero(g):
                        continue
                    for root in _roots_in_window(g, t_lo, t_hi, include_lo):
                        if self._acquire_valid(a1, a2, qa, root):
                            turn = -_sign_after(g, root)
                            if turn != 0:
                                out.append(_Candidate(root, "acquire", rid,
                                                      k, ent, turn))
                            break
        return out

    def _acquire_valid(self, a1, a2, qa, t: TimeValue) -> bool:
        seg = _diff(a2, a1)
        rel = _diff(qa, a1)
        s_num = _dot_poly(rel, seg)
        if sign_of_poly_at(*s_num, t) <= 0:
            return False
        gap = _poly_sub(_dot_poly(seg, seg), s_num)
        return sign_of_poly_at(*gap, t) > 0

    def _check_robot_coincidence(self, t_lo: TimeValue, t_hi: Radical) -> None:
        rids = sorted(self.movers)
        affs = {rid: self.movers[rid].affine_after(t_lo) for rid in rids}
        for i in range(len(rids)):
            for j in range(i + 1, len(rids)):
                a, b = affs[rids[i]], affs[rids[j]]
                if not (a.moving or b.moving):
                    continue
                dx: Poly = (_ZERO, a.vx - b.vx, a.bx - b.bx)
                dy: Poly = (_ZERO, a.vy - b.vy, a.by - b.by)
                if _poly_is_zero(dx) and _poly_is_zero(dy):
                    raise SimulationDegeneracy(
                        f"robots {rids[i]} and {rids[j]} coincide")
                primary, other = (dx, dy) if not _poly_is_zero(dx) else (dy, dx)
                for root in _roots_in_window(primary, t_lo, t_hi, False):
                    if compare_times(root, t_hi) >= 0:
                        continue  # boundary handoffs are legalised in the scan
                    if _poly_is_zero(other) or sign_of_poly_at(*other, root) == 0:
                        raise SimulationDegeneracy(
                            f"robots {rids[i]} and {rids[j]} coincide mid-leg")

    # -- event application -------------------------------------------------------

    def _apply_release(self, cand: _Candidate) -> None:
        cable = self.cables[cand.owner]
        if cand.seg - 1 >= len(cable.pivots) \
                or cable.pivots[cand.seg - 1].entity != cand.entity:
            return  # structure changed under a tie; drop the stale event
        g = self._pivot_poly(cable, cand.seg, cand.time)
        pivot = cable.pivots[cand.seg - 1]
        after = _sign_after(g, cand.time)
        if after == pivot.turn:
            # tangential touch: the bend re-forms on the same side
            self._exempt.add(("rel", cand.owner, cand.entity))
            return
        self._bump()
        cable.pivots.pop(cand.seg - 1)
        self._exempt.add(("acq", cand.owner, cand.entity))
        self._log(cand.time, f"release cable={cand.owner} pivot={pivot.entity}")

    def _pivot_poly(self, cable: SimCable, k: int, t: TimeValue) -> Poly:
        ents, affs = self._segment_affines(cable, t)
        return _cross_poly(_diff(affs[k], affs[k - 1]),
                           _diff(affs[k + 1], affs[k - 1]))

    def _apply_acquire(self, cand: _Candidate) -> None:
        cable = self.cables[cand.owner]
        for adj in (cand.seg - 1, cand.seg):
            if 0 <= adj < len(cable.pivots) \
                    and cable.pivots[adj].entity == cand.entity:
                return
        self._bump()
        cable.pivots.insert(cand.seg, Pivot(cand.entity, cand.turn))
        self._log(cand.time,
                  f"acquire cable={cand.owner} pivot={cand.entity} "
                  f"turn={cand.turn} seg={cand.seg}")

    # -- contact scan at exact waypoint times -----------------------------------

    def _scan(self, t: Radical) -> None:
        positions: dict[Entity, tuple] = {}
        for rid, m in self.movers.items():
            positions[("robot", rid)] = m.point_at_exact(t)
        for k, p in self.obstacle_points.items():
            positions[k] = (rad(p.x), rad(p.y))
        self._scan_robot_pairs(t, positions)
        self._scan_corners(t, positions)
        self._scan_pushes(t, positions)
        self._scan_release_ties(t)

    def _departing(self, rid: int, t: Radical):
        """(waypoint, kind, next waypoint) when robot rid departs at t."""
        m = self.movers[rid]
        leg = m.leg_after(t)
        if leg is None or leg.a == leg.b:
            return None
        if not (leg.t0 - t).is_zero():
            return None
        kinds = [kind for kind, arrive, depart in m.waypoints.get(leg.a, ())
                 if (depart - t).is_zero()]
        if not kinds:
            return None
        return leg.a, kinds[0], leg.b

    def _prev_waypoint(self, rid: int, w: Point, t: Radical) -> Point | None:
        m = self.movers[rid]
        prev = None
        for leg in m.legs:
            if leg.b == w and leg.a != w and (leg.t1 - t).sign() <= 0:
                prev = leg.a
        return prev

    def _parked_at(self, rid: int, t: Radical) -> Point | None:
        m = self.movers[rid]
        leg = m.leg_after(t)
        if leg is None:
            return m.final_point
        if leg.a == leg.b:
            return leg.a
        if (leg.t0 - t).sign() > 0:
            return leg.a
        return None

    def _scan_robot_pairs(self, t: Radical, positions) -> None:
        rids = sorted(self.movers)
        for i in range(len(rids)):
            for j in range(i + 1, len(rids)):
                pi = positions[("robot", rids[i])]
                pj = positions[("robot", rids[j])]
                if (pi[0] - pj[0]).is_zero() and (pi[1] - pj[1]).is_zero():
                    if not self._coincidence_legal(rids[i], rids[j], t):
                        raise SimulationDegeneracy(
                            f"robots {rids[i]} and {rids[j]} occupy one "
                            f"point at t={float(t):.6f}")

    def _coincidence_legal(self, i: int, j: int, t: Radical) -> bool:
        wi = self._waypoint_kinds_at(i, t)
        wj = self._waypoint_kinds_at(j, t)
        if "cross" in wi and "cross" in wj:
            return True  # scheduled handoff at a crossing point
        for mover, passer_kinds in ((i, wj), (j, wi)):
            parked = self._parked_at(mover, t)
            if parked is not None and parked == self.movers[mover].final_point \
                    and ("vertex" in passer_kinds or "target" in passer_kinds
                         or "start" in passer_kinds):
                return True  # bent-path corner rounding a parked robot
        return False

    def _waypoint_kinds_at(self, rid: int, t: Radical) -> set[str]:
        kinds = set()
        for p, stamps in self.movers[rid].waypoints.items():
            for kind, arrive, depart in stamps:
                if (arrive - t).sign() <= 0 and (t - depart).sign() <= 0:
                    kinds.add(kind)
        return kinds

    def _scan_corners(self, t: Radical, positions) -> None:
        """A robot turning at an occupied waypoint hooks its own cable on
        the occupant: the zero-radius limit of driving around its body."""
        for rid in sorted(self.movers):
            dep = self._departing(rid, t)
            if dep is None:
                continue
            w, kind, nxt = dep
            if kind != "vertex":
                continue
            ent = self._occupant(w, rid, t)
            if ent is None:
                continue
            cable = self.cables[rid]
            if cable.pivots and cable.pivots[-1].entity == ent:
                continue
            prev = (positions[cable.pivots[-1].entity] if cable.pivots
                    else (rad(cable.base.x), rad(cable.base.y)))
            wv = (rad(w.x), rad(w.y))
            nv = (rad(nxt.x), rad(nxt.y))
            turn = _orient_rad(prev, wv, nv)
            if turn == 0:
                raise SimulationDegeneracy(
                    f"straight corner at occupied waypoint {w}")
            self._bump()
            cable.pivots.append(Pivot(ent, turn))
            self._log(t, f"acquire cable={rid} pivot={ent} turn={turn} (corner)")

    def _occupant(self, w: Point, exclude: int, t: Radical) -> Entity | None:
        ent = self.scene.entity_at(w)
        if ent is None:
            return None
        if ent[0] == "obstacle":
            return ent
        other = ent[1]
        if other == exclude:
            return None
        if self._parked_at(other, t) == w:
            return ent
        return None

    def _scan_pushes(self, t: Radical, positions) -> None:
        """A departing robot exactly on a foreign cable crosses it."""
        for rid in sorted(self.movers):
            dep = self._departing(rid, t)
            if dep is None:
                continue
            w, kind, nxt = dep
            q_ent = ("robot", rid)
            qpos = positions[q_ent]
            for cid in sorted(self.cables):
                if cid == rid:
                    continue
                if ("acq", cid, q_ent) in self._exempt:
                    continue
                cable = self.cables[cid]
                ents, affs = self._segment_affines(cable, t)
                pts = [a.at(t) for a in affs]
                for k in range(len(ents) - 1):
                    if ents[k] == q_ent or ents[k + 1] == q_ent:
                        continue
                    placement = self._placement(pts[k], pts[k + 1], qpos)
                    if placement == "outside":
                        continue
                    if placement == "pivot" and k > 0:
                        raise SimulationDegeneracy(
                            f"robot {rid} departs from a pivot of cable {cid}")
                    if placement in ("pivot", "base"):
                        continue
                    if placement == "tip":
                        if not self._tip_crossing(cid, rid, w, kind, t,
                                                  pts[k], positions):
                            continue
                    qa = self.movers[rid].affine_after(t)
                    g = _cross_poly(_diff(affs[k + 1], affs[k]),
                                    _diff(qa, affs[k]))
                    if _poly_is_zero(g):
                        continue  # departure rides along the cable line
                    turn = -_sign_after(g, t)
                    if turn == 0:
                        continue
                    if placement == "tip" and not self._tip_stays_inside(
                            affs[k], affs[k + 1], qa, t):
                        continue
                    self._bump()
                    cable.pivots.insert(k, Pivot(q_ent, turn))
                    self._log(t, f"acquire cable={cid} pivot={q_ent} "
                                 f"turn={turn} (push at {w})")
                    break

    @staticmethod
    def _placement(p1, p2, q) -> str:
        d1 = (q[0] - p1[0], q[1] - p1[1])
        d2 = (q[0] - p2[0], q[1] - p2[1])
        if d2[0].is_zero() and d2[1].is_zero():
            return "tip"
        if d1[0].is_zero() and d1[1].is_zero():
            return "pivot"
        seg = (p2[0] - p1[0], p2[1] - p1[1])
        if seg[0].is_zero() and seg[1].is_zero():
            return "outside"
        c = seg[0] * d1[1] - seg[1] * d1[0]
        if not c.is_zero():
            return "outside"
        t1 = (d1[0] * seg[0] + d1[1] * seg[1]).sign()
        t2 = (d2[0] * seg[0] + d2[1] * seg[1]).sign()
        return "interior" if (t1 > 0 and t2 < 0) else "outside"

    def _tip_crossing(self, owner: int, rid: int, w: Point, kind: str,
                      t: Radical, prev_pos, positions) -> bool:
        """Robot rid departs exactly from the tip of cable `owner`.

        At a shared crossing point the robot that was there first is deemed
        to pass behind the other's cable (priority handoff).  At a bent-path
        corner the strand hooks when it attaches through the corner's turn.
        """
        if kind == "cross":
            arrivals = [a for knd, a, d in self.movers[rid].waypoints.get(w, ())
                        if knd == "cross"]
            departs = [d for knd, a, d in self.movers[owner].waypoints.get(w, ())]
            if not arrivals or not departs:
                return False
            amin = arrivals[0]
            for a in arrivals[1:]:
                if (a - amin).sign() < 0:
                    amin = a
            dmax = departs[0]
            for d in departs[1:]:
                if (d - dmax).sign() > 0:
                    dmax = d
            return (amin - dmax).sign() < 0
        if kind == "vertex":
            # strand attaches to the occupant from prev_pos; it hooks iff the
            # attachment direction lies inside the corner's convex sector
            before = self._prev_waypoint(rid, w, t)
            m = self.movers[rid]
            leg = m.leg_after(t)
            if before is None or leg is None:
                return False
            wv = (rad(w.x), rad(w.y))
            u = (rad(before.x) - wv[0], rad(before.y) - wv[1])
            v = (rad(leg.b.x) - wv[0], rad(leg.b.y) - wv[1])
            s = (prev_pos[0] - wv[0], prev_pos[1] - wv[1])
            return _in_convex_sector_rad(u, s, v)
        return False

    def _tip_stays_inside(self, a1, a2, qa, t: Radical) -> bool:
        seg = _diff(a2, a1)
        rel = _diff(qa, a1)
        s_num = _dot_poly(rel, seg)
        gap = _poly_sub(_dot_poly(seg, seg), s_num)
        return _sign_after(gap, t) > 0

    def _scan_release_ties(self, t: Radical) -> None:
        for rid in sorted(self.cables):
            cable = self.cables[rid]
            k = 1
            while k <= len(cable.pivots):
                g = self._pivot_poly(cable, k, t)
                if not _poly_is_zero(g) and sign_of_poly_at(*g, t) == 0:
                    pivot = cable.pivots[k - 1]
                    after = _sign_after(g, t)
                    if after == -pivot.turn:
                        self._bump()
                        cable.pivots.pop(k - 1)
                        self._exempt.add(("acq", rid, pivot.entity))
                        self._log(t, f"release cable={rid} "
                                     f"pivot={pivot.entity} (scan)")
                        continue
                k += 1

    # -- main loop -----------------------------------------------------------------

    def run(self) -> SimResult:
        kin = self._kinematic_times()
        t_now: TimeValue = rad(0)
        self._exempt.clear()
        self._scan(rad(0))
        for t_hi in kin:
            if compare_times(t_hi, t_now) <= 0:
                continue
            self._check_robot_coincidence(t_now, t_hi)
            include_lo = False
            while True:
                cands = self._collect(t_now, t_hi, include_lo)
                if not cands:
                    break
                best = cands[0]
                for c in cands[1:]:
                    cmp = compare_times(c.time, best.time)
                    if cmp < 0 or (cmp == 0
                                   and c.order_key() < best.order_key()):
                        best = c
                if compare_times(best.time, t_now) > 0:
                    self._exempt.clear()
                t_now = best.time
                include_lo = True
                if best.kind == "release":
                    self._apply_release(best)
                else:
                    self._apply_acquire(best)
            self._exempt.clear()
            t_now = t_hi
            self._scan(t_hi)
        return self._finish()

    def _kinematic_times(self) -> list[Radical]:
        import functools

        times: list[Radical] = []
        for m in self.movers.values():
            for leg in m.legs:
                times.append(leg.t0)
                times.append(leg.t1)
        times.sort(key=functools.cmp_to_key(compare_times))
        ordered: list[Radical] = []
        for t in times:
            if not ordered or not (ordered[-1] - t).is_zero():
                ordered.append(t)
        return ordered

    def _finish(self) -> SimResult:
        positions = {rid: m.final_point for rid, m in self.movers.items()}
        cables = {
            rid: FinalCable(rid, tuple((p.entity, p.turn) for p in c.pivots))
            for rid, c in self.cables.items()
        }
        return SimResult(cables, positions, self.trace, self.events)


def _in_convex_sector_rad(u, w, v) -> bool:
    """Radical-coordinate variant of the strict convex-sector test."""
    cuv = (u[0] * v[1] - u[1] * v[0]).sign()
    if cuv == 0:
        raise SimulationDegeneracy("degenerate corner sector")
    if cuv < 0:
        u, v = v, u
    cuw = (u[0] * w[1] - u[1] * w[0]).sign()
    cwv = (w[0] * v[1] - w[1] * v[0]).sign()
    return cuw > 0 and cwv > 0


def simulate(scene: Scene, schedule: Schedule, collect_trace: bool = False,
             max_events: int | None = None) -> SimResult:
    """Run the schedule to completion and return the final configuration."""
    return Simulator(scene, schedule, collect_trace, max_events).run()
