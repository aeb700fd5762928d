"""Exact planar predicates and primitives.

All coordinates are ``fractions.Fraction``.  Every predicate (orientation,
crossing, containment parity) is decided by exact integer arithmetic on those
rationals; no epsilons anywhere.  Degenerate inputs raise instead of guessing,
because the rest of the pipeline branches on these signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateAngles, DegenerateContact, GeneralPositionError
from .exact import Radical


def frac(v) -> Fraction:
    """Coerce ints, decimal strings, and Fractions to an exact Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not exact; pass a decimal string instead")
    return Fraction(v)


@dataclass(frozen=True, slots=True)
class Point:
    x: Fraction
    y: Fraction

    def __repr__(self):
        return f"({self.x}, {self.y})"


def pt(x, y) -> Point:
    return Point(frac(x), frac(y))


Vec = tuple[Fraction, Fraction]


def vec(a: Point, b: Point) -> Vec:
    """Direction vector from a to b."""
    return (b.x - a.x, b.y - a.y)


def cross(u: Vec, v: Vec) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Vec, v: Vec) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


class Orientation(Enum):
    COUNTERCLOCKWISE = 1
    CLOCKWISE = -1
    COLLINEAR = 0


CCW = Orientation.COUNTERCLOCKWISE
CW = Orientation.CLOCKWISE


def orient_sign(p: Point, q: Point, r: Point) -> int:
    """Sign of the signed area of triangle pqr: +1 ccw, -1 cw, 0 collinear."""
    v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def orient(p: Point, q: Point, r: Point) -> Orientation:
    return Orientation(orient_sign(p, q, r))


@dataclass(frozen=True, slots=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise GeneralPositionError(f"degenerate segment at {self.a}")


def on_segment_closed(p: Point, a: Point, b: Point) -> bool:
    """p lies on the closed segment [a, b] (collinearity included)."""
    if orient_sign(a, b, p) != 0:
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def strictly_between(p: Point, a: Point, b: Point) -> bool:
    return on_segment_closed(p, a, b) and p != a and p != b


def segment_crossing(s1: Segment, s2: Segment) -> Point | None:
    """Proper interior crossing point of two segments, or None if disjoint.

    Raises DegenerateContact for every kind of touching that is not a proper
    crossing: shared endpoints, an endpoint on the other's interior, and
    collinear overlap.  Such contact means the scene is not in general
    position and must be rejected by the caller.
    """
    a, b, c, d = s1.a, s1.b, s2.a, s2.b
    o1 = orient_sign(a, b, c)
    o2 = orient_sign(a, b, d)
    o3 = orient_sign(c, d, a)
    o4 = orient_sign(c, d, b)
    if o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        if o1 != o2 and o3 != o4:
            return line_intersection(a, b, c, d)
        return None
    # some orientation is zero: any actual contact is degenerate
    touches = False
    if o1 == 0 and on_segment_closed(c, a, b):
        touches = True
    if o2 == 0 and on_segment_closed(d, a, b):
        touches = True
    if o3 == 0 and on_segment_closed(a, c, d):
        touches = True
    if o4 == 0 and on_segment_closed(b, c, d):
        touches = True
    if touches:
        raise DegenerateContact(
            f"segments ({a}-{b}) and ({c}-{d}) touch degenerately")
    return None


def line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point:
    """Intersection of the (non-parallel) lines ab and cd."""
    r = vec(a, b)
    s = vec(c, d)
    denom = cross(r, s)
    if denom == 0:
        raise DegenerateContact("parallel lines do not meet in one point")
    t = cross(vec(a, c), s) / denom
    return Point(a.x + t * r[0], a.y + t * r[1])


class Containment(Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    ON_BOUNDARY = "boundary"


_RAY_DIRECTIONS: tuple[Vec, ...] = tuple(
    (Fraction(dx), Fraction(dy))
    for dx, dy in [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, 3), (3, 1),
                   (2, 3), (3, 2), (1, 5), (5, 1), (3, 5), (5, 3), (7, 2)]
)


def point_in_polygon(p: Point, boundary: Sequence[Point]) -> Containment:
    """Even-odd containment of p in the closed chain `boundary`.

    The chain may self-intersect (thin cable polygons do); parity is what the
    pair-interaction theory is stated in terms of, so that is what we compute.
    """
    n = len(boundary)
    if n < 2:
        return Containment.OUTSIDE
    edges = [(boundary[i], boundary[(i + 1) % n]) for i in range(n)]
    for a, b in edges:
        if a == b:
            continue
        if on_segment_closed(p, a, b):
            return Containment.ON_BOUNDARY
    for d in _RAY_DIRECTIONS:
        parity = _ray_parity(p, d, edges)
        if parity is not None:
            return Containment.INSIDE if parity else Containment.OUTSIDE
    raise GeneralPositionError("no usable ray direction for parity test")


def _ray_parity(p: Point, d: Vec, edges) -> bool | None:
    """Parity of proper crossings of ray p+t*d (t>0) with the edges.

    Returns None when a vertex lies exactly on the ray, which would make the
    count ambiguous; caller retries with another direction.
    """
    count = 0
    for a, b in edges:
        if a == b:
            continue
        sa = _sign(cross(d, vec(p, a)))
        sb = _sign(cross(d, vec(p, b)))
        if sa == 0 or sb == 0:
            # vertex on ray line; only a problem if on the forward ray
            for v, s in ((a, sa), (b, sb)):
                if s == 0 and dot(d, vec(p, v)) >= 0:
                    return None
            continue
        if sa == sb:
            continue
        # edge straddles the ray line; crossing is forward iff p is on the
        # correct side of the edge relative to d
        denom = cross(d, vec(a, b))
        tnum = cross(vec(p, a), vec(a, b))
        if denom == 0:
            return None
        if _sign(tnum) == 0:
            return None  # p on the edge's line: boundary handled earlier
        if _sign(tnum) == _sign(denom):
            count += 1
    return count % 2 == 1


def _sign(v: Fraction) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def validate_polyline(points: Sequence[Point]) -> None:
    """Enforce the polyline invariants: distinct neighbours, no straight
    interior vertex (three consecutive collinear points)."""
    if len(points) < 2:
        raise GeneralPositionError("polyline needs at least two vertices")
    for i in range(len(points) - 1):
        if points[i] == points[i + 1]:
            raise GeneralPositionError(
                f"repeated consecutive vertex {points[i]} in polyline")
    for i in range(len(points) - 2):
        if orient_sign(points[i], points[i + 1], points[i + 2]) == 0:
            raise GeneralPositionError(
                f"three consecutive collinear vertices at {points[i + 1]}")


def polyline_length(points: Sequence[Point]) -> Radical:
    """Exact Euclidean length of the chain."""
    total = Radical()
    for i in range(len(points) - 1):
        dx = points[i + 1].x - points[i].x
        dy = points[i + 1].y - points[i].y
        total = total + Radical.sqrt(dx * dx + dy * dy)
    return total


def segment_length(a: Point, b: Point) -> Radical:
    dx = b.x - a.x
    dy = b.y - a.y
    return Radical.sqrt(dx * dx + dy * dy)


# ---------------------------------------------------------------------------
# Angular sector predicates (used by the route-meeting tests).
# All take direction vectors anchored at a common node.
# ---------------------------------------------------------------------------


def _require_noncollinear(u: Vec, v: Vec, what: str) -> Fraction:
    c = cross(u, v)
    if c == 0:
        raise DegenerateAngles(f"collinear edge directions in {what}")
    return c


def ccw_angle_gt_pi(u: Vec, v: Vec) -> bool:
    """Counterclockwise angle from ray u to ray v exceeds pi."""
    return _require_noncollinear(u, v, "angle test") < 0


def cw_angle_gt_pi(u: Vec, v: Vec) -> bool:
    """Clockwise angle from ray u to ray v exceeds pi."""
    return _require_noncollinear(u, v, "angle test") > 0


def in_ccw_sector(u: Vec, w: Vec, v: Vec) -> bool:
    """Ray w lies strictly inside the ccw sweep from ray u to ray v."""
    cuv = _require_noncollinear(u, v, "sector bounds")
    cuw = cross(u, w)
    cwv = cross(w, v)
    if cuw == 0 or cwv == 0:
        if cuw == 0 and dot(u, w) > 0:
            raise DegenerateAngles("test ray collinear with sector bound")
        if cwv == 0 and dot(w, v) > 0:
            raise DegenerateAngles("test ray collinear with sector bound")
    if cuv > 0:  # sector < pi
        return cuw > 0 and cwv > 0
    return cuw > 0 or cwv > 0


def in_cw_sector(u: Vec, w: Vec, v: Vec) -> bool:
    """Ray w lies strictly inside the cw sweep from ray u to ray v."""
    return in_ccw_sector(v, w, u)


def in_convex_sector(u: Vec, w: Vec, v: Vec) -> bool:
    """Ray w strictly inside the < pi sector between rays u and v."""
    cuv = _require_noncollinear(u, v, "convex sector bounds")
    if cuv > 0:
        return in_ccw_sector(u, w, v)
    return in_ccw_sector(v, w, u)


def in_concave_sector(u: Vec, w: Vec, v: Vec) -> bool:
    """Ray w strictly inside the > pi sector between rays u and v."""
    cuv = _require_noncollinear(u, v, "concave sector bounds")
    if cuv > 0:
        return in_ccw_sector(v, w, u)
    return in_ccw_sector(u, w, v)


# ---------------------------------------------------------------------------
# Convex chain over a wedge (cable retraction helper).
# ---------------------------------------------------------------------------


def point_in_triangle_strict(p: Point, a: Point, b: Point, c: Point) -> bool:
    s1 = orient_sign(a, b, p)
    s2 = orient_sign(b, c, p)
    s3 = orient_sign(c, a, p)
    if 0 in (s1, s2, s3):
        if on_segment_closed(p, a, b) or on_segment_closed(p, b, c) \
                or on_segment_closed(p, c, a):
            return False
        return False
    return s1 == s2 == s3


def point_on_triangle_boundary(p: Point, a: Point, b: Point, c: Point) -> bool:
    return (on_segment_closed(p, a, b) or on_segment_closed(p, b, c)
            or on_segment_closed(p, c, a))


def convex_chain(a: Point, b: Point, pins: Iterable[Point], turn: int) -> list[Point]:
    """Taut chain from a to b over `pins`, every interior turn of sign `turn`.

    This is the shape a rubber band settles into when the wedge vertex it was
    bent around disappears: the convex hull of the caught pins on the side
    the band came from.  Pins strictly below the chain are untouched and are
    simply not returned.
    """
    def key(p: Point):
        return dot(vec(a, p), vec(a, b))

    ordered = sorted(pins, key=key)
    for i in range(len(ordered) - 1):
        if key(ordered[i]) == key(ordered[i + 1]):
            raise GeneralPositionError("pins project identically onto wedge base")
    hull: list[Point] = [a]
    for p in list(ordered) + [b]:
        while len(hull) >= 2:
            s = orient_sign(hull[-2], hull[-1], p)
            if s == turn:
                break
            if s == 0:
                raise GeneralPositionError("collinear pins in retraction wedge")
            hull.pop()
        hull.append(p)
    return hull[1:-1]
