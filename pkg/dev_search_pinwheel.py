"""Grid-search pinwheel start placements; the exact pipeline is the judge."""
import math
from fractions import Fraction

from tangleplan.geometry import pt, orient_sign
from tangleplan.scene import Anchor, Robot, Scene, validate_scene
from tangleplan.pig import build_pig
from tangleplan.nig import build_nig, detect_network_deadlock
from tangleplan.errors import TangleError


def snap(x, den=16):
    return Fraction(x).limit_denominator(den)


def build(ts, ss, wrap_next=True, name="pinwheel"):
    robots = []
    for i in range(3):
        t = pt(*ts[i])
        s = pt(*ss[i])
        j = (i + 1) % 3 if wrap_next else (i - 1) % 3
        w = pt(*ts[j])
        turn = orient_sign(s, w, t)
        if turn == 0:
            return None
        robots.append(Robot(i + 1, s, t, (s, w, t),
                            (Anchor("robot", j + 1, None, None, turn),)))
    return Scene(name, tuple(robots), ())


TS = [(Fraction(0), Fraction(3)),
      (Fraction(-26, 10), Fraction(-15, 10)),
      (Fraction(26, 10), Fraction(-15, 10))]
TANG = [math.atan2(float(t[1]), float(t[0])) for t in TS]


def starts(alpha_deg, R):
    out = []
    for i in range(3):
        j = (i + 1) % 3
        base = math.radians(alpha_deg) + TANG[j]
        x = float(TS[j][0]) + R * math.cos(base)
        y = float(TS[j][1]) + R * math.sin(base)
        out.append((snap(x), snap(y)))
    return out


def classify(scene):
    rep = validate_scene(scene)
    if not rep.ok:
        return "invalid:" + rep.violations[0].code
    try:
        g = build_pig(scene)
    except TangleError as exc:
        return f"pig:{type(exc).__name__}"
    if len(g.directed) != 3 or g.bidirectional:
        return f"edges:{len(g.directed)}"
    try:
        n = build_nig(g, scene)
    except TangleError as exc:
        return f"nig:{type(exc).__name__}"
    return "acyclic" if detect_network_deadlock(n).acyclic else "cyclic"


hits = {"acyclic": [], "cyclic": []}
for alpha in range(0, 360, 10):
    for R in (5, 7, 9):
        ss = starts(alpha, R)
        scene = build(TS, ss, wrap_next=True)
        if scene is None:
            continue
        res = classify(scene)
        if res in hits and len(hits[res]) < 4:
            hits[res].append((alpha, R, ss))
            print(f"alpha={alpha} R={R}: {res}  starts={[(str(a),str(b)) for a,b in ss]}")
if not (hits["acyclic"] and hits["cyclic"]):
    print("summary incomplete", {k: len(v) for k, v in hits.items()})
