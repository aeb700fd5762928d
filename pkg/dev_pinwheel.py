"""Construct rational pinwheel (fig-1 style) scenes and run the pipeline."""
from fractions import Fraction

from tangleplan.geometry import pt, orient_sign
from tangleplan.scene import Anchor, Robot, Scene, validate_scene
from tangleplan.config_check import check_configuration
from tangleplan.pig import build_pig
from tangleplan.nig import build_nig, detect_network_deadlock
from tangleplan.pipeline import plan
from tangleplan.simulator import configs_equal


def pinwheel(ts, ss, wrap_next=True, name="pinwheel"):
    robots = []
    for i in range(3):
        t = pt(*ts[i])
        s = pt(*ss[i])
        j = (i + 1) % 3 if wrap_next else (i - 1) % 3
        w = pt(*ts[j])
        turn = orient_sign(s, w, t)
        robots.append(Robot(i + 1, s, t, (s, w, t),
                            (Anchor("robot", j + 1, None, None, turn),)))
    return Scene(name, tuple(robots), ())


ts = [(0, 3), (-3, -2), (3, -2)]
ss = [(1, -7), (7, 1), (-6, 2)]

for wrap_next, label in ((True, "wrap-next (expect acyclic, fig1-like)"),
                         (False, "wrap-prev (expect cyclic, fig8b-like)")):
    print("=" * 20, label)
    scene = pinwheel(ts, ss, wrap_next)
    rep = validate_scene(scene)
    if not rep.ok:
        print(rep)
        continue
    print("non-intersecting:", check_configuration(scene).non_intersecting)
    g = build_pig(scene)
    print(g.dump())
    n = build_nig(g, scene)
    rep2 = detect_network_deadlock(n)
    print("acyclic:", rep2.acyclic, "cycles:", len(rep2.cycles))
    res = plan(scene, Fraction(1))
    print("verdict:", res.verdict, "bent:", [b.robot for b in res.bent],
          "verified:", res.verified)
    if res.simulation is not None:
        for rid, fc in sorted(res.simulation.cables.items()):
            print("  cable", rid, fc.pivots)
