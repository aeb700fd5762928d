"""tangleplan: coordinated straight-line motion planning for tethered
planar robots, with a built-in taut-cable simulator for verification."""

from .errors import TangleError
from .geometry import Point, pt
from .pipeline import PlanResult, plan
from .scene import Scene, load_scene, scene_from_dict, validate_scene
from .simulator import configs_equal, simulate

__all__ = [
    "Point",
    "PlanResult",
    "Scene",
    "TangleError",
    "configs_equal",
    "load_scene",
    "plan",
    "pt",
    "scene_from_dict",
    "simulate",
    "validate_scene",
]
