"""JSON (de)serialization of surface specifications.

Accepted shapes:
    {"kind": "tube", "curve": {"family": ..., "params": {...}}, "radius": r}
    {"kind": "sphere", "radius": r}
    {"kind": "ellipsoid", "semiaxes": [ax, ay, az]}
    {"kind": "cylinder", "radius": r, "height": [lo, hi]}
    {"kind": "plane"}
"""

from __future__ import annotations

from . import geom
from .errors import InvalidSpecError
from .frenet import curve_from_json
from .tubes import TubeSpec, tube_surface


def surface_from_json(obj):
    """Build a SurfaceSpec (and the TubeSpec, when applicable) from JSON.

    Returns (surface, tube_spec_or_None).
    """
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidSpecError(f"surface spec must be an object with 'kind': {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "tube":
            spec = TubeSpec(curve=curve_from_json(obj["curve"]), radius=float(obj["radius"]))
            return tube_surface(spec), spec
        if kind == "sphere":
            return geom.sphere(float(obj.get("radius", 1.0))), None
        if kind == "ellipsoid":
            ax, ay, az = obj.get("semiaxes", (1.0, 1.3, 0.7))
            return geom.ellipsoid(ax, ay, az), None
        if kind == "cylinder":
            height = obj.get("height", (-2.0, 2.0))
            return geom.cylinder(float(obj.get("radius", 1.0)), tuple(height)), None
        if kind == "plane":
            return geom.plane(), None
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpecError(f"malformed {kind!r} spec: {obj!r}") from exc
    raise InvalidSpecError(f"unknown surface kind {kind!r}")
