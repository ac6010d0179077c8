"""JSON formats for meshes, metrics, targets, and reports.

Serialization is deterministic: sorted keys, floats at 17 significant digits.
"""

import json
import json.encoder
import math

import numpy as np

from .curvature import CirclePacking, HexagonMetric, PolyhedralMetric
from .errors import DomainError
from .kernel import Geometry
from .mesh import IdealSurface, build_surface
from .solver import SolveTarget


def _floatstr(f):
    if math.isnan(f):
        return "NaN"
    if math.isinf(f):
        return "Infinity" if f > 0 else "-Infinity"
    return format(f, ".17g")


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError("not JSON serializable: %r" % (o,))


def dumps(obj):
    encode = json.encoder._make_iterencode(
        {}, _default, json.encoder.encode_basestring_ascii, None,
        _floatstr, ": ", ", ", True, False, False)
    return "".join(encode(obj, 0))


def mesh_to_json(s):
    return {"vertices": s.vertex_count,
            "triangles": [list(t) for t in s.triangles],
            "mode": s.mode}


def mesh_from_json(d):
    if not isinstance(d, dict):
        raise DomainError("mesh document must be a JSON object")
    for key in ("vertices", "triangles"):
        if key not in d:
            raise DomainError("mesh document misses %r" % key)
    return build_surface(d["vertices"], d["triangles"], d.get("mode", "closed"))


def metric_from_json(s, d, hexagon=False):
    """Bind a metric document to a surface.

    {"geometry": g, "radii": {...}} -> CirclePacking
    {"geometry": g, "edge_lengths": {...}} -> PolyhedralMetric
    hexagon=True with {"edge_lengths": {...}} -> HexagonMetric
    """
    if not isinstance(d, dict):
        raise DomainError("metric document must be a JSON object")
    if hexagon:
        if "edge_lengths" not in d:
            raise DomainError("hexagon metric document needs edge_lengths")
        ideal = s if isinstance(s, IdealSurface) else IdealSurface(s)
        return HexagonMetric.from_edge_lengths(ideal, d["edge_lengths"])
    geometry = Geometry.from_name(d.get("geometry", ""))
    if "radii" in d:
        packing = CirclePacking(geometry, d["radii"])
        packing.radius_array(s.vertex_count)  # coverage check
        return packing
    if "edge_lengths" in d:
        lengths = d["edge_lengths"]
        for e in s.edges:
            if e.key not in lengths:
                raise DomainError("metric misses edge %s" % e.key)
        return PolyhedralMetric(geometry, {e.key: float(lengths[e.key])
                                           for e in s.edges})
    raise DomainError("metric document needs either radii or edge_lengths")


def target_from_json(d, kind="k", h=0.0):
    """Accept {"kind", "h", "values"} or a bare key->value map."""
    if not isinstance(d, dict):
        raise DomainError("target document must be a JSON object")
    if "values" in d:
        return SolveTarget(d.get("kind", kind), float(d.get("h", h)),
                           dict(d["values"]))
    return SolveTarget(kind, float(h), dict(d))


def load(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError("malformed JSON in %s: %s" % (path, exc))
