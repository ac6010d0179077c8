"""Discrete curvatures: per-vertex k-family, per-edge phi/psi families on
closed triangle metrics, and the hexagon psi family on ideal surfaces."""

import math
from dataclasses import dataclass

from . import kernel
from .errors import DomainError
from .integrals import integrate_power
from .mesh import IdealSurface

HALF_PI = math.pi / 2


def vertex_key(i):
    return "v%d" % i


def vertex_index(key, vertex_count):
    if isinstance(key, int):
        i = key
    else:
        s = str(key)
        i = int(s[1:]) if s.startswith("v") else int(s)
    if not (0 <= i < vertex_count):
        raise DomainError("vertex %r out of range" % (key,))
    return i


def _as_vertex_map(values, vertex_count, what):
    out = [None] * vertex_count
    for k, v in values.items():
        out[vertex_index(k, vertex_count)] = float(v)
    for i, v in enumerate(out):
        if v is None:
            raise DomainError("missing %s for vertex v%d" % (what, i))
    return out


@dataclass(frozen=True)
class PolyhedralMetric:
    geometry: kernel.Geometry
    edge_lengths: dict

    def __post_init__(self):
        for k, v in self.edge_lengths.items():
            if not (v > 0) or not math.isfinite(v):
                raise DomainError("edge %s has non-positive length %r" % (k, v))

    def length(self, key):
        try:
            return self.edge_lengths[key]
        except KeyError:
            raise DomainError("metric has no length for edge %s" % key)


@dataclass(frozen=True)
class CirclePacking:
    geometry: kernel.Geometry
    radii: dict

    def __post_init__(self):
        norm = {}
        for k, v in self.radii.items():
            if not (v > 0) or not math.isfinite(v):
                raise DomainError("radius at %r is not positive: %r" % (k, v))
            i = int(str(k)[1:]) if str(k).startswith("v") else int(k)
            norm[vertex_key(i)] = float(v)
        object.__setattr__(self, "radii", norm)

    def radius(self, v):
        try:
            return self.radii[vertex_key(v)]
        except KeyError:
            raise DomainError("packing has no radius for vertex v%d" % v)

    def radius_array(self, vertex_count):
        return [self.radius(v) for v in range(vertex_count)]

    def to_metric(self, s):
        lengths = {e.key: self.radius(e.vertices[0]) + self.radius(e.vertices[1])
                   for e in s.edges}
        return PolyhedralMetric(self.geometry, lengths)

    def check(self, s):
        """Validate that every induced triangle is admissible (spherical case)."""
        for l in _triangle_lengths_iter(s, self):
            kernel.angles_from_lengths(self.geometry, l)


@dataclass(frozen=True)
class CurvatureVector:
    kind: str
    h: float
    values: dict

    def to_json(self):
        return {"kind": self.kind, "h": self.h, "values": dict(self.values)}


def _triangle_lengths(s, m, t):
    tri = s.triangles[t]
    if isinstance(m, CirclePacking):
        r = [m.radius(v) for v in tri]
        return (r[1] + r[2], r[0] + r[2], r[0] + r[1])
    return tuple(m.length(s.edges[s.edge_of_side(t, c)].key) for c in range(3))


def _triangle_lengths_iter(s, m):
    for t in range(len(s.triangles)):
        yield _triangle_lengths(s, m, t)


def _geometry_of(m):
    return m.geometry


def _all_angles(s, m):
    """Angle triples per triangle; entry c is the angle at local corner c."""
    g = _geometry_of(m)
    return [kernel.angles_from_lengths(g, l) for l in _triangle_lengths_iter(s, m)]


def k0_curvature(s, m):
    """2*pi minus the angle sum at each vertex."""
    angles = _all_angles(s, m)
    out = [2 * math.pi] * s.vertex_count
    for t, tri in enumerate(s.triangles):
        for c in range(3):
            out[tri[c]] -= angles[t][c]
    return CurvatureVector("k", 0.0, {vertex_key(v): out[v] for v in range(s.vertex_count)})


def kh_curvature(s, m, h):
    """The h-weighted vertex curvature; reduces to k0 at h = 0."""
    angles = _all_angles(s, m)
    out = [2 * math.pi] * s.vertex_count
    for t, tri in enumerate(s.triangles):
        for c in range(3):
            out[tri[c]] -= HALF_PI + integrate_power("tan_half", h, HALF_PI, angles[t][c])
    return CurvatureVector("k", float(h), {vertex_key(v): out[v] for v in range(s.vertex_count)})


def _require_closed(s):
    if not s.is_closed:
        raise DomainError("per-edge curvature needs a closed surface; "
                          "boundary edges have only one facing angle")


def phi_curvature(s, m, h, rivin_normalization=False):
    """Per-edge curvature from the two facing angles a, a'."""
    _require_closed(s)
    if rivin_normalization and h != 0:
        raise DomainError("the 2*pi - a - a' normalization is defined at h = 0 only")
    angles = _all_angles(s, m)
    values = {}
    for e in s.edges:
        facing = [angles[t][c] for (t, c) in e.sides]
        if rivin_normalization:
            values[e.key] = 2 * math.pi - facing[0] - facing[1]
        else:
            values[e.key] = sum(integrate_power("sin", h, a, HALF_PI) for a in facing)
    return CurvatureVector("phi", float(h), values)


def psi_curvature(s, m, h):
    """Per-edge curvature from the half angle-excess (b + c - a)/2 on both sides."""
    _require_closed(s)
    angles = _all_angles(s, m)
    values = {}
    for e in s.edges:
        v = 0.0
        for (t, c) in e.sides:
            a = angles[t][c]
            b = angles[t][(c + 1) % 3]
            cc = angles[t][(c + 2) % 3]
            v += integrate_power("cos", h, 0.0, (b + cc - a) / 2)
        values[e.key] = v
    return CurvatureVector("psi", float(h), values)


def is_delaunay(s, m):
    """Edge flags: non-negative psi_0 (the Delaunay condition)."""
    psi = psi_curvature(s, m, 0.0)
    return {k: v >= 0 for k, v in psi.values.items()}


def total_area(s, m):
    """Total area from angle sums: deficit in H2, excess in S2, zero in E2."""
    g = _geometry_of(m)
    if g is kernel.EUCLIDEAN:
        return 0.0
    area = 0.0
    for th in _all_angles(s, m):
        if g is kernel.HYPERBOLIC:
            area += math.pi - sum(th)
        else:
            area += sum(th) - math.pi
    return area


@dataclass(frozen=True)
class HexagonMetric:
    """Right-angled-hexagon metric on an ideal surface: one length per ideal
    edge; boundary arcs per hexagon follow from the hexagon cosine law."""
    edge_lengths: dict
    arcs: dict

    @staticmethod
    def from_edge_lengths(ideal, edge_lengths):
        s = ideal.surface
        for e in s.edges:
            if e.key not in edge_lengths:
                raise DomainError("missing length for ideal edge %s" % e.key)
            if not (edge_lengths[e.key] > 0):
                raise DomainError("ideal edge %s has non-positive length" % e.key)
        arcs = {}
        for t in range(len(s.triangles)):
            sides = tuple(edge_lengths[s.edges[s.edge_of_side(t, c)].key] for c in range(3))
            arcs[t] = kernel.hexagon_lengths(sides)
        return HexagonMetric({e.key: float(edge_lengths[e.key]) for e in s.edges}, arcs)

    @staticmethod
    def from_triangle_sides(ideal, sides):
        """Build from per-hexagon side triples; shared edges must agree to 1e-9."""
        s = ideal.surface
        lengths = {}
        for t in range(len(s.triangles)):
            for c in range(3):
                key = s.edges[s.edge_of_side(t, c)].key
                val = sides[t][c]
                if key in lengths and abs(lengths[key] - val) > 1e-9 * max(1.0, abs(val)):
                    raise DomainError("inconsistent shared-edge lengths on %s: %r vs %r"
                                      % (key, lengths[key], val))
                lengths[key] = float(val)
        return HexagonMetric.from_edge_lengths(ideal, lengths)


def hexagon_psi_curvature(ideal, hm, h):
    """Per-ideal-edge curvature from the facing and adjacent boundary arcs."""
    if not isinstance(ideal, IdealSurface):
        ideal = IdealSurface(ideal)
    s = ideal.surface
    values = {}
    for e in s.edges:
        v = 0.0
        for (t, c) in e.sides:
            b = hm.arcs[t]
            rho = (b[(c + 1) % 3] + b[(c + 2) % 3] - b[c]) / 2
            v += integrate_power("cosh", h, 0.0, rho)
        values[e.key] = v
    return CurvatureVector("psi", float(h), values)
