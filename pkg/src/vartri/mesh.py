"""Combinatorial triangulated surfaces.

Edges are (triangle, side) equivalence classes, so parallel edges between the
same vertex pair are allowed: repeated occurrences of a vertex pair are paired
off in order of appearance.  Everything is immutable after build_surface.
"""

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import MeshError


class EdgeSide(NamedTuple):
    triangle: int
    facing_corner: int          # local index of the corner opposite the edge
    adjacent_corners: tuple     # the two local corners on the edge


@dataclass(frozen=True)
class EdgeClass:
    index: int
    vertices: tuple             # (a, b) with a <= b
    key: str                    # "a-b", "a-b#1", ... for parallel classes
    sides: tuple                # one or two (triangle, opposite-corner) pairs


@dataclass(frozen=True)
class TriangulatedSurface:
    vertex_count: int
    triangles: tuple
    mode: str
    edges: tuple
    _edge_of_side: dict = field(repr=False)
    _corners_of_vertex: tuple = field(repr=False)
    _stars: tuple = field(repr=False)

    @property
    def is_closed(self):
        return self.mode == "closed"

    def edge_index(self, key):
        for e in self.edges:
            if e.key == key:
                return e.index
        raise MeshError("no edge with key %r" % (key,))

    def edge_of_side(self, triangle, corner):
        return self._edge_of_side[(triangle, corner)]

    def boundary_edges(self):
        return [e for e in self.edges if len(e.sides) == 1]


def _vertex_pair(tri, corner):
    a, b = tri[(corner + 1) % 3], tri[(corner + 2) % 3]
    return (a, b) if a < b else (b, a)


def build_surface(vertex_count, triangles, mode="closed"):
    """Build a surface from triangle triples; mode is "closed" or "bordered"."""
    if mode not in ("closed", "bordered"):
        raise MeshError("mode must be 'closed' or 'bordered', got %r" % (mode,))
    if not isinstance(vertex_count, int) or vertex_count <= 0:
        raise MeshError("vertex_count must be a positive integer")
    tris = []
    for t, tri in enumerate(triangles):
        tri = tuple(int(v) for v in tri)
        if len(tri) != 3:
            raise MeshError("triangle %d is not a triple: %r" % (t, tri))
        for v in tri:
            if not (0 <= v < vertex_count):
                raise MeshError("triangle %d uses invalid vertex %d" % (t, v))
        if len(set(tri)) != 3:
            raise MeshError("triangle %d repeats a vertex: %r" % (t, tri))
        tris.append(tri)
    if not tris:
        raise MeshError("surface needs at least one triangle")

    occurrences = OrderedDict()
    for t, tri in enumerate(tris):
        for corner in range(3):
            occurrences.setdefault(_vertex_pair(tri, corner), []).append((t, corner))

    classes = []
    for pair, occ in occurrences.items():
        if mode == "closed" and len(occ) % 2 != 0:
            raise MeshError("edge %d-%d has %d incidences" % (pair[0], pair[1], len(occ)),
                            edge=list(pair), incidences=len(occ))
        for i in range(0, len(occ), 2):
            classes.append((pair, tuple(occ[i:i + 2])))

    classes.sort(key=lambda c: (c[0][0], c[0][1], c[1][0][0], c[1][0][1]))
    edges = []
    seen_pairs = {}
    edge_of_side = {}
    for idx, (pair, sides) in enumerate(classes):
        n = seen_pairs.get(pair, 0)
        seen_pairs[pair] = n + 1
        key = "%d-%d" % pair if n == 0 else "%d-%d#%d" % (pair[0], pair[1], n)
        edges.append(EdgeClass(idx, pair, key, sides))
        for side in sides:
            edge_of_side[side] = idx

    corners_of_vertex = [[] for _ in range(vertex_count)]
    for t, tri in enumerate(tris):
        for c in range(3):
            corners_of_vertex[tri[c]].append((t, c))
    for v, corners in enumerate(corners_of_vertex):
        if not corners:
            raise MeshError("dangling vertex %d" % v, vertex=v)

    stars = [None] * vertex_count
    if mode == "closed":
        for v in range(vertex_count):
            stars[v] = _link_cycle(v, corners_of_vertex[v], tris, edge_of_side, edges)
    else:
        for v in range(vertex_count):
            stars[v] = tuple(corners_of_vertex[v])

    return TriangulatedSurface(vertex_count, tuple(tris), mode, tuple(edges),
                               edge_of_side, tuple(map(tuple, corners_of_vertex)),
                               tuple(stars))


def _link_cycle(v, corners, tris, edge_of_side, edges):
    """Walk the corners around v; raises unless they form one cycle."""
    # each corner (t, c) at v is flanked by the edge classes of sides
    # (t, (c+1)%3) and (t, (c+2)%3); an edge class joins its two sides' corners
    corner_of_side = {}
    for (t, c) in corners:
        for other in ((c + 1) % 3, (c + 2) % 3):
            corner_of_side[(t, other)] = (t, c)
    links = {corner: [] for corner in corners}
    for e in edges:
        if v not in e.vertices:
            continue
        if len(e.sides) != 2:
            raise MeshError("vertex %d touches boundary edge %s in closed mode"
                            % (v, e.key))
        c0, c1 = (corner_of_side[s] for s in e.sides)
        links[c0].append((e.index, c1))
        links[c1].append((e.index, c0))
    start = corners[0]
    order = [start]
    used = set()
    here = start
    while True:
        step = None
        for eidx, nxt in links[here]:
            if (eidx, here) not in used:
                step = (eidx, nxt)
                break
        if step is None:
            break
        eidx, nxt = step
        used.add((eidx, here))
        used.add((eidx, nxt))
        if nxt == start:
            break
        order.append(nxt)
        here = nxt
    if len(order) != len(corners):
        raise MeshError("link of vertex %d is not a single cycle" % v, vertex=v)
    return tuple(order)


def euler_characteristic(s):
    return s.vertex_count - len(s.edges) + len(s.triangles)


def vertex_star(s, v):
    """All (triangle, corner) incidences at v, in cyclic order on closed surfaces."""
    if not isinstance(v, int) or not (0 <= v < s.vertex_count):
        raise MeshError("invalid vertex index %r" % (v,))
    return s._stars[v]


def resolve_edge(s, e):
    """Accepts an edge index, a key string, or an unordered vertex pair."""
    if isinstance(e, int):
        if not (0 <= e < len(s.edges)):
            raise MeshError("invalid edge index %r" % (e,))
        return s.edges[e]
    if isinstance(e, str):
        return s.edges[s.edge_index(e)]
    pair = tuple(sorted(e))
    hits = [ec for ec in s.edges if ec.vertices == pair]
    if not hits:
        raise MeshError("no edge with vertices %r" % (pair,))
    if len(hits) > 1:
        raise MeshError("vertex pair %r names %d parallel edges; use a key"
                        % (pair, len(hits)))
    return hits[0]


def edge_sides(s, e):
    """The one or two sides of an edge: facing corner plus the two on-edge corners."""
    ec = resolve_edge(s, e)
    out = []
    for (t, a) in ec.sides:
        out.append(EdgeSide(t, a, ((a + 1) % 3, (a + 2) % 3)))
    return out


@dataclass(frozen=True)
class IdealSurface:
    """Ideal triangulation: every edge has two sides; triangle corners become
    boundary arcs (arc at corner c of triangle t is labeled (t, c))."""
    surface: TriangulatedSurface

    @staticmethod
    def from_triangles(vertex_count, triangles, mode="bordered"):
        return IdealSurface(build_surface(vertex_count, triangles, mode))

    def __post_init__(self):
        for e in self.surface.edges:
            if len(e.sides) != 2:
                raise MeshError("ideal edge %s has %d side(s); hexagon operations "
                                "need two" % (e.key, len(e.sides)))

    @property
    def edges(self):
        return self.surface.edges

    @property
    def triangles(self):
        return self.surface.triangles

    def boundary_arcs(self, t):
        return ((t, 0), (t, 1), (t, 2))
