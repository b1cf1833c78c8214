"""Planar arrangements of polygon edges, hull bridges and candidate curves.

Given the input polygons B and a candidate curve set, this module builds the
planar subdivision of the plane induced by all polygon edges, the convex-hull
boundary and the candidates: every pairwise intersection becomes a vertex,
curves split into fragments, and faces are traced from the rotation system
and classified as polygon cells, free cells (inside conv(B) but outside B) or
outer. Per-face areas (exact, with circular-segment corrections) and per-edge
lengths feed the min-cut solver.

Construction is tolerance-based: intersection points within SNAP_TOL are
clustered to a canonical representative (first come, stable order) and
coincident fragments are merged, which keeps exactly-overlapping inputs
(touching polygons, collinear hull bridges) from producing phantom slivers.

The same machinery builds the constrained Delaunay triangulation subdivision:
triangle edges are just more segment curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .candidates import CandidateArc
from .errors import ConstraintIntersection, NumericalDegeneracy
from .geom import (
    EPS,
    CircularArc,
    DirectedSegment,
    Fragment,
    Point,
    Polygon,
    PolygonSet,
    angle_of,
    ccw_span,
    dist,
    frag_end,
    frag_start,
    norm_angle,
    point_segment_distance,
    shoelace_term,
)
from .intersect import (
    arc_arc_intersections,
    arc_segment_intersections,
    bboxes_overlap,
    same_circle,
    segment_segment_intersection,
)

#: Intersection points closer than this are snapped to one vertex.
SNAP_TOL = 1e-7

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# public data model


@dataclass
class SubEdge:
    """One fragment of a source curve between two arrangement vertices.

    ``geom_kind`` is "seg" or "arc"; arc fragments carry their supporting
    circle and the angles of both endpoints. ``sources`` records every curve
    the fragment came from: ("polygon", edge-id), ("hull", k) or
    ("cand", candidate-id). face_left / face_right are the faces seen when
    travelling a -> b.
    """

    a: int
    b: int
    geom_kind: str
    length: float
    sources: tuple
    center: Optional[Point] = None
    radius: float = 0.0
    phi_a: float = 0.0
    phi_b: float = 0.0
    ccw: bool = True  # orientation of travel a -> b around the center
    face_left: int = -1
    face_right: int = -1

    @property
    def constrained(self) -> bool:
        return any(s[0] == "polygon" for s in self.sources)

    def fragment(self, vertices: Sequence[Point], forward: bool = True) -> Fragment:
        """Geometry of this edge as a directed fragment."""
        pa, pb = vertices[self.a], vertices[self.b]
        if not forward:
            pa, pb = pb, pa
        if self.geom_kind == "seg":
            return DirectedSegment(pa, pb)
        if forward:
            span = ccw_span(self.phi_a, self.phi_b) if self.ccw else ccw_span(self.phi_b, self.phi_a)
            return CircularArc(self.center, self.radius, self.phi_a, max(span, 1e-12), self.ccw)
        span = ccw_span(self.phi_a, self.phi_b) if self.ccw else ccw_span(self.phi_b, self.phi_a)
        return CircularArc(self.center, self.radius, self.phi_b, max(span, 1e-12), not self.ccw)


@dataclass
class Face:
    """A face of the arrangement: one outer cycle plus optional hole cycles.

    Cycles are lists of directed half-edge ids (half-edge 2*e is edge e
    travelled a->b, 2*e+1 the reverse). role is "free-cell", "polygon-cell"
    or "outer"; the unbounded face and every bounded face outside conv(B)
    are "outer".
    """

    id: int
    cycles: list = field(default_factory=list)
    area: float = 0.0
    role: str = "free-cell"
    probe: Optional[Point] = None


@dataclass
class Subdivision:
    """Immutable result of the arrangement build."""

    vertices: list
    edges: list
    faces: list
    outer_face_id: int
    n_components: int
    he_next: list
    he_face: list
    convex_hull_area: float
    polygon_area: float

    def free_faces(self) -> list:
        return [f for f in self.faces if f.role == "free-cell"]

    def polygon_faces(self) -> list:
        return [f for f in self.faces if f.role == "polygon-cell"]

    def euler_characteristic(self) -> tuple[int, int, int, int]:
        """(V, E, F, C) including the outer face."""
        return (len(self.vertices), len(self.edges), len(self.faces), self.n_components)

    def check_structure(self, rel_tol: float = 1e-6) -> None:
        """Euler formula and area conservation; raises on failure."""
        v, e, f, c = self.euler_characteristic()
        if v - e + f != 1 + c:
            raise NumericalDegeneracy(f"Euler check failed: V={v} E={e} F={f} C={c}")
        covered = sum(fc.area for fc in self.faces if fc.role != "outer")
        ref = self.convex_hull_area
        if ref > 0 and abs(covered - ref) > rel_tol * max(ref, 1.0):
            raise NumericalDegeneracy(
                f"area conservation failed: faces {covered} vs hull {ref}"
            )

    def half_edge_fragment(self, he: int) -> Fragment:
        return self.edges[he >> 1].fragment(self.vertices, forward=(he & 1) == 0)


# ---------------------------------------------------------------------------
# input curves


@dataclass(frozen=True)
class SourceCurve:
    geom: Fragment
    source: tuple  # ("polygon", edge-id) | ("hull", k) | ("cand", cand-id)


def polygon_curves(B: PolygonSet) -> list[SourceCurve]:
    out = []
    for i, e in enumerate(B.edges()):
        out.append(SourceCurve(e, ("polygon", i)))
    return out


def hull_bridge_curves(B: PolygonSet) -> list[SourceCurve]:
    """Sub-segments of the convex hull boundary not covered by polygon edges."""
    hull = B.convex_hull()
    verts = B.vertices()
    edges = B.edges()
    out = []
    k = 0
    for i in range(len(hull)):
        a, b = hull[i], hull[(i + 1) % len(hull)]
        ab = DirectedSegment(a, b)
        # all input vertices on this hull edge, ordered along it
        stops = [(0.0, a), (1.0, b)]
        for v in verts:
            if point_segment_distance(v, a, b) <= SNAP_TOL:
                t = ((v.x - a.x) * (b.x - a.x) + (v.y - a.y) * (b.y - a.y)) / (ab.length ** 2)
                if SNAP_TOL < t < 1.0 - SNAP_TOL:
                    stops.append((t, v))
        stops.sort(key=lambda s: s[0])
        for (t0, p), (t1, q) in zip(stops, stops[1:]):
            if dist(p, q) <= SNAP_TOL:
                continue
            mid = Point(0.5 * (p.x + q.x), 0.5 * (p.y + q.y))
            covered = any(
                point_segment_distance(mid, e.start, e.end) <= SNAP_TOL for e in edges
            )
            if not covered:
                out.append(SourceCurve(DirectedSegment(p, q), ("hull", k)))
                k += 1
    return out


def candidate_curves(cands: Sequence[CandidateArc]) -> list[SourceCurve]:
    return [SourceCurve(c.arc, ("cand", i)) for i, c in enumerate(cands)]


# ---------------------------------------------------------------------------
# vertex snapping


class _Snapper:
    """First-come clustering of points within SNAP_TOL onto representatives."""

    def __init__(self, tol: float | None = None):
        # read the module global at call time so runtime overrides apply
        self.tol = SNAP_TOL if tol is None else tol
        self.points: list[Point] = []
        self._grid: dict[tuple[int, int], list[int]] = {}

    def _cell(self, p: Point) -> tuple[int, int]:
        return (int(math.floor(p.x / self.tol)), int(math.floor(p.y / self.tol)))

    def add(self, p: Point) -> int:
        cx, cy = self._cell(p)
        best = -1
        best_d = self.tol
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for idx in self._grid.get((cx + dx, cy + dy), ()):
                    d = dist(p, self.points[idx])
                    if d <= best_d:
                        best_d = d
                        best = idx
        if best >= 0:
            return best
        idx = len(self.points)
        self.points.append(p)
        self._grid.setdefault((cx, cy), []).append(idx)
        return idx


# ---------------------------------------------------------------------------
# arrangement core


def _curve_param_of_point(geom: Fragment, p: Point) -> float:
    if isinstance(geom, DirectedSegment):
        from .geom import project_t

        return min(max(project_t(geom.start, geom.end, p), 0.0), 1.0)
    return min(max(geom.param_of_angle(angle_of(geom.center, p)), 0.0), 1.0)


def _pair_breakpoints(c1: SourceCurve, c2: SourceCurve) -> list[tuple[float, float, Point]]:
    """Contact points between two curves as (t1, t2, point) triples."""
    g1, g2 = c1.geom, c2.geom
    seg1 = isinstance(g1, DirectedSegment)
    seg2 = isinstance(g2, DirectedSegment)
    if seg1 and seg2:
        kind, hits = segment_segment_intersection(g1, g2, SNAP_TOL)
        return hits  # overlap endpoints double as split points
    if seg1 and not seg2:
        return [(ts, ta, p) for ta, ts, p in arc_segment_intersections(g2, g1, SNAP_TOL)]
    if not seg1 and seg2:
        return arc_segment_intersections(g1, g2, SNAP_TOL)
    if same_circle(g1, g2):
        # overlapping arcs on one circle: split each at the other's endpoints
        out = []
        for p in (g2.start_point, g2.end_point):
            phi = angle_of(g1.center, p)
            if g1.contains_angle(phi, SNAP_TOL):
                out.append((g1.param_of_angle(phi), _curve_param_of_point(g2, p), p))
        for p in (g1.start_point, g1.end_point):
            phi = angle_of(g2.center, p)
            if g2.contains_angle(phi, SNAP_TOL):
                out.append((_curve_param_of_point(g1, p), g2.param_of_angle(phi), p))
        return out
    return arc_arc_intersections(g1, g2, SNAP_TOL)


def _wrap_pi(x: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    return math.atan2(math.sin(x), math.cos(x))


def _departure(edge: SubEdge, vertices: list[Point], at_a: bool) -> tuple[float, float]:
    """(tangent angle, signed curvature) leaving the given endpoint."""
    if edge.geom_kind == "seg":
        p = vertices[edge.a]
        q = vertices[edge.b]
        if not at_a:
            p, q = q, p
        return (math.atan2(q.y - p.y, q.x - p.x), 0.0)
    phi = edge.phi_a if at_a else edge.phi_b
    ccw = edge.ccw if at_a else not edge.ccw
    if ccw:
        return (_wrap_pi(phi + 0.5 * math.pi), 1.0 / edge.radius)
    return (_wrap_pi(phi - 0.5 * math.pi), -1.0 / edge.radius)


def _edge_cycle_area(edge: SubEdge, vertices: list[Point], forward: bool) -> float:
    pa, pb = vertices[edge.a], vertices[edge.b]
    if not forward:
        pa, pb = pb, pa
    s = shoelace_term(pa, pb)
    if edge.geom_kind == "arc":
        span = ccw_span(edge.phi_a, edge.phi_b) if edge.ccw else ccw_span(edge.phi_b, edge.phi_a)
        corr = 0.5 * edge.radius * edge.radius * (span - math.sin(span))
        ccw_travel = edge.ccw if forward else not edge.ccw
        s += corr if ccw_travel else -corr
    return s


def _point_in_cycle(p: Point, cyc: list[int], sub_edges: list[SubEdge], vertices: list[Point]) -> bool:
    """Ray-crossing parity test against a half-edge cycle (handles arcs)."""
    for attempt in range(6):
        y = p.y + (0.0 if attempt == 0 else (attempt * 3.7e-8))
        crossings = 0
        ok = True
        for he in cyc:
            e = sub_edges[he >> 1]
            pa, pb = vertices[e.a], vertices[e.b]
            if e.geom_kind == "seg":
                if abs(pa.y - y) < 1e-12 or abs(pb.y - y) < 1e-12:
                    ok = False
                    break
                if (pa.y > y) != (pb.y > y):
                    xi = pa.x + (y - pa.y) * (pb.x - pa.x) / (pb.y - pa.y)
                    if abs(xi - p.x) < 1e-12:
                        ok = False
                        break
                    if xi > p.x:
                        crossings += 1
            else:
                c, r = e.center, e.radius
                dy = y - c.y
                if abs(abs(dy) - r) < 1e-12:
                    ok = False
                    break
                if abs(dy) >= r:
                    continue
                dx = math.sqrt(r * r - dy * dy)
                span = ccw_span(e.phi_a, e.phi_b) if e.ccw else ccw_span(e.phi_b, e.phi_a)
                arc = CircularArc(c, r, e.phi_a if e.ccw else e.phi_b, max(span, 1e-12), True)
                for x in (c.x - dx, c.x + dx):
                    phi = angle_of(c, Point(x, y))
                    if arc.contains_angle(phi, 1e-9):
                        if abs(x - p.x) < 1e-12:
                            ok = False
                            break
                        if x > p.x:
                            crossings += 1
                if not ok:
                    break
        if ok:
            return crossings % 2 == 1
    return False


class _Builder:
    def __init__(self, B: PolygonSet, curves: list[SourceCurve]):
        self.B = B
        self.curves = curves
        self.snap = _Snapper()

    def build(self) -> Subdivision:
        self._split_curves()
        self._merge_fragments()
        self._prune_antennas()
        self._components()
        self._build_rotation()
        self._trace_cycles()
        self._assemble_faces()
        self._classify_faces()
        return self._finish()

    def _components(self) -> None:
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.sub_edges:
            for v in (e.a, e.b):
                parent.setdefault(v, v)
            ra, rb = find(e.a), find(e.b)
            if ra != rb:
                parent[ra] = rb
        self.vcomp = {v: find(v) for v in parent}
        self.n_components = len(set(self.vcomp.values()))

    # -- step 1: pairwise intersections and curve splitting -----------------

    def _split_curves(self) -> None:
        curves = self.curves
        boxes = [c.geom.bbox() for c in curves]
        breakpoints: list[list[tuple[float, Point]]] = [[] for _ in curves]
        order = sorted(range(len(curves)), key=lambda i: boxes[i][0])
        for oi in range(len(order)):
            i = order[oi]
            for oj in range(oi + 1, len(order)):
                j = order[oj]
                if boxes[j][0] > boxes[i][2] + SNAP_TOL:
                    break
                if not bboxes_overlap(boxes[i], boxes[j], SNAP_TOL):
                    continue
                for t1, t2, p in _pair_breakpoints(curves[i], curves[j]):
                    breakpoints[i].append((t1, p))
                    breakpoints[j].append((t2, p))
        self.fragments: list[tuple[int, int, Fragment, tuple]] = []
        for i, c in enumerate(curves):
            self._split_one(c, breakpoints[i])

    def _split_one(self, c: SourceCurve, bps: list[tuple[float, Point]]) -> None:
        g = c.geom
        pts = [(0.0, frag_start(g)), (1.0, frag_end(g))] + bps
        pts.sort(key=lambda s: s[0])
        stops: list[tuple[float, int]] = []
        for t, p in pts:
            vid = self.snap.add(p)
            if not stops or stops[-1][1] != vid:
                stops.append((t, vid))
        # a segment or sub-pi arc never truly revisits a point, so a vid
        # reappearing later is snap jitter: drop the sandwiched stops (they
        # sit within snap range of the repeated vertex) instead of emitting
        # zigzag fragments that run backward along the curve
        uniq: list[tuple[float, int]] = []
        pos: dict[int, int] = {}
        for t, vid in stops:
            if vid in pos:
                while len(uniq) > pos[vid] + 1:
                    _, dropped = uniq.pop()
                    del pos[dropped]
                continue
            pos[vid] = len(uniq)
            uniq.append((t, vid))
        for (t0, va), (t1, vb) in zip(uniq, uniq[1:]):
            pa, pb = self.snap.points[va], self.snap.points[vb]
            if isinstance(g, DirectedSegment):
                frag: Fragment = DirectedSegment(pa, pb)
            else:
                phi_a = angle_of(g.center, pa)
                phi_b = angle_of(g.center, pb)
                span = ccw_span(phi_a, phi_b) if g.ccw else ccw_span(phi_b, phi_a)
                if span < 1e-12:
                    continue
                frag = CircularArc(g.center, g.radius, phi_a, span, g.ccw)
            self.fragments.append((va, vb, frag, c.source))

    # -- step 2: merge coincident fragments ---------------------------------

    def _merge_fragments(self) -> None:
        merged: dict[tuple, SubEdge] = {}
        for va, vb, frag, source in self.fragments:
            if va == vb:
                continue
            if isinstance(frag, DirectedSegment):
                key_geo: tuple = ("seg",)
                rev = vb < va
            elif frag.radius * (1.0 - math.cos(0.5 * frag.span)) < SNAP_TOL:
                # near-tangency slivers: an arc that deviates from its chord
                # by less than the snap tolerance is the same edge as the
                # segment between the two vertices; keying it as one keeps
                # zero-area lens faces out of the arrangement
                key_geo = ("seg",)
                rev = vb < va
            else:
                # same circle and same endpoint pair can still be two arcs
                # (minor/major side); the midpoint distinguishes them
                m = frag.midpoint
                key_geo = (
                    "arc",
                    round(frag.center.x / SNAP_TOL),
                    round(frag.center.y / SNAP_TOL),
                    round(frag.radius / SNAP_TOL),
                    round(m.x / SNAP_TOL),
                    round(m.y / SNAP_TOL),
                )
                rev = vb < va
            key = ((min(va, vb), max(va, vb)), key_geo)
            if key in merged:
                e = merged[key]
                if source not in e.sources:
                    e.sources = e.sources + (source,)
                continue
            a, b = va, vb
            g = frag
            if rev:
                a, b = vb, va
                g = frag.reversed()
            if isinstance(g, DirectedSegment):
                edge = SubEdge(a, b, "seg", dist(self.snap.points[a], self.snap.points[b]), (source,))
            else:
                edge = SubEdge(
                    a,
                    b,
                    "arc",
                    g.length,
                    (source,),
                    center=g.center,
                    radius=g.radius,
                    phi_a=g.start_angle,
                    phi_b=g.end_angle,
                    ccw=g.ccw,
                )
            merged[key] = edge
        self.sub_edges: list[SubEdge] = list(merged.values())

    # -- step 3: antenna pruning --------------------------------------------

    def _prune_antennas(self) -> None:
        alive = [True] * len(self.sub_edges)
        degree: dict[int, int] = {}
        incident: dict[int, list[int]] = {}
        for i, e in enumerate(self.sub_edges):
            for v in (e.a, e.b):
                degree[v] = degree.get(v, 0) + 1
                incident.setdefault(v, []).append(i)
        queue = [v for v, d in degree.items() if d == 1]
        while queue:
            v = queue.pop()
            if degree.get(v, 0) != 1:
                continue
            for i in incident[v]:
                if alive[i]:
                    alive[i] = False
                    e = self.sub_edges[i]
                    for w in (e.a, e.b):
                        degree[w] -= 1
                        if degree[w] == 1:
                            queue.append(w)
                    break
        self.sub_edges = [e for i, e in enumerate(self.sub_edges) if alive[i]]

    # -- step 4: rotation system --------------------------------------------

    def _build_rotation(self) -> None:
        vertices = self.snap.points
        m = len(self.sub_edges)
        outgoing: dict[int, list[tuple[float, float, int]]] = {}
        for i, e in enumerate(self.sub_edges):
            ang_a, curv_a = _departure(e, vertices, at_a=True)
            ang_b, curv_b = _departure(e, vertices, at_a=False)
            outgoing.setdefault(e.a, []).append((ang_a, curv_a, 2 * i))
            outgoing.setdefault(e.b, []).append((ang_b, curv_b, 2 * i + 1))
        self.he_next = [-1] * (2 * m)
        for v, lst in outgoing.items():
            # angular order with curvature as tangential tie-break: a curve
            # bending harder left sits infinitesimally counterclockwise.
            # Tangency is detected by angle differences, not fixed buckets,
            # so near-boundary pairs cannot land in different buckets.
            lst.sort(key=lambda s: (s[0], s[1], s[2]))
            groups: list[list[tuple[float, float, int]]] = []
            for item in lst:
                if groups and item[0] - groups[-1][-1][0] < 1e-7:
                    groups[-1].append(item)
                else:
                    groups.append([item])
            if len(groups) > 1 and (groups[0][0][0] + TWO_PI) - groups[-1][-1][0] < 1e-7:
                # wraparound tangency across the -pi / pi seam
                groups[-1].extend(groups.pop(0))
                groups[-1].sort(key=lambda s: (s[1], s[2]))
            ordered = [item for g in groups for item in sorted(g, key=lambda s: (s[1], s[2]))]
            k = len(ordered)
            pos = {he: idx for idx, (_, _, he) in enumerate(ordered)}
            for _, _, he in ordered:
                # next of an incoming half-edge h (= twin points out of v):
                # the clockwise neighbor of twin(h) in the rotation at v
                twin = he ^ 1
                idx = pos[he]
                self.he_next[twin] = ordered[(idx - 1) % k][2]

    # -- step 5: face cycles --------------------------------------------------

    def _trace_cycles(self) -> None:
        m = len(self.sub_edges)
        self.cycle_of = [-1] * (2 * m)
        self.cycles: list[list[int]] = []
        self.cycle_area: list[float] = []
        vertices = self.snap.points
        for h0 in range(2 * m):
            if self.cycle_of[h0] != -1:
                continue
            cyc = []
            area = 0.0
            h = h0
            cid = len(self.cycles)
            guard = 0
            while True:
                self.cycle_of[h] = cid
                cyc.append(h)
                e = self.sub_edges[h >> 1]
                area += _edge_cycle_area(e, vertices, forward=(h & 1) == 0)
                h = self.he_next[h]
                guard += 1
                if h == h0:
                    break
                if guard > 4 * m + 8:
                    raise NumericalDegeneracy("face tracing did not close a cycle")
            self.cycles.append(cyc)
            self.cycle_area.append(area)

    # -- step 6: faces with holes ---------------------------------------------

    def _assemble_faces(self) -> None:
        vertices = self.snap.points
        pos_ids = [i for i, a in enumerate(self.cycle_area) if a > 0.0]
        neg_ids = [i for i, a in enumerate(self.cycle_area) if a <= 0.0]
        faces: list[Face] = []
        face_of_cycle = [-1] * len(self.cycles)
        outer = Face(0, [], 0.0, "outer", None)
        faces.append(outer)
        for cid in pos_ids:
            f = Face(len(faces), [self.cycles[cid]], self.cycle_area[cid])
            face_of_cycle[cid] = f.id
            faces.append(f)
        # attach every negative cycle to the smallest positive cycle strictly
        # containing it; unattached cycles bound the outer face. A negative
        # cycle is the outside walk of one connected component, so only faces
        # of other components can contain it.
        comp_of_cycle = [self.vcomp[self.sub_edges[cyc[0] >> 1].a] for cyc in self.cycles]
        for cid in neg_ids:
            he0 = self.cycles[cid][0]
            e = self.sub_edges[he0 >> 1]
            probe = vertices[e.a]
            best = -1
            best_area = math.inf
            for pid in pos_ids:
                if comp_of_cycle[pid] == comp_of_cycle[cid]:
                    continue
                if self.cycle_area[pid] <= abs(self.cycle_area[cid]) - 1e-12:
                    continue
                if _point_in_cycle(probe, self.cycles[pid], self.sub_edges, vertices):
                    if self.cycle_area[pid] < best_area:
                        best_area = self.cycle_area[pid]
                        best = pid
            if best >= 0:
                f = faces[face_of_cycle[best]]
                f.cycles.append(self.cycles[cid])
                f.area += self.cycle_area[cid]
                face_of_cycle[cid] = f.id
            else:
                outer.cycles.append(self.cycles[cid])
                face_of_cycle[cid] = 0
        self.faces = faces
        self.face_of_cycle = face_of_cycle
        m = len(self.sub_edges)
        self.he_face = [self.face_of_cycle[self.cycle_of[h]] for h in range(2 * m)]
        for i, e in enumerate(self.sub_edges):
            e.face_left = self.he_face[2 * i]
            e.face_right = self.he_face[2 * i + 1]

    # -- step 7: classification ------------------------------------------------

    def _face_probe(self, f: Face) -> Point:
        vertices = self.snap.points
        outer_cyc = f.cycles[0]
        holes = f.cycles[1:]
        span = math.sqrt(max(f.area, SNAP_TOL))
        for he in outer_cyc:
            e = self.sub_edges[he >> 1]
            frag = e.fragment(vertices, forward=(he & 1) == 0)
            mid = frag.midpoint
            if isinstance(frag, DirectedSegment):
                d = frag.direction()
                nx, ny = -d.y, d.x  # left normal = face side
            else:
                t = frag.tangent_at(0.5)
                nx, ny = -t.y, t.x
            delta = min(0.25 * e.length, 0.05 * span)
            while delta > 1e-11:
                p = Point(mid.x + delta * nx, mid.y + delta * ny)
                if _point_in_cycle(p, outer_cyc, self.sub_edges, vertices) and not any(
                    _point_in_cycle(p, h, self.sub_edges, vertices) for h in holes
                ):
                    return p
                delta *= 0.25
        raise NumericalDegeneracy(f"no interior probe for face {f.id}")

    def _classify_faces(self) -> None:
        hull = self.B.convex_hull()
        hull_ring = Polygon(hull) if len(hull) >= 3 else None
        for f in self.faces:
            if f.id == 0:
                f.role = "outer"
                continue
            probe = self._face_probe(f)
            f.probe = probe
            if self.B.contains_point(probe, EPS) > 0:
                f.role = "polygon-cell"
            elif hull_ring is not None and hull_ring.contains_point(probe, EPS) > 0:
                f.role = "free-cell"
            else:
                f.role = "outer"

    # -- step 8: final checks ----------------------------------------------------

    def _finish(self) -> Subdivision:
        n_comp = self.n_components
        used = sorted(self.vcomp.keys())
        remap = {v: i for i, v in enumerate(used)}
        vertices = [self.snap.points[v] for v in used]
        for e in self.sub_edges:
            e.a = remap[e.a]
            e.b = remap[e.b]
        hull = self.B.convex_hull()
        hull_area = Polygon(hull).area if len(hull) >= 3 else 0.0
        sub = Subdivision(
            vertices=vertices,
            edges=self.sub_edges,
            faces=self.faces,
            outer_face_id=0,
            n_components=n_comp,
            he_next=self.he_next,
            he_face=self.he_face,
            convex_hull_area=hull_area,
            polygon_area=sum(f.area for f in self.faces if f.role == "polygon-cell"),
        )
        return sub


# ---------------------------------------------------------------------------
# entry points


def build_arrangement(B: PolygonSet, cands: Sequence[CandidateArc]) -> Subdivision:
    """Arrangement of polygon edges, hull boundary and candidate curves."""
    curves = polygon_curves(B) + hull_bridge_curves(B) + candidate_curves(cands)
    sub = _Builder(B, curves).build()
    sub.check_structure()
    return sub


def arrangement_from_segments(B: PolygonSet, segments: Sequence[DirectedSegment]) -> Subdivision:
    """Arrangement of polygon edges, hull boundary and extra straight chords.

    The segments are typically triangulation edges; they may meet polygon
    edges and each other only at shared endpoints.
    """
    curves = polygon_curves(B) + hull_bridge_curves(B)
    curves += [SourceCurve(s, ("tri", k)) for k, s in enumerate(segments)]
    sub = _Builder(B, curves).build()
    sub.check_structure()
    return sub


def triangulate(B: PolygonSet) -> Subdivision:
    """Constrained Delaunay triangulation of the free space conv(B) \\ B.

    Triangle corners are input vertices; every free face of the result is a
    triangle. Uses the GEOS constrained Delaunay via shapely.
    """
    import shapely
    from shapely.geometry import Polygon as ShpPolygon

    hull = B.convex_hull()
    if len(hull) < 3:
        raise ConstraintIntersection("degenerate convex hull")
    hull_poly = ShpPolygon([(p.x, p.y) for p in hull])
    b_union = shapely.union_all([ShpPolygon([(p.x, p.y) for p in poly.vertices]) for poly in B])
    free = hull_poly.difference(b_union)
    targets = B.vertices()

    def pinned(x: float, y: float) -> Point:
        # GEOS noding over collinear boundaries can shift a corner by ~1e-13,
        # leaving needle triangles; pull corners back onto exact vertices
        p = Point(x, y)
        for q in targets:
            if dist(p, q) <= 1e-9:
                return q
        return p

    segs: list[DirectedSegment] = []
    seen: set = set()
    if not free.is_empty and free.area > EPS:
        tris = shapely.constrained_delaunay_triangles(free)
        for tri in getattr(tris, "geoms", [tris]):
            if tri.is_empty or tri.area <= EPS * EPS:
                continue
            coords = list(tri.exterior.coords)[:4]
            for i in range(3):
                a = pinned(coords[i][0], coords[i][1])
                b = pinned(coords[i + 1][0], coords[i + 1][1])
                if dist(a, b) <= EPS:
                    continue
                key = tuple(sorted([(round(a.x, 9), round(a.y, 9)), (round(b.x, 9), round(b.y, 9))]))
                if key in seen:
                    continue
                seen.add(key)
                segs.append(DirectedSegment(a, b))
    return arrangement_from_segments(B, segs)
