"""Candidate free-piece generation.

For a polygon set B and finite alpha > 0 the optimal solution's free boundary
pieces are radius-alpha arcs that (strictly) satisfy: chord < 2*alpha, central
angle < pi, endpoints on the input boundary, tangency at edge-interior
endpoints, and inward bending. That leaves finitely many candidates per
instance, generated from three anchor configurations:

  vertex-vertex  two minor arcs per pair (one per bulge side)
  vertex-edge    centers on the alpha-offset lines of the edge, at distance
                 alpha from the vertex; tangent foot must be edge-interior
  edge-edge      center at the intersection of two offset lines (4 side
                 combinations); parallel edge pairs admit no candidate

Arcs touching the input boundary anywhere except their own endpoints are
discarded entirely: shorter candidates re-emerge from the touch geometry when
relevant. alpha = 0 has no candidates; alpha = inf uses straight vertex-vertex
visibility segments instead of arcs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geom import (
    EPS,
    CircularArc,
    DirectedSegment,
    Fragment,
    Point,
    PolygonSet,
    angle_of,
    ccw_span,
    dist,
    norm_angle,
)
from .intersect import (
    arc_segment_intersections,
    bboxes_overlap,
    segment_segment_intersection,
)

#: Contact within this distance of a curve endpoint counts as endpoint contact.
CONTACT_TOL = 1e-7


@dataclass(frozen=True)
class AnchorPoint:
    """Where a candidate endpoint sits on the input boundary.

    kind is "vertex" (index = global vertex id) or "edge" (index = global
    edge id, t = parameter along that edge, strictly inside (0, 1)).
    """

    location: Point
    kind: str
    index: int = -1
    t: float = 0.0


@dataclass(frozen=True)
class CandidateArc:
    """A candidate free piece: radius-alpha arc (segment for alpha = inf)."""

    arc: Fragment
    endpoint_a: AnchorPoint
    endpoint_b: AnchorPoint

    @property
    def curve(self) -> Fragment:
        return self.arc


def _minor_arc(center: Point, radius: float, u: Point, v: Point) -> CircularArc:
    """The minor arc (span < pi) from u to v on the given circle."""
    start = angle_of(center, u)
    end = angle_of(center, v)
    span = ccw_span(start, end)
    if span <= math.pi:
        return CircularArc(center, radius, start, span, True)
    return CircularArc(center, radius, start, norm_angle(-span) if span else 0.0, False)


def vertex_vertex_arcs(u: Point, v: Point, alpha: float) -> list[CircularArc]:
    """Both minor arcs of radius alpha through u and v, when |uv| < 2*alpha."""
    d = dist(u, v)
    if d <= EPS or d >= 2.0 * alpha * (1.0 - 1e-9):
        return []
    from .geom import arc_from_chord

    return [arc_from_chord(u, v, alpha), arc_from_chord(v, u, alpha)]


def vertex_edge_tangent_arc(
    u: Point,
    e: DirectedSegment,
    alpha: float,
    u_index: int = -1,
    e_index: int = -1,
) -> list[CandidateArc]:
    """Arcs of radius alpha through vertex u, tangent to edge e inside it.

    The center must lie on a line parallel to e at offset alpha and at
    distance alpha from u; the tangent foot is the perpendicular projection
    of the center onto e. At most two constructions survive the interior /
    chord / angle checks.
    """
    L = e.length
    if dist(u, e.start) <= EPS or dist(u, e.end) <= EPS:
        return []
    w = e.direction()
    nx, ny = -w.y, w.x  # unit left normal
    out: list[CandidateArc] = []
    for sigma in (1.0, -1.0):
        # center = e.start + sigma*alpha*n + s*w with |center - u| = alpha
        qx = e.start.x + sigma * alpha * nx - u.x
        qy = e.start.y + sigma * alpha * ny - u.y
        b = qx * w.x + qy * w.y
        c = qx * qx + qy * qy - alpha * alpha
        disc = b * b - c
        if disc < 0.0:
            continue
        root = math.sqrt(disc)
        roots = [-b - root, -b + root] if root > EPS else [-b]
        for s in roots:
            t = s / L
            if not (EPS / L < t < 1.0 - EPS / L):
                continue  # tangent foot must be strictly edge-interior
            v = Point(e.start.x + s * w.x, e.start.y + s * w.y)
            center = Point(v.x + sigma * alpha * nx, v.y + sigma * alpha * ny)
            d = dist(u, v)
            if d <= EPS or d >= 2.0 * alpha * (1.0 - 1e-9):
                continue
            arc = _minor_arc(center, alpha, u, v)
            out.append(
                CandidateArc(
                    arc,
                    AnchorPoint(u, "vertex", u_index),
                    AnchorPoint(v, "edge", e_index, t),
                )
            )
    return out


def edge_edge_bitangent_arc(
    e1: DirectedSegment,
    e2: DirectedSegment,
    alpha: float,
    e1_index: int = -1,
    e2_index: int = -1,
) -> list[CandidateArc]:
    """Arcs of radius alpha tangent to both edges at interior points.

    One construction per side combination: the center is the intersection of
    the two alpha-offset lines. Parallel edge pairs yield nothing (the
    distance-2*alpha tangential case is excluded by the strict chord bound).
    """
    w1 = e1.direction()
    w2 = e2.direction()
    denom = w1.x * w2.y - w1.y * w2.x  # sin of the angle between the lines
    if abs(denom) <= 1e-9:
        return []
    n1 = Point(-w1.y, w1.x)
    n2 = Point(-w2.y, w2.x)
    L1, L2 = e1.length, e2.length
    out: list[CandidateArc] = []
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            # solve p1 + t1*w1 = p2 + t2*w2 with pi = ei.start + si*alpha*ni
            p1x = e1.start.x + s1 * alpha * n1.x
            p1y = e1.start.y + s1 * alpha * n1.y
            p2x = e2.start.x + s2 * alpha * n2.x
            p2y = e2.start.y + s2 * alpha * n2.y
            dx, dy = p2x - p1x, p2y - p1y
            t1 = (dx * w2.y - dy * w2.x) / denom
            center = Point(p1x + t1 * w1.x, p1y + t1 * w1.y)
            v1 = Point(center.x - s1 * alpha * n1.x, center.y - s1 * alpha * n1.y)
            v2 = Point(center.x - s2 * alpha * n2.x, center.y - s2 * alpha * n2.y)
            ta = (v1.x - e1.start.x) * w1.x + (v1.y - e1.start.y) * w1.y
            tb = (v2.x - e2.start.x) * w2.x + (v2.y - e2.start.y) * w2.y
            ta /= L1
            tb /= L2
            if not (EPS / L1 < ta < 1.0 - EPS / L1):
                continue
            if not (EPS / L2 < tb < 1.0 - EPS / L2):
                continue
            d = dist(v1, v2)
            if d <= EPS or d >= 2.0 * alpha * (1.0 - 1e-9):
                continue
            arc = _minor_arc(center, alpha, v1, v2)
            out.append(
                CandidateArc(
                    arc,
                    AnchorPoint(v1, "edge", e1_index, ta),
                    AnchorPoint(v2, "edge", e2_index, tb),
                )
            )
    return out


# ---------------------------------------------------------------------------
# filtering


def _fragment_avoids_polygons(curve: Fragment, B: PolygonSet) -> bool:
    """True when the curve touches the input boundary only at its endpoints.

    Any other contact, crossing or tangential, disqualifies the candidate.
    A contact-free curve is then accepted iff its midpoint is not strictly
    inside a polygon (without boundary contact the whole interior of the
    curve lies on one side).
    """
    if isinstance(curve, CircularArc):
        p_start, p_end = curve.start_point, curve.end_point
    else:
        p_start, p_end = curve.start, curve.end
    cb = curve.bbox()
    cb = (cb[0] - CONTACT_TOL, cb[1] - CONTACT_TOL, cb[2] + CONTACT_TOL, cb[3] + CONTACT_TOL)
    for poly in B.polygons:
        if not bboxes_overlap(cb, poly.bbox(), CONTACT_TOL):
            continue
        for edge in poly.edges():
            if isinstance(curve, CircularArc):
                contacts = [p for _, _, p in arc_segment_intersections(curve, edge, CONTACT_TOL)]
            else:
                kind, hits = segment_segment_intersection(curve, edge, CONTACT_TOL)
                if kind == "overlap":
                    return False  # collinear run along the boundary
                contacts = [p for _, _, p in hits]
            for p in contacts:
                if dist(p, p_start) > CONTACT_TOL and dist(p, p_end) > CONTACT_TOL:
                    return False
    mid = curve.midpoint
    for poly in B.polygons:
        if poly.contains_point(mid, CONTACT_TOL) > 0:
            return False
    return True


def _candidate_sort_key(c: CandidateArc):
    g = c.arc
    if isinstance(g, CircularArc):
        return (
            0,
            round(g.center.x, 9),
            round(g.center.y, 9),
            round(g.radius, 9),
            round(g.start_angle, 9),
            round(g.span, 9),
            g.ccw,
        )
    return (1, round(g.start.x, 9), round(g.start.y, 9), round(g.end.x, 9), round(g.end.y, 9))


def _dedup_key(c: CandidateArc):
    g = c.arc
    if isinstance(g, CircularArc):
        ends = sorted([(round(p.x, 6), round(p.y, 6)) for p in (g.start_point, g.end_point)])
        return ("arc", round(g.center.x, 6), round(g.center.y, 6), round(g.radius, 6), tuple(ends))
    ends = sorted([(round(p.x, 6), round(p.y, 6)) for p in (g.start, g.end)])
    return ("seg", tuple(ends))


def generate_candidates(B: PolygonSet, alpha: float) -> list[CandidateArc]:
    """The full filtered candidate set for one instance and one alpha.

    alpha = 0 yields no candidates; alpha = inf yields vertex-vertex
    visibility segments; finite alpha yields the three arc families. Output
    is deduplicated and canonically sorted, so identical inputs produce
    identical lists.
    """
    if alpha == 0.0:
        return []
    verts = B.vertices()
    if math.isinf(alpha):
        out: list[CandidateArc] = []
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                if dist(verts[i], verts[j]) <= EPS:
                    continue
                seg = DirectedSegment(verts[i], verts[j])
                if _fragment_avoids_polygons(seg, B):
                    out.append(
                        CandidateArc(
                            seg,
                            AnchorPoint(verts[i], "vertex", i),
                            AnchorPoint(verts[j], "vertex", j),
                        )
                    )
        return _finalize(out)

    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be in [0, inf], got {alpha}")

    edges = B.edges()
    raw: list[CandidateArc] = []
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            for arc in vertex_vertex_arcs(verts[i], verts[j], alpha):
                raw.append(
                    CandidateArc(
                        arc,
                        AnchorPoint(verts[i], "vertex", i),
                        AnchorPoint(verts[j], "vertex", j),
                    )
                )
    for i, u in enumerate(verts):
        for j, e in enumerate(edges):
            raw.extend(vertex_edge_tangent_arc(u, e, alpha, i, j))
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            raw.extend(edge_edge_bitangent_arc(edges[i], edges[j], alpha, i, j))
    kept = [c for c in raw if _fragment_avoids_polygons(c.arc, B)]
    return _finalize(kept)


def _finalize(cands: list[CandidateArc]) -> list[CandidateArc]:
    seen = {}
    for c in cands:
        seen.setdefault(_dedup_key(c), c)
    return sorted(seen.values(), key=_candidate_sort_key)
