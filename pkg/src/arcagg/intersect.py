"""Analytic intersection routines for segments, circles and circular arcs.

These back both the candidate filter and the arrangement builder. All
routines merge near-coincident roots (tangential contacts) into a single
point so that downstream vertex snapping never sees artificial root pairs
from an exactly-tangent configuration.
"""

from __future__ import annotations

import math
from typing import Optional

from .geom import EPS, CircularArc, DirectedSegment, Point, angle_of, dist

#: Roots closer than this along a curve are merged into one contact point.
ROOT_MERGE = 1e-7


def line_circle_roots(a: Point, w: Point, center: Point, r: float,
                      merge: float = ROOT_MERGE) -> list[float]:
    """Arc-length parameters s with |a + s*w - center| = r, |w| = 1."""
    qx, qy = a.x - center.x, a.y - center.y
    b = qx * w.x + qy * w.y
    c = qx * qx + qy * qy - r * r
    disc = b * b - c
    if disc <= 0.25 * merge * merge:  # root separation 2*sqrt(disc) <= merge
        if disc < -r * merge:
            return []
        # tangential (or nearly): single contact at the extremum only when it
        # actually lies within distance ~merge of the circle
        s = -b
        px, py = a.x + s * w.x, a.y + s * w.y
        if abs(math.hypot(px - center.x, py - center.y) - r) <= merge:
            return [s]
        return []
    root = math.sqrt(disc)
    return [-b - root, -b + root]


def segment_circle_intersections(seg: DirectedSegment, center: Point, r: float,
                                 end_tol: float = EPS,
                                 merge: float = ROOT_MERGE) -> list[tuple[float, Point]]:
    """Intersections of a segment with a full circle as (t, point) pairs.

    Points within end_tol (length units) beyond the segment ends are clamped
    in; everything farther out is dropped.
    """
    L = seg.length
    w = seg.direction()
    out: list[tuple[float, Point]] = []
    for s in line_circle_roots(seg.start, w, center, r, merge):
        if s < -end_tol or s > L + end_tol:
            continue
        s_cl = min(max(s, 0.0), L)
        p = Point(seg.start.x + s_cl * w.x, seg.start.y + s_cl * w.y)
        out.append((s_cl / L, p))
    return out


def circle_circle_intersections(c1: Point, r1: float, c2: Point, r2: float,
                                merge: float = ROOT_MERGE) -> list[Point]:
    d = dist(c1, c2)
    if d <= EPS:
        return []  # concentric (identical circles handled as overlap elsewhere)
    # distance from c1 along the center line to the radical chord
    x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - x * x
    ux, uy = (c2.x - c1.x) / d, (c2.y - c1.y) / d
    px, py = c1.x + x * ux, c1.y + x * uy
    if h2 <= 0.25 * merge * merge:
        if h2 < -r1 * merge:
            return []
        return [Point(px, py)]
    h = math.sqrt(h2)
    return [Point(px - h * uy, py + h * ux), Point(px + h * uy, py - h * ux)]


def segment_segment_intersection(
    s1: DirectedSegment, s2: DirectedSegment, end_tol: float = EPS
) -> tuple[str, list[tuple[float, float, Point]]]:
    """Intersection of two segments.

    Returns ("none", []), ("point", [(t1, t2, p)]), or
    ("overlap", [(t1, t2, p), (t1', t2', p')]) carrying the two ends of a
    collinear overlap. Parameters are clamped to [0, 1]; contacts within
    end_tol of the supporting lines count.
    """
    a, b = s1.start, s1.end
    c, d = s2.start, s2.end
    r = (b.x - a.x, b.y - a.y)
    s = (d.x - c.x, d.y - c.y)
    denom = r[0] * s[1] - r[1] * s[0]
    L1, L2 = s1.length, s2.length
    if abs(denom) > 1e-12 * L1 * L2:
        qpx, qpy = c.x - a.x, c.y - a.y
        t = (qpx * s[1] - qpy * s[0]) / denom
        u = (qpx * r[1] - qpy * r[0]) / denom
        tol1 = end_tol / L1
        tol2 = end_tol / L2
        if -tol1 <= t <= 1.0 + tol1 and -tol2 <= u <= 1.0 + tol2:
            t = min(max(t, 0.0), 1.0)
            u = min(max(u, 0.0), 1.0)
            p = Point(a.x + t * r[0], a.y + t * r[1])
            return "point", [(t, u, p)]
        return "none", []
    # parallel: collinear only when c sits on line(a, b)
    from .geom import point_segment_distance, project_t

    dline = abs((c.x - a.x) * r[1] - (c.y - a.y) * r[0]) / L1
    if dline > end_tol:
        return "none", []
    tc = project_t(a, b, c)
    td = project_t(a, b, d)
    lo, hi = min(tc, td), max(tc, td)
    lo = max(lo, 0.0)
    hi = min(hi, 1.0)
    if hi - lo <= end_tol / L1:
        # touching at (at most) a single point
        if hi < lo:
            return "none", []
        t = 0.5 * (lo + hi)
        p = s1.point_at(t)
        u = min(max(project_t(c, d, p), 0.0), 1.0)
        return "point", [(t, u, p)]
    p_lo = s1.point_at(lo)
    p_hi = s1.point_at(hi)
    u_lo = min(max(project_t(c, d, p_lo), 0.0), 1.0)
    u_hi = min(max(project_t(c, d, p_hi), 0.0), 1.0)
    return "overlap", [(lo, u_lo, p_lo), (hi, u_hi, p_hi)]


def arc_segment_intersections(arc: CircularArc, seg: DirectedSegment,
                              end_tol: float = EPS) -> list[tuple[float, float, Point]]:
    """(t_arc, t_seg, point) contacts between an arc and a segment."""
    out = []
    for t_seg, p in segment_circle_intersections(seg, arc.center, arc.radius, end_tol):
        phi = angle_of(arc.center, p)
        if arc.contains_angle(phi, end_tol):
            t_arc = min(max(arc.param_of_angle(phi), 0.0), 1.0)
            out.append((t_arc, t_seg, p))
    return out


def arc_arc_intersections(a1: CircularArc, a2: CircularArc,
                          end_tol: float = EPS) -> list[tuple[float, float, Point]]:
    """(t1, t2, point) contacts between two arcs on distinct circles.

    Arcs on the same supporting circle are reported as no contact here;
    same-circle overlap is handled by the arrangement's overlap pass.
    """
    if dist(a1.center, a2.center) <= EPS and abs(a1.radius - a2.radius) <= EPS:
        return []
    out = []
    for p in circle_circle_intersections(a1.center, a1.radius, a2.center, a2.radius):
        phi1 = angle_of(a1.center, p)
        phi2 = angle_of(a2.center, p)
        if a1.contains_angle(phi1, end_tol) and a2.contains_angle(phi2, end_tol):
            out.append((
                min(max(a1.param_of_angle(phi1), 0.0), 1.0),
                min(max(a2.param_of_angle(phi2), 0.0), 1.0),
                p,
            ))
    return out


def same_circle(a1: CircularArc, a2: CircularArc, tol: float = ROOT_MERGE) -> bool:
    return dist(a1.center, a2.center) <= tol and abs(a1.radius - a2.radius) <= tol


def bboxes_overlap(b1: tuple, b2: tuple, pad: float = EPS) -> bool:
    return not (
        b1[2] < b2[0] - pad or b2[2] < b1[0] - pad or b1[3] < b2[1] - pad or b2[3] < b1[1] - pad
    )
