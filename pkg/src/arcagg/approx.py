"""Rounding an exact curved solution to straight-line and vertex solutions.

Three local transformation phases, each with a proven factor on the
objective:

* Phase 1 replaces every curved free piece (a maximal boundary run touching
  the input only at its endpoints) by the convex chain around the input
  vertices caught between the run and its chord (factor 3/2).
* Phase 2 takes every straight free piece whose two endpoints both lie in
  edge interiors and slides it, parallel, into the region along the two host
  edge lines until it first touches an input vertex; the swept trapezoid is
  removed (factor 3).
* Phase 3 eliminates free pieces with exactly one interior endpoint: for
  each maximal constrained run on a single input edge it concatenates the
  run with its one or two violating neighbors and replaces the lot by the
  convex chain over the enclosed input vertices (factor 3).

Phase 1 alone turns the exact solution into a straight-line solution within
factor 1.5; all three yield a vertex-to-vertex solution within 13.5. Every
per-piece objective change is checked against its proven bound: tiny float
excess is tolerated, anything past 1e-4 relative is a hard failure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InfeasibleIntermediate, NoStopEvent
from .geom import (
    EPS,
    CircularArc,
    DirectedSegment,
    Point,
    PolygonSet,
    convex_hull,
    cross,
    cycle_area,
    discretize_fragment,
    dist,
    frag_end,
    frag_start,
    point_segment_distance,
    shoelace_term,
)
from .solution import BoundaryPiece, Region, Solution

_WARN_REL = 1e-7
_FAIL_REL = 1e-4


@dataclass
class PhaseReport:
    name: str
    violations: int
    delta: float  # actual objective change
    bound: float  # proven upper bound for the change
    g_before: float
    g_after: float

    def as_dict(self) -> dict:
        return {
            "phase": self.name,
            "violations": self.violations,
            "delta": self.delta,
            "bound": self.bound,
            "g_before": self.g_before,
            "g_after": self.g_after,
        }


def _check_bound(actual: float, bound: float, what: str) -> None:
    scale = max(1.0, abs(bound))
    rel = (actual - bound) / scale
    if rel > _FAIL_REL:
        raise InfeasibleIntermediate(
            f"{what}: change {actual} exceeds proven bound {bound}"
        )
    if rel > _WARN_REL:
        warnings.warn(f"{what}: change {actual} slightly above bound {bound}")


# ---------------------------------------------------------------------------
# geometric helpers


class _InputIndex:
    """Vertex and edge lookups against the input polygons."""

    def __init__(self, B: PolygonSet, tol: float = 1e-9):
        self.B = B
        self.tol = tol
        self.vertices = B.vertices()
        self.edges = B.edges()

    def is_vertex(self, p: Point) -> bool:
        return any(dist(p, v) <= self.tol for v in self.vertices)

    def host_edge(self, p: Point) -> Optional[int]:
        """Index of an input edge containing p; None if p is off dB."""
        for i, e in enumerate(self.edges):
            if point_segment_distance(p, e.start, e.end) <= self.tol:
                return i
        return None

    def on_edge(self, a: Point, b: Point) -> Optional[int]:
        """Edge hosting the whole segment ab, if any."""
        mid = Point(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
        for i, e in enumerate(self.edges):
            if (
                point_segment_distance(a, e.start, e.end) <= self.tol
                and point_segment_distance(b, e.start, e.end) <= self.tol
                and point_segment_distance(mid, e.start, e.end) <= self.tol
            ):
                return i
        return None

    def segment_piece(self, a: Point, b: Point) -> BoundaryPiece:
        kind = "constrained" if self.on_edge(a, b) is not None else "free"
        return BoundaryPiece(DirectedSegment(a, b), kind, None)


def _hull_chain(u: Point, v: Point, interior: Sequence[Point]) -> list[Point]:
    """Path u -> ... -> v along conv({u, v} + interior) avoiding the edge uv.

    All interior points must lie strictly on one side of the chord, so uv is
    a hull edge and the complementary walk is unique.
    """
    if not interior:
        return [u, v]
    hull = convex_hull([u, v, *interior])
    n = len(hull)
    iu = min(range(n), key=lambda i: dist(hull[i], u))
    iv = min(range(n), key=lambda i: dist(hull[i], v))
    if iu == iv:
        return [u, v]
    fwd = []
    i = iu
    while True:
        fwd.append(hull[i])
        if i == iv:
            break
        i = (i + 1) % n
    bwd = []
    i = iu
    while True:
        bwd.append(hull[i])
        if i == iv:
            break
        i = (i - 1) % n
    path = fwd if len(fwd) >= len(bwd) else bwd
    # pin exact endpoints (hull arithmetic may have copied them verbatim, but
    # be explicit)
    path[0] = u
    path[-1] = v
    return path


def _ring_signed_area(pts: Sequence[Point]) -> float:
    s = 0.0
    for a, b in zip(pts, pts[1:] + [pts[0]]):
        s += shoelace_term(a, b)
    return s


def _point_in_ring(p: Point, pts: Sequence[Point], tol: float = 1e-9) -> bool:
    """Even-odd test in a closed polyline, boundary counts as inside."""
    n = len(pts)
    for i in range(n):
        if point_segment_distance(p, pts[i], pts[(i + 1) % n]) <= tol:
            return True
    for attempt in range(5):
        y = p.y + attempt * 3.1e-8
        inside = False
        ok = True
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            if abs(a.y - y) < 1e-13 or abs(b.y - y) < 1e-13:
                ok = False
                break
            if (a.y > y) != (b.y > y):
                xi = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y)
                if xi > p.x:
                    inside = not inside
        if ok:
            return inside
    return False


def _merge_cycle(pieces: list) -> list:
    """Fuse consecutive fragments of one curve back into maximal pieces.

    The min-cut boundary walk emits one piece per arrangement fragment, so a
    single candidate arc may arrive as several sub-arcs, and a constrained
    run as many collinear bits. Phases reason about maximal pieces.
    """

    def try_merge(a: BoundaryPiece, b: BoundaryPiece):
        if a.kind != b.kind:
            return None
        fa, fb = a.fragment, b.fragment
        if dist(frag_end(fa), frag_start(fb)) > 1e-9:
            return None
        if isinstance(fa, DirectedSegment) and isinstance(fb, DirectedSegment):
            if a.kind != "free":
                # constrained fragments stay split: maximal runs are grouped
                # per host edge later, and collinear edges of two different
                # polygons must not fuse across their touching point
                return None
            if abs(cross(fa.start, fb.end, fa.end)) > 1e-9 * max(
                1.0, dist(fa.start, fb.end)
            ):
                return None
            return BoundaryPiece(DirectedSegment(fa.start, fb.end), a.kind, a.source)
        if isinstance(fa, CircularArc) and isinstance(fb, CircularArc):
            if (
                dist(fa.center, fb.center) > 1e-9
                or abs(fa.radius - fb.radius) > 1e-9
                or fa.ccw != fb.ccw
            ):
                return None
            span = fa.span + fb.span
            if span >= math.pi:  # merged pieces stay minor arcs
                return None
            return BoundaryPiece(
                CircularArc(fa.center, fa.radius, fa.start_angle, span, fa.ccw),
                a.kind,
                a.source,
            )
        return None

    out = list(pieces)
    changed = True
    while changed and len(out) > 1:
        changed = False
        i = 0
        while i < len(out) and len(out) > 1:
            j = (i + 1) % len(out)
            merged = try_merge(out[i], out[j])
            if merged is not None and i != j:
                out[i] = merged
                del out[j]
                changed = True
                if j < i:
                    i -= 1
            else:
                i += 1
    return out


def _canonical(sol: Solution) -> Solution:
    regions = [Region([_merge_cycle(c) for c in r.cycles]) for r in sol.regions]
    return Solution(regions, sol.alpha, sol.solver, sol.objective, dict(sol.stats))


# ---------------------------------------------------------------------------
# Phase 1: straightening free pieces


def _free_runs(cyc: list, index: _InputIndex) -> list[tuple[bool, list]]:
    """Group a cycle into constrained pieces and maximal free runs.

    A free run ends wherever the boundary meets the input again: at a
    constrained piece, or at a joint between two free fragments that lies on
    an input edge (arcs meeting at a polygon corner). Joints away from the
    input, where the optimum hops between two candidate circles, stay inside
    one run, so every run starts and ends on the input boundary.
    """
    n = len(cyc)

    def joint_on_b(i: int) -> bool:
        # joint between cyc[i] and its cyclic successor
        return index.host_edge(frag_end(cyc[i].fragment)) is not None

    start = next((i for i, p in enumerate(cyc) if p.kind != "free"), None)
    if start is None:
        start = next((i for i in range(n) if joint_on_b((i - 1) % n)), None)
    if start is None:
        raise InfeasibleIntermediate("free cycle never meets the input boundary")
    order = cyc[start:] + cyc[:start]
    groups: list[tuple[bool, list]] = []
    for k, p in enumerate(order):
        if p.kind != "free":
            groups.append((False, [p]))
            continue
        prev = order[k - 1] if k else None
        if (
            prev is not None
            and prev.kind == "free"
            and not joint_on_b((start + k - 1) % n)
        ):
            groups[-1][1].append(p)
        else:
            groups.append((True, [p]))
    return groups


def _strictly_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    d1, d2 = cross(a, b, c), cross(a, b, d)
    d3, d4 = cross(c, d, a), cross(c, d, b)
    s = 1e-12 * max(1.0, dist(a, b) * dist(c, d))
    return ((d1 > s and d2 < -s) or (d1 < -s and d2 > s)) and (
        (d3 > s and d4 < -s) or (d3 < -s and d4 > s)
    )


def _straighten_run(pieces: list, index: _InputIndex):
    """Replacement chain for one free run plus its exact objective change.

    The run is replaced by the walk along conv({endpoints} + blocked input
    vertices), the shortest boundary-avoiding path between its endpoints.
    """
    frags = [p.fragment for p in pieces]
    u, v = frag_start(frags[0]), frag_end(frags[-1])
    run_len = sum(f.length for f in frags)
    d = dist(u, v)
    if d <= EPS:
        raise InfeasibleIntermediate("free piece with coincident endpoints")
    if len(frags) == 1 and isinstance(frags[0], CircularArc):
        arc = frags[0]
        # the pocket between chord and arc lies opposite the region: right of
        # the chord for ccw travel, left for cw, and inside the circle
        side = -1.0 if arc.ccw else 1.0
        pocket = []
        for w in index.vertices:
            if dist(w, u) <= 1e-9 or dist(w, v) <= 1e-9:
                continue
            if side * cross(u, v, w) <= 1e-9 * d:
                continue
            if dist(w, arc.center) >= arc.radius - 1e-9:
                continue
            pocket.append(w)
    else:
        # composite run: pocket membership via the ring run + closing chord
        trace: list[Point] = []
        for f in frags:
            poly = discretize_fragment(f, max(1e-12, 1e-6 * run_len))
            trace.extend(poly[1:] if trace else poly)
        lox = min(p.x for p in trace) - 1e-9
        hix = max(p.x for p in trace) + 1e-9
        loy = min(p.y for p in trace) - 1e-9
        hiy = max(p.y for p in trace) + 1e-9
        pocket = []
        for w in index.vertices:
            if not (lox <= w.x <= hix and loy <= w.y <= hiy):
                continue
            if dist(w, u) <= 1e-9 or dist(w, v) <= 1e-9:
                continue
            if _point_in_ring(w, trace):
                pocket.append(w)
    chain = _hull_chain(u, v, pocket)
    if len(frags) > 1:
        # hull walks assume a one-sided pocket; composite runs may weave, so
        # verify the replacement stays outside the input
        for a, b in zip(chain, chain[1:]):
            for e in index.edges:
                if _strictly_cross(a, b, e.start, e.end):
                    raise InfeasibleIntermediate(
                        "straightened piece crosses the input boundary"
                    )
    new_pieces = [
        index.segment_piece(a, b) for a, b in zip(chain, chain[1:]) if dist(a, b) > EPS
    ]
    # area gained by the region: ring of the chain followed by the run walked
    # backwards
    ring: list = [DirectedSegment(a, b) for a, b in zip(chain, chain[1:])]
    ring.extend(f.reversed() for f in reversed(frags))
    added = abs(cycle_area(ring))
    chain_len = sum(dist(a, b) for a, b in zip(chain, chain[1:]))
    return new_pieces, chain_len, added, run_len


def phase1_straighten(sol: Solution, B: PolygonSet) -> tuple[Solution, PhaseReport]:
    index = _InputIndex(B)
    alpha = sol.alpha
    g0 = sol.measure().value
    finite = math.isfinite(alpha)
    regions = []
    n_viol = 0
    delta_total = 0.0
    bound_total = 0.0
    for region in sol.regions:
        cycles = []
        for cyc in region.cycles:
            out = []
            for is_run, pieces in _free_runs(cyc, index):
                if not is_run or (
                    len(pieces) == 1
                    and isinstance(pieces[0].fragment, DirectedSegment)
                ):
                    out.extend(pieces)
                    continue
                n_viol += 1
                new_pieces, chain_len, added, run_len = _straighten_run(
                    pieces, index
                )
                w = alpha if finite else 1.0
                dlt = w * (chain_len - run_len) + (added if finite else 0.0)
                bnd = 0.5 * w * run_len
                _check_bound(dlt, bnd, "straightening a free piece")
                if finite and len(pieces) == 1:
                    # a single arc spans under pi, so its chain stays inside
                    # the circle and every link is shorter than the diameter
                    for np_ in new_pieces:
                        if np_.kind == "free" and np_.fragment.length >= 2 * alpha + 1e-9:
                            raise InfeasibleIntermediate(
                                "straightened piece not shorter than the arc diameter"
                            )
                delta_total += dlt
                bound_total += bnd
                out.extend(new_pieces)
            cycles.append(out)
        regions.append(Region(cycles))
    new_sol = Solution(regions, alpha, "approx-line", None, dict(sol.stats))
    new_sol.objective = new_sol.measure()
    g1 = new_sol.objective.value
    _check_bound(g1, 1.5 * g0, "phase 1 total")
    report = PhaseReport("straighten", n_viol, g1 - g0, bound_total, g0, g1)
    return new_sol, report


# ---------------------------------------------------------------------------
# Phase 2: removing pieces with two interior endpoints


def _slide_piece(piece: BoundaryPiece, index: _InputIndex):
    """Slide a violating segment into the region to the first vertex event.

    Returns (replacement pieces, length released metrics). The region lies
    right of travel, so the slide direction is the right normal.
    """
    seg: DirectedSegment = piece.fragment
    u, v = seg.start, seg.end
    d = seg.length
    dirx, diry = (v.x - u.x) / d, (v.y - u.y) / d
    nx, ny = diry, -dirx  # right normal: into the region
    eu = index.host_edge(u)
    ev = index.host_edge(v)
    if eu is None or ev is None:
        raise InfeasibleIntermediate("violating piece endpoint is off the boundary")
    events: list[float] = []

    def line_dir(eidx: int, anchor: Point):
        e = index.edges[eidx]
        dx, dy = e.end.x - e.start.x, e.end.y - e.start.y
        ln = math.hypot(dx, dy)
        dx, dy = dx / ln, dy / ln
        dot_n = dx * nx + dy * ny
        if abs(dot_n) <= 1e-12:
            raise NoStopEvent("host edge parallel to the sliding piece")
        if dot_n < 0:
            dx, dy, dot_n = -dx, -dy, -dot_n
        return dx, dy, dot_n

    du = line_dir(eu, u)
    dv = line_dir(ev, v)
    # endpoint events: the slide runs off the end of a host edge
    for eidx, anchor in ((eu, u), (ev, v)):
        e = index.edges[eidx]
        for p in (e.start, e.end):
            s = (p.x - anchor.x) * nx + (p.y - anchor.y) * ny
            if s > 1e-12:
                events.append(s)
    if not events:
        raise NoStopEvent("host edges have no endpoint on the inward side")
    s_cap = min(events)
    # depth at which the sliding chord degenerates to the point where the
    # host lines cross; a valid instance stops at or before it
    denom = du[0] * dv[1] - du[1] * dv[0]
    if abs(denom) > 1e-12:
        t_apex = ((v.x - u.x) * dv[1] - (v.y - u.y) * dv[0]) / denom
        s_apex = t_apex * du[2]
        if s_apex <= 0.0:
            s_apex = math.inf
    else:
        s_apex = math.inf

    def endpoint_at(s: float, anchor: Point, dirn) -> Point:
        dx, dy, dot_n = dirn
        t = s / dot_n
        return Point(anchor.x + t * dx, anchor.y + t * dy)

    # vertex hits in the swept band before the earliest endpoint event
    hits: list[tuple[float, float, Point]] = []
    for w in index.vertices:
        s = (w.x - u.x) * nx + (w.y - u.y) * ny
        if s < -1e-12 or s > s_cap + 1e-12:
            continue
        up = endpoint_at(s, u, du)
        vp = endpoint_at(s, v, dv)
        t_along = (w.x - up.x) * dirx + (w.y - up.y) * diry
        span = (vp.x - up.x) * dirx + (vp.y - up.y) * diry
        if span <= 1e-12:
            continue
        if 1e-9 < t_along < span - 1e-9:
            hits.append((s, t_along, w))
    if hits:
        s_star = min(h[0] for h in hits)
        s_star = max(s_star, 0.0)
        split = sorted(
            [(t, w) for s, t, w in hits if s <= s_star + 1e-9], key=lambda h: h[0]
        )
    else:
        s_star = s_cap
        split = []
    if s_star > s_apex + 1e-9:
        raise NoStopEvent("host lines cross before any vertex event")
    up = endpoint_at(s_star, u, du)
    vp = endpoint_at(s_star, v, dv)
    pieces: list[BoundaryPiece] = []
    if dist(u, up) > EPS:
        pieces.append(BoundaryPiece(DirectedSegment(u, up), "constrained", None))
    wayline = [up] + [w for _, w in split] + [vp]
    for a, b in zip(wayline, wayline[1:]):
        if dist(a, b) > EPS:
            pieces.append(index.segment_piece(a, b))
    if dist(vp, v) > EPS:
        pieces.append(BoundaryPiece(DirectedSegment(vp, v), "constrained", None))
    quad_area = abs(
        shoelace_term(u, up)
        + shoelace_term(up, vp)
        + shoelace_term(vp, v)
        + shoelace_term(v, u)
    )
    new_len = sum(p.fragment.length for p in pieces)
    return pieces, new_len, quad_area, d


def phase2_shift(sol: Solution, B: PolygonSet) -> tuple[Solution, PhaseReport]:
    index = _InputIndex(B)
    alpha = sol.alpha
    finite = math.isfinite(alpha)
    w = alpha if finite else 1.0
    g1 = sol.measure().value
    regions = []
    n_viol = 0
    bound_total = 0.0
    for region in sol.regions:
        cycles = []
        for cyc in region.cycles:
            out = []
            for piece in cyc:
                frag = piece.fragment
                if (
                    piece.kind == "free"
                    and isinstance(frag, DirectedSegment)
                    and not index.is_vertex(frag.start)
                    and not index.is_vertex(frag.end)
                ):
                    n_viol += 1
                    new_pieces, new_len, q_area, old_len = _slide_piece(piece, index)
                    dlt = w * (new_len - old_len) - (q_area if finite else 0.0)
                    bnd = 2.0 * (w * old_len + q_area)
                    _check_bound(dlt, bnd, "shifting an interior piece")
                    bound_total += bnd
                    out.extend(new_pieces)
                else:
                    out.append(piece)
            cycles.append(out)
        regions.append(Region(cycles))
    new_sol = Solution(regions, alpha, "approx-vertex", None, dict(sol.stats))
    new_sol.objective = new_sol.measure()
    g2 = new_sol.objective.value
    _check_bound(g2, 3.0 * g1, "phase 2 total")
    report = PhaseReport("shift", n_viol, g2 - g1, bound_total, g1, g2)
    return new_sol, report


# ---------------------------------------------------------------------------
# Phase 3: removing pieces with one interior endpoint


def _constrained_runs(cyc: list, index: _InputIndex) -> list[tuple[int, int, int]]:
    """Maximal runs of constrained pieces on one edge: (start, length, edge)."""
    n = len(cyc)
    hosts = []
    for piece in cyc:
        if piece.kind != "constrained":
            hosts.append(None)
            continue
        frag = piece.fragment
        hosts.append(index.on_edge(frag_start(frag), frag_end(frag)))
    runs = []
    i = 0
    visited = [False] * n
    for i in range(n):
        if hosts[i] is None or visited[i]:
            continue
        # extend backwards to find the run start
        s = i
        while hosts[(s - 1) % n] == hosts[i] and (s - 1) % n != i:
            s = (s - 1) % n
        ln = 1
        while hosts[(s + ln) % n] == hosts[i] and ln < n:
            ln += 1
        for k in range(ln):
            visited[(s + k) % n] = True
        runs.append((s, ln, hosts[i]))
    return runs


def phase3_fill(sol: Solution, B: PolygonSet) -> tuple[Solution, PhaseReport]:
    index = _InputIndex(B)
    alpha = sol.alpha
    finite = math.isfinite(alpha)
    w = alpha if finite else 1.0
    g2 = sol.measure().value
    regions = []
    n_viol = 0
    bound_total = 0.0
    for region in sol.regions:
        cycles = []
        for cyc in region.cycles:
            cyc = _merge_cycle(cyc)
            n = len(cyc)
            replaced = [False] * n
            surgeries = []  # (sorted positions, replacement pieces, delta, bound)
            for s, ln, edge in _constrained_runs(cyc, index):
                first = cyc[s].fragment
                last = cyc[(s + ln - 1) % n].fragment
                start_pt = frag_start(first)
                end_pt = frag_end(last)
                pre_idx = (s - 1) % n
                post_idx = (s + ln) % n
                f1 = None
                f2 = None
                if not index.is_vertex(start_pt):
                    f1 = cyc[pre_idx]
                    if f1.kind != "free" or not isinstance(f1.fragment, DirectedSegment):
                        raise InfeasibleIntermediate(
                            "interior run endpoint not preceded by a free segment"
                        )
                if not index.is_vertex(end_pt):
                    f2 = cyc[post_idx]
                    if f2.kind != "free" or not isinstance(f2.fragment, DirectedSegment):
                        raise InfeasibleIntermediate(
                            "interior run endpoint not followed by a free segment"
                        )
                if f1 is None and f2 is None:
                    continue
                n_viol += 1 if f1 is None or f2 is None else 2
                positions = ([pre_idx] if f1 is not None else [])
                positions += [(s + k) % n for k in range(ln)]
                positions += [post_idx] if f2 is not None else []
                path_pieces = [cyc[p] for p in positions]
                pts = [frag_start(path_pieces[0].fragment)]
                for p in path_pieces:
                    pts.append(frag_end(p.fragment))
                u1, v2 = pts[0], pts[-1]
                p_len = sum(p.fragment.length for p in path_pieces)
                closed = dist(u1, v2) <= EPS
                # vertices of B inside the pocket between the chord and path
                pocket = []
                for vtx in index.vertices:
                    if dist(vtx, u1) <= 1e-9 or dist(vtx, v2) <= 1e-9:
                        continue
                    if _point_in_ring(vtx, pts):
                        pocket.append(vtx)
                ring_area = sum(shoelace_term(a, b) for a, b in zip(pts, pts[1:]))
                ring_area += shoelace_term(pts[-1], pts[0])
                if closed:
                    if ring_area > 0:
                        raise InfeasibleIntermediate(
                            "closed fill cycle winds like a hole"
                        )
                    # the whole cycle collapses to the hull of what it covers,
                    # walked clockwise to keep the interior on the right
                    hull = convex_hull([u1, *pocket])
                    iu = min(range(len(hull)), key=lambda i: dist(hull[i], u1))
                    chain = [hull[(iu - k) % len(hull)] for k in range(len(hull))]
                    chain.append(chain[0])
                else:
                    chain = _hull_chain(u1, v2, pocket)
                new_pieces = [
                    index.segment_piece(a, b)
                    for a, b in zip(chain, chain[1:])
                    if dist(a, b) > EPS
                ]
                c_len = sum(p.fragment.length for p in new_pieces)
                chain_area = sum(
                    shoelace_term(a, b) for a, b in zip(chain, chain[1:])
                )
                chain_area += shoelace_term(chain[-1], chain[0])
                # chord closing terms cancel, leaving the exact region growth
                added = ring_area - chain_area
                dlt = w * (c_len - p_len) + (added if finite else 0.0)
                bnd = 2.0 * w * p_len
                _check_bound(dlt, bnd, "filling a constrained run")
                bound_total += bnd
                surgeries.append((positions, new_pieces))
            if surgeries:
                drop = set()
                insert_at: dict[int, list] = {}
                for positions, new_pieces in surgeries:
                    for p in positions:
                        if p in drop:
                            raise InfeasibleIntermediate(
                                "overlapping fill operations on one cycle"
                            )
                        drop.add(p)
                    insert_at[positions[0]] = new_pieces
                out = []
                for i in range(n):
                    if i in insert_at:
                        out.extend(insert_at[i])
                    if i not in drop:
                        out.append(cyc[i])
                cycles.append(out)
            else:
                cycles.append(cyc)
        cycles = [c for c in cycles if c]
        if cycles:
            regions.append(Region(cycles))
    new_sol = Solution(regions, alpha, "approx-vertex", None, dict(sol.stats))
    new_sol.objective = new_sol.measure()
    g3 = new_sol.objective.value
    _check_bound(g3, 3.0 * g2, "phase 3 total")
    report = PhaseReport("fill", n_viol, g3 - g2, bound_total, g2, g3)
    return new_sol, report


# ---------------------------------------------------------------------------
# entry points


def _exact_solution(B: PolygonSet, alpha: float) -> Solution:
    from .arrangement import build_arrangement
    from .candidates import generate_candidates
    from .mincut import solve_subdivision

    sub = build_arrangement(B, generate_candidates(B, alpha))
    return solve_subdivision(sub, alpha, "exact")


def approx_line(
    B: PolygonSet, alpha: float, exact: Optional[Solution] = None
) -> Solution:
    """Straight-line solution within factor 1.5 of the unrestricted optimum."""
    base = exact if exact is not None else _exact_solution(B, alpha)
    g0 = base.measure().value
    sol, rep = phase1_straighten(_canonical(base), B)
    sol.solver = "approx-line"
    sol.stats["phases"] = [rep.as_dict()]
    sol.stats["g_exact"] = g0
    sol.stats["ratio"] = sol.objective.value / g0 if g0 > 0 else 1.0
    return sol


def approx_vertex(
    B: PolygonSet, alpha: float, exact: Optional[Solution] = None
) -> Solution:
    """Vertex-to-vertex solution within factor 13.5 of the unrestricted optimum."""
    base = exact if exact is not None else _exact_solution(B, alpha)
    g0 = base.measure().value
    s1, rep1 = phase1_straighten(_canonical(base), B)
    s2, rep2 = phase2_shift(s1, B)
    s3, rep3 = phase3_fill(s2, B)
    s3.solver = "approx-vertex"
    s3.stats["phases"] = [rep1.as_dict(), rep2.as_dict(), rep3.as_dict()]
    s3.stats["g_exact"] = g0
    s3.stats["ratio"] = s3.objective.value / g0 if g0 > 0 else 1.0
    if g0 > 0 and s3.objective.value > 13.5 * g0 * (1 + _FAIL_REL):
        raise InfeasibleIntermediate("vertex rounding exceeded its overall factor")
    return s3
