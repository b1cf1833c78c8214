"""Planar geometry primitives and the scalar measures of the aggregation objective.

The engine covers a set of interior-disjoint simple polygons with disjoint
closed regions minimizing

    g_alpha(S) = A(S) + alpha * P(S)

where A is total area, P total boundary length and alpha >= 0 a length-scale
parameter. This module provides the value types (points, segments, circular
arcs, polygons) plus the scalar formulas the solvers rely on: circular-segment
measures, curve efficiency, objective evaluation and uniform scaling.

All types are immutable after construction and safe to share between threads.
Coordinates are plain floats; predicates use a single absolute tolerance EPS,
assuming inputs are normalized to a bounding box of diameter O(1)..O(1e4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import (
    ChordTooLong,
    CurveCrossesChordLine,
    DegenerateChord,
    GeometryError,
    NonPositiveFactor,
    OpenBoundary,
    OverlappingInputs,
    OverlappingRegions,
    SelfIntersectingInput,
)

#: Single tolerance for equality/incidence predicates (length units).
EPS = 1e-9

TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    """A point in the plane. Behaves like a (x, y) tuple."""

    x: float
    y: float

    def __repr__(self) -> str:  # keep short in test output
        return f"({self.x:.12g}, {self.y:.12g})"


PointLike = Union[Point, Sequence[float]]


def as_point(p: PointLike) -> Point:
    if isinstance(p, Point):
        return p
    return Point(float(p[0]), float(p[1]))


# ---------------------------------------------------------------------------
# vector helpers


def dist(a: PointLike, b: PointLike) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def cross(o: PointLike, a: PointLike, b: PointLike) -> float:
    """Cross product (a - o) x (b - o); positive when o->a->b turns left."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def dot(o: PointLike, a: PointLike, b: PointLike) -> float:
    return (a[0] - o[0]) * (b[0] - o[0]) + (a[1] - o[1]) * (b[1] - o[1])


def orientation(a: PointLike, b: PointLike, c: PointLike, eps: float = EPS) -> int:
    """Sign of the turn a->b->c: +1 left, -1 right, 0 collinear under eps.

    The zero band is measured as the distance from c to line(a, b), so the
    predicate stays length-scaled like every other tolerance in the package.
    """
    ab = dist(a, b)
    cr = cross(a, b, c)
    if ab <= eps:
        return 0
    d = cr / ab  # signed distance from c to line(a,b)
    if d > eps:
        return 1
    if d < -eps:
        return -1
    return 0


def norm_angle(phi: float) -> float:
    """Normalize an angle to [0, 2*pi)."""
    phi = math.fmod(phi, TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    if phi >= TWO_PI:  # fmod round-off
        phi -= TWO_PI
    return phi


def angle_of(center: PointLike, p: PointLike) -> float:
    return norm_angle(math.atan2(p[1] - center[1], p[0] - center[0]))


def ccw_span(start: float, end: float) -> float:
    """Positive angular distance from start to end going counterclockwise."""
    return norm_angle(end - start)


def project_t(a: PointLike, b: PointLike, p: PointLike) -> float:
    """Parameter of the orthogonal projection of p onto line(a, b)."""
    ab2 = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
    if ab2 == 0.0:
        return 0.0
    return ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / ab2


def point_segment_distance(p: PointLike, a: PointLike, b: PointLike) -> float:
    t = project_t(a, b, p)
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    q = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
    return dist(p, q)


# ---------------------------------------------------------------------------
# primitive curves


@dataclass(frozen=True)
class DirectedSegment:
    """Straight segment from ``start`` to ``end``; degenerate ones rejected."""

    start: Point
    end: Point

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end))
        if not all(map(math.isfinite, (*self.start, *self.end))):
            raise GeometryError("non-finite segment coordinates")
        if dist(self.start, self.end) <= EPS:
            raise GeometryError(f"degenerate segment at {self.start}")

    @property
    def length(self) -> float:
        return dist(self.start, self.end)

    def point_at(self, t: float) -> Point:
        return Point(
            self.start.x + t * (self.end.x - self.start.x),
            self.start.y + t * (self.end.y - self.start.y),
        )

    @property
    def midpoint(self) -> Point:
        return self.point_at(0.5)

    def direction(self) -> Point:
        """Unit direction vector."""
        L = self.length
        return Point((self.end.x - self.start.x) / L, (self.end.y - self.start.y) / L)

    def reversed(self) -> "DirectedSegment":
        return DirectedSegment(self.end, self.start)

    def bbox(self) -> tuple[float, float, float, float]:
        return (
            min(self.start.x, self.end.x),
            min(self.start.y, self.end.y),
            max(self.start.x, self.end.x),
            max(self.start.y, self.end.y),
        )


@dataclass(frozen=True)
class CircularArc:
    """Circular arc in canonical parameterization.

    The arc starts at angle ``start_angle`` (normalized to [0, 2*pi)) on the
    circle ``center``/``radius`` and spans the positive angle ``span`` in the
    direction given by ``ccw``. Candidate arcs always have span < pi, but
    fragments produced by the arrangement may carry any span in (0, 2*pi).
    """

    center: Point
    radius: float
    start_angle: float
    span: float
    ccw: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_point(self.center))
        if not (math.isfinite(self.radius) and self.radius > EPS):
            raise GeometryError(f"arc radius must be positive, got {self.radius}")
        if not (0.0 < self.span < TWO_PI):
            raise GeometryError(f"arc span must lie in (0, 2*pi), got {self.span}")
        object.__setattr__(self, "start_angle", norm_angle(self.start_angle))

    # -- derived quantities ------------------------------------------------

    @property
    def end_angle(self) -> float:
        if self.ccw:
            return norm_angle(self.start_angle + self.span)
        return norm_angle(self.start_angle - self.span)

    @property
    def theta(self) -> float:
        """Central angle (always the traversed span)."""
        return self.span

    @property
    def length(self) -> float:
        return self.radius * self.span

    @property
    def chord_length(self) -> float:
        # 2 r sin(span/2) is the endpoint distance for any span in (0, 2*pi)
        return 2.0 * self.radius * math.sin(0.5 * self.span)

    def angle_at(self, t: float) -> float:
        d = self.span * t
        return norm_angle(self.start_angle + (d if self.ccw else -d))

    def point_at_angle(self, phi: float) -> Point:
        return Point(
            self.center.x + self.radius * math.cos(phi),
            self.center.y + self.radius * math.sin(phi),
        )

    def point_at(self, t: float) -> Point:
        return self.point_at_angle(self.angle_at(t))

    @property
    def start_point(self) -> Point:
        return self.point_at_angle(self.start_angle)

    @property
    def end_point(self) -> Point:
        return self.point_at_angle(self.end_angle)

    @property
    def midpoint(self) -> Point:
        return self.point_at(0.5)

    def tangent_at(self, t: float) -> Point:
        """Unit tangent in traversal direction at parameter t."""
        phi = self.angle_at(t)
        if self.ccw:
            return Point(-math.sin(phi), math.cos(phi))
        return Point(math.sin(phi), -math.cos(phi))

    def contains_angle(self, phi: float, eps_arc: float = EPS) -> bool:
        """Is the circle point at angle phi on this arc (within eps arc-length)?"""
        slack = eps_arc / self.radius
        d = ccw_span(self.start_angle, phi)
        if not self.ccw:
            d = norm_angle(-d) if d != 0.0 else 0.0
        return d <= self.span + slack or d >= TWO_PI - slack

    def param_of_angle(self, phi: float) -> float:
        d = ccw_span(self.start_angle, phi)
        if not self.ccw:
            d = TWO_PI - d if d != 0.0 else 0.0
        if d > self.span:
            # angle is outside the span (tangency jitter): attribute it to
            # the closer endpoint instead of wrapping around the circle
            return 1.0 if d - self.span <= TWO_PI - d else 0.0
        return d / self.span

    def reversed(self) -> "CircularArc":
        return CircularArc(self.center, self.radius, self.end_angle, self.span, not self.ccw)

    def subarc(self, phi_a: float, phi_b: float) -> "CircularArc":
        """Sub-arc from angle phi_a to phi_b following this arc's direction."""
        span = ccw_span(phi_a, phi_b) if self.ccw else ccw_span(phi_b, phi_a)
        return CircularArc(self.center, self.radius, phi_a, span, self.ccw)

    def signed_segment_area(self) -> float:
        """Signed area between chord and arc: positive for ccw traversal.

        Adding this to the chord shoelace term turns polygon area sums into
        exact areas for arc-bounded cycles.
        """
        s = self.span - math.sin(self.span)
        a = 0.5 * self.radius * self.radius * s
        return a if self.ccw else -a

    def bbox(self) -> tuple[float, float, float, float]:
        pts = [self.start_point, self.end_point]
        for k in range(4):
            phi = k * math.pi / 2.0
            if self.contains_angle(phi):
                pts.append(self.point_at_angle(phi))
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        return (min(xs), min(ys), max(xs), max(ys))


Fragment = Union[DirectedSegment, CircularArc]


def frag_start(f: Fragment) -> Point:
    return f.start if isinstance(f, DirectedSegment) else f.start_point


def frag_end(f: Fragment) -> Point:
    return f.end if isinstance(f, DirectedSegment) else f.end_point


def frag_length(f: Fragment) -> float:
    return f.length


def frag_reversed(f: Fragment) -> Fragment:
    return f.reversed()


def frag_midpoint(f: Fragment) -> Point:
    return f.midpoint


def shoelace_term(a: PointLike, b: PointLike) -> float:
    return 0.5 * (a[0] * b[1] - b[0] * a[1])


def cycle_area(frags: Sequence[Fragment]) -> float:
    """Signed area of a closed fragment cycle (counterclockwise positive)."""
    total = 0.0
    for f in frags:
        a, b = frag_start(f), frag_end(f)
        total += shoelace_term(a, b)
        if isinstance(f, CircularArc):
            total += f.signed_segment_area()
    return total


def cycle_length(frags: Sequence[Fragment]) -> float:
    return sum(f.length for f in frags)


def discretize_fragment(f: Fragment, sagitta: float) -> list[Point]:
    """Polyline approximation of a fragment, including both endpoints.

    For arcs the number of samples is chosen so the chord-to-arc deviation
    stays below ``sagitta``.
    """
    if isinstance(f, DirectedSegment):
        return [f.start, f.end]
    sag = max(sagitta, 1e-12)
    if sag >= f.radius:
        step = math.pi / 2.0
    else:
        step = 2.0 * math.acos(max(-1.0, 1.0 - sag / f.radius))
    n = max(2, math.ceil(f.span / step) + 1)
    return [f.point_at(i / (n - 1)) for i in range(n)]


def discretize_cycle(frags: Sequence[Fragment], sagitta: float) -> list[Point]:
    pts: list[Point] = []
    for f in frags:
        poly = discretize_fragment(f, sagitta)
        if pts:
            poly = poly[1:]
        pts.extend(poly)
    if pts and dist(pts[0], pts[-1]) <= 1e-7:
        pts.pop()
    return pts


# ---------------------------------------------------------------------------
# scalar formulas


def circular_segment_area(radius: float, theta: float) -> float:
    """Area between a chord and its arc: (r^2 / 2) * (theta - sin theta).

    Candidate arcs only ever need theta in [0, pi]; spans up to 2*pi are
    accepted because arrangement fragments may exceed pi. Tiny negative
    round-off is clamped to zero.
    """
    if radius <= 0.0:
        raise GeometryError("radius must be positive")
    if theta < -EPS or theta > TWO_PI + EPS:
        raise GeometryError(f"central angle out of range: {theta}")
    theta = min(max(theta, 0.0), TWO_PI)
    return max(0.0, 0.5 * radius * radius * (theta - math.sin(theta)))


def arc_from_chord(u: PointLike, v: PointLike, radius: float, side: str = "right") -> CircularArc:
    """The unique minor arc of given radius through u and v bulging to one side.

    ``side='right'`` places the arc right of the directed chord u->v (the
    circle center then lies left of it). Requires 0 < |uv| < 2*radius with a
    strict relative margin so the central angle stays below pi.
    """
    u = as_point(u)
    v = as_point(v)
    d = dist(u, v)
    if d <= EPS:
        raise DegenerateChord(f"|uv| = {d} <= eps")
    if d >= 2.0 * radius * (1.0 - 1e-9):
        raise ChordTooLong(f"|uv| = {d} >= 2 * radius = {2 * radius}")
    if side not in ("right", "left"):
        raise GeometryError(f"side must be 'right' or 'left', got {side!r}")
    h = math.sqrt(max(0.0, radius * radius - 0.25 * d * d))
    mx, my = 0.5 * (u.x + v.x), 0.5 * (u.y + v.y)
    # unit left normal of u->v
    nx, ny = -(v.y - u.y) / d, (v.x - u.x) / d
    if side == "left":
        nx, ny = -nx, -ny
    center = Point(mx + h * nx, my + h * ny)
    theta = 2.0 * math.asin(min(1.0, 0.5 * d / radius))
    start = angle_of(center, u)
    # bulging right of u->v means counterclockwise travel around a center on
    # the left (and vice versa)
    ccw = side == "right"
    return CircularArc(center, radius, start, theta, ccw)


def efficiency(u: PointLike, v: PointLike, curve) -> float:
    """Objective gain of boundary curve f over the straight chord uv.

    e_uv(f) = -L(f) + L(uv) + A(R) when f runs right of u->v and
    -L(f) + L(uv) - A(R) when left, where R is the region enclosed between
    f and the chord. The straight segment scores exactly 0; the best curve
    for alpha = 1 is the radius-1 arc.

    ``curve`` may be a DirectedSegment, a CircularArc (running u -> v), or a
    polyline given as a point sequence starting at u and ending at v. Curves
    properly crossing line(u, v) are rejected.
    """
    u = as_point(u)
    v = as_point(v)
    d = dist(u, v)
    if d <= EPS:
        raise DegenerateChord("efficiency needs a non-degenerate chord")
    if isinstance(curve, DirectedSegment):
        if dist(curve.start, u) > 1e-7 or dist(curve.end, v) > 1e-7:
            raise GeometryError("segment does not run from u to v")
        return 0.0
    if isinstance(curve, CircularArc):
        if dist(curve.start_point, u) > 1e-7 or dist(curve.end_point, v) > 1e-7:
            raise GeometryError("arc does not run from u to v")
        # ring u->v (chord) then v->u (arc reversed); the chord shoelace terms
        # cancel, leaving the reversed arc's segment correction. The circle
        # meets line(u, v) only at u and v, so no proper crossing is possible.
        ring_area = curve.reversed().signed_segment_area()
        length = curve.length
    else:
        pts = [as_point(p) for p in curve]
        if dist(pts[0], u) > 1e-7 or dist(pts[-1], v) > 1e-7:
            raise GeometryError("polyline does not run from u to v")
        sides = {orientation(u, v, p) for p in pts[1:-1]}
        if 1 in sides and -1 in sides:
            raise CurveCrossesChordLine("polyline crosses line(u, v)")
        ring = [u, v] + list(reversed(pts[1:-1]))
        ring_area = 0.0
        for i, a in enumerate(ring):
            b = ring[(i + 1) % len(ring)]
            ring_area += shoelace_term(a, b)
        length = sum(dist(pts[i], pts[i + 1]) for i in range(len(pts) - 1))
    # ring = chord forward + curve backward: its signed area is -A(R) when the
    # curve lies right of u->v and +A(R) when left, so subtracting it matches
    # the side-dependent definition in one expression
    return -length + d - ring_area


# ---------------------------------------------------------------------------
# polygons


def _strip_ring(points: Sequence[Point]) -> list[Point]:
    """Remove duplicate and collinear ring vertices under tolerance."""
    pts = [as_point(p) for p in points]
    if len(pts) >= 2 and dist(pts[0], pts[-1]) <= EPS:
        pts.pop()
    # drop consecutive duplicates
    out: list[Point] = []
    for p in pts:
        if not out or dist(out[-1], p) > EPS:
            out.append(p)
    if len(out) >= 2 and dist(out[0], out[-1]) <= EPS:
        out.pop()
    # drop collinear vertices (distance to the chord of the neighbors <= eps)
    changed = True
    while changed and len(out) >= 3:
        changed = False
        for i in range(len(out)):
            a = out[i - 1]
            b = out[i]
            c = out[(i + 1) % len(out)]
            if point_segment_distance(b, a, c) <= EPS:
                out.pop(i)
                changed = True
                break
    return out


def _segments_properly_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


@dataclass(frozen=True)
class Polygon:
    """Simple polygon as a counterclockwise vertex ring (implicitly closed).

    Construction normalizes the ring: enforces CCW order, strips duplicate
    and collinear vertices, and rejects self-intersections under tolerance.
    """

    vertices: tuple[Point, ...]

    def __init__(self, vertices: Iterable[PointLike]):
        ring = _strip_ring([as_point(p) for p in vertices])
        if len(ring) < 3:
            raise GeometryError("polygon needs at least 3 non-collinear vertices")
        for p in ring:
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise GeometryError("non-finite polygon coordinates")
        area2 = sum(
            ring[i].x * ring[(i + 1) % len(ring)].y - ring[(i + 1) % len(ring)].x * ring[i].y
            for i in range(len(ring))
        )
        if abs(area2) <= EPS * EPS:
            raise GeometryError("polygon area is zero under tolerance")
        if area2 < 0.0:
            ring.reverse()
        object.__setattr__(self, "vertices", tuple(ring))
        self._check_simple()

    def _check_simple(self) -> None:
        ring = self.vertices
        n = len(ring)
        for i in range(n):
            for j in range(i + 1, n):
                if dist(ring[i], ring[j]) <= EPS:
                    raise SelfIntersectingInput(f"ring revisits vertex {i}")
        for i in range(n):
            a, b = ring[i], ring[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue  # adjacent edges share a vertex by construction
                c, d = ring[j], ring[(j + 1) % n]
                if _segments_properly_intersect(a, b, c, d):
                    raise SelfIntersectingInput(f"edges {i} and {j} cross")
                # touching contacts between non-adjacent edges pinch the ring
                for p in (c, d):
                    if point_segment_distance(p, a, b) <= EPS and dist(p, a) > EPS and dist(p, b) > EPS:
                        raise SelfIntersectingInput(f"vertex touches edge {i}")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def area(self) -> float:
        v = self.vertices
        return 0.5 * sum(
            v[i].x * v[(i + 1) % self.n].y - v[(i + 1) % self.n].x * v[i].y for i in range(self.n)
        )

    @property
    def perimeter(self) -> float:
        v = self.vertices
        return sum(dist(v[i], v[(i + 1) % self.n]) for i in range(self.n))

    def edges(self) -> list[DirectedSegment]:
        v = self.vertices
        return [DirectedSegment(v[i], v[(i + 1) % self.n]) for i in range(self.n)]

    def bbox(self) -> tuple[float, float, float, float]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def contains_point(self, p: PointLike, eps: float = EPS) -> int:
        """+1 strictly inside, 0 on the boundary (within eps), -1 outside."""
        p = as_point(p)
        v = self.vertices
        for i in range(self.n):
            if point_segment_distance(p, v[i], v[(i + 1) % self.n]) <= eps:
                return 0
        inside = False
        x, y = p
        for i in range(self.n):
            a, b = v[i], v[(i + 1) % self.n]
            if (a.y > y) != (b.y > y):
                xi = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y)
                if xi > x:
                    inside = not inside
        return 1 if inside else -1

    def interior_point(self) -> Point:
        """Some point strictly inside the polygon."""
        v = self.vertices
        # try ear midpoints at convex corners first
        for i in range(self.n):
            a, b, c = v[i - 1], v[i], v[(i + 1) % self.n]
            if orientation(a, b, c) <= 0:
                continue
            q = Point((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
            if self.contains_point(q) > 0:
                return q
            # shrink towards the corner until inside
            for _ in range(40):
                q = Point(0.5 * (q.x + b.x), 0.5 * (q.y + b.y))
                if self.contains_point(q) > 0:
                    return q
        raise GeometryError("could not find an interior point")

    def translated(self, dx: float, dy: float) -> "Polygon":
        return Polygon([(p.x + dx, p.y + dy) for p in self.vertices])

    def scaled(self, c: float) -> "Polygon":
        return Polygon([(p.x * c, p.y * c) for p in self.vertices])


@dataclass(frozen=True)
class PolygonSet:
    """Input instance: pairwise interior-disjoint simple polygons."""

    polygons: tuple[Polygon, ...]

    def __init__(self, polygons: Iterable[Polygon]):
        polys = tuple(polygons)
        if not polys:
            raise GeometryError("empty polygon set")
        object.__setattr__(self, "polygons", polys)
        self._check_disjoint()

    @classmethod
    def from_coordinates(cls, rings: Iterable[Iterable[PointLike]]) -> "PolygonSet":
        return cls([Polygon(r) for r in rings])

    def _check_disjoint(self) -> None:
        ps = self.polygons
        boxes = [p.bbox() for p in ps]
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                bi, bj = boxes[i], boxes[j]
                if bi[2] < bj[0] - EPS or bj[2] < bi[0] - EPS:
                    continue
                if bi[3] < bj[1] - EPS or bj[3] < bi[1] - EPS:
                    continue
                a, b = ps[i], ps[j]
                for ea in a.edges():
                    for eb in b.edges():
                        if _segments_properly_intersect(ea.start, ea.end, eb.start, eb.end):
                            raise OverlappingInputs(f"polygons {i} and {j} overlap")
                if b.contains_point(a.interior_point()) > 0 or a.contains_point(b.interior_point()) > 0:
                    raise OverlappingInputs(f"polygons {i} and {j} overlap")

    def __len__(self) -> int:
        return len(self.polygons)

    def __iter__(self):
        return iter(self.polygons)

    def vertices(self) -> list[Point]:
        """All vertices, polygon by polygon (index order is the global id)."""
        out: list[Point] = []
        for p in self.polygons:
            out.extend(p.vertices)
        return out

    def edges(self) -> list[DirectedSegment]:
        """All edges in CCW per-polygon order (index order is the global id)."""
        out: list[DirectedSegment] = []
        for p in self.polygons:
            out.extend(p.edges())
        return out

    @property
    def total_area(self) -> float:
        return sum(p.area for p in self.polygons)

    @property
    def total_perimeter(self) -> float:
        return sum(p.perimeter for p in self.polygons)

    def bbox(self) -> tuple[float, float, float, float]:
        bs = [p.bbox() for p in self.polygons]
        return (
            min(b[0] for b in bs),
            min(b[1] for b in bs),
            max(b[2] for b in bs),
            max(b[3] for b in bs),
        )

    def convex_hull(self) -> list[Point]:
        return convex_hull(self.vertices())

    def diameter(self) -> float:
        hull = self.convex_hull()
        return max(dist(a, b) for a in hull for b in hull) if len(hull) > 1 else 0.0

    def contains_point(self, p: PointLike, eps: float = EPS) -> int:
        """+1 strictly inside some polygon, 0 on some boundary, -1 outside all."""
        best = -1
        for poly in self.polygons:
            r = poly.contains_point(p, eps)
            if r > 0:
                return 1
            best = max(best, r)
        return best


def scale_instance(B: PolygonSet, c: float) -> PolygonSet:
    """Scale every coordinate by c about the origin (c > 0)."""
    if not (math.isfinite(c) and c > 0.0):
        raise NonPositiveFactor(f"scale factor must be > 0, got {c}")
    return PolygonSet([p.scaled(c) for p in B.polygons])


def convex_hull(points: Sequence[PointLike]) -> list[Point]:
    """Convex hull (CCW, no collinear points) via the monotone chain."""
    pts = sorted({(round(p[0], 12), round(p[1], 12)) for p in points})
    pts = [Point(x, y) for x, y in pts]
    if len(pts) <= 2:
        return pts

    def build(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= EPS * dist(out[-2], out[-1]):
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    return lower[:-1] + upper[:-1]


# ---------------------------------------------------------------------------
# objective


@dataclass(frozen=True)
class ObjectiveBreakdown:
    """Objective value g_alpha = area + alpha * perimeter with its components.

    For alpha = inf the solver minimizes perimeter lexicographically (area as
    tie-break) and ``value`` reports the perimeter.
    """

    area: float
    perimeter: float
    alpha: float
    value: float

    @classmethod
    def compute(cls, area: float, perimeter: float, alpha: float) -> "ObjectiveBreakdown":
        if area < -EPS or perimeter < -EPS or alpha < 0.0:
            raise GeometryError("objective components must be non-negative")
        area = max(area, 0.0)
        perimeter = max(perimeter, 0.0)
        value = perimeter if math.isinf(alpha) else area + alpha * perimeter
        return cls(area, perimeter, alpha, value)


RegionCycles = Sequence[Sequence[Fragment]]


def region_measures(cycles: RegionCycles) -> tuple[float, float]:
    """(area, perimeter) of a region given by outer + hole boundary cycles.

    Cycle orientation decides the sign of each area contribution, so a region
    passed as one CCW outer cycle plus CW hole cycles sums to its proper area.
    """
    area = 0.0
    perim = 0.0
    for cyc in cycles:
        if not cyc:
            continue
        if dist(frag_end(cyc[-1]), frag_start(cyc[0])) > 1e-6:
            raise OpenBoundary("boundary cycle does not close")
        for i in range(len(cyc) - 1):
            if dist(frag_end(cyc[i]), frag_start(cyc[i + 1])) > 1e-6:
                raise OpenBoundary("boundary cycle has a gap")
        area += cycle_area(cyc)
        perim += cycle_length(cyc)
    return area, perim


def _cycles_to_rings(cycles: RegionCycles, sagitta: float) -> list[list[Point]]:
    return [discretize_cycle(c, sagitta) for c in cycles if c]


def _ring_contains(ring: Sequence[Point], p: Point) -> bool:
    inside = False
    x, y = p
    n = len(ring)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if (a.y > y) != (b.y > y):
            xi = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y)
            if xi > x:
                inside = not inside
    return inside


def _regions_overlap(rings_a: list[list[Point]], rings_b: list[list[Point]]) -> bool:
    # proper boundary crossing
    for ra in rings_a:
        for rb in rings_b:
            for i in range(len(ra)):
                a1, a2 = ra[i], ra[(i + 1) % len(ra)]
                for j in range(len(rb)):
                    b1, b2 = rb[j], rb[(j + 1) % len(rb)]
                    if _segments_properly_intersect(a1, a2, b1, b2):
                        return True
    # containment without crossing: test a sample vertex strictly inside
    def inside_any(rings, p):
        cnt = sum(1 for r in rings if _ring_contains(r, p))
        return cnt % 2 == 1

    for ra in rings_a:
        for p in ra[: min(4, len(ra))]:
            if inside_any(rings_b, p):
                return True
    for rb in rings_b:
        for p in rb[: min(4, len(rb))]:
            if inside_any(rings_a, p):
                return True
    return False


def objective(regions: Sequence[RegionCycles], alpha: float, check_disjoint: bool = True) -> ObjectiveBreakdown:
    """Evaluate g_alpha over disjoint regions given by boundary cycles.

    Each region is a sequence of closed fragment cycles (outer boundary CCW,
    holes CW). Raises OverlappingRegions when two regions share interior
    points (checked on a fine discretization of the boundaries).
    """
    measures = [region_measures(c) for c in regions]
    if check_disjoint and len(regions) > 1:
        span = max((abs(a) for a, _ in measures), default=1.0)
        sag = max(1e-6, 1e-4 * math.sqrt(span))
        rings = [_cycles_to_rings(c, sag) for c in regions]
        for i in range(len(rings)):
            for j in range(i + 1, len(rings)):
                if _regions_overlap(rings[i], rings[j]):
                    raise OverlappingRegions(f"regions {i} and {j} overlap")
    area = sum(a for a, _ in measures)
    perim = sum(p for _, p in measures)
    return ObjectiveBreakdown.compute(area, perim, alpha)
