"""Primitive geometry: arcs, measures, efficiency, scaling."""

import math

import pytest

from arcagg import (
    CircularArc,
    DirectedSegment,
    Point,
    Polygon,
    PolygonSet,
    arc_from_chord,
    circular_segment_area,
    efficiency,
    objective,
    scale_instance,
)
from arcagg.errors import ChordTooLong, DegenerateChord, GeometryError
from arcagg.geom import (
    convex_hull,
    cycle_area,
    cycle_length,
    discretize_fragment,
    frag_end,
    frag_start,
)

from conftest import rect, two_squares


def test_arc_from_chord_unit():
    # chord length 1, radius 1: half-angle asin(1/2), center at height
    # cos(pi/6) = sqrt(3)/2 on the left of u->v
    a = arc_from_chord((0, 0), (1, 0), 1.0)
    assert a.center.x == pytest.approx(0.5, abs=1e-12)
    assert a.center.y == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
    assert a.span == pytest.approx(math.pi / 3, abs=1e-12)
    assert a.length == pytest.approx(math.pi / 3, abs=1e-12)
    assert a.start_point.x == pytest.approx(0.0, abs=1e-12)
    assert a.end_point.x == pytest.approx(1.0, abs=1e-12)


def test_arc_from_chord_rejects_long_and_degenerate_chords():
    with pytest.raises(ChordTooLong):
        arc_from_chord((0, 0), (2, 0), 1.0)
    with pytest.raises((DegenerateChord, GeometryError)):
        arc_from_chord((0, 0), (0, 0), 1.0)


def test_circular_segment_area_quarter():
    # A = r^2/2 (theta - sin theta); r=2, theta=pi/2
    assert circular_segment_area(2.0, math.pi / 2) == pytest.approx(
        2 * (math.pi / 2 - 1), abs=1e-12
    )
    assert circular_segment_area(1.0, 0.0) == 0.0
    assert circular_segment_area(1.0, 2 * math.pi) == pytest.approx(math.pi, abs=1e-12)


def test_efficiency_straight_segment_is_zero():
    assert efficiency((0, 0), (3, 4), DirectedSegment(Point(0, 0), Point(3, 4))) == 0.0


def test_efficiency_semicircle():
    # e = -L(f) + L(uv) + A(R) = -pi + 2 + pi/2 for the right-side unit
    # semicircle over its diameter
    semi = CircularArc(Point(1, 0), 1.0, math.pi, math.pi, ccw=True)
    assert efficiency((0, 0), (2, 0), semi) == pytest.approx(2 - math.pi / 2, abs=1e-12)


def test_efficiency_left_arc_pays_for_area():
    semi = CircularArc(Point(1, 0), 1.0, math.pi, math.pi, ccw=False)
    assert efficiency((0, 0), (2, 0), semi) == pytest.approx(
        2 - math.pi - math.pi / 2, abs=1e-12
    )


def test_efficiency_unit_radius_arc_beats_neighbours():
    # over a fixed chord the radius-1 arc is the best curve for alpha = 1
    d = 1.3

    def arc_eff(r):
        return efficiency((0, 0), (d, 0), arc_from_chord((0, 0), (d, 0), r))

    best = arc_eff(1.0)
    for r in (0.66, 0.8, 1.25, 2.0, 10.0):
        assert arc_eff(r) < best


def test_cycle_measures_unit_square():
    pts = [Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)]
    ring = [DirectedSegment(pts[i], pts[(i + 1) % 4]) for i in range(4)]
    assert cycle_area(ring) == pytest.approx(1.0, abs=1e-12)
    assert cycle_length(ring) == pytest.approx(4.0, abs=1e-12)
    rev = [ring[i].reversed() for i in (3, 2, 1, 0)]
    assert cycle_area(rev) == pytest.approx(-1.0, abs=1e-12)


def test_discretized_arc_area_error_bounded_by_sagitta():
    # each chord of the polyline cuts off a segment of height <= tol, so the
    # area defect is below length * tol
    a = arc_from_chord((0, 0), (1.2, 0), 1.0)
    for tol in (1e-2, 1e-4, 1e-6):
        pts = discretize_fragment(a, tol)
        poly_area = sum(
            (p.x * q.y - q.x * p.y) / 2 for p, q in zip(pts, pts[1:])
        )
        seg = [DirectedSegment(p, q) for p, q in zip(pts, pts[1:])]
        exact = cycle_area([a] + [s.reversed() for s in reversed(seg)])
        assert abs(exact) <= a.length * tol + 1e-15
        assert frag_start(a) == pts[0] and frag_end(a) == pts[-1]
        assert poly_area == poly_area  # polyline area is finite


def test_convex_hull_collinear_and_square():
    pts = [Point(0, 0), Point(2, 0), Point(1, 0), Point(2, 2), Point(0, 2), Point(1, 1)]
    hull = convex_hull(pts)
    assert set((p.x, p.y) for p in hull) == {(0, 0), (2, 0), (2, 2), (0, 2)}


def test_polygon_contains_point_is_trinary():
    sq = rect(0, 0, 2, 2)
    assert sq.contains_point(Point(1, 1)) == 1
    assert sq.contains_point(Point(2, 1)) == 0
    assert sq.contains_point(Point(3, 1)) == -1


def test_polygon_measures():
    sq = rect(0, 0, 3, 2)
    assert sq.area == pytest.approx(6.0)
    assert sq.perimeter == pytest.approx(10.0)
    B = two_squares(0.4)
    assert B.total_area == pytest.approx(2.0)
    assert B.total_perimeter == pytest.approx(8.0)


def test_scale_instance_scales_measures_quadratically():
    B = two_squares(0.4)
    for c in (0.1, 3.0):
        Bc = scale_instance(B, c)
        assert Bc.total_area == pytest.approx(c * c * B.total_area, rel=1e-12)
        assert Bc.total_perimeter == pytest.approx(c * B.total_perimeter, rel=1e-12)


def test_scale_instance_rejects_nonpositive():
    from arcagg.errors import NonPositiveFactor

    with pytest.raises(NonPositiveFactor):
        scale_instance(two_squares(0.4), 0.0)


def test_objective_breakdown_matches_hand_count():
    sq = rect(0, 0, 1, 1)
    ring = [
        DirectedSegment(sq.vertices[i], sq.vertices[(i + 1) % 4]) for i in range(4)
    ]
    br = objective([[ring]], 2.0)
    assert br.area == pytest.approx(1.0)
    assert br.perimeter == pytest.approx(4.0)
    assert br.value == pytest.approx(9.0)
