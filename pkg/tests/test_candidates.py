"""Candidate arc generation: radii, anchoring, pruning."""

import math

from arcagg import DirectedSegment, PolygonSet, generate_candidates

from conftest import rect, two_squares


def on_boundary(B, p, tol=1e-9):
    return any(
        poly.contains_point(p) == 0 or _on_ring(poly, p, tol) for poly in B.polygons
    )


def _on_ring(poly, p, tol):
    n = len(poly.vertices)
    for i in range(n):
        a, b = poly.vertices[i], poly.vertices[(i + 1) % n]
        ab = math.hypot(b.x - a.x, b.y - a.y)
        cross = abs((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x))
        dot = (b.x - a.x) * (p.x - a.x) + (b.y - a.y) * (p.y - a.y)
        if cross <= tol * ab and -tol <= dot <= ab * ab + tol:
            return True
    return False


def test_alpha_zero_has_no_candidates():
    assert generate_candidates(two_squares(0.4), 0.0) == []


def test_all_arcs_have_radius_alpha():
    B = two_squares(0.4)
    for alpha in (0.5, 1.0, 5.0):
        cs = generate_candidates(B, alpha)
        assert cs, alpha
        for c in cs:
            assert c.arc.radius == alpha
            assert 0 < c.arc.span <= math.pi + 1e-12


def test_endpoints_anchored_on_input_boundary():
    B = two_squares(0.4)
    for c in generate_candidates(B, 1.0):
        for anchor in (c.endpoint_a, c.endpoint_b):
            assert anchor.kind in ("vertex", "edge")
            assert on_boundary(B, anchor.location)
        assert _close(c.arc.start_point, c.endpoint_a.location) or _close(
            c.arc.start_point, c.endpoint_b.location
        )


def _close(p, q, tol=1e-9):
    return math.hypot(p.x - q.x, p.y - q.y) <= tol


def test_single_square_gets_one_corner_arc_per_edge():
    cs = generate_candidates(PolygonSet([rect(0, 0, 1, 1)]), 1.0)
    assert len(cs) == 4
    chords = {
        tuple(sorted(((c.endpoint_a.location.x, c.endpoint_a.location.y),
                      (c.endpoint_b.location.x, c.endpoint_b.location.y))))
        for c in cs
    }
    assert chords == {
        ((0.0, 0.0), (1.0, 0.0)),
        ((0.0, 0.0), (0.0, 1.0)),
        ((1.0, 0.0), (1.0, 1.0)),
        ((0.0, 1.0), (1.0, 1.0)),
    }


def test_gap_wider_than_diameter_prunes_cross_arcs():
    # chords longer than 2 * alpha cannot host a radius-alpha arc
    far = PolygonSet([rect(0, 0, 1, 1), rect(45, 0, 1, 1)])
    for alpha in (1.0, 5.0):
        cs = generate_candidates(far, alpha)
        assert len(cs) == 8  # the per-square corner arcs only
        for c in cs:
            assert not (c.endpoint_a.location.x < 2 < c.endpoint_b.location.x)


def test_bridging_corner_candidates_present():
    B = two_squares(0.4)
    chords = {
        tuple(sorted(((c.endpoint_a.location.x, c.endpoint_a.location.y),
                      (c.endpoint_b.location.x, c.endpoint_b.location.y))))
        for c in generate_candidates(B, 1.0)
    }
    assert ((1.0, 0.0), (1.4, 0.0)) in chords
    assert ((1.0, 1.0), (1.4, 1.0)) in chords


def test_infinite_alpha_candidates_are_bitangent_segments():
    cs = generate_candidates(two_squares(0.4), math.inf)
    assert cs
    for c in cs:
        assert isinstance(c.arc, DirectedSegment)
