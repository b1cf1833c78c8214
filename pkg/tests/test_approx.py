"""Approximation pipeline: phase accounting, factor bounds, vertex property."""

import math
import random

import pytest

from arcagg import approx_line, approx_vertex, solve_unrestricted
from arcagg.geom import frag_end, frag_start

from conftest import cluster_instance, two_squares


def test_two_squares_straightening_accounting():
    # the optimum bridges the gap with two radius-1 corner arcs; replacing
    # each by its chord trades arc length 2*asin(g/2) for chord g and adds
    # one circular segment of area
    g, alpha = 0.4, 1.0
    theta = math.asin(g / 2)
    seg_area = theta - math.sin(theta) * math.cos(theta)
    per_arc = alpha * (g - 2 * theta) + seg_area
    sol = approx_line(two_squares(g), alpha)
    (ph,) = sol.stats["phases"]
    assert ph["phase"] == "straighten"
    assert ph["violations"] == 2
    assert ph["delta"] == pytest.approx(2 * per_arc, rel=1e-9)
    assert ph["bound"] == pytest.approx(0.5 * alpha * 2 * (2 * theta), rel=1e-9)
    assert sol.objective.value == pytest.approx(2 + g + alpha * (6 + 2 * g), rel=1e-9)


def test_phase_reports_cover_three_phases():
    sol = approx_vertex(two_squares(0.4), 1.0)
    assert [p["phase"] for p in sol.stats["phases"]] == [
        "straighten",
        "shift",
        "fill",
    ]
    for p in sol.stats["phases"]:
        assert p["delta"] <= p["bound"] + 1e-7 * max(1.0, p["bound"])
        assert p["g_after"] == pytest.approx(p["g_before"] + p["delta"], rel=1e-9)


def test_alpha_zero_approximations_return_polygons():
    B = two_squares(0.4)
    for fn in (approx_line, approx_vertex):
        sol = fn(B, 0.0)
        assert sol.objective.value == pytest.approx(2.0, abs=1e-12)
        assert all(p["violations"] == 0 for p in sol.stats["phases"])


@pytest.mark.parametrize("alpha", [1.0, 5.0, 20.0])
def test_factor_bounds_on_random_clusters(alpha):
    rng = random.Random(int(alpha) * 7 + 1)
    for _ in range(3):
        B = cluster_instance(rng, rng.randint(3, 8))
        exact = solve_unrestricted(B, alpha)
        line = approx_line(B, alpha, exact=exact)
        vertex = approx_vertex(B, alpha, exact=exact)
        of = exact.objective.value
        assert of - 1e-9 <= line.objective.value <= 1.5 * of + 1e-9
        assert of - 1e-9 <= vertex.objective.value <= 13.5 * of + 1e-9
        assert line.stats["ratio"] == pytest.approx(line.objective.value / of)
        # per-phase growth stays within the per-phase factors
        factors = {"straighten": 1.5, "shift": 3.0, "fill": 3.0}
        for p in vertex.stats["phases"]:
            assert p["g_after"] <= factors[p["phase"]] * p["g_before"] + 1e-9


def test_vertex_solution_uses_input_vertices_only():
    rng = random.Random(2)
    B = cluster_instance(rng, 6)
    sol = approx_vertex(B, 2.0)
    verts = [(v.x, v.y) for p in B.polygons for v in p.vertices]
    for reg in sol.regions:
        for cyc in reg.cycles:
            for piece in cyc:
                for q in (frag_start(piece.fragment), frag_end(piece.fragment)):
                    assert (
                        min(math.hypot(q.x - a, q.y - b) for a, b in verts) <= 1e-9
                    )


def test_line_solution_has_no_arcs():
    rng = random.Random(12)
    B = cluster_instance(rng, 5)
    for alpha in (1.0, 10.0):
        sol = approx_line(B, alpha)
        for reg in sol.regions:
            for cyc in reg.cycles:
                for piece in cyc:
                    assert type(piece.fragment).__name__ == "DirectedSegment"


def test_monotone_phase_values():
    # each phase can only grow the objective; the chain is S0 <= S1 <= S2 <= S3
    rng = random.Random(77)
    B = cluster_instance(rng, 7)
    exact = solve_unrestricted(B, 5.0)
    sol = approx_vertex(B, 5.0, exact=exact)
    g_prev = exact.objective.value
    for p in sol.stats["phases"]:
        assert p["g_before"] == pytest.approx(g_prev, rel=1e-9)
        assert p["g_after"] >= p["g_before"] - 1e-9
        g_prev = p["g_after"]
    assert sol.objective.value == pytest.approx(g_prev, rel=1e-9)
