"""Vertex-restricted solving: edge universe, ILP model, LP export, oracles."""

import math
import random
import re

import pytest

from arcagg import (
    Polygon,
    PolygonSet,
    Point,
    brute_force_vertex_optimal,
    build_ilp,
    enumerate_universe,
    ilp_vertex_optimal,
    solve_ilp,
    write_lp_file,
)

from conftest import cluster_instance, rect, two_squares


def triangle(x, y):
    return Polygon([Point(x, y), Point(x + 1, y), Point(x + 0.5, y + 0.9)])


def test_single_convex_polygon_universe_is_trivial():
    U = enumerate_universe(PolygonSet([rect(0, 0, 2, 1)]))
    assert len(U.triangles) == 0
    classes = {e.cls for e in U.edges}
    assert classes == {"U"}
    assert len(U.edges) == 4


def test_two_triangles_edge_classes():
    # 4 outward polygon edges (U), 2 gap-facing polygon edges (P), 2 hull
    # bridges (H), 2 crossing gap diagonals (F)
    U = enumerate_universe(PolygonSet([triangle(0, 0), triangle(2, 0)]))
    by = {}
    for e in U.edges:
        by.setdefault(e.cls, []).append(
            tuple(sorted(((U.vertices[e.u].x, U.vertices[e.u].y),
                          (U.vertices[e.v].x, U.vertices[e.v].y))))
        )
    assert {k: len(v) for k, v in by.items()} == {"U": 4, "P": 2, "H": 2, "F": 2}
    assert sorted(by["H"]) == [
        ((0.5, 0.9), (2.5, 0.9)),
        ((1.0, 0.0), (2.0, 0.0)),
    ]
    assert sorted(by["P"]) == [
        ((0.5, 0.9), (1.0, 0.0)),
        ((2.0, 0.0), (2.5, 0.9)),
    ]
    assert sorted(by["F"]) == [
        ((0.5, 0.9), (2.0, 0.0)),
        ((1.0, 0.0), (2.5, 0.9)),
    ]


def test_two_squares_model_shape():
    U = enumerate_universe(two_squares(0.4))
    m = build_ilp(U, 1.0)
    assert len(m.variables) == 26
    assert len(m.constraints) == 42
    # offset covers the input area plus the perimeter that no variable can
    # remove: A(B) + alpha * (P(B) - gap-facing walls)
    assert m.constant_offset == pytest.approx(2.0 + (8.0 - 2.0), rel=1e-12)


def test_two_squares_optimum_matches_hand_value():
    B = two_squares(0.4)
    U = enumerate_universe(B)
    value, assign = solve_ilp(build_ilp(U, 1.0))
    # merged with straight bridges: A = 2 + g, P = 6 + 2g
    assert value == pytest.approx(2.4 + 6.8, rel=1e-9)
    assert set(assign.values()) <= {0, 1}
    assert brute_force_vertex_optimal(B, 1.0).objective.value == pytest.approx(
        value, rel=1e-9
    )
    assert ilp_vertex_optimal(B, 1.0).objective.value == pytest.approx(
        value, rel=1e-9
    )


def test_merge_threshold_flips_at_predicted_gap():
    # straight bridging pays off exactly below g* = 2a/(1+2a)
    for alpha in (0.5, 1.0, 4.0):
        g_star = 2 * alpha / (1 + 2 * alpha)
        below = ilp_vertex_optimal(two_squares(g_star - 0.02), alpha)
        above = ilp_vertex_optimal(two_squares(g_star + 0.02), alpha)
        sep = 2 + 8 * alpha
        assert below.objective.value < sep - 1e-9
        assert above.objective.value == pytest.approx(sep, rel=1e-9)


def test_ilp_matches_brute_force_on_random_instances():
    rng = random.Random(41)
    checked = 0
    while checked < 5:
        shapes = []
        x = 0.0
        for _ in range(2):
            w, h = rng.uniform(0.8, 1.6), rng.uniform(0.8, 1.6)
            if rng.random() < 0.5:
                shapes.append(rect(x, rng.uniform(-0.2, 0.2), w, h))
            else:
                shapes.append(
                    Polygon([Point(x, 0), Point(x + w, rng.uniform(-0.1, 0.1)),
                             Point(x + w * rng.uniform(0.3, 0.7), h)])
                )
            x += w + rng.uniform(0.3, 0.8)
        B = PolygonSet(shapes)
        U = enumerate_universe(B)
        if len(U.triangles) > 14:
            continue
        for alpha in (1.0, 5.0):
            bf = brute_force_vertex_optimal(B, alpha)
            iv = ilp_vertex_optimal(B, alpha)
            assert iv.objective.value == pytest.approx(
                bf.objective.value, rel=1e-9
            )
        checked += 1


def test_lp_file_round_trip():
    U = enumerate_universe(two_squares(0.4))
    m = build_ilp(U, 1.0)
    text = write_lp_file(m)
    assert text.rstrip().endswith("End")
    # re-parse the text: every model variable binary, every constraint present
    binaries = re.search(r"Binary\n(.*?)\nEnd", text, re.S).group(1).split()
    assert sorted(binaries) == sorted(m.variables)
    body = re.search(r"Subject To\n(.*?)\nBinary", text, re.S).group(1)
    names = re.findall(r"^\s*(\S+):", body, re.M)
    assert sorted(names) == sorted(c.name for c in m.constraints)
    obj_line = re.search(r"Minimize\n\s*obj:\s*(.+?)\nSubject To", text, re.S).group(1)
    # objective references only model variables
    for tok in re.findall(r"[a-z]+\d+", obj_line):
        assert tok in m.variables
    offset = float(re.search(r"constant_offset = (\S+)", text).group(1))
    assert offset == pytest.approx(m.constant_offset)


def test_ilp_objective_evaluates_assignment():
    # plugging the solver's assignment back into the raw model reproduces
    # the reported optimum
    U = enumerate_universe(two_squares(0.4))
    m = build_ilp(U, 1.0)
    value, assign = solve_ilp(m)
    recomputed = m.constant_offset + sum(
        coef * assign[var] for var, coef in m.objective.items()
    )
    assert recomputed == pytest.approx(value, rel=1e-12)
    for c in m.constraints:
        lhs = sum(coef * assign[v] for v, coef in c.coeffs.items())
        if c.sense == "<=":
            assert lhs <= c.rhs + 1e-9
        elif c.sense == ">=":
            assert lhs >= c.rhs - 1e-9
        else:
            assert lhs == pytest.approx(c.rhs, abs=1e-9)
