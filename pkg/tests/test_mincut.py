"""Exact solvers: min-cut over subdivisions, brute-force parity, sub-family solves."""

import math
import random

import pytest

import arcagg.mincut as mincut
from arcagg import (
    PolygonSet,
    brute_force_subdivision,
    build_arrangement,
    generate_candidates,
    solve_subdivision,
    solve_unrestricted,
    triangulate,
)
from arcagg.errors import TooManyCells

from conftest import ORACLE_ALPHAS, cluster_instance, rect, two_squares


def test_alpha_zero_returns_polygons():
    B = two_squares(0.4)
    sol = solve_unrestricted(B, 0.0)
    assert sol.objective.area == pytest.approx(2.0, abs=1e-12)
    assert sol.objective.perimeter == pytest.approx(8.0, abs=1e-12)
    assert sol.objective.value == pytest.approx(2.0, abs=1e-12)
    assert len(sol.regions) == 2


def test_two_squares_merge_value_is_analytic():
    # arcs of radius 1 joining the facing corners: strip area loses two
    # circular segments, perimeter swaps the walls for two arcs
    g = 0.4
    theta = math.asin(g / 2)
    seg = theta - math.sin(theta) * math.cos(theta)
    area = 2 + g - 2 * seg
    per = 8 - 2 + 2 * (2 * theta)
    sol = solve_unrestricted(two_squares(g), 1.0)
    assert sol.objective.area == pytest.approx(area, rel=1e-9)
    assert sol.objective.perimeter == pytest.approx(per, rel=1e-9)
    assert sol.objective.value == pytest.approx(area + per, rel=1e-9)
    assert len(sol.regions) == 1


def test_infinite_alpha_minimizes_perimeter_first():
    sol = solve_unrestricted(two_squares(0.4), math.inf)
    # straight bridges: perimeter 6 + 2g beats the separate 8
    assert sol.objective.perimeter == pytest.approx(6.8, rel=1e-9)
    assert sol.objective.area == pytest.approx(2.4, rel=1e-9)
    assert sol.objective.value == sol.objective.perimeter


def test_wide_gap_stays_separate():
    sol = solve_unrestricted(two_squares(5.0), 1.0)
    assert len(sol.regions) == 2
    assert sol.objective.value == pytest.approx(10.0, rel=1e-9)


def test_solution_measures_match_member_faces():
    B = two_squares(0.4)
    sub = build_arrangement(B, generate_candidates(B, 1.0))
    sol = solve_subdivision(sub, 1.0)
    member = set(sol.stats["member_faces"])
    area = sum(f.area for f in sub.faces if f.id in member)
    assert area == pytest.approx(sol.objective.area, rel=1e-9)
    assert set(f.id for f in sub.polygon_faces()) <= member


@pytest.mark.parametrize("alpha", ORACLE_ALPHAS)
def test_brute_force_parity_random(alpha):
    rng = random.Random(31 + int(alpha * 2))
    for _ in range(4):
        B = cluster_instance(rng, rng.randint(2, 5))
        for sub in (
            triangulate(B),
            build_arrangement(B, generate_candidates(B, alpha)),
        ):
            if len(sub.free_faces()) > 18:
                continue
            sol = solve_subdivision(sub, alpha)
            bf = brute_force_subdivision(sub, alpha)
            assert sol.objective.value == pytest.approx(bf.value, rel=1e-9, abs=1e-9)


def test_brute_force_parity_infinite_alpha():
    rng = random.Random(5)
    for _ in range(3):
        B = cluster_instance(rng, 3)
        sub = triangulate(B)
        sol = solve_subdivision(sub, math.inf)
        bf = brute_force_subdivision(sub, math.inf)
        assert sol.objective.perimeter == pytest.approx(bf.perimeter, rel=1e-9)
        # lexicographic: same perimeter, then minimum area
        assert sol.objective.area == pytest.approx(bf.area, rel=1e-9)


def test_brute_force_cap():
    rng = random.Random(9)
    B = cluster_instance(rng, 6)
    sub = build_arrangement(B, generate_candidates(B, 1.0))
    with pytest.raises(TooManyCells):
        brute_force_subdivision(sub, 1.0, max_cells=1)


def test_flow_backends_agree(monkeypatch):
    B = two_squares(0.4)
    sub = build_arrangement(B, generate_candidates(B, 1.0))
    monkeypatch.setattr(mincut, "_SCIPY_MIN_CELLS", 10**9)
    dinic = solve_subdivision(sub, 1.0)
    monkeypatch.setattr(mincut, "_SCIPY_MIN_CELLS", 0)
    scipy_sol = solve_subdivision(sub, 1.0)
    assert dinic.objective.value == pytest.approx(scipy_sol.objective.value, rel=1e-12)
    assert dinic.stats["member_faces"] == scipy_sol.stats["member_faces"]


def test_sub_family_solve_on_shared_subdivision():
    # solving B' inside D_T(B) with the third square freed matches solving
    # B' on its own triangulation
    polys = [rect(0, 0, 1, 1), rect(1.4, 0, 1, 1), rect(2.8, 0, 1, 1)]
    B = PolygonSet(polys)
    sub = triangulate(B)
    third = [f.id for f in sub.polygon_faces() if _face_in(sub, f, 2.8, 3.8)]
    assert third
    for alpha in (0.5, 1.0, 5.0):
        small = solve_subdivision(sub, alpha, as_free=third)
        direct = solve_subdivision(triangulate(PolygonSet(polys[:2])), alpha)
        assert small.objective.value == pytest.approx(
            direct.objective.value, rel=1e-9
        )
        bf = brute_force_subdivision(sub, alpha, as_free=third)
        assert small.objective.value == pytest.approx(bf.value, rel=1e-9)
        # subset solutions nest inside the full-family solution
        big = solve_subdivision(sub, alpha)
        assert set(small.stats["member_faces"]) <= set(big.stats["member_faces"])


def test_as_free_rejects_free_cells():
    B = two_squares(0.4)
    sub = triangulate(B)
    free_id = sub.free_faces()[0].id
    with pytest.raises(ValueError):
        solve_subdivision(sub, 1.0, as_free=[free_id])


def _face_in(sub, face, x0, x1):
    # polygon face lies within [x0, x1] horizontally
    pts = []
    for cyc in face.cycles:
        for he in cyc:
            frag = sub.half_edge_fragment(he)
            pts.append(frag.start if hasattr(frag, "start") else frag.start_point)
    return pts and all(x0 - 1e-9 <= p.x <= x1 + 1e-9 for p in pts)
