"""Solution objects: disjoint regions bounded by directed boundary pieces.

A solution is a list of regions; each region is one or more closed cycles of
boundary pieces traversed with the region interior on the RIGHT of travel.
A cycle that winds clockwise therefore encloses region interior; nested
counterclockwise cycles are holes. Pieces are tagged "constrained" (lying on
an input polygon edge) or "free" (anything else: candidate arcs, hull
bridges, triangulation edges, straightened chords).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .geom import (
    Fragment,
    ObjectiveBreakdown,
    Point,
    PolygonSet,
    cycle_area,
    cycle_length,
    discretize_cycle,
    frag_end,
    frag_length,
    frag_reversed,
    frag_start,
)


@dataclass(frozen=True)
class BoundaryPiece:
    fragment: Fragment
    kind: str  # "constrained" | "free"
    source: Optional[tuple] = None

    def reversed(self) -> "BoundaryPiece":
        return BoundaryPiece(frag_reversed(self.fragment), self.kind, self.source)


@dataclass
class Region:
    """One connected covering region, cycles with interior on the right."""

    cycles: list = field(default_factory=list)

    def area(self) -> float:
        # interior on the right means enclosing cycles are clockwise
        return -sum(cycle_area([p.fragment for p in cyc]) for cyc in self.cycles)

    def perimeter(self) -> float:
        return sum(cycle_length([p.fragment for p in cyc]) for cyc in self.cycles)

    def check_closed(self, tol: float = 1e-6) -> None:
        for cyc in self.cycles:
            if not cyc:
                raise ValueError("empty cycle")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                ea, sb = frag_end(a.fragment), frag_start(b.fragment)
                if math.hypot(ea.x - sb.x, ea.y - sb.y) > tol:
                    raise ValueError(f"cycle gap {ea} -> {sb}")


@dataclass
class Solution:
    regions: list
    alpha: float
    solver: str
    objective: Optional[ObjectiveBreakdown] = None
    stats: dict = field(default_factory=dict)

    def measure(self) -> ObjectiveBreakdown:
        area = sum(r.area() for r in self.regions)
        per = sum(r.perimeter() for r in self.regions)
        return ObjectiveBreakdown.compute(area, per, self.alpha)

    def arc_count(self) -> int:
        from .geom import CircularArc

        return sum(
            1
            for r in self.regions
            for cyc in r.cycles
            for p in cyc
            if isinstance(p.fragment, CircularArc)
        )


def solution_shapely(sol: Solution, sagitta: float = 1e-4):
    """The covered set as a shapely geometry (arcs discretized)."""
    import shapely
    from shapely.geometry import Polygon as ShpPolygon
    from shapely.ops import unary_union

    polys = []
    for r in sol.regions:
        rings = []
        for cyc in r.cycles:
            pts = discretize_cycle([p.fragment for p in cyc], sagitta)
            if len(pts) >= 3:
                rings.append([(p.x, p.y) for p in pts])
        if not rings:
            continue
        shells = [shapely.Polygon(rg) for rg in rings]
        shells = [s if s.is_valid else s.buffer(0) for s in shells]
        merged = unary_union(shells)
        polys.append(merged)
    if not polys:
        return shapely.Polygon()
    return unary_union(polys)


def validate_solution(
    sol: Solution,
    B: PolygonSet,
    sagitta: float = 1e-4,
    cover_tol: float = 1e-6,
    overlap_tol: float = 1e-6,
) -> None:
    """Independent feasibility check: covers B, regions pairwise disjoint.

    Works on discretized geometry through shapely, so tolerances are a shade
    coarser than the exact predicates used by the solvers.
    """
    import shapely
    from shapely.ops import unary_union

    region_geoms = []
    for r in sol.regions:
        rings = []
        for cyc in r.cycles:
            pts = discretize_cycle([p.fragment for p in cyc], sagitta)
            rings.append([(p.x, p.y) for p in pts])
        shells = [shapely.Polygon(rg) for rg in rings if len(rg) >= 3]
        shells = [s if s.is_valid else s.buffer(0) for s in shells]
        region_geoms.append(unary_union(shells))
    covered = unary_union(region_geoms) if region_geoms else shapely.Polygon()
    b_geom = unary_union(
        [shapely.Polygon([(p.x, p.y) for p in poly.vertices]) for poly in B]
    )
    uncovered = b_geom.difference(covered.buffer(10 * sagitta))
    if uncovered.area > cover_tol * max(b_geom.area, 1.0):
        raise AssertionError(f"solution leaves {uncovered.area} of input uncovered")
    for i in range(len(region_geoms)):
        for j in range(i + 1, len(region_geoms)):
            inter = region_geoms[i].buffer(-5 * sagitta).intersection(
                region_geoms[j].buffer(-5 * sagitta)
            )
            if inter.area > overlap_tol * max(b_geom.area, 1.0):
                raise AssertionError(f"regions {i} and {j} overlap by {inter.area}")
