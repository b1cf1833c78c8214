"""arcagg: aggregate polygons into regions minimizing area + alpha * perimeter.

The package solves the unrestricted aggregation problem exactly (circular-arc
candidates, planar arrangement, minimum s-t cut), the subdivision-restricted
problem on any planar subdivision, and the straight-line / vertex-restricted
variants via constant-factor approximation phases plus an ILP emitter with
brute-force oracles.
"""

from .approx import approx_line, approx_vertex
from .arrangement import (
    Subdivision,
    arrangement_from_segments,
    build_arrangement,
    triangulate,
)
from .candidates import generate_candidates
from .errors import ArcAggError
from .geom import (
    EPS,
    CircularArc,
    DirectedSegment,
    ObjectiveBreakdown,
    Point,
    Polygon,
    PolygonSet,
    arc_from_chord,
    circular_segment_area,
    efficiency,
    objective,
    scale_instance,
)
from .ilp import (
    EdgeUniverse,
    ILPModel,
    brute_force_vertex_optimal,
    build_ilp,
    enumerate_universe,
    ilp_vertex_optimal,
    solve_ilp,
    write_lp_file,
)
from .io_geo import ingest, ingest_instances, solution_geojson, solution_svg
from .mincut import (
    brute_force_subdivision,
    solve_subdivision,
    solve_unrestricted,
)
from .solution import Region, Solution, validate_solution

__all__ = [
    "ArcAggError",
    "EPS",
    "CircularArc",
    "DirectedSegment",
    "EdgeUniverse",
    "ILPModel",
    "ObjectiveBreakdown",
    "Point",
    "Polygon",
    "PolygonSet",
    "Region",
    "Solution",
    "Subdivision",
    "approx_line",
    "approx_vertex",
    "arc_from_chord",
    "arrangement_from_segments",
    "brute_force_subdivision",
    "brute_force_vertex_optimal",
    "build_arrangement",
    "build_ilp",
    "circular_segment_area",
    "efficiency",
    "enumerate_universe",
    "generate_candidates",
    "ilp_vertex_optimal",
    "ingest",
    "ingest_instances",
    "objective",
    "scale_instance",
    "solution_geojson",
    "solution_svg",
    "solve_ilp",
    "solve_subdivision",
    "solve_unrestricted",
    "triangulate",
    "validate_solution",
    "write_lp_file",
]

__version__ = "0.1.0"
