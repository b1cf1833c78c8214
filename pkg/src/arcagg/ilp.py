"""Triangulation-based integer program for vertex-restricted aggregation.

When every free boundary piece must be a straight chord between input
vertices, each feasible cover corresponds to a triangulation of the free
space conv(B) \\ B together with a subset of its triangles: the covered set
is the union of the input polygons and the chosen triangles. The model here
selects the triangulation and the subset simultaneously over the universe of
all empty triangles on the input vertices, with the exposed boundary length
recovered through per-edge parity variables.

The module stays solver-free at its core: ``build_ilp`` produces a plain
coefficient model, ``write_lp_file`` exports it as deterministic LP-format
text for any external solver, and ``solve_ilp`` is a thin optional adapter
over scipy's branch-and-bound. ``brute_force_vertex_optimal`` enumerates all
triangulations of tiny instances outright and is the ground truth the model
is tested against.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .arrangement import arrangement_from_segments
from .errors import ArcAggError, InfeasibleIntermediate, TooLarge
from .geom import (
    EPS,
    DirectedSegment,
    ObjectiveBreakdown,
    Point,
    PolygonSet,
    convex_hull,
    cross,
    dist,
    orientation,
    point_segment_distance,
    project_t,
)
from .mincut import CutNetwork, Dinic, trace_regions
from .solution import Solution

__all__ = [
    "UniverseEdge",
    "UniverseTriangle",
    "EdgeUniverse",
    "enumerate_universe",
    "ILPModel",
    "build_ilp",
    "write_lp_file",
    "solve_ilp",
    "ilp_vertex_optimal",
    "brute_force_vertex_optimal",
]

_TOL = 1e-9


# ---------------------------------------------------------------------------
# edge and triangle universe


@dataclass(frozen=True)
class UniverseEdge:
    """A straight chord between two input vertices, with its side lists.

    u -> v is the working direction. Classes: "F" free chord, "H" hull
    bridge, "P" polygon edge off the hull, "U" polygon edge on the hull.
    Whenever only one side can carry triangles (always for P and H), the
    direction is chosen so that they are on the left.
    """

    id: int
    u: int
    v: int
    cls: str
    length: float
    left: Tuple[int, ...] = ()
    right: Tuple[int, ...] = ()


@dataclass(frozen=True)
class UniverseTriangle:
    """An empty triangle on input vertices with interior in conv(B) \\ B."""

    id: int
    corners: Tuple[int, int, int]
    area: float
    centroid: Point


@dataclass
class EdgeUniverse:
    """All usable chords and empty triangles of an instance."""

    vertices: List[Point]
    edges: List[UniverseEdge]
    triangles: List[UniverseTriangle]
    polygon_area: float = 0.0

    def by_class(self, cls: str) -> List[UniverseEdge]:
        return [e for e in self.edges if e.cls == cls]

    def edge_for_pair(self, a: int, b: int) -> Optional[UniverseEdge]:
        key = (a, b) if a < b else (b, a)
        return self._pair_index.get(key)

    def __post_init__(self) -> None:
        self._pair_index: Dict[Tuple[int, int], UniverseEdge] = {}
        for e in self.edges:
            key = (e.u, e.v) if e.u < e.v else (e.v, e.u)
            self._pair_index[key] = e

    def validate(self) -> None:
        """Structural invariants; raises InfeasibleIntermediate on failure."""
        for e in self.edges:
            if e.cls == "U" and (e.left or e.right):
                raise InfeasibleIntermediate("hull polygon edge carries triangles")
            if e.cls in ("P", "H") and e.right:
                raise InfeasibleIntermediate(f"{e.cls} edge has triangles on the right")
            if e.cls == "F" and e.right and not e.left:
                raise InfeasibleIntermediate("one-sided free edge not turned left")
        for t in self.triangles:
            i, j, k = t.corners
            for a, b in ((i, j), (j, k), (i, k)):
                if self.edge_for_pair(a, b) is None:
                    raise InfeasibleIntermediate("triangle side missing from universe")


def _point_in_triangle(p: Point, a: Point, b: Point, c: Point, tol: float = _TOL) -> bool:
    """Strict interior test; boundary points report False."""
    d1 = cross(a, b, p)
    d2 = cross(b, c, p)
    d3 = cross(c, a, p)
    if cross(a, b, c) < 0.0:
        d1, d2, d3 = -d1, -d2, -d3
    scale = max(1.0, abs(d1) + abs(d2) + abs(d3))
    return d1 > tol * scale and d2 > tol * scale and d3 > tol * scale


def _collinear_overlap(u: Point, v: Point, a: Point, b: Point) -> bool:
    """True if segment ab is collinear with uv and overlaps it positively."""
    if orientation(u, v, a) != 0 or orientation(u, v, b) != 0:
        return False
    ta, tb = project_t(u, v, a), project_t(u, v, b)
    lo, hi = min(ta, tb), max(ta, tb)
    return min(1.0, hi) - max(0.0, lo) > _TOL


def _segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


def enumerate_universe(B: PolygonSet, max_vertices: int = 60) -> EdgeUniverse:
    """All chords between input vertices usable by a triangulation of
    conv(B) \\ B, classified, plus all empty triangles with their side lists.

    A chord qualifies if it is an input edge, or its open interior avoids
    every other vertex, every polygon edge and every polygon interior. A
    triangle qualifies if all three sides qualify, it has positive area, no
    other vertex lies strictly inside, and its interior avoids the polygons.
    """
    verts = B.vertices()
    n = len(verts)
    if n > max_vertices:
        raise TooLarge(f"{n} vertices exceeds the universe cap {max_vertices}")

    # ring adjacency: global ids are contiguous per polygon
    ring_dir: Dict[Tuple[int, int], Tuple[int, int]] = {}
    start = 0
    for poly in B.polygons:
        m = len(poly.vertices)
        for k in range(m):
            a, b = start + k, start + (k + 1) % m
            key = (a, b) if a < b else (b, a)
            ring_dir[key] = (a, b)  # ccw ring direction: interior on the left
        start += m

    # hull chains: consecutive input vertices along each hull edge
    hull = convex_hull(verts)
    hull_dir: Dict[Tuple[int, int], Tuple[int, int]] = {}
    if len(hull) >= 3:
        for h in range(len(hull)):
            a, b = hull[h], hull[(h + 1) % len(hull)]
            on_edge = []
            for vid, p in enumerate(verts):
                if point_segment_distance(p, a, b) <= _TOL:
                    on_edge.append((project_t(a, b, p), vid))
            on_edge.sort()
            for (_, p_id), (_, q_id) in zip(on_edge, on_edge[1:]):
                key = (p_id, q_id) if p_id < q_id else (q_id, p_id)
                hull_dir[key] = (p_id, q_id)  # ccw hull: inside on the left

    poly_edges = B.edges()

    def chord_is_free(i: int, j: int) -> bool:
        pi, pj = verts[i], verts[j]
        for w, pw in enumerate(verts):
            if w == i or w == j:
                continue
            if (
                point_segment_distance(pw, pi, pj) <= _TOL
                and dist(pw, pi) > _TOL
                and dist(pw, pj) > _TOL
            ):
                return False
        for seg in poly_edges:
            if _segments_cross(pi, pj, seg.start, seg.end):
                return False
            if _collinear_overlap(pi, pj, seg.start, seg.end):
                return False
        mid = Point(0.5 * (pi.x + pj.x), 0.5 * (pi.y + pj.y))
        return B.contains_point(mid) <= 0

    edges: List[UniverseEdge] = []
    pair_to_eid: Dict[Tuple[int, int], int] = {}
    directed: List[Tuple[int, int]] = []
    classes: List[str] = []
    for i in range(n):
        for j in range(i + 1, n):
            key = (i, j)
            if key in ring_dir:
                a, b = ring_dir[key]
                if key in hull_dir:
                    cls, d = "U", (a, b)
                else:
                    cls, d = "P", (b, a)  # reversed ring: polygon on the right
            elif key in hull_dir:
                cls, d = "H", hull_dir[key]  # outside on the right
            elif chord_is_free(i, j):
                cls, d = "F", (i, j)
            else:
                continue
            pair_to_eid[key] = len(directed)
            directed.append(d)
            classes.append(cls)

    # empty triangles and their side assignments
    triangles: List[UniverseTriangle] = []
    left: List[List[int]] = [[] for _ in directed]
    right: List[List[int]] = [[] for _ in directed]
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in pair_to_eid:
                continue
            for k in range(j + 1, n):
                if (i, k) not in pair_to_eid or (j, k) not in pair_to_eid:
                    continue
                pi, pj, pk = verts[i], verts[j], verts[k]
                area2 = cross(pi, pj, pk)
                if abs(area2) <= _TOL:
                    continue
                if any(
                    w not in (i, j, k) and _point_in_triangle(pw, pi, pj, pk)
                    for w, pw in enumerate(verts)
                ):
                    continue
                cen = Point((pi.x + pj.x + pk.x) / 3.0, (pi.y + pj.y + pk.y) / 3.0)
                if B.contains_point(cen) > 0:
                    continue
                tid = len(triangles)
                triangles.append(
                    UniverseTriangle(tid, (i, j, k), 0.5 * abs(area2), cen)
                )
                for a, b, c in ((i, j, k), (j, k, i), (i, k, j)):
                    eid = pair_to_eid[(a, b)]
                    du, dv = directed[eid]
                    side = cross(verts[du], verts[dv], verts[c])
                    (left if side > 0.0 else right)[eid].append(tid)

    # one-sided free edges turn so their triangles sit on the left
    for eid, cls in enumerate(classes):
        if cls == "F" and right[eid] and not left[eid]:
            du, dv = directed[eid]
            directed[eid] = (dv, du)
            left[eid], right[eid] = right[eid], left[eid]

    for eid, (du, dv) in enumerate(directed):
        edges.append(
            UniverseEdge(
                eid,
                du,
                dv,
                classes[eid],
                dist(verts[du], verts[dv]),
                tuple(left[eid]),
                tuple(right[eid]),
            )
        )
    uni = EdgeUniverse(
        vertices=list(verts),
        edges=edges,
        triangles=triangles,
        polygon_area=B.total_area,
    )
    uni.validate()
    return uni


# ---------------------------------------------------------------------------
# the integer program


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: Dict[str, float]
    sense: str  # "=", "<=" or ">="
    rhs: float


@dataclass
class ILPModel:
    """Plain coefficient form of the triangulation-selection program.

    Variable names: ta{t}/ti{t} select/deselect triangle t inside the chosen
    triangulation; ea{e} marks chord e as exposed boundary; hl{e}/hr{e} tell
    whether selected area touches its left/right side. All variables binary.
    The optimum plus ``constant_offset`` equals g_alpha of the best cover.
    """

    variables: List[str]
    objective: Dict[str, float]
    constraints: List[Constraint]
    constant_offset: float
    alpha: float
    universe: EdgeUniverse = field(repr=False)


def build_ilp(universe: EdgeUniverse, alpha: float) -> ILPModel:
    """Assemble the model for a finite alpha.

    Minimizes selected triangle area plus alpha times exposed chord length;
    the always-paid polygon area and hull-side polygon edges go into the
    constant offset. Triangle-count balance around every chord forces the
    active+inactive set to be one triangulation, and per-edge parity turns
    the selection boundary into the ea variables.
    """
    if not (math.isfinite(alpha) and alpha >= 0.0):
        raise ValueError("the linear model needs a finite alpha >= 0")
    tri = universe.triangles
    modeled = [e for e in universe.edges if e.cls in ("F", "P", "H")]
    f_edges = [e for e in modeled if e.cls == "F"]
    ph_edges = [e for e in modeled if e.cls in ("P", "H")]

    variables: List[str] = []
    for t in tri:
        variables.append(f"ta{t.id}")
        variables.append(f"ti{t.id}")
    for e in modeled:
        variables.append(f"ea{e.id}")
        variables.append(f"hl{e.id}")
        variables.append(f"hr{e.id}")

    objective: Dict[str, float] = {}
    for t in tri:
        objective[f"ta{t.id}"] = t.area
    if alpha > 0.0:
        for e in modeled:
            objective[f"ea{e.id}"] = alpha * e.length

    cons: List[Constraint] = []
    for e in f_edges:
        co: Dict[str, float] = {}
        for t in e.left:
            co[f"ta{t}"] = co.get(f"ta{t}", 0.0) + 1.0
            co[f"ti{t}"] = co.get(f"ti{t}", 0.0) + 1.0
        for t in e.right:
            co[f"ta{t}"] = co.get(f"ta{t}", 0.0) - 1.0
            co[f"ti{t}"] = co.get(f"ti{t}", 0.0) - 1.0
        cons.append(Constraint(f"c2_e{e.id}", co, "=", 0.0))
    for e in ph_edges:
        co = {}
        for t in e.left:
            co[f"ta{t}"] = 1.0
            co[f"ti{t}"] = 1.0
        cons.append(Constraint(f"c3_e{e.id}", co, "=", 1.0))
    for e in modeled:
        co = {f"hl{e.id}": 1.0}
        for t in e.left:
            co[f"ta{t}"] = -1.0
        cons.append(Constraint(f"c4_e{e.id}", co, "=", 0.0))
    for e in f_edges:
        co = {f"hr{e.id}": 1.0}
        for t in e.right:
            co[f"ta{t}"] = -1.0
        cons.append(Constraint(f"c5_e{e.id}", co, "=", 0.0))
    for e in modeled:
        if e.cls == "P":
            cons.append(Constraint(f"c6_e{e.id}", {f"hr{e.id}": 1.0}, "=", 1.0))
    for e in modeled:
        if e.cls == "H":
            cons.append(Constraint(f"c7_e{e.id}", {f"hr{e.id}": 1.0}, "=", 0.0))
    for e in modeled:
        ea, hl, hr = f"ea{e.id}", f"hl{e.id}", f"hr{e.id}"
        cons.append(Constraint(f"c8a_e{e.id}", {ea: 1.0, hl: -1.0, hr: -1.0}, "<=", 0.0))
        cons.append(Constraint(f"c8b_e{e.id}", {ea: 1.0, hl: -1.0, hr: 1.0}, ">=", 0.0))
        cons.append(Constraint(f"c8c_e{e.id}", {ea: 1.0, hl: 1.0, hr: -1.0}, ">=", 0.0))
        cons.append(Constraint(f"c8d_e{e.id}", {ea: 1.0, hl: 1.0, hr: 1.0}, "<=", 2.0))

    # area of the inputs and hull-side polygon edges are paid by every cover
    offset = universe.polygon_area + alpha * sum(
        e.length for e in universe.edges if e.cls == "U"
    )
    return ILPModel(
        variables=variables,
        objective=objective,
        constraints=cons,
        constant_offset=offset,
        alpha=alpha,
        universe=universe,
    )


def write_lp_file(model: ILPModel) -> str:
    """Deterministic LP-format text for the model.

    Sections: comment header, Minimize, Subject To (constraint families in
    ascending edge id within each family), Binary, End. Identical models
    produce byte-identical text.
    """
    order = {name: k for k, name in enumerate(model.variables)}

    def num(x: float) -> str:
        if x == int(x) and abs(x) < 1e15:
            return str(int(x))
        return repr(x)

    def terms(co: Dict[str, float]) -> str:
        parts: List[str] = []
        for name in sorted(co, key=order.__getitem__):
            c = co[name]
            if c == 0.0:
                continue
            mag = abs(c)
            body = name if mag == 1.0 else f"{num(mag)} {name}"
            if not parts:
                parts.append(body if c > 0 else f"- {body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    lines = [
        "\\ vertex-restricted aggregation as triangulation selection",
        f"\\ alpha = {num(model.alpha)}",
        f"\\ constant_offset = {num(model.constant_offset)}",
        "Minimize",
        f" obj: {terms(model.objective)}".rstrip(),
        "Subject To",
    ]
    for c in model.constraints:
        sense = {"=": "=", "<=": "<=", ">=": ">="}[c.sense]
        lines.append(f" {c.name}: {terms(c.coeffs)} {sense} {num(c.rhs)}")
    lines.append("Binary")
    for name in model.variables:
        lines.append(f" {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def solve_ilp(model: ILPModel, time_limit: Optional[float] = None):
    """Solve the model with scipy's MILP solver (optional dependency).

    Returns (objective value including the constant offset, assignment dict).
    """
    if not model.variables:
        return model.constant_offset, {}
    try:
        import numpy as np
        from scipy import sparse
        from scipy.optimize import Bounds, LinearConstraint, milp
    except ImportError as exc:  # pragma: no cover - environment dependent
        raise ArcAggError(
            "scipy is not installed; export the model with write_lp_file "
            "and run an external solver instead"
        ) from exc

    idx = {name: k for k, name in enumerate(model.variables)}
    nvar = len(model.variables)
    c = np.zeros(nvar)
    for name, coef in model.objective.items():
        c[idx[name]] = coef
    rows: List[int] = []
    cols: List[int] = []
    data: List[float] = []
    lb = np.empty(len(model.constraints))
    ub = np.empty(len(model.constraints))
    for r, con in enumerate(model.constraints):
        for name, coef in con.coeffs.items():
            rows.append(r)
            cols.append(idx[name])
            data.append(coef)
        if con.sense == "=":
            lb[r] = ub[r] = con.rhs
        elif con.sense == "<=":
            lb[r], ub[r] = -np.inf, con.rhs
        else:
            lb[r], ub[r] = con.rhs, np.inf
    A = sparse.csr_matrix((data, (rows, cols)), shape=(len(model.constraints), nvar))
    options = {}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    res = milp(
        c=c,
        constraints=LinearConstraint(A, lb, ub),
        integrality=np.ones(nvar),
        bounds=Bounds(0.0, 1.0),
        options=options,
    )
    if not res.success:
        raise ArcAggError(f"integer program not solved: {res.message}")
    assignment = {name: int(round(float(res.x[idx[name]]))) for name in model.variables}
    return float(res.fun) + model.constant_offset, assignment


# ---------------------------------------------------------------------------
# tracing a triangulation selection into a Solution


def _triangulation_solution(
    B: PolygonSet,
    universe: EdgeUniverse,
    tiling: Iterable[int],
    active: Iterable[int],
    alpha: float,
    solver: str,
    t0: float,
) -> Solution:
    """Region boundaries for 'polygons plus the active triangles of a tiling'.

    Reuses the arrangement tracer: the tiling's free chords subdivide the
    free space into exactly the tiling triangles, which become the faces to
    mark as covered or not.
    """
    tiling = sorted(set(tiling))
    active_set = set(active)
    verts = universe.vertices
    seg_pairs: set = set()
    for tid in tiling:
        i, j, k = universe.triangles[tid].corners
        for a, b in ((i, j), (j, k), (i, k)):
            e = universe.edge_for_pair(a, b)
            if e is not None and e.cls == "F":
                seg_pairs.add((min(a, b), max(a, b)))
    segs = [DirectedSegment(verts[a], verts[b]) for a, b in sorted(seg_pairs)]
    sub = arrangement_from_segments(B, segs)

    free = sub.free_faces()
    if len(free) != len(tiling):
        raise InfeasibleIntermediate(
            f"tiling has {len(tiling)} triangles but the arrangement "
            f"has {len(free)} free faces"
        )
    member = [f.role == "polygon-cell" for f in sub.faces]
    for face in free:
        probe = face.probe
        hits = [
            tid
            for tid in tiling
            if _point_in_triangle(
                probe,
                verts[universe.triangles[tid].corners[0]],
                verts[universe.triangles[tid].corners[1]],
                verts[universe.triangles[tid].corners[2]],
                tol=1e-12,
            )
        ]
        if len(hits) != 1:
            raise InfeasibleIntermediate(
                f"face probe matches {len(hits)} tiling triangles"
            )
        member[face.id] = hits[0] in active_set

    netw = CutNetwork(sub, alpha)
    selected = [member[fid] for fid in netw.free_ids]
    area, per = netw.selection_value(selected)
    regions = trace_regions(sub, member)
    obj = ObjectiveBreakdown.compute(area, per, alpha)
    sol = Solution(
        regions=regions,
        alpha=alpha,
        solver=solver,
        objective=obj,
        stats={
            "cells": int(sum(selected)),
            "free_cells_total": len(selected),
            "triangles": len(tiling),
            "runtime_ms": (time.perf_counter() - t0) * 1e3,
        },
    )
    measured = sol.measure()
    if abs(measured.area - area) > 1e-6 * max(1.0, area) or abs(
        measured.perimeter - per
    ) > 1e-6 * max(1.0, per):
        raise InfeasibleIntermediate(
            f"traced regions measure ({measured.area}, {measured.perimeter}) "
            f"but cells sum to ({area}, {per})"
        )
    sol.stats["arcs"] = sol.arc_count()
    return sol


def ilp_vertex_optimal(
    B: PolygonSet,
    alpha: float,
    max_vertices: int = 60,
    time_limit: Optional[float] = None,
) -> Solution:
    """Exact vertex-restricted optimum through the bundled MILP solver."""
    t0 = time.perf_counter()
    uni = enumerate_universe(B, max_vertices)
    model = build_ilp(uni, alpha)
    value, assignment = solve_ilp(model, time_limit)
    tiling = [t.id for t in uni.triangles if assignment.get(f"ta{t.id}", 0) + assignment.get(f"ti{t.id}", 0) >= 1]
    active = [t.id for t in uni.triangles if assignment.get(f"ta{t.id}", 0) >= 1]
    sol = _triangulation_solution(B, uni, tiling, active, alpha, "ilp", t0)
    if abs(sol.objective.value - value) > 1e-6 * max(1.0, abs(value)):
        raise InfeasibleIntermediate(
            f"traced objective {sol.objective.value} != model optimum {value}"
        )
    return sol


# ---------------------------------------------------------------------------
# brute force over all triangulations (ground truth for tiny instances)


def brute_force_vertex_optimal(
    B: PolygonSet,
    alpha: float,
    max_triangles: int = 14,
    max_triangulations: int = 200000,
) -> Solution:
    """Exact vertex-restricted optimum by exhausting every triangulation.

    The free space splits into independent pockets; each pocket's
    triangulations are enumerated by always filling the smallest unmet
    boundary demand, and each complete tiling is scored by a small min cut
    over its triangles. Guards: TooLarge when a pocket needs more than
    ``max_triangles`` triangles or enumeration passes ``max_triangulations``.
    Supports alpha = inf as minimum perimeter with area as tie-break.
    """
    t0 = time.perf_counter()
    if alpha < 0.0:
        raise ValueError("alpha must be nonnegative")
    uni = enumerate_universe(B)
    verts = uni.vertices
    tris = uni.triangles

    # triangles on the left of each directed chord
    left_of: Dict[Tuple[int, int], List[int]] = {}
    cls_of_pair: Dict[Tuple[int, int], str] = {}
    len_of_pair: Dict[Tuple[int, int], float] = {}
    for e in uni.edges:
        left_of[(e.u, e.v)] = list(e.left)
        left_of[(e.v, e.u)] = list(e.right)
        key = (min(e.u, e.v), max(e.u, e.v))
        cls_of_pair[key] = e.cls
        len_of_pair[key] = e.length

    # pockets: components over shared sides and proper overlaps
    parent = list(range(len(tris)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    side_map: Dict[Tuple[int, int], List[int]] = {}
    for t in tris:
        i, j, k = t.corners
        for a, b in ((i, j), (j, k), (i, k)):
            side_map.setdefault((a, b), []).append(t.id)
    for ids in side_map.values():
        for x in ids[1:]:
            union(ids[0], x)

    def tris_overlap(t1: UniverseTriangle, t2: UniverseTriangle) -> bool:
        c1 = [verts[c] for c in t1.corners]
        c2 = [verts[c] for c in t2.corners]
        for p in c1:
            if _point_in_triangle(p, *c2):
                return True
        for p in c2:
            if _point_in_triangle(p, *c1):
                return True
        for a in range(3):
            for b in range(3):
                if _segments_cross(c1[a], c1[(a + 1) % 3], c2[b], c2[(b + 1) % 3]):
                    return True
        return _point_in_triangle(t1.centroid, *c2) or _point_in_triangle(
            t2.centroid, *c1
        )

    for x in range(len(tris)):
        for y in range(x + 1, len(tris)):
            if find(x) != find(y):
                if tris_overlap(tris[x], tris[y]):
                    union(x, y)

    # initial demands: polygon and hull-bridge edges want a triangle on the left
    demands_all: List[Tuple[int, int]] = []
    for e in uni.edges:
        if e.cls in ("P", "H"):
            if not e.left:
                raise InfeasibleIntermediate(
                    f"boundary chord {e.u}-{e.v} admits no empty triangle"
                )
            demands_all.append((e.u, e.v))
    comp_of_demand = {d: find(left_of[d][0]) for d in demands_all}
    components: Dict[int, List[Tuple[int, int]]] = {}
    for d in demands_all:
        components.setdefault(comp_of_demand[d], []).append(d)

    lex = math.isinf(alpha)

    def score_tiling(placed: List[int]) -> Tuple[Tuple[float, ...], List[int]]:
        """Best selection of the tiling's triangles: (objective key, active)."""
        n = len(placed)
        pos = {t: i for i, t in enumerate(placed)}
        src_cap = [0.0] * n
        sink_cap = [0.0] * n
        pair_caps: Dict[Tuple[int, int], float] = {}
        for i_t, tid in enumerate(placed):
            a, b, c = tris[tid].corners
            for u, v in ((a, b), (b, c), (a, c)):
                key = (u, v)
                cls = cls_of_pair[key]
                ln = len_of_pair[key]
                if cls == "P":
                    src_cap[i_t] += ln
                elif cls == "H":
                    sink_cap[i_t] += ln
                elif cls == "F":
                    others = [
                        o
                        for o in side_map.get(key, [])
                        if o != tid and o in pos
                    ]
                    if len(others) == 1:
                        pk = (min(i_t, pos[others[0]]), max(i_t, pos[others[0]]))
                        pair_caps[pk] = ln
                    elif not others:
                        raise InfeasibleIntermediate(
                            "free chord of a tiling lacks its second triangle"
                        )
        net = Dinic(n + 2)
        s, t = n, n + 1
        w = 1.0 if lex else alpha
        for i_t in range(n):
            base = 0.0 if lex else tris[placed[i_t]].area
            if src_cap[i_t] > 0.0:
                net.add_edge(s, i_t, w * src_cap[i_t])
            if base + w * sink_cap[i_t] > 0.0:
                net.add_edge(i_t, t, base + w * sink_cap[i_t])
        for (x, y), ln in pair_caps.items():
            net.add_edge(x, y, w * ln, w * ln)
        net.max_flow(s, t)
        reach = net.min_cut_source_side(s)
        active = [placed[i_t] for i_t in range(n) if i_t in reach]
        act = set(active)
        area_part = sum(tris[tid].area for tid in act)
        per_part = 0.0
        for i_t, tid in enumerate(placed):
            if tid in act:
                per_part += sink_cap[i_t]
            else:
                per_part += src_cap[i_t]
        for (x, y), ln in pair_caps.items():
            if (placed[x] in act) != (placed[y] in act):
                per_part += ln
        key = (per_part, area_part) if lex else (area_part + alpha * per_part,)
        return key, active

    counter = {"tilings": 0}

    def enumerate_component(initial: List[Tuple[int, int]]):
        best: List = [None, None, None]  # key, tiling, active
        n_expected = [None]

        demands = set(initial)
        frontier_f: set = set()
        placed: List[int] = []

        def place_bookkeeping(tid: int, d: Tuple[int, int]):
            """Returns the undo log."""
            a, b = d
            i, j, k = tris[tid].corners
            x = ({i, j, k} - {a, b}).pop()
            undo = []
            demands.discard(d)
            undo.append(("add_demand", d))
            key_d = (min(a, b), max(a, b))
            if cls_of_pair[key_d] == "F" and key_d in frontier_f:
                frontier_f.discard(key_d)
                undo.append(("add_frontier", key_d))
            for p, q in ((b, x), (x, a)):
                key_g = (min(p, q), max(p, q))
                if (p, q) in demands:
                    demands.discard((p, q))
                    undo.append(("add_demand", (p, q)))
                    if cls_of_pair[key_g] == "F" and key_g in frontier_f:
                        frontier_f.discard(key_g)
                        undo.append(("add_frontier", key_g))
                else:
                    if (q, p) in demands:
                        raise InfeasibleIntermediate(
                            "tiling frontier produced a doubled demand"
                        )
                    demands.add((q, p))
                    undo.append(("del_demand", (q, p)))
                    if cls_of_pair[key_g] == "F":
                        frontier_f.add(key_g)
                        undo.append(("del_frontier", key_g))
            placed.append(tid)
            undo.append(("pop_placed", None))
            return undo

        def apply_undo(undo):
            for op, arg in reversed(undo):
                if op == "add_demand":
                    demands.add(arg)
                elif op == "del_demand":
                    demands.discard(arg)
                elif op == "add_frontier":
                    frontier_f.add(arg)
                elif op == "del_frontier":
                    frontier_f.discard(arg)
                else:
                    placed.pop()

        def crosses_frontier(a: int, b: int) -> bool:
            pa, pb = verts[a], verts[b]
            for u, v in frontier_f:
                if u in (a, b) or v in (a, b):
                    continue
                if _segments_cross(pa, pb, verts[u], verts[v]):
                    return True
            return False

        def rec():
            if not demands:
                counter["tilings"] += 1
                if counter["tilings"] > max_triangulations:
                    raise TooLarge(
                        f"more than {max_triangulations} triangulations"
                    )
                if n_expected[0] is None:
                    n_expected[0] = len(placed)
                    if n_expected[0] > max_triangles:
                        raise TooLarge(
                            f"pocket needs {n_expected[0]} triangles, "
                            f"cap is {max_triangles}"
                        )
                elif len(placed) != n_expected[0]:
                    raise InfeasibleIntermediate(
                        "tilings of one pocket differ in triangle count"
                    )
                key, active = score_tiling(placed)
                if best[0] is None or key < best[0]:
                    best[0], best[1], best[2] = key, list(placed), active
                return
            cap = n_expected[0] if n_expected[0] is not None else max_triangles
            if len(placed) >= cap:
                return
            d = min(demands)
            placed_set = set(placed)
            for tid in left_of.get(d, ()):
                if tid in placed_set:
                    continue
                a, b = d
                i, j, k = tris[tid].corners
                x = ({i, j, k} - {a, b}).pop()
                if crosses_frontier(a, x) or crosses_frontier(x, b):
                    continue
                undo = place_bookkeeping(tid, d)
                rec()
                apply_undo(undo)

        rec()
        if best[0] is None:
            raise TooLarge(
                f"no tiling of a pocket within the {max_triangles}-triangle cap"
            )
        return best[1], best[2]

    tiling_total: List[int] = []
    active_total: List[int] = []
    for comp_demands in (components[c] for c in sorted(components)):
        tiling_c, active_c = enumerate_component(sorted(comp_demands))
        tiling_total.extend(tiling_c)
        active_total.extend(active_c)

    sol = _triangulation_solution(
        B, uni, tiling_total, active_total, alpha, "brute-force-vertex", t0
    )
    sol.stats["triangulations"] = counter["tilings"]
    return sol
