"""Footprint ingest and solution export.

Readers accept GeoJSON and WKT files holding polygons or multipolygons.
Interior rings are honored by splitting the data into independent
aggregation instances: the top-level instance holds every polygon outline
not enclosed by some hole, and each hole containing outlines spawns its own
sub-instance (aggregation never reaches across a courtyard wall).

Writers emit solutions as GeoJSON feature collections with arcs discretized
to a sagitta tolerance but also carried exactly (center, radius, angles) in
the feature properties, and optionally as standalone SVG with native arc
path commands.
"""

from __future__ import annotations

import json
import math
import os
from typing import List, Optional, Sequence, Tuple

from .errors import ParseError, SelfIntersectingInput
from .geom import (
    CircularArc,
    DirectedSegment,
    Point,
    Polygon,
    PolygonSet,
    cycle_area,
    discretize_cycle,
    dist,
)
from .solution import Solution

__all__ = [
    "ingest",
    "ingest_instances",
    "solution_geojson",
    "write_solution_geojson",
    "solution_svg",
]


# ---------------------------------------------------------------------------
# reading


def _detect_format(path: str, fmt: Optional[str]) -> str:
    if fmt:
        f = fmt.lower()
        if f not in ("geojson", "wkt"):
            raise ParseError(f"unknown format {fmt!r} (use geojson or wkt)")
        return f
    ext = os.path.splitext(path)[1].lower()
    if ext in (".json", ".geojson"):
        return "geojson"
    if ext in (".wkt", ".txt"):
        return "wkt"
    raise ParseError(f"cannot infer format from {path!r}; pass format explicitly")


def _rings_from_geojson_geometry(geom: dict) -> List[List[List[Point]]]:
    """Polygon ring sets [[outer, hole, ...], ...] from one geometry dict."""
    if not isinstance(geom, dict) or "type" not in geom:
        raise ParseError("geometry object without a type")
    gtype = geom["type"]
    if gtype == "Polygon":
        polys = [geom.get("coordinates", [])]
    elif gtype == "MultiPolygon":
        polys = geom.get("coordinates", [])
    elif gtype == "GeometryCollection":
        out: List[List[List[Point]]] = []
        for g in geom.get("geometries", []):
            out.extend(_rings_from_geojson_geometry(g))
        return out
    else:
        raise ParseError(f"unsupported geometry type {gtype!r}; polygons only")
    out = []
    for rings in polys:
        converted = []
        for ring in rings:
            pts = [Point(float(c[0]), float(c[1])) for c in ring]
            if len(pts) >= 2 and dist(pts[0], pts[-1]) <= 1e-12:
                pts.pop()
            converted.append(pts)
        if converted:
            out.append(converted)
    return out


def _rings_from_file(path: str, fmt: Optional[str]) -> List[List[List[Point]]]:
    fmt = _detect_format(path, fmt)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path!r}: {exc}") from exc
    if fmt == "geojson":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in {path!r}: {exc}") from exc
        if isinstance(data, dict) and data.get("type") == "FeatureCollection":
            geoms = [f.get("geometry") for f in data.get("features", [])]
        elif isinstance(data, dict) and data.get("type") == "Feature":
            geoms = [data.get("geometry")]
        else:
            geoms = [data]
        ring_sets: List[List[List[Point]]] = []
        for g in geoms:
            if g is None:
                continue
            ring_sets.extend(_rings_from_geojson_geometry(g))
    else:
        try:
            from shapely import wkt as shapely_wkt
        except ImportError as exc:  # pragma: no cover
            raise ParseError("shapely is required to read WKT") from exc
        try:
            geom = shapely_wkt.loads(text)
        except Exception as exc:
            raise ParseError(f"invalid WKT in {path!r}: {exc}") from exc
        ring_sets = []

        def walk(g) -> None:
            if g.geom_type == "Polygon":
                rings = [[Point(x, y) for x, y in g.exterior.coords[:-1]]]
                rings += [[Point(x, y) for x, y in r.coords[:-1]] for r in g.interiors]
                ring_sets.append(rings)
            elif g.geom_type in ("MultiPolygon", "GeometryCollection"):
                for part in g.geoms:
                    walk(part)
            else:
                raise ParseError(
                    f"unsupported geometry type {g.geom_type!r}; polygons only"
                )

        walk(geom)
    if not ring_sets:
        raise ParseError(f"no polygons found in {path!r}")
    return ring_sets


def _ring_contains_point(ring: Sequence[Point], p: Point) -> bool:
    inside = False
    n = len(ring)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if x > p.x:
                inside = not inside
    return inside


def ingest_instances(
    path: str, fmt: Optional[str] = None
) -> List[Tuple[str, PolygonSet]]:
    """All aggregation instances in a file: the top level, then one per
    populated hole. Labels: "" for the top level, "hole0", "hole1", ...
    """
    ring_sets = _rings_from_file(path, fmt)
    shells: List[List[Point]] = []
    holes: List[List[Point]] = []  # flattened across all polygons
    for rings in ring_sets:
        if not rings or len(rings[0]) < 3:
            raise ParseError("polygon with a degenerate outer ring")
        shells.append(rings[0])
        holes.extend(r for r in rings[1:] if len(r) >= 3)

    # assign each shell to the hole that contains it (holes never overlap
    # shells other than by containment in valid input)
    member_of: List[Optional[int]] = []
    for s in shells:
        probe = s[0]
        owner = None
        for hid, h in enumerate(holes):
            if _ring_contains_point(h, probe):
                # the smallest containing hole wins (nested courtyards)
                if owner is None or _ring_contains_point(holes[owner], h[0]):
                    owner = hid
        member_of.append(owner)

    def build(label: str, idxs: List[int]) -> Tuple[str, PolygonSet]:
        polys = []
        for i in idxs:
            try:
                polys.append(Polygon(shells[i]))
            except SelfIntersectingInput as exc:
                raise SelfIntersectingInput(f"polygon {i}: {exc}") from exc
        return label, PolygonSet(polys)

    instances = [build("", [i for i, m in enumerate(member_of) if m is None])]
    counter = 0
    for hid in range(len(holes)):
        idxs = [i for i, m in enumerate(member_of) if m == hid]
        if idxs:
            instances.append(build(f"hole{counter}", idxs))
            counter += 1
    return instances


def ingest(path: str, fmt: Optional[str] = None) -> PolygonSet:
    """The top-level instance of a file (see ingest_instances for holes)."""
    return ingest_instances(path, fmt)[0][1]


# ---------------------------------------------------------------------------
# writing


def _piece_record(piece) -> dict:
    f = piece.fragment
    if isinstance(f, CircularArc):
        return {
            "type": "arc",
            "kind": piece.kind,
            "center": [f.center.x, f.center.y],
            "radius": f.radius,
            "start_angle": f.start_angle,
            "span": f.span,
            "ccw": f.ccw,
        }
    return {
        "type": "segment",
        "kind": piece.kind,
        "start": [f.start.x, f.start.y],
        "end": [f.end.x, f.end.y],
    }


def _region_rings(region, sagitta: float) -> List[List[List[float]]]:
    """GeoJSON rings: exterior counterclockwise first, then holes clockwise.

    Traced cycles carry the interior on the right, so emission reverses the
    point order of every cycle.
    """
    outers = []
    inners = []
    for cyc in region.cycles:
        pts = discretize_cycle([p.fragment for p in cyc], sagitta)
        if len(pts) < 3:
            continue
        ring = [[p.x, p.y] for p in reversed(pts)]
        ring.append(ring[0])
        signed = cycle_area([p.fragment for p in cyc])
        (outers if signed < 0.0 else inners).append(ring)
    if len(outers) != 1:
        raise ValueError(f"region with {len(outers)} outer cycles")
    return outers + inners


def default_sagitta(sol: Solution) -> float:
    """1e-3 of the solution bounding-box diagonal (fallback 1e-3)."""
    xs: List[float] = []
    ys: List[float] = []
    for r in sol.regions:
        for cyc in r.cycles:
            for piece in cyc:
                pts = discretize_cycle([piece.fragment], 1.0)
                xs.extend(p.x for p in pts)
                ys.extend(p.y for p in pts)
    if not xs:
        return 1e-3
    diag = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    return max(diag * 1e-3, 1e-12)


def solution_geojson(sol: Solution, sagitta: Optional[float] = None) -> dict:
    """FeatureCollection with one feature per region.

    Geometry is the sagitta-discretized outline; the exact boundary pieces
    (arc centers, radii, angles) ride along in properties["boundary"].
    """
    if sagitta is None:
        sagitta = default_sagitta(sol)
    feats = []
    for i, region in enumerate(sol.regions):
        feats.append(
            {
                "type": "Feature",
                "properties": {
                    "region": i,
                    "area": region.area(),
                    "perimeter": region.perimeter(),
                    "boundary": [
                        [_piece_record(p) for p in cyc] for cyc in region.cycles
                    ],
                },
                "geometry": {
                    "type": "Polygon",
                    "coordinates": _region_rings(region, sagitta),
                },
            }
        )
    alpha = sol.alpha
    meta = {
        "solver": sol.solver,
        "alpha": "inf" if math.isinf(alpha) else alpha,
        "sagitta": sagitta,
    }
    if sol.objective is not None:
        meta["objective"] = sol.objective.value
        meta["area"] = sol.objective.area
        meta["perimeter"] = sol.objective.perimeter
    return {"type": "FeatureCollection", "metadata": meta, "features": feats}


def write_solution_geojson(
    sol: Solution, path: str, sagitta: Optional[float] = None
) -> None:
    doc = solution_geojson(sol, sagitta)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# SVG


def _svg_path_for_cycle(cyc) -> str:
    parts: List[str] = []
    first = cyc[0].fragment
    start = (
        first.start if isinstance(first, DirectedSegment) else first.point_at(0.0)
    )
    parts.append(f"M {start.x:.6f} {start.y:.6f}")
    for piece in cyc:
        f = piece.fragment
        if isinstance(f, DirectedSegment):
            parts.append(f"L {f.end.x:.6f} {f.end.y:.6f}")
        else:
            end = f.point_at(1.0)
            large = 1 if f.span > math.pi else 0
            sweep = 1 if f.ccw else 0
            parts.append(
                f"A {f.radius:.6f} {f.radius:.6f} 0 {large} {sweep} "
                f"{end.x:.6f} {end.y:.6f}"
            )
    parts.append("Z")
    return " ".join(parts)


def solution_svg(sol: Solution, B: Optional[PolygonSet] = None) -> str:
    """Standalone SVG: input polygons underneath, solution regions on top.

    Arcs use native elliptical-arc path commands, so the rendering is exact.
    """
    xs: List[float] = []
    ys: List[float] = []
    if B is not None:
        bb = B.bbox()
        xs += [bb[0], bb[2]]
        ys += [bb[1], bb[3]]
    for r in sol.regions:
        for cyc in r.cycles:
            for piece in cyc:
                for p in discretize_cycle([piece.fragment], 1.0):
                    xs.append(p.x)
                    ys.append(p.y)
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    minx, maxx, miny, maxy = min(xs), max(xs), min(ys), max(ys)
    pad = 0.05 * max(maxx - minx, maxy - miny, 1e-9)
    minx, maxx = minx - pad, maxx + pad
    miny, maxy = miny - pad, maxy + pad
    w, h = maxx - minx, maxy - miny
    stroke = 0.004 * max(w, h)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{minx:.6f} {miny:.6f} '
        f'{w:.6f} {h:.6f}" width="800" height="{800 * h / w:.0f}">',
        # flip y so math coordinates render upright
        f'<g transform="matrix(1 0 0 -1 0 {miny + maxy:.6f})">',
    ]
    lines.append(
        f'<g fill="#cfe4f7" stroke="#1f5fa8" stroke-width="{stroke:.6f}" '
        'fill-rule="evenodd">'
    )
    for r in sol.regions:
        d = " ".join(_svg_path_for_cycle(cyc) for cyc in r.cycles)
        lines.append(f'<path d="{d}"/>')
    lines.append("</g>")
    if B is not None:
        lines.append(f'<g fill="#8a8a8a" stroke="#3c3c3c" stroke-width="{stroke:.6f}">')
        for poly in B.polygons:
            pts = " ".join(f"{p.x:.6f},{p.y:.6f}" for p in poly.vertices)
            lines.append(f'<polygon points="{pts}"/>')
        lines.append("</g>")
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
