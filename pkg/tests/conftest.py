"""Shared instance generators and pipeline helpers.

The generators are calibrated against two hard limits: the 22-cell cap that
keeps exhaustive subset enumeration tractable, and the snapping-robust
geometry regime (features well above 1e-6, clusters far enough apart that
large radii do not couple them).
"""

import math
import random

import pytest

from arcagg import (
    Point,
    Polygon,
    PolygonSet,
    build_arrangement,
    generate_candidates,
    triangulate,
)
from arcagg.mincut import solve_subdivision

# the alpha grids the oracle suites sweep
ORACLE_ALPHAS = (0.0, 0.5, 1.0, 5.0, 20.0)
RATIO_ALPHAS = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0)


def rect(x, y, w, h):
    return Polygon([Point(x, y), Point(x + w, y), Point(x + w, y + h), Point(x, y + h)])


def lshape(x, y, w, h, cw, ch):
    """Axis-aligned L: a w-by-h box with its top-right cw-by-(h-ch) corner cut."""
    return Polygon(
        [
            Point(x, y),
            Point(x + w, y),
            Point(x + w, y + ch),
            Point(x + cw, y + ch),
            Point(x + cw, y + h),
            Point(x, y + h),
        ]
    )


def two_squares(gap, side=1.0):
    return PolygonSet([rect(0, 0, side, side), rect(side + gap, 0, side, side)])


def c1_instance(rng):
    """3-10 rectangles/L-shapes with <= 22 free cells in D_T and every D_C.

    Two layouts keep the cell counts under the cap. Small scale: one
    interacting feature (tight pair or L) plus far-away unit satellites.
    Row scale: polygons of one common height in a row, so the hull hugs the
    row and only the gap strips are free; the single interacting feature is
    a tight tower pair or an L notch. Gaps of 42+ never host candidates
    because the sweep tops out at alpha = 20. Draws violating the cap are
    rejected and redrawn.

    Returns (B, dt_subdivision, [dc_subdivision per ORACLE_ALPHAS]).
    """
    while True:
        n = min(rng.randint(3, 10), rng.randint(3, 10))
        polys = []
        if n <= 5 and rng.random() < 0.5:
            if n == 3 and rng.random() < 0.5:
                w1, w2 = rng.uniform(0.8, 1.3), rng.uniform(0.8, 1.3)
                h = rng.uniform(0.8, 1.3)
                g = rng.uniform(0.35, 0.55)
                polys = [rect(0, 0, w1, h), rect(w1 + g, 0, w2, h)]
            else:
                w, h = rng.uniform(1.2, 2.0), rng.uniform(1.2, 2.0)
                polys = [
                    lshape(0, 0, w, h, w * rng.uniform(0.4, 0.6), h * rng.uniform(0.4, 0.6))
                ]
            k = 0
            while len(polys) < n:
                polys.append(
                    rect(46.0 * (k + 1) + rng.uniform(0, 2), rng.uniform(0, 2), 1, 1)
                )
                k += 1
        else:
            H = 50.0
            feature = "towers" if n <= 7 and rng.random() < 0.5 else "lgiant"
            if feature == "towers":
                tw = rng.uniform(3.0, 5.0)
                g = rng.uniform(0.35, 0.55)
                polys = [rect(0, 0, tw, H), rect(tw + g, 0, tw, H)]
                x = 2 * tw + g + rng.uniform(42.0, 60.0)
            else:
                cw, ch = rng.uniform(0.4, 0.6), rng.uniform(0.4, 0.6)
                polys = [lshape(0, 0, H, H, H * cw, H * ch)]
                x = H + rng.uniform(42.0, 60.0)
            while len(polys) < n:
                w = rng.uniform(44.0, 55.0)
                polys.append(rect(x, 0, w, H))
                x += w + rng.uniform(42.0, 60.0)
        B = PolygonSet(polys)
        dt_sub = triangulate(B)
        if len(dt_sub.free_faces()) > 22:
            continue
        dc_subs = []
        for a in ORACLE_ALPHAS:
            sub = build_arrangement(B, generate_candidates(B, a))
            if len(sub.free_faces()) > 22:
                dc_subs = None
                break
            dc_subs.append(sub)
        if dc_subs is not None:
            return B, dt_sub, dc_subs


def cluster_instance(rng, n):
    """n polygons in clusters of 2-4 on a coarse grid.

    Cluster anchors sit 110 apart, beyond twice the largest sweep alpha
    (50), so candidates never couple two clusters and the arrangement stays
    in the numerically robust regime.
    """
    polys = []
    placed = 0
    ci = 0
    while placed < n:
        k = min(rng.randint(2, 4), n - placed)
        gx, gy = ci % 5, ci // 5
        ax = gx * 110.0 + rng.uniform(0, 7)
        ay = gy * 110.0 + rng.uniform(0, 7)
        x = ax
        for _ in range(k):
            w, h = rng.uniform(0.7, 1.4), rng.uniform(0.7, 1.4)
            y = ay + rng.uniform(-0.25, 0.25)
            if rng.random() < 0.3:
                polys.append(
                    lshape(x, y, w, h, w * rng.uniform(0.35, 0.6), h * rng.uniform(0.35, 0.6))
                )
            else:
                polys.append(rect(x, y, w, h))
            x += w + rng.uniform(0.3, 0.9)
            placed += 1
        ci += 1
    return PolygonSet(polys)


def star_polygon(rng, cx, cy, rmin=0.3, rmax=1.0, n=None):
    n = n or rng.randint(3, 8)
    pts = []
    for i in range(n):
        ang = 2 * math.pi * i / n + rng.uniform(-0.25, 0.25) / n
        r = rng.uniform(rmin, rmax)
        pts.append(Point(cx + r * math.cos(ang), cy + r * math.sin(ang)))
    return Polygon(pts)


def star_instance(rng, k, min_gap=0.05):
    """k disjoint random star-shaped polygons in a 4x4 box."""
    from shapely.geometry import Polygon as ShPoly

    for _ in range(300):
        polys = [
            star_polygon(rng, rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(k)
        ]
        sh = [ShPoly([(p.x, p.y) for p in poly.vertices]) for poly in polys]
        if any(not s.is_valid or s.area < 0.05 for s in sh):
            continue
        if all(
            sh[i].distance(sh[j]) >= min_gap
            for i in range(k)
            for j in range(i + 1, k)
        ):
            return PolygonSet(polys)
    raise RuntimeError("could not place disjoint polygons")


def solve_exact(B, alpha):
    """Exact unrestricted optimum through the candidate arrangement."""
    cands = generate_candidates(B, alpha)
    sub = build_arrangement(B, cands)
    return solve_subdivision(sub, alpha, "unrestricted"), sub


@pytest.fixture
def rng():
    return random.Random(0xA66)


@pytest.fixture(scope="session")
def two_squares_default():
    return two_squares(0.4)
