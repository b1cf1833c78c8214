"""Optimal cell selection on a subdivision via minimum s-t cut.

Every free cell becomes a node between a source (the polygon side) and a
sink (the outside). Capacities are set so that for any selection S of free
cells, cut(S) + offset = area(S u B) + alpha * perimeter(S u B):

  source -> f : alpha * length(f n dB)          paid when f is NOT selected
  f -> sink   : area(f) + alpha * length(f n outer)   paid when f IS selected
  f <-> g     : alpha * shared length, both ways

  offset = area(B) + alpha * length(dB n outer)

The minimum cut therefore minimizes the objective over all unions of free
cells, and the canonical minimal cut (source-reachable residual set) is the
inclusion-minimal optimum. With alpha = infinity the capacities drop the
area terms and the weight on lengths: the cut minimizes total perimeter
exactly, and inclusion-minimality of the returned side breaks perimeter ties
toward smaller area, which realizes the lexicographic objective without any
big-M scaling.
"""

from __future__ import annotations

import math
import time
from collections import deque
from typing import Optional, Sequence

from .arrangement import Subdivision
from .errors import InfeasibleIntermediate, TooManyCells
from .geom import ObjectiveBreakdown
from .solution import BoundaryPiece, Region, Solution

_SOURCE_PREF = {"polygon": 0, "cand": 1, "tri": 2, "hull": 3}


class Dinic:
    """Max-flow with float capacities; tolerance derived from the largest cap."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        # flat edge arrays: to[i], cap[i]; reverse edge is i ^ 1
        self.to: list[int] = []
        self.cap: list[float] = []
        self.tol = 1e-12

    def add_edge(self, u: int, v: int, cap: float, rev_cap: float = 0.0) -> None:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(rev_cap)
        self.tol = max(self.tol, 1e-12 * max(cap, rev_cap))

    def _bfs(self, s: int, t: int) -> bool:
        self.level = [-1] * self.n
        self.level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for ei in self.adj[u]:
                v = self.to[ei]
                if self.level[v] < 0 and self.cap[ei] > self.tol:
                    self.level[v] = self.level[u] + 1
                    q.append(v)
        return self.level[t] >= 0

    def _dfs(self, u: int, t: int, pushed: float) -> float:
        if u == t:
            return pushed
        while self.it[u] < len(self.adj[u]):
            ei = self.adj[u][self.it[u]]
            v = self.to[ei]
            if self.cap[ei] > self.tol and self.level[v] == self.level[u] + 1:
                d = self._dfs(v, t, min(pushed, self.cap[ei]))
                if d > self.tol:
                    self.cap[ei] -= d
                    self.cap[ei ^ 1] += d
                    return d
            self.it[u] += 1
        return 0.0

    def max_flow(self, s: int, t: int) -> float:
        flow = 0.0
        while self._bfs(s, t):
            self.it = [0] * self.n
            while True:
                f = self._dfs(s, t, math.inf)
                if f <= self.tol:
                    break
                flow += f
        return flow

    def min_cut_source_side(self, s: int) -> set:
        """Source-reachable nodes in the residual graph: the minimal cut."""
        seen = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for ei in self.adj[u]:
                v = self.to[ei]
                if v not in seen and self.cap[ei] > self.tol:
                    seen.add(v)
                    q.append(v)
        return seen


# ---------------------------------------------------------------------------
# network construction


class CutNetwork:
    """Aggregated capacities for one subdivision at one alpha.

    as_free names polygon cells to treat as ordinary free cells: solving a
    sub-family of the inputs on the full family's subdivision. Costs follow
    the reduced input; traced piece kinds still reflect the full family.
    """

    def __init__(self, sub: Subdivision, alpha: float, as_free=None):
        self.sub = sub
        self.alpha = alpha
        finite = math.isfinite(alpha)
        w = alpha if finite else 1.0
        aw = 1.0 if finite else 0.0
        roles = [f.role for f in sub.faces]
        if as_free:
            for fid in as_free:
                if roles[fid] != "polygon-cell":
                    raise ValueError("as_free must name polygon cells")
                roles[fid] = "free-cell"
        free = [f for f in sub.faces if roles[f.id] == "free-cell"]
        self.free_ids = [f.id for f in free]
        self.index = {fid: i for i, fid in enumerate(self.free_ids)}
        k = len(free)
        self.source_len = [0.0] * k  # length shared with polygon cells
        self.outer_len = [0.0] * k  # length shared with outer faces
        self.areas = [f.area for f in free]
        self.pair_len: dict[tuple[int, int], float] = {}
        self.offset_len = 0.0  # dB directly on the outer boundary
        for e in sub.edges:
            rl, rr = roles[e.face_left], roles[e.face_right]
            if e.face_left == e.face_right:
                continue
            pair = {rl, rr}
            if pair == {"polygon-cell", "free-cell"}:
                fid = e.face_left if rl == "free-cell" else e.face_right
                self.source_len[self.index[fid]] += e.length
            elif pair == {"polygon-cell", "outer"}:
                self.offset_len += e.length
            elif pair == {"free-cell"}:
                i = self.index[e.face_left]
                j = self.index[e.face_right]
                a, b = (i, j) if i < j else (j, i)
                self.pair_len[(a, b)] = self.pair_len.get((a, b), 0.0) + e.length
            elif pair == {"free-cell", "outer"}:
                fid = e.face_left if rl == "free-cell" else e.face_right
                self.outer_len[self.index[fid]] += e.length
            # polygon|polygon and outer|outer edges carry no cost
        self.polygon_area = sum(
            f.area for f in sub.faces if roles[f.id] == "polygon-cell"
        )
        self.offset = aw * self.polygon_area + w * self.offset_len
        self.w = w
        self.aw = aw

    def build_flow(self) -> tuple[Dinic, int, int]:
        k = len(self.free_ids)
        net = Dinic(k + 2)
        s, t = k, k + 1
        for i in range(k):
            if self.source_len[i] > 0.0:
                net.add_edge(s, i, self.w * self.source_len[i])
            cap_t = self.aw * self.areas[i] + self.w * self.outer_len[i]
            if cap_t > 0.0:
                net.add_edge(i, t, cap_t)
        for (i, j), ln in sorted(self.pair_len.items()):
            net.add_edge(i, j, self.w * ln, self.w * ln)
        return net, s, t

    def selection_value(self, selected: Sequence[bool]) -> tuple[float, float]:
        """(area, perimeter) of B union the selected free cells."""
        area = self.polygon_area
        per = self.offset_len
        for i in range(len(self.free_ids)):
            if selected[i]:
                area += self.areas[i]
                per += self.outer_len[i]
            else:
                per += self.source_len[i]
        for (i, j), ln in self.pair_len.items():
            if selected[i] != selected[j]:
                per += ln
        return area, per

    def cut_value(self, reached: set, s: int) -> float:
        val = 0.0
        for i in range(len(self.free_ids)):
            sel = i in reached
            if not sel and self.source_len[i] > 0.0:
                val += self.w * self.source_len[i]
            if sel:
                val += self.aw * self.areas[i] + self.w * self.outer_len[i]
        for (i, j), ln in self.pair_len.items():
            if (i in reached) != (j in reached):
                val += self.w * ln
        return val


# beyond this many cells in ONE component, hand the flow to scipy
_SCIPY_MIN_CELLS = 4096


def _min_cut_scipy(
    source_cap: Sequence[float], sink_cap: Sequence[float], pairs: dict
) -> Optional[tuple[float, set]]:
    """Minimal min cut via scipy's integer max-flow, or None if unavailable.

    scipy's solver wraps around once values exceed 32 bits, so capacities
    are scaled to keep the total flow below 2^30. The rounding can shift
    near-ties by ~edges/scale; exactness-critical paths use the float
    solver instead. The minimal source side (source-reachable residual
    nodes) is the same for every maximum flow, so up to that rounding the
    two solvers agree.
    """
    try:
        import numpy as np
        from scipy.sparse import csr_matrix
        from scipy.sparse.csgraph import breadth_first_order, maximum_flow
    except ImportError:
        return None
    k = len(source_cap)
    s, t = k, k + 1
    rows: list[int] = []
    cols: list[int] = []
    caps: list[float] = []
    for i in range(k):
        if source_cap[i] > 0.0:
            rows.append(s)
            cols.append(i)
            caps.append(source_cap[i])
        if sink_cap[i] > 0.0:
            rows.append(i)
            cols.append(t)
            caps.append(sink_cap[i])
    for (i, j), cap in sorted(pairs.items()):
        rows.extend((i, j))
        cols.extend((j, i))
        caps.extend((cap, cap))
    flow_bound = max(1e-12, min(sum(source_cap), sum(sink_cap)))
    scale = (2.0**30) / flow_bound
    data = np.rint(np.asarray(caps) * scale).astype(np.int64)
    graph = csr_matrix((data, (rows, cols)), shape=(k + 2, k + 2))
    res = maximum_flow(graph, s, t)
    residual = graph - res.flow
    residual.eliminate_zeros()
    order = breadth_first_order(residual, s, directed=True, return_predecessors=False)
    reached_free = {int(i) for i in order if i < k}
    return res.flow_value / scale, reached_free


def _min_cut(netw: CutNetwork) -> tuple[float, set]:
    """Value and minimal source side; solved per pair-adjacency component.

    Cells in different components interact only through the terminals, so
    the cut decomposes additively and component results union cleanly.
    """
    k = len(netw.free_ids)
    parent = list(range(k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in netw.pair_len:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    comps: dict[int, list[int]] = {}
    for i in range(k):
        comps.setdefault(find(i), []).append(i)

    total_flow = 0.0
    reached_all: set = set()
    for cells in comps.values():
        local = {c: li for li, c in enumerate(cells)}
        m = len(cells)
        src = [netw.w * netw.source_len[c] for c in cells]
        snk = [netw.aw * netw.areas[c] + netw.w * netw.outer_len[c] for c in cells]
        pairs = {
            (local[i], local[j]): netw.w * ln
            for (i, j), ln in netw.pair_len.items()
            if i in local
        }
        out = None
        if m >= _SCIPY_MIN_CELLS:
            out = _min_cut_scipy(src, snk, pairs)
        if out is None:
            net = Dinic(m + 2)
            s, t = m, m + 1
            for li in range(m):
                if src[li] > 0.0:
                    net.add_edge(s, li, src[li])
                if snk[li] > 0.0:
                    net.add_edge(li, t, snk[li])
            for (li, lj), cap in sorted(pairs.items()):
                net.add_edge(li, lj, cap, cap)
            flow = net.max_flow(s, t)
            reached = {li for li in net.min_cut_source_side(s) if li < m}
            out = (flow, reached)
        total_flow += out[0]
        reached_all.update(cells[li] for li in out[1])
    return total_flow, reached_all


# ---------------------------------------------------------------------------
# region extraction


def trace_regions(sub: Subdivision, member: Sequence[bool]) -> list[Region]:
    """Boundary cycles of the union of member faces, regions on the RIGHT.

    member is indexed by face id. Cycles are walked with the union on the
    left and every piece reversed afterwards. Faces touching only at a
    vertex belong to one region (connected as closed sets).
    """
    he_face = sub.he_face
    he_next = sub.he_next
    nh = len(he_face)
    boundary = [
        member[he_face[h]] and not member[he_face[h ^ 1]] for h in range(nh)
    ]
    visited = [False] * nh
    cycles: list[tuple[int, list[int]]] = []  # (left face id, half-edges)
    for h0 in range(nh):
        if not boundary[h0] or visited[h0]:
            continue
        cyc = []
        h = h0
        guard = 0
        while True:
            visited[h] = True
            cyc.append(h)
            nxt = he_next[h]
            while member[he_face[nxt ^ 1]]:
                nxt = he_next[nxt ^ 1]
                guard += 1
                if guard > 4 * nh + 16:
                    raise InfeasibleIntermediate("boundary walk did not close")
            h = nxt
            guard += 1
            if guard > 4 * nh + 16:
                raise InfeasibleIntermediate("boundary walk did not close")
            if h == h0:
                break
        cycles.append((he_face[h0], cyc))

    # group member faces into regions: shared edge or shared vertex connects
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    member_ids = [fid for fid in range(len(sub.faces)) if member[fid]]
    for fid in member_ids:
        parent[fid] = fid
    vertex_face: dict[int, int] = {}
    for ei, e in enumerate(sub.edges):
        fl, fr = e.face_left, e.face_right
        if member[fl] and member[fr]:
            union(fl, fr)
        for v in (e.a, e.b):
            for f in (fl, fr):
                if member[f]:
                    if v in vertex_face:
                        union(vertex_face[v], f)
                    else:
                        vertex_face[v] = f

    groups: dict[int, Region] = {}
    order: list[int] = []
    for left_face, cyc in cycles:
        root = find(left_face)
        if root not in groups:
            groups[root] = Region([])
            order.append(root)
        pieces = []
        for h in cyc:
            e = sub.edges[h >> 1]
            frag = sub.half_edge_fragment(h)
            src = min(e.sources, key=lambda s: (_SOURCE_PREF.get(s[0], 9), s[1]))
            kind = "constrained" if e.constrained else "free"
            pieces.append(BoundaryPiece(frag, kind, src))
        # reverse so the region interior lies on the right of travel
        groups[root].cycles.append([p.reversed() for p in reversed(pieces)])
    return [groups[r] for r in order]


# ---------------------------------------------------------------------------
# solvers


def solve_subdivision(
    sub: Subdivision, alpha: float, solver: str = "subdivision", as_free=None
) -> Solution:
    """Optimal aggregation restricted to unions of this subdivision's cells."""
    t0 = time.perf_counter()
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    netw = CutNetwork(sub, alpha, as_free)
    flow_value = 0.0
    reached_free: set = set()
    if netw.free_ids:
        flow_value, reached_free = _min_cut(netw)
        cut = netw.cut_value(reached_free, 0)
        if abs(cut - flow_value) > 1e-6 * max(1.0, abs(cut)):
            raise InfeasibleIntermediate(
                f"max-flow {flow_value} disagrees with recomputed cut {cut}"
            )
        flow_value = cut  # the recomputed sum is the sharper number
    selected = [False] * len(netw.free_ids)
    for i in reached_free:
        selected[i] = True
    area, per = netw.selection_value(selected)
    g = netw.aw * area + netw.w * per
    if abs(g - (flow_value + netw.offset)) > 1e-9 * max(1.0, abs(g)):
        raise InfeasibleIntermediate(
            f"objective {g} != cut {flow_value} + offset {netw.offset}"
        )
    member = [f.role == "polygon-cell" for f in sub.faces]
    if as_free:
        for fid in as_free:
            member[fid] = False
    for i, fid in enumerate(netw.free_ids):
        if selected[i]:
            member[fid] = True
    regions = trace_regions(sub, member)
    obj = ObjectiveBreakdown.compute(area, per, alpha)
    sol = Solution(
        regions=regions,
        alpha=alpha,
        solver=solver,
        objective=obj,
        stats={
            "cells": int(sum(selected)),
            "free_cells_total": len(netw.free_ids),
            "member_faces": sorted(f for f in range(len(member)) if member[f]),
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


def brute_force_subdivision(
    sub: Subdivision, alpha: float, max_cells: int = 22, as_free=None
) -> ObjectiveBreakdown:
    """Exhaustive optimum over all unions of free cells (oracle for tests)."""
    import numpy as np

    netw = CutNetwork(sub, alpha, as_free)
    k = len(netw.free_ids)
    if k > max_cells:
        raise TooManyCells(f"{k} free cells exceeds brute-force cap {max_cells}")
    n = 1 << k
    sel = np.arange(n, dtype=np.uint32)
    area = np.full(n, netw.polygon_area)
    per = np.full(n, netw.offset_len)
    for i in range(k):
        bit = ((sel >> np.uint32(i)) & np.uint32(1)).astype(np.float64)
        area += netw.areas[i] * bit
        per += netw.outer_len[i] * bit + netw.source_len[i] * (1.0 - bit)
    for (i, j), ln in netw.pair_len.items():
        diff = (((sel >> np.uint32(i)) ^ (sel >> np.uint32(j))) & np.uint32(1)).astype(
            np.float64
        )
        per += ln * diff
    if math.isfinite(alpha):
        g = area + alpha * per
        best = int(np.argmin(g))
    else:
        best = int(np.lexsort((area, per))[0])
    return ObjectiveBreakdown.compute(float(area[best]), float(per[best]), alpha)


def solve_unrestricted(B, alpha: float, solver: str = "unrestricted") -> Solution:
    """Optimal aggregation over all boundaries: arcs of radius alpha allowed.

    Generates the candidate arc set, builds the induced subdivision and picks
    the optimal union of its cells. Optimality over candidate-arc cells
    carries over to the unrestricted problem, so the result is exact.
    """
    from .candidates import generate_candidates
    from .arrangement import build_arrangement

    cands = generate_candidates(B, alpha)
    sub = build_arrangement(B, cands)
    return solve_subdivision(sub, alpha, solver)
