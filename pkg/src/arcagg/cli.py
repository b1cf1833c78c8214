"""Command-line driver: ingest footprints, sweep alpha, emit geometry and metrics.

One process run handles one input file. Every hole in the input spawns its
own sub-instance (written to a subdirectory); for each instance the driver
runs the requested solvers over the requested alpha values, writes one
GeoJSON file per (alpha, solver) plus optional SVG and LP-file artifacts,
and collects a metrics.csv.

Alpha values are dispatched to a worker pool in ascending waves; all file
writes happen on the collecting thread. After a solver exceeds the time
limit at some alpha it is skipped for every larger alpha.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .approx import approx_line, approx_vertex
from .arrangement import triangulate
from .errors import ArcAggError
from .geom import PolygonSet
from .ilp import (
    brute_force_vertex_optimal,
    build_ilp,
    enumerate_universe,
    ilp_vertex_optimal,
    write_lp_file,
)
from .io_geo import ingest_instances, solution_geojson, solution_svg
from .mincut import solve_subdivision, solve_unrestricted
from .solution import Solution

SOLVERS = (
    "unrestricted",
    "subdivision-dt",
    "approx-line",
    "approx-vertex",
    "brute-force",
    "ilp-export",
)

# CSV schema; runtime_ms is the only column allowed to differ between reruns
COLUMNS = (
    "alpha",
    "solver",
    "area",
    "perimeter",
    "objective",
    "cells",
    "arcs",
    "runtime_ms",
    "ratio_AL_OF",
    "ratio_AV_OF",
    "ratio_OV_OF",
    "status",
    "phases",
)


@dataclass
class RunConfig:
    input_path: str
    out_dir: str
    fmt: Optional[str] = None
    alphas: Sequence[float] = (1.0,)
    solvers: Sequence[str] = ("unrestricted",)
    sagitta: Optional[float] = None  # default: 1e-3 of instance diameter
    time_limit: Optional[float] = None  # seconds per solve
    threads: int = 1
    epsilon: Dict[str, float] = field(default_factory=dict)
    svg: bool = False

    def __post_init__(self) -> None:
        alphas = sorted(set(float(a) for a in self.alphas))
        if any(a < 0.0 or math.isnan(a) for a in alphas):
            raise ValueError("alpha values must be non-negative")
        self.alphas = alphas
        bad = [s for s in self.solvers if s not in SOLVERS]
        if bad:
            raise ValueError(f"unknown solvers {bad}; choose from {list(SOLVERS)}")
        # canonical execution order regardless of flag order
        self.solvers = [s for s in SOLVERS if s in set(self.solvers)]
        if not self.solvers:
            raise ValueError("no solvers requested")
        if self.sagitta is not None and not self.sagitta > 0.0:
            raise ValueError("sagitta tolerance must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.time_limit is not None and not self.time_limit > 0.0:
            raise ValueError("time limit must be positive")


EPSILON_KEYS = ("snap", "approx-warn", "approx-fail")


def _apply_epsilons(eps: Dict[str, float]) -> None:
    from . import approx as approx_mod
    from . import arrangement as arrangement_mod

    targets = {
        "snap": (arrangement_mod, "SNAP_TOL"),
        "approx-warn": (approx_mod, "_WARN_REL"),
        "approx-fail": (approx_mod, "_FAIL_REL"),
    }
    for key, value in eps.items():
        if key not in targets:
            raise ValueError(f"unknown epsilon {key!r}; choose from {EPSILON_KEYS}")
        if not value > 0.0:
            raise ValueError(f"epsilon {key} must be positive")
        mod, attr = targets[key]
        setattr(mod, attr, value)


# ---------------------------------------------------------------------------
# one (alpha, solver) unit of work


@dataclass
class RunRow:
    alpha: float
    solver: str
    status: str = "ok"
    area: Optional[float] = None
    perimeter: Optional[float] = None
    objective: Optional[float] = None
    cells: Optional[int] = None
    arcs: Optional[int] = None
    runtime_ms: float = 0.0
    phases: str = ""
    ratios: Dict[str, float] = field(default_factory=dict)


def _alpha_tag(alpha: float) -> str:
    if math.isinf(alpha):
        return "inf"
    if alpha == int(alpha):
        return str(int(alpha))
    return repr(alpha).replace("-", "m")


def _num(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, int):
        return str(x)
    f = float(x)
    if math.isinf(f):
        return "inf"
    if f == int(f) and abs(f) < 1e15:
        return str(int(f))
    return repr(f)


def _row_from_solution(row: RunRow, sol: Solution) -> None:
    row.area = sol.objective.area
    row.perimeter = sol.objective.perimeter
    row.objective = sol.objective.value
    cells = sol.stats.get("free_cells_total", sol.stats.get("cells"))
    row.cells = int(cells) if cells is not None else None
    row.arcs = sol.arc_count()
    if "phases" in sol.stats:
        row.phases = json.dumps(sol.stats["phases"], sort_keys=True)


def _solve_alpha(
    B: PolygonSet,
    alpha: float,
    solvers: Sequence[str],
    config: RunConfig,
    skip: Dict[str, float],
) -> List[Tuple[RunRow, List[Tuple[str, str, object]]]]:
    """All requested solver runs at one alpha value.

    Returns (row, artifacts) pairs; artifacts are (filename, kind, payload)
    with kind one of geojson/svg/lp. No file IO happens here.
    """
    out: List[Tuple[RunRow, List[Tuple[str, str, object]]]] = []
    exact: Optional[Solution] = None
    tag = _alpha_tag(alpha)
    for solver in solvers:
        row = RunRow(alpha=alpha, solver=solver)
        artifacts: List[Tuple[str, str, object]] = []
        if solver in skip and alpha >= skip[solver]:
            row.status = "skipped-after-timeout"
            out.append((row, artifacts))
            continue
        t0 = time.perf_counter()
        sol: Optional[Solution] = None
        try:
            if solver == "unrestricted":
                sol = solve_unrestricted(B, alpha)
                exact = sol
            elif solver == "subdivision-dt":
                sol = solve_subdivision(triangulate(B), alpha, solver=solver)
            elif solver == "approx-line":
                sol = approx_line(B, alpha, exact=exact)
            elif solver == "approx-vertex":
                sol = approx_vertex(B, alpha, exact=exact)
            elif solver == "brute-force":
                sol = brute_force_vertex_optimal(B, alpha)
            elif solver == "ilp-export":
                model = build_ilp(enumerate_universe(B), alpha)
                artifacts.append((f"model_a{tag}.lp", "lp", write_lp_file(model)))
                try:
                    sol = ilp_vertex_optimal(B, alpha, time_limit=config.time_limit)
                except ArcAggError as exc:
                    if "scipy" not in str(exc):
                        raise
                    row.status = "exported"  # no MIP solver available
        except (ArcAggError, ValueError, NotImplementedError) as exc:
            row.status = f"failed: {type(exc).__name__}: {exc}"
            row.runtime_ms = (time.perf_counter() - t0) * 1e3
            out.append((row, []))
            continue
        row.runtime_ms = (time.perf_counter() - t0) * 1e3
        if sol is not None:
            _row_from_solution(row, sol)
            artifacts.append(
                (
                    f"solution_a{tag}_{solver}.geojson",
                    "geojson",
                    solution_geojson(sol, config.sagitta),
                )
            )
            if config.svg:
                artifacts.append(
                    (f"solution_a{tag}_{solver}.svg", "svg", solution_svg(sol, B))
                )
        if config.time_limit is not None and row.runtime_ms > config.time_limit * 1e3:
            row.status = "timeout"
            artifacts = []
        out.append((row, artifacts))
    return out


# ---------------------------------------------------------------------------
# per-instance sweep


def _fill_ratios(rows: List[RunRow]) -> None:
    """Ratio columns per alpha group, written into every row of the group."""
    by_alpha: Dict[float, Dict[str, float]] = {}
    for r in rows:
        if r.objective is not None:
            by_alpha.setdefault(r.alpha, {})[r.solver] = r.objective
    for r in rows:
        objs = by_alpha.get(r.alpha, {})
        o_f = objs.get("unrestricted")
        if o_f is None or o_f <= 0.0:
            continue
        if "approx-line" in objs:
            r.ratios["ratio_AL_OF"] = objs["approx-line"] / o_f
        if "approx-vertex" in objs:
            r.ratios["ratio_AV_OF"] = objs["approx-vertex"] / o_f
        o_v = objs.get("brute-force", objs.get("ilp-export"))
        if o_v is not None:
            r.ratios["ratio_OV_OF"] = o_v / o_f


def _write_metrics(rows: List[RunRow], path: str) -> None:
    order = {s: i for i, s in enumerate(SOLVERS)}
    rows = sorted(rows, key=lambda r: (r.alpha, order[r.solver]))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(
            [
                _num(r.alpha),
                r.solver,
                _num(r.area),
                _num(r.perimeter),
                _num(r.objective),
                _num(r.cells),
                _num(r.arcs),
                _num(round(r.runtime_ms, 3)),
                _num(r.ratios.get("ratio_AL_OF")),
                _num(r.ratios.get("ratio_AV_OF")),
                _num(r.ratios.get("ratio_OV_OF")),
                r.status,
                r.phases,
            ]
        )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def _write_artifact(outdir: str, name: str, kind: str, payload: object) -> None:
    path = os.path.join(outdir, name)
    if kind == "geojson":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
    else:  # svg and lp payloads arrive as finished text
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(str(payload))


def run_instance(B: PolygonSet, outdir: str, config: RunConfig) -> List[RunRow]:
    os.makedirs(outdir, exist_ok=True)
    cfg = config
    if cfg.sagitta is None:
        cfg = replace(config, sagitta=max(B.diameter() * 1e-3, 1e-12))
    rows: List[RunRow] = []
    skip: Dict[str, float] = {}  # solver -> smallest alpha that timed out
    alphas = list(cfg.alphas)
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        # ascending waves so timeout skips propagate to larger alpha
        for i in range(0, len(alphas), cfg.threads):
            wave = alphas[i : i + cfg.threads]
            futures = [
                pool.submit(_solve_alpha, B, a, cfg.solvers, cfg, dict(skip))
                for a in wave
            ]
            for fut in futures:
                for row, artifacts in fut.result():
                    rows.append(row)
                    if row.status == "timeout":
                        prev = skip.get(row.solver)
                        if prev is None or row.alpha < prev:
                            skip[row.solver] = row.alpha
                    for name, kind, payload in artifacts:
                        _write_artifact(outdir, name, kind, payload)
    _fill_ratios(rows)
    _write_metrics(rows, os.path.join(outdir, "metrics.csv"))
    return rows


def run(config: RunConfig) -> int:
    """Execute the full request; returns a process exit code."""
    _apply_epsilons(config.epsilon)
    instances = ingest_instances(config.input_path, config.fmt)
    ok = True
    for label, B in instances:
        outdir = os.path.join(config.out_dir, label) if label else config.out_dir
        rows = run_instance(B, outdir, config)
        n_bad = sum(1 for r in rows if r.status not in ("ok", "exported"))
        if n_bad:
            ok = False
        print(f"instance {label or '<top>'}: {len(rows)} runs, {n_bad} not ok")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def _parse_sweep(text: str) -> List[float]:
    try:
        start, stop, step = (float(t) for t in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"sweep must be START:STOP:STEP, got {text!r}"
        ) from exc
    if step <= 0.0:
        raise argparse.ArgumentTypeError("sweep step must be positive")
    vals = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-9:
            break
        vals.append(v)
        k += 1
    return vals


def _parse_epsilon(text: str) -> Tuple[str, float]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"epsilon must be KEY=VALUE, got {text!r}")
    key, _, val = text.partition("=")
    try:
        return key.strip(), float(val)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad epsilon value in {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="arcagg",
        description=(
            "Aggregate polygon footprints into disjoint regions minimizing "
            "area plus alpha times perimeter."
        ),
    )
    p.add_argument("--input", required=True, help="GeoJSON or WKT file")
    p.add_argument(
        "--format",
        choices=("geojson", "wkt"),
        default=None,
        help="input format (default: inferred from the file extension)",
    )
    p.add_argument(
        "--alphas",
        default=None,
        help="comma-separated alpha values, e.g. 0,0.5,1 (inf allowed)",
    )
    p.add_argument(
        "--sweep",
        action="append",
        default=[],
        metavar="START:STOP:STEP",
        help="alpha sweep, stop-inclusive; repeatable (e.g. 0:19:1 20:200:10)",
    )
    p.add_argument(
        "--solvers",
        default="unrestricted",
        help="comma-separated subset of: " + ", ".join(SOLVERS),
    )
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument(
        "--sagitta",
        type=float,
        default=None,
        help="arc discretization tolerance (default: 1e-3 of instance diameter)",
    )
    p.add_argument(
        "--time-limit",
        type=float,
        default=None,
        help="seconds per solve; on timeout the solver is skipped for larger alpha",
    )
    p.add_argument("--threads", type=int, default=1, help="worker pool width")
    p.add_argument(
        "--epsilon",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="tolerance override; keys: " + ", ".join(EPSILON_KEYS) + "; repeatable",
    )
    p.add_argument("--svg", action="store_true", help="also write SVG renderings")
    return p


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    alphas: List[float] = []
    if args.alphas:
        for tok in args.alphas.split(","):
            tok = tok.strip()
            if tok:
                alphas.append(float(tok))
    for sweep in args.sweep:
        alphas.extend(_parse_sweep(sweep))
    if not alphas:
        alphas = [1.0]
    return RunConfig(
        input_path=args.input,
        out_dir=args.out,
        fmt=args.format,
        alphas=alphas,
        solvers=[s.strip() for s in args.solvers.split(",") if s.strip()],
        sagitta=args.sagitta,
        time_limit=args.time_limit,
        threads=args.threads,
        epsilon=dict(_parse_epsilon(e) for e in args.epsilon),
        svg=args.svg,
    )


def main(argv: Optional[Sequence[str]] = None) -> None:
    try:
        config = config_from_args(argv)
        code = run(config)
    except (ArcAggError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(2)
    sys.exit(code)


if __name__ == "__main__":
    main()
