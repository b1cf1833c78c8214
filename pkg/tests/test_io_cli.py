"""Ingestion, serialization and the command-line pipeline."""

import json
import math
import os
import re

import pytest

from arcagg import (
    ingest_instances,
    solution_geojson,
    solution_svg,
    solve_unrestricted,
)
from arcagg.cli import main
from arcagg.errors import OverlappingInputs, ParseError, SelfIntersectingInput

from conftest import two_squares


def write_geojson(path, features):
    path.write_text(
        json.dumps({"type": "FeatureCollection", "features": features})
    )
    return str(path)


def feature(coords, **props):
    return {
        "type": "Feature",
        "properties": props,
        "geometry": {"type": "Polygon", "coordinates": coords},
    }


def test_ingest_merges_features_into_one_instance(tmp_path):
    path = write_geojson(
        tmp_path / "two.geojson",
        [
            feature([[[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]]),
            feature([[[2, 0], [3, 0], [3, 1], [2, 1], [2, 0]]]),
        ],
    )
    instances = ingest_instances(path)
    assert [(name, len(B.polygons)) for name, B in instances] == [("", 2)]


def test_ingest_wkt_multipolygon(tmp_path):
    p = tmp_path / "inst.wkt"
    p.write_text(
        "MULTIPOLYGON(((0 0,1 0,1 1,0 1,0 0)),((2 0,3 0,3 1,2 1,2 0)))"
    )
    ((name, B),) = ingest_instances(str(p))
    assert len(B.polygons) == 2
    assert B.total_area == pytest.approx(2.0)


def test_ingest_rejects_overlap(tmp_path):
    path = write_geojson(
        tmp_path / "ov.geojson",
        [
            feature([[[0, 0], [2, 0], [2, 2], [0, 2], [0, 0]]]),
            feature([[[1, 1], [3, 1], [3, 3], [1, 3], [1, 1]]]),
        ],
    )
    with pytest.raises(OverlappingInputs):
        ingest_instances(path)


def test_ingest_rejects_self_intersection(tmp_path):
    path = write_geojson(
        tmp_path / "cross.geojson",
        [feature([[[0, 0], [4, 0], [0, 3], [2, -2], [2, 3], [0, 0]]])],
    )
    with pytest.raises(SelfIntersectingInput):
        ingest_instances(path)


def test_ingest_rejects_garbage(tmp_path):
    p = tmp_path / "bad.wkt"
    p.write_text("POINT(1 2)")
    with pytest.raises(ParseError):
        ingest_instances(str(p))


def test_hole_contents_become_sub_instances(tmp_path):
    path = write_geojson(
        tmp_path / "hole.geojson",
        [
            feature(
                [
                    [[0, 0], [4, 0], [4, 4], [0, 4], [0, 0]],
                    [[1, 1], [3, 1], [3, 3], [1, 3], [1, 1]],
                ]
            ),
            feature([[[1.5, 1.5], [2, 1.5], [2, 2], [1.5, 2], [1.5, 1.5]]]),
        ],
    )
    instances = dict(ingest_instances(path))
    assert set(instances) == {"", "hole0"}
    assert instances[""].total_area == pytest.approx(16.0)
    assert instances["hole0"].total_area == pytest.approx(0.25)


def test_solution_geojson_area_error_bounded():
    B = two_squares(0.4)
    sol = solve_unrestricted(B, 1.0)
    sagitta = 1e-4
    gj = solution_geojson(sol, sagitta=sagitta)
    assert gj["type"] == "FeatureCollection"
    area = 0.0
    for feat in gj["features"]:
        for ring in feat["geometry"]["coordinates"]:
            area += sum(
                (x0 * y1 - x1 * y0) / 2
                for (x0, y0), (x1, y1) in zip(ring, ring[1:])
            )
    assert abs(area - sol.objective.area) <= sol.objective.perimeter * sagitta


def test_solution_svg_is_wellformed():
    B = two_squares(0.4)
    sol = solve_unrestricted(B, 1.0)
    svg = solution_svg(sol, B)
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert "</svg>" in svg


def run_cli(args, expect=0):
    with pytest.raises(SystemExit) as exc:
        main(args)
    assert exc.value.code == expect


def _pair_file(tmp_path):
    return write_geojson(
        tmp_path / "pair.geojson",
        [
            feature([[[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]]),
            feature([[[1.4, 0], [2.4, 0], [2.4, 1], [1.4, 1], [1.4, 0]]]),
        ],
    )


def test_cli_writes_metrics_and_solutions(tmp_path, capsys):
    inp = _pair_file(tmp_path)
    out = tmp_path / "out"
    run_cli(
        [
            "--input", inp,
            "--alphas", "0,1,inf",
            "--solvers", "unrestricted,subdivision-dt,approx-line,approx-vertex",
            "--out", str(out),
        ]
    )
    files = sorted(os.listdir(out))
    assert "metrics.csv" in files
    lines = (out / "metrics.csv").read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header[:7] == [
        "alpha", "solver", "area", "perimeter", "objective", "cells", "arcs",
    ]
    assert len(lines) == 1 + 3 * 4
    # alpha=1 unrestricted row carries the analytic optimum
    row = next(
        l for l in lines if l.startswith("1,unrestricted")
    ).split(",")
    assert float(row[4]) == pytest.approx(9.19463420042597, rel=1e-9)
    assert all("ok" in l for l in lines[1:])


def test_cli_reruns_are_deterministic(tmp_path):
    inp = _pair_file(tmp_path)
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        run_cli(
            [
                "--input", inp,
                "--alphas", "0,0.5,1",
                "--solvers", "unrestricted,approx-line,approx-vertex",
                "--out", str(out),
                "--svg",
            ]
        )
        blob = {}
        for name in sorted(os.listdir(out)):
            text = (out / name).read_bytes().decode()
            if name == "metrics.csv":
                text = re.sub(r"(^|,)\d+(\.\d+)?(?=,)", lambda m: m.group(0), text)
                # strip the runtime column: position 8 (runtime_ms)
                rows = [r.split(",") for r in text.splitlines()]
                for r in rows[1:]:
                    r[7] = "_"
                text = "\n".join(",".join(r) for r in rows)
            blob[name] = text
        outs.append(blob)
    assert outs[0].keys() == outs[1].keys()
    for name in outs[0]:
        assert outs[0][name] == outs[1][name], name


def test_cli_epsilon_and_sweep_parsing(tmp_path):
    inp = _pair_file(tmp_path)
    out = tmp_path / "sweep"
    run_cli(
        [
            "--input", inp,
            "--sweep", "0:2:1",
            "--solvers", "approx-line",
            "--out", str(out),
            "--epsilon", "approx-warn=1e-6",
        ]
    )
    lines = (out / "metrics.csv").read_text().strip().splitlines()
    alphas = {l.split(",")[0] for l in lines[1:]}
    assert alphas == {"0", "1", "2"}


def test_cli_rejects_bad_epsilon(tmp_path):
    inp = _pair_file(tmp_path)
    run_cli(
        [
            "--input", inp,
            "--alphas", "1",
            "--solvers", "approx-line",
            "--out", str(tmp_path / "x"),
            "--epsilon", "nope=1",
        ],
        expect=2,
    )
