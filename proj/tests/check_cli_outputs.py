# Copyright 2026 The cubegen Authors
# SPDX-License-Identifier: Apache-2.0
"""Runs every cubegen subcommand and validates its JSON artifacts.

usage: check_cli_outputs.py <cubegen exe> <schemas dir> <work dir>
"""

import csv
import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema

EXE, SCHEMAS, WORK = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])

CONFIG = {
    "R": 16,
    "p": 2,
    "trajectory": "yaw-sweep",
    "hfov_deg": 90,
    "vfov_deg": 90,
    "teacher_forcing": True,
    "bench_G": 16,
    "bench_d": 8,
    "bench_contexts": [16, 64],
}

failures = []


def check(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL", what)


def validate(path, schema):
    try:
        doc = json.loads(path.read_text())
        jsonschema.validate(doc, json.loads((SCHEMAS / f"{schema}.schema.json").read_text()))
        return doc
    except (OSError, ValueError, jsonschema.ValidationError) as e:
        check(False, f"{path.name} against {schema}: {e}")
        return None


def run(args, config):
    cfg = WORK / "config.json"
    cfg.write_text(json.dumps(config))
    return subprocess.run([EXE, *args, "--config", str(cfg)], capture_output=True, text=True)


shutil.rmtree(WORK, ignore_errors=True)
WORK.mkdir(parents=True)

expected = {
    "project": {"coverage.json": "coverage"},
    "plan": {"plan.json": "plan", "coverage_table.json": "coverage_table"},
    "context": {"context.json": "context"},
    "attend-bench": {},
    "generate": {"report.json": "report", "timings.json": "timings"},
    "metrics": {"metrics.json": "metrics"},
}
for name, files in expected.items():
    out = WORK / name
    p = run([name, "--out", str(out)], CONFIG)
    check(p.returncode == 0, f"{name} exit {p.returncode}: {p.stderr.strip()}")
    for fname, schema in files.items():
        validate(out / fname, schema)

check(len(list((WORK / "project" / "cond").glob("*.pfm"))) == 6 * 8, "project writes one face image per face and frame")
check(len(list((WORK / "generate" / "frames").glob("frame_*.pfm"))) == 8, "generate writes 8 frames")
with open(WORK / "attend-bench" / "bench.csv") as f:
    rows = list(csv.DictReader(f))
check([int(r["C"]) for r in rows] == [16, 64], "bench.csv has one row per context length")

plan = json.loads((WORK / "plan" / "plan.json").read_text())
check(plan["steps"][0]["face"] == "F", "plan starts with the observed front face")

p = run(["generate", "--out", str(WORK / "dry")], {"preset": "paper-geometry"})
check(p.returncode == 0, "paper-geometry dry run succeeds")
validate(WORK / "dry" / "dry_run.json", "dry_run")

# Error paths: non-zero exit and a schema-valid error object on stderr.
errors = [
    (["plan", "--out", str(WORK / "e1")], {"N": 7}, 2, "N"),
    (["plan", "--out", str(WORK / "e2")], {"r": 1.5}, 2, "r"),
    (["plan", "--out", str(WORK / "e3")], {"bogus": 1}, 2, "bogus"),
    (["plan", "--out", str(WORK / "e4")], {"trajectory": "protocol", "anchors": 2}, 2, "anchors"),
    (["frobnicate", "--out", str(WORK / "e5")], CONFIG, 2, None),
]
for args, config, code, field in errors:
    p = run(args, config)
    check(p.returncode == code, f"{args[0]} {config} exits {code} (got {p.returncode})")
    err_path = WORK / "stderr.json"
    err_path.write_text(p.stderr.strip().splitlines()[-1] if p.stderr.strip() else "")
    doc = validate(err_path, "error")
    if doc and field:
        check(doc["error"].get("field") == field, f"error names field {field}: {doc}")

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
