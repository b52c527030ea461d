#!/usr/bin/env python3
# Copyright 2026 The adjunct-cc Authors
# SPDX-License-Identifier: Apache-2.0
"""End-to-end checks of the adjunct-cc command line and its JSON reports."""

import argparse
import json
import os
import pathlib
import shutil
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

ROOT = pathlib.Path(__file__).resolve().parents[2]
FIX = ROOT / "tests" / "fixtures"
SCHEMAS = ROOT / "docs" / "schemas"


def registry():
    reg = Registry()
    for p in SCHEMAS.glob("*.schema.json"):
        reg = reg.with_resource(p.name, Resource.from_contents(json.loads(p.read_text())))
    return reg


REGISTRY = registry()


def validate(report, command):
    schema = json.loads((SCHEMAS / f"{command}.schema.json").read_text())
    jsonschema.Draft7Validator(schema, registry=REGISTRY).validate(report)


class Cli:
    def __init__(self, binary, work):
        self.binary = binary
        self.work = pathlib.Path(work)

    def run(self, *args, env=None):
        full = dict(os.environ, ADJUNCT_CC_COLOR="0")
        full.update(env or {})
        p = subprocess.run([self.binary, *map(str, args)], cwd=self.work, capture_output=True, text=True, env=full)
        return p

    def report(self, command, *args):
        out = self.work / f"{command}.json"
        if out.exists():
            out.unlink()
        p = self.run(command, *args, "--report", out)
        rep = json.loads(out.read_text()) if out.exists() else None
        return p, rep

    def copy(self, rel):
        dst = self.work / pathlib.Path(rel).name
        shutil.copy(FIX / rel, dst)
        return dst.name


def behaviour(cli):
    checks = []

    def check(name, ok, detail=""):
        checks.append((name, bool(ok), detail))

    pb = cli.copy("pbkdf2.c")
    p, rep = cli.report("transform", pb)
    out = (cli.work / "pbkdf2.adjunct.c").read_text() if (cli.work / "pbkdf2.adjunct.c").exists() else ""
    golden = (FIX / "figures" / "pbkdf2.expected").read_text()
    check("transform pbkdf2 exit 0", p.returncode == 0, p.stderr)
    check("transform pbkdf2 matches golden", out == golden)

    und = cli.copy("undecidable.c")
    p, rep = cli.report("transform", und, "--out", "und.out.c")
    backs = rep["files"][0]["back_offs"] if rep else []
    check("transform undecidable exit 0", p.returncode == 0, p.stderr)
    check("undecidable back-off reported",
          any(b["pointer"] == "p" and b["verdict"] == "conditional-reassignment" for b in backs), json.dumps(backs))
    check("undecidable output written to --out", (cli.work / "und.out.c").exists())

    (cli.work / "empty.c").write_text("")
    p, rep = cli.report("transform", "empty.c")
    check("empty file exit 0", p.returncode == 0, p.stderr)
    check("empty file gives empty output", (cli.work / "empty.adjunct.c").read_text() == "")

    (cli.work / "bad.c").write_text("int f( {\n")
    p, rep = cli.report("transform", "bad.c")
    check("parse error exit 1", p.returncode == 1, p.stderr)
    check("parse error reported with position", "bad.c:1:" in p.stderr, p.stderr)

    p = cli.run("transform", pb, "empty.c", "--out", "x.c")
    check("--out with two inputs exit 1", p.returncode == 1, p.stderr)

    lil = cli.copy("lil/figure.c")
    p, rep = cli.report("transform", lil, "--enable-lil")
    matches = rep["files"][0]["lil_matches"] if rep else []
    check("lil match reported", len(matches) == 1 and matches[0]["cursors"] == ["curvalptr", "curindptr"],
          json.dumps(matches))

    p, rep = cli.report("analyze", pb)
    outer = [l for l in rep["files"][0]["loops"] if l["span"]["line"] == 2] if rep else []
    check("analyze pbkdf2 outer unknown", outer and outer[0]["verdict"] == "unknown", json.dumps(outer))
    p, rep = cli.report("analyze", pb, "--pre-transform")
    outer = [l for l in rep["files"][0]["loops"] if l["span"]["line"] == 2] if rep else []
    check("analyze --pre-transform outer parallel", outer and outer[0]["verdict"] == "parallel", json.dumps(outer))

    mc = cli.copy("depend/memcpy.c")
    p, rep = cli.report("analyze", mc, "--effects", "builtin")
    verdicts = {l["span"]["line"]: l["verdict"] for l in rep["files"][0]["loops"]} if rep else {}
    check("memcpy verdicts", verdicts.get(4) == "serial" and verdicts.get(15) == "parallel", json.dumps(verdicts))

    # Effects file layered over the built-ins.
    (cli.work / "fx.json").write_text(json.dumps([{"function": "memcpy", "params": [
        {"index": 0, "effect": "write"}, {"index": 1, "effect": "readwrite"}]}]))
    p, rep = cli.report("analyze", mc, "--effects", "fx.json")
    verdicts = {l["span"]["line"]: l["verdict"] for l in rep["files"][0]["loops"]} if rep else {}
    check("effects file changes right loop", verdicts.get(15) == "serial", json.dumps(verdicts))
    (cli.work / "broken.json").write_text("[{\"function\": 3}]")
    p = cli.run("analyze", mc, "--effects", "broken.json")
    check("malformed effects exit 1", p.returncode == 1, p.stderr)

    paths = sorted(str(x) for x in (FIX / "scan").glob("*.c"))
    p1, r1 = cli.report("scan", *paths)
    p2, r2 = cli.report("scan", *reversed(paths))
    manifest = json.loads((FIX / "scan" / "manifest.json").read_text())
    check("scan exit 0", p1.returncode == 0, p1.stderr)
    check("scan order independent", r1 == r2)
    check("scan totals match manifest", r1 and r1["total"] == manifest["total"], json.dumps(r1 and r1["total"]))
    p = cli.run("scan", *paths, "--json", "scan2.json")
    check("scan --json", p.returncode == 0 and json.loads((cli.work / "scan2.json").read_text()) == r1)
    p, rep = cli.report("scan", str(FIX / "scan"))
    status = rep and rep["files"][0]["status"]
    check("scan directory argument is an io-error", status == "io-error", json.dumps(status))

    p, rep = cli.report("run-diff", pb, "--args", "3,4")
    check("run-diff against transform exit 0", p.returncode == 0 and rep["equal"], p.stderr)
    p, rep = cli.report("run-diff", pb, pb, "--args", "2,2")
    check("run-diff identical files exit 0", p.returncode == 0, p.stderr)
    broken = cli.copy("cli/pbkdf2_missing_adjunct.c")
    p, rep = cli.report("run-diff", pb, broken, "--args", "3,4")
    check("run-diff mutation exit 3", p.returncode == 3, p.stderr)
    check("run-diff prints divergent pair", "left:" in p.stderr and "right:" in p.stderr, p.stderr)
    check("run-diff mutation site", rep and rep["divergence"] and "pbkdf2_missing_adjunct.c:6" in
          rep["divergence"]["description"], json.dumps(rep and rep["divergence"]))
    p, rep = cli.report("run-diff", pb, broken, "--args", "3,4", "--mode", "value")
    check("run-diff value mode still diverges", p.returncode == 3, p.stderr)
    oob = cli.copy("cli/out_of_bounds.c")
    p, rep = cli.report("run-diff", oob, "--args", "5")
    check("run-diff trap exit 4", p.returncode == 4, p.stderr)
    check("trap reported with span", rep and rep["traps"]["left"] and rep["traps"]["left"]["span"]["line"] == 5,
          json.dumps(rep and rep["traps"]))
    p, rep = cli.report("run-diff", "--seed", "11", "--size", "60")
    check("run-diff generated program", p.returncode == 0 and rep["equal"], p.stderr)
    p = cli.run("run-diff", "--seed", "1", "--size", "0")
    check("run-diff bad size exit 1", p.returncode == 1, p.stderr)
    p = cli.run("run-diff", pb, "--args", "1", "--entry", "nope")
    check("run-diff missing entry exit 1", p.returncode == 1, p.stderr)
    p = cli.run("frobnicate")
    check("unknown subcommand exit 1", p.returncode == 1)

    p = cli.run("transform", pb, "--report", "c.json", env={"ADJUNCT_CC_COLOR": "always"})
    check("color forced on", "\033[" in p.stderr)
    p = cli.run("transform", pb, "--report", "c.json", env={"ADJUNCT_CC_COLOR": "0"})
    check("color disabled", "\033[" not in p.stderr)

    # Reports list files sorted by path regardless of argument order.
    p, rep = cli.report("transform", und, pb)
    check("transform report sorted by path", rep and [f["input"] for f in rep["files"]] == sorted([und, pb]))
    return checks


def schemas(cli):
    checks = []
    pb = cli.copy("pbkdf2.c")
    und = cli.copy("undecidable.c")
    lil = cli.copy("lil/figure.c")
    (cli.work / "bad.c").write_text("int f( {\n")
    broken = cli.copy("cli/pbkdf2_missing_adjunct.c")
    oob = cli.copy("cli/out_of_bounds.c")
    paths = sorted(str(x) for x in (FIX / "scan").glob("*.c")) + [str(cli.work / "missing.c")]
    runs = [
        ("transform", [pb, und, "bad.c"]),
        ("transform", [lil, "--enable-lil"]),
        ("analyze", [pb, "--pre-transform"]),
        ("analyze", [cli.copy("depend/hmac.c"), "bad.c"]),
        ("scan", paths),
        ("run-diff", [pb, "--args", "3,4"]),
        ("run-diff", [pb, broken, "--args", "3,4"]),
        ("run-diff", [oob, "--args", "5"]),
        ("run-diff", ["--seed", "3"]),
    ]
    for command, args in runs:
        p, rep = cli.report(command, *args)
        name = f"{command} {' '.join(pathlib.Path(a).name for a in args)} validates"
        try:
            validate(rep, command)
            checks.append((name, True, ""))
        except (jsonschema.ValidationError, TypeError) as e:
            checks.append((name, False, str(e)))
    # The schemas reject a malformed report.
    try:
        validate({"command": "scan", "files": [], "total": {"loc": -1}}, "scan")
        checks.append(("malformed report rejected", False, ""))
    except jsonschema.ValidationError:
        checks.append(("malformed report rejected", True, ""))
    return checks


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("binary")
    ap.add_argument("group", choices=["behaviour", "schemas"])
    a = ap.parse_args()
    with tempfile.TemporaryDirectory() as work:
        cli = Cli(os.path.abspath(a.binary), work)
        checks = behaviour(cli) if a.group == "behaviour" else schemas(cli)
    failed = 0
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failed += 1
            if detail:
                print("      " + detail.strip().replace("\n", "\n      ")[:2000])
    print(f"{len(checks) - failed}/{len(checks)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
