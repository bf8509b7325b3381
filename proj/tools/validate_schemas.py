#!/usr/bin/env python3
# Copyright 2026 The tptnd Authors.
# SPDX-License-Identifier: Apache-2.0
"""Runs the tptnd binary and validates its JSON output against schemas/."""

import argparse
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tool", required=True, help="path to the tptnd binary")
    parser.add_argument("--source", required=True, help="repository root")
    args = parser.parse_args()

    root = Path(args.source)
    golden = sorted(str(p) for p in (root / "tests" / "golden").glob("*.tptnd"))
    with tempfile.NamedTemporaryFile("w", suffix=".tptnd", delete=False) as broken:
        broken.write("judgement j = |- x : H @ 2;\n")
    with tempfile.NamedTemporaryFile("w", suffix=".tptnd", delete=False) as rejected:
        rejected.write("dist G { x : H @ 1/2; x : T @ 1/2 }\n"
                       "derivation d = (rule identity2 G |- x : H @ 1/3)\n")

    cases = [
        ("check", ["check", *golden], 0),
        ("check", ["check", rejected.name], 1),
        ("check", ["check", broken.name, golden[0]], 2),
        ("trust", ["trust", "--a", "1/6", "--k", "5", "--n", "10"], 1),
        ("trust", ["trust", "--a", "0.3", "--k", "8", "--n", "30", "--strategy", "wald:0.9"], 0),
        ("bayes", ["bayes", "--hyp", "0.5:2/5", "--hyp", "0.8:1/5", "--hyp", "0.9:2/5",
                   "--k", "2", "--n", "3"], 0),
        ("bayes", ["bayes", "--hyp", "0.5:1/2", "--hyp", "0.9:1/2", "--k", "1", "--n", "2",
                   "--i", "1"], 0),
        ("simulate", ["simulate", "--seed", "3", "--trials", "50", *golden], 0),
    ]
    failures = 0
    for schema_name, argv, want in cases:
        schema = json.loads((root / "schemas" / f"{schema_name}.schema.json").read_text())
        proc = subprocess.run([args.tool, *argv, "--format", "json"],
                              capture_output=True, text=True, check=False)
        label = " ".join(argv[:3])
        try:
            if proc.returncode != want:
                raise ValueError(f"exit {proc.returncode}, expected {want}: {proc.stderr}")
            jsonschema.validate(json.loads(proc.stdout), schema)
        except (ValueError, jsonschema.ValidationError) as err:
            failures += 1
            print(f"FAIL {label}: {err}")
            continue
        print(f"ok   {label}")
    Path(broken.name).unlink()
    Path(rejected.name).unlink()
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
