#!/usr/bin/env python3
"""Validates the example documents and fresh CLI output against docs/schemas."""

import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

EXAMPLES = {
    "six_port_transfer.json": "transfer_matrix",
    "pair_state_eta058.json": "density_matrix",
    "frame_octahedron.json": "frame",
    "grating_alpha30.json": "grating",
    "correlations_expected.json": "correlation_set",
    "correlations_counts.json": "correlation_set",
    "report_mle.json": "report",
    "metrics_pair_state.json": "metrics",
    "histogram_fit.json": "histogram_fit",
    "manifest.json": "manifest",
}


def load_validators(schema_dir):
    resources = []
    for path in schema_dir.glob("*.schema.json"):
        contents = json.loads(path.read_text())
        Draft202012Validator.check_schema(contents)
        resources.append((path.name, Resource.from_contents(contents)))
    registry = Registry().with_resources(resources)
    return {
        name.removesuffix(".schema.json"): Draft202012Validator(res.contents, registry=registry)
        for name, res in resources
    }


def main():
    if len(sys.argv) != 3:
        print("usage: validate_schemas.py <metatomo binary> <docs/schemas>", file=sys.stderr)
        return 2
    binary = sys.argv[1]
    schema_dir = pathlib.Path(sys.argv[2])
    examples = schema_dir / "examples"
    validators = load_validators(schema_dir)
    failures = 0

    def check(label, document, schema):
        nonlocal failures
        errors = sorted(validators[schema].iter_errors(document), key=lambda e: list(e.path))
        if errors:
            failures += 1
            print(f"FAIL {label} ({schema}): {errors[0].message} at {list(errors[0].path)}")
        else:
            print(f"ok   {label} ({schema})")

    for name, schema in EXAMPLES.items():
        check(f"examples/{name}", json.loads((examples / name).read_text()), schema)

    # documents the schemas must reject
    bad_counts = json.loads((examples / "correlations_counts.json").read_text())
    bad_counts["entries"][0]["value"] = 2.5
    bad_ports = json.loads((examples / "correlations_expected.json").read_text())
    bad_ports["entries"][0]["ports"] = [0, 2]
    bad_complex = {"matrix": [[[1.0, 0.0, 0.0]]]}
    for label, document, schema in [("fractional counts", bad_counts, "correlation_set"),
                                    ("0-based port", bad_ports, "correlation_set"),
                                    ("three-part complex", bad_complex, "density_matrix")]:
        if validators[schema].is_valid(document):
            failures += 1
            print(f"FAIL {label} was accepted by {schema}")
        else:
            print(f"ok   {label} rejected by {schema}")

    transfer = str(examples / "six_port_transfer.json")
    state = str(examples / "pair_state_eta058.json")
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        runs = [
            ("frame", ["frame", "--ports", "12"], "frame"),
            ("design", ["design", "--alpha", "45", "--beta", "90", "--atoms", "8"], "grating"),
            ("expected", ["simulate", "--transfer", transfer, "--state", state], "correlation_set"),
            ("counts", ["--seed", "11", "simulate", "--transfer", transfer, "--state", state, "--shots", "50"],
             "correlation_set"),
            ("metrics", ["analyze", "--rho", state, "--reference", state], "metrics"),
            ("fit", ["analyze", "--histogram", str(examples / "histogram.csv")], "histogram_fit"),
        ]
        for label, args, schema in runs:
            out = tmp / f"{label}.json"
            proc = subprocess.run([binary, "--quiet", "--out", str(out), *args], capture_output=True, text=True)
            if proc.returncode != 0:
                failures += 1
                print(f"FAIL {label}: exit {proc.returncode}: {proc.stderr.strip()}")
                continue
            check(label, json.loads(out.read_text()), schema)
            check(f"{label} manifest", json.loads(pathlib.Path(f"{out}.manifest.json").read_text()), "manifest")

        counts = tmp / "counts.json"
        for method in ("linear", "mle"):
            out = tmp / f"report_{method}.json"
            proc = subprocess.run(
                [binary, "--quiet", "--out", str(out), "reconstruct", "--transfer", transfer, "--counts", str(counts),
                 "--method", method, "--reference", state],
                capture_output=True, text=True)
            if proc.returncode != 0:
                failures += 1
                print(f"FAIL reconstruct {method}: exit {proc.returncode}: {proc.stderr.strip()}")
                continue
            check(f"reconstruct {method}", json.loads(out.read_text()), "report")

    print(f"{failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
