"""Runs every subcommand on a small generated dataset and validates each
report against the schemas in docs/schemas."""

import json
import pathlib
import random
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    for path in schema_dir.glob("*.schema.json"):
        schemas[path.name] = json.loads(path.read_text())
    registry = Registry().with_resources(
        (name, Resource.from_contents(doc)) for name, doc in schemas.items()
    )
    return schemas, registry


def write_inputs(work):
    rng = random.Random(3)
    schema = {
        "features": [
            {"name": "age", "kind": "numerical"},
            {"name": "city", "kind": "categorical"},
            {"name": "income", "kind": "numerical"},
            {"name": "band", "kind": "categorical"},
        ],
        "target": "label",
    }
    (work / "schema.json").write_text(json.dumps(schema))
    for name, rows in (("train", 120), ("syn", 80), ("hold", 120)):
        lines = ["age,city,income,band,label"]
        for _ in range(rows):
            city = rng.choice("ABC")
            lines.append(
                f"{rng.gauss(40, 9):.3f},{city},{rng.gauss(50, 6):.2f},"
                f"{city.lower()},{rng.choice(['y', 'n', 'n'])}"
            )
        (work / f"{name}.csv").write_text("\n".join(lines) + "\n")


def main():
    cli = sys.argv[1]
    schema_dir = pathlib.Path(sys.argv[2])
    schemas, registry = load_registry(schema_dir)
    with tempfile.TemporaryDirectory() as tmp:
        work = pathlib.Path(tmp)
        write_inputs(work)
        s = str(work / "schema.json")
        runs = [
            ("audit.schema.json", "a.json",
             ["audit", "--train", str(work / "train.csv"), "--synthetic", str(work / "syn.csv"),
              "--schema", s, "--out", str(work / "a.json")]),
            ("augment.schema.json", "aug.csv.run.json",
             ["augment", "--train", str(work / "train.csv"), "--schema", s, "--mode", "cutmixplus",
              "--out", str(work / "aug.csv")]),
            ("augment.schema.json", "ijf.csv.run.json",
             ["augment", "--train", str(work / "train.csv"), "--schema", s, "--mode", "ijf",
              "--out", str(work / "ijf.csv")]),
            ("fidelity.schema.json", "f.json",
             ["fidelity", "--real", str(work / "train.csv"), "--synthetic", str(work / "syn.csv"),
              "--holdout", str(work / "hold.csv"), "--schema", s, "--out", str(work / "f.json")]),
            ("fidelity.schema.json", "f2.json",
             ["fidelity", "--real", str(work / "train.csv"), "--synthetic", str(work / "syn.csv"),
              "--schema", s, "--out", str(work / "f2.json")]),
            ("cluster.schema.json", "c.json",
             ["cluster", "--data", str(work / "train.csv"), "--schema", s, "--out", str(work / "c.json")]),
            ("simulate.schema.json", "sim.json",
             ["simulate", "--n-latents", "5", "--steps", "200", "--trajectories", "16",
              "--out", str(work / "sim.json")]),
        ]
        failures = 0
        for schema_name, output, args in runs:
            subprocess.run([cli, *args], check=True, capture_output=True)
            doc = json.loads((work / output).read_text())
            validator = jsonschema.Draft202012Validator(schemas[schema_name], registry=registry)
            errors = list(validator.iter_errors(doc))
            for err in errors:
                print(f"{output}: {err.json_path}: {err.message}")
            failures += len(errors)
            print(f"{output} against {schema_name}: {'ok' if not errors else 'INVALID'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
