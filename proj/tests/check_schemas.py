#!/usr/bin/env python3
"""Runs every JSON-producing command on a small simulated scenario and
validates the output against the shipped schemas."""

import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    failures = []
    checked = set()

    def run(name, *args, expect=0):
        proc = subprocess.run([cli, *args], capture_output=True, text=True)
        if proc.returncode != expect:
            failures.append(f"{name}: exit {proc.returncode}, stderr: {proc.stderr.strip()}")
            return None
        doc = json.loads(proc.stdout)
        try:
            jsonschema.validate(doc, schemas[name], cls=jsonschema.Draft202012Validator)
        except jsonschema.ValidationError as err:
            failures.append(f"{name}: {err.message} at {'/'.join(map(str, err.absolute_path))}")
        checked.add(name)
        return doc

    with tempfile.TemporaryDirectory() as tmp:
        work = pathlib.Path(tmp)
        (work / "scenario.json").write_text(json.dumps(
            {"seed": 11, "months": 3, "samples_per_month": 4000, "start_month": "2025-08",
             "rho_targets": [0.95, 0.78, 0.70], "coverage_profile": [{"coverage": 0.9, "cert_rate": 1.0}]}))
        sim = work / "sim"
        run("simulate", "simulate", "--scenario", str(work / "scenario.json"), "--out", str(sim))
        val = run("validate", "validate", "--predictions", str(sim / "validation/predictions.csv"),
                  "--ablation", str(sim / "validation/ablation.csv"),
                  "--cross-dataset", str(sim / "validation/cross_dataset.csv"))
        (work / "validation.json").write_text(json.dumps(val))

        audit = work / "audit"
        months = sorted(p.name for p in sim.iterdir() if p.is_dir() and p.name[:2] == "20")
        for i, m in enumerate(months):
            md = sim / m
            args = ["monitor", "--month", m, "--audit-dir", str(audit), "--predictions", str(md / "predictions.csv"),
                    "--shap", str(md / "shap.csv"), "--certs", str(md / "certifications.jsonl"),
                    "--context", str(md / "context.csv"), "--baseline", str(sim / "baseline_importance.csv"),
                    "--validation", str(work / "validation.json")]
            if i == 0:
                args += ["--proxies", str(md / "proxies.csv")]
            run("monitor", *args)

        first = sim / months[0]
        run("fairness", "fairness", "--shap", str(first / "shap.csv"), "--proxies", str(first / "proxies.csv"))
        run("sar_generate", "sar", "generate", "--predictions", str(first / "predictions.csv"),
            "--shap", str(first / "shap.csv"), "--context", str(first / "context.csv"))
        run("sar_coverage", "sar", "coverage", "--predictions", str(first / "predictions.csv"),
            "--shap", str(first / "shap.csv"), "--certs", str(first / "certifications.jsonl"))
        certs = work / "certs.jsonl"
        shutil.copy(first / "certifications.jsonl", certs)
        run("sar_certify", "sar", "certify", "--certs", str(certs), "--alert", "X-1", "--analyst", "analyst-02",
            "--disposition", "amended", "--amended-text", "revised narrative", "--certified-at", "1760000000")
        run("blend_search", "blend", "search", "--predictions", str(sim / "validation/predictions.csv"))
        run("economics", "economics")
        run("audit_verify", "audit", "verify", "--audit-dir", str(audit))
        run("report", "report", "--audit-dir", str(audit))

        # a broken store still answers with a schema-valid verdict
        lines = (audit / "audit.jsonl").read_text().splitlines(keepends=True)
        lines[1] = lines[1].replace('"kind"', '"kinD"', 1)
        (audit / "audit.jsonl").write_text("".join(lines))
        broken = run("audit_verify", "audit", "verify", "--audit-dir", str(audit), expect=4)
        if broken is not None and (broken["ok"] or broken["first_broken_sequence"] != 1):
            failures.append(f"audit_verify: tampered store reported {broken}")

    missing = sorted(set(schemas) - checked)
    if missing:
        failures.append(f"schemas never exercised: {missing}")
    for f in failures:
        print("FAIL", f)
    print(f"{len(checked)} schemas checked, {len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
