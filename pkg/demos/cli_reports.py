"""Running a suite programmatically and reading back its machine-readable report."""

import csv
import json
import tempfile
from pathlib import Path

from discofield.reports import default_config, dispatch, write_report

with tempfile.TemporaryDirectory() as tmp:
    run = default_config(output_dir=tmp, seed=3)
    rep = dispatch("constraint", run)
    paths = write_report(rep, Path(tmp))
    print("exit code:", rep.exit_code)
    for row in csv.DictReader(paths["checks"].open()):
        print(f"  {row['check_id']:38s} {row['eq_ref']:18s} {row['value']:>24s} {row['pass']}")
    doc = json.loads(paths["report"].read_text())
    print("report keys:", sorted(doc))
    print("timing sidecar:", json.loads(paths["timing"].read_text()))
