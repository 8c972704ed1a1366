"""The command-line workflow: simulate a dataset, benchmark, draw a ROC curve.

Runs the same entry point as the installed ``qbplab`` command and writes
into a temporary directory.
"""
import tempfile
from pathlib import Path

from qbplab.cli import main

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    main(["simulate", "--design", "7a", "--seed", "4", "--out", str(tmp / "d7a.csv")])
    print("simulate ->", sorted(p.name for p in tmp.iterdir()))

    main(["bench", "--data", str(tmp / "d7a.csv"), "--methods", "qbp,lda", "--reps", "2",
          "--seed", "4", "--threads", "1", "--out", str(tmp / "bench")])
    print("bench    ->", sorted(p.name for p in (tmp / "bench").iterdir()))
    print((tmp / "bench" / "summary.csv").read_text())

    main(["roc", "--data", str(tmp / "d7a.csv"), "--method", "qbp", "--out", str(tmp / "roc.csv"),
          "--save-model", str(tmp / "qbp.json")])
    print("roc      ->", (tmp / "roc.csv").read_text().splitlines()[:3])
