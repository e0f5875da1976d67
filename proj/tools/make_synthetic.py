#!/usr/bin/env python3
"""Generate the small synthetic corpus under data/synthetic.

Five releases of two made-up projects. Module sizes are log-normal, metrics
grow with size plus noise, and the chance of a bug grows with size but
flattens for the very largest files. Uses only the standard library so the
output is stable across machines.
"""

import argparse
import csv
import json
import math
import random
from pathlib import Path

RELEASES = [
    ("alpha", "1.0", 140),
    ("alpha", "1.1", 180),
    ("alpha", "2.0", 230),
    ("beta", "0.9", 120),
    ("beta", "1.0", 310),
]


def make_release(rng, k):
    rows = []
    for i in range(k):
        sloc = max(1, int(round(math.exp(rng.gauss(4.6, 1.1)))))
        size = math.log(sloc)
        wmc = max(0, int(round(0.9 * size * size + rng.gauss(0, 3))))
        cbo = max(0, int(round(1.5 * size + rng.gauss(0, 2.5))))
        rfc = max(0, int(round(wmc * 1.8 + cbo + rng.gauss(0, 5))))
        lcom = max(0, int(round(rng.expovariate(1 / (2 + wmc)))))
        dit = rng.randint(1, 6)
        risk = -4.2 + 0.75 * size - 0.035 * size * size * size / 3 + 0.04 * cbo + rng.gauss(0, 0.6)
        p = 1 / (1 + math.exp(-risk))
        bug = 0
        if rng.random() < p:
            bug = 1 + int(rng.expovariate(0.8))
        rows.append(
            {
                "id": f"src/mod{i:04d}.c",
                "sloc": sloc,
                "bug": bug,
                "wmc": wmc,
                "cbo": cbo,
                "rfc": rfc,
                "lcom": lcom,
                "dit": dit,
                "owner": rng.choice(["core", "net", "ui", "io"]),
            }
        )
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "synthetic"))
    parser.add_argument("--seed", type=int, default=20240611)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    corpus = []
    for project, version, k in RELEASES:
        rows = make_release(rng, k)
        name = f"{project}-{version}.csv"
        with open(out / name, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        corpus.append({"path": name, "project": project, "version": version})
        defective = sum(1 for r in rows if r["bug"] > 0)
        print(f"{name}: k={k} defective={defective} sloc={sum(r['sloc'] for r in rows)}")

    config = {
        "columns": {
            "id_column": "id",
            "sloc_column": "sloc",
            "label_column": "bug",
            "metric_columns": "all-remaining",
            "ignore_columns": ["owner"],
        },
        "corpus": corpus,
        "models": ["one", "manualdown", "manualup", "cla", "fcm", "sc"],
        "budgets": [{"kind": "snm", "fraction": 0.2}, {"kind": "ssc", "fraction": 0.2}],
        "indicators": ["mcc", "roi", "eifa", "recall", "pf", "g1", "recall_at_effort", "auc_loc_pd"],
        "seed": 7,
        "output_dir": "out",
        "one": {"excluded": 0.2},
    }
    with open(out / "config.json", "w") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
