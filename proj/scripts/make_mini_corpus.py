#!/usr/bin/env python3
"""Regenerates data/mini_corpus.jsonl.

Builds 10 synthetic scenarios (2 questions each), then runs the ttgen
binary to obtain candidate fingerprints and attaches usefulness labels by
matching rendered sentences against each question's target.

Usage: scripts/make_mini_corpus.py <path-to-ttgen-binary>
"""

import json
import random
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "mini_corpus.jsonl"

REGIONS = [
    ("Poyang Lake", "spring rain"),
    ("Huanghuai Plain", "wheat yield"),
    ("Jianghuai Plain", "rainfall"),
    ("Pearl River Delta", "migration rate"),
    ("Hexi Corridor", "sandstorm days"),
    ("Sichuan Basin", "fog days"),
    ("Loess Plateau", "soil erosion"),
    ("Northeast Plain", "frost days"),
    ("Yunnan Plateau", "tourist visits"),
    ("Hainan Island", "typhoon count"),
]

YEARS = [f"Year {y}" for y in range(1998, 2004)]
TRENDS = ["it generally increases", "it generally decreases",
          "it rises and then falls", "it falls and then rises"]


def series_values(rng, shape):
    base = round(rng.uniform(10, 90), 1)
    step = round(rng.uniform(1.5, 6.0), 1)
    if shape == "inc":
        v = [base + step * i for i in range(6)]
    elif shape == "dec":
        v = [base - step * i for i in range(6)]
    elif shape == "inc_dec":
        v = [base, base + step, base + 2 * step, base + 3 * step,
             base + 2 * step, base + step]
    else:  # dec_inc
        v = [base + 3 * step, base + 2 * step, base + step, base,
             base + step, base + 2 * step]
    return [f"{x:.1f}" for x in v]


def build_tasks():
    rng = random.Random(20240817)
    tasks = []
    shapes = ["inc", "dec", "inc_dec", "dec_inc"]
    for sid, (region, series) in enumerate(REGIONS):
        shape = shapes[sid % 4]
        values = series_values(rng, shape)
        other = series_values(rng, shapes[(sid + 1) % 4])
        table = {
            "row_headers": [series, "reference index"],
            "col_headers": YEARS,
            "cells": [values, other],
        }
        passage = (f"The table shows how {series} changed around {region} "
                   f"between 1998 and 2003.")
        peak_year = YEARS[max(range(6), key=lambda i: float(values[i]))]
        wrong_years = [y for y in YEARS if y != peak_year]
        options_q1 = [peak_year] + rng.sample(wrong_years, 3)
        rng.shuffle(options_q1)
        tasks.append({
            "id": f"s{sid:02d}-q1",
            "passage": passage,
            "tables": [table],
            "question": f"In which year does {series} reach its maximum near {region}?",
            "options": options_q1,
            "answer": options_q1.index(peak_year),
            "_target": ("max", series),
        })
        trend_answer = {"inc": 0, "dec": 1, "inc_dec": 2, "dec_inc": 3}[shape]
        tasks.append({
            "id": f"s{sid:02d}-q2",
            "passage": passage,
            "tables": [table],
            "question": f"What is the overall trend of {series} near {region}?",
            "options": list(TRENDS),
            "answer": trend_answer,
            "_target": ("trend", series),
        })
    return tasks


def useful(sentence, template, target):
    mode, series = target
    if not sentence.startswith(series):
        return False
    if mode == "max":
        return template == 1 and "maximum" in sentence
    return template == 5  # trend sentence of the target series


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    ttgen = sys.argv[1]
    tasks = build_tasks()
    with tempfile.TemporaryDirectory() as tmp:
        unlabeled = Path(tmp) / "unlabeled.jsonl"
        generated = Path(tmp) / "generated.jsonl"
        with open(unlabeled, "w") as f:
            for t in tasks:
                f.write(json.dumps({k: v for k, v in t.items()
                                    if not k.startswith("_")}) + "\n")
        subprocess.run([ttgen, "generate", "--corpus", str(unlabeled),
                        "--out", str(generated)], check=True)
        by_id = {}
        with open(generated) as f:
            for line in f:
                rec = json.loads(line)
                by_id[rec["id"]] = rec["candidates"]

    with open(OUT, "w") as f:
        for t in tasks:
            labels = {}
            for cand in by_id[t["id"]]:
                labels[cand["fingerprint"]] = useful(
                    cand["sentence"], cand["template"], t["_target"])
            row = {k: v for k, v in t.items() if not k.startswith("_")}
            row["labels"] = labels
            f.write(json.dumps(row) + "\n")
    n_useful = sum(1 for t in tasks for cand in by_id[t["id"]]
                   if useful(cand["sentence"], cand["template"], t["_target"]))
    print(f"wrote {OUT} ({len(tasks)} tasks, {n_useful} useful candidates)")


if __name__ == "__main__":
    main()
