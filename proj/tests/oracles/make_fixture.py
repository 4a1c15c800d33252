# Copyright 2026 The editjudge Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the synthetic benchmark under tests/fixtures/bench.

100 tasks over the six edit types (9/34/18/23/10/6), 25 participants with 20
tasks each, five raters per task, and one judge verdict archive. Everything is
seeded; rerunning reproduces the committed files byte for byte.

    python3 tests/oracles/make_fixture.py
"""

import json
import random
from pathlib import Path

import numpy as np
from PIL import Image

ROOT = Path(__file__).resolve().parents[2]
OUT = ROOT / "tests" / "fixtures" / "bench"
SEED = 20260301
SIZE = 24

TYPE_COUNTS = [("Add", 9), ("Remove", 34), ("Replace", 18), ("Action", 23),
               ("Counting", 10), ("Relation", 6)]
MASKED = {"Add", "Remove", "Replace"}
PARTICIPANTS = 25
PER_PARTICIPANT = 20

OBJECTS = ["lamp", "dog", "bicycle", "vase", "umbrella", "kite", "bench", "clock",
           "teapot", "guitar", "sailboat", "pumpkin"]
INSTRUCTIONS = {
    "Add": "Add a {o} next to the table",
    "Remove": "Remove the {o} from the scene",
    "Replace": "Replace the {o} with a {p}",
    "Action": "Make the {o} look like it is moving to the left",
    "Counting": "Change the number of {o}s to three",
    "Relation": "Move the {o} so it is behind the {p}",
}


def factor_keys():
    tax = json.loads((ROOT / "data" / "taxonomy.json").read_text())
    return [f["id"] for f in sorted(tax["factors"], key=lambda f: f["order"])]


def clamp(x):
    return max(1, min(7, int(round(x))))


def clock(seconds):
    return f"2026-03-02T{seconds // 3600:02d}:{seconds // 60 % 60:02d}:{seconds % 60:02d}Z"


def write_png(path, arr):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(arr).save(path, optimize=True)


def make_images(rng, tid, with_gt, masked):
    yy, xx = np.mgrid[0:SIZE, 0:SIZE]
    base = np.zeros((SIZE, SIZE, 3), dtype=np.float64)
    c0 = rng.uniform(20, 200, 3)
    c1 = rng.uniform(20, 200, 3)
    t = (xx + yy) / (2.0 * (SIZE - 1))
    for ch in range(3):
        base[..., ch] = c0[ch] * (1 - t) + c1[ch] * t
    y0, x0 = rng.integers(2, SIZE // 2, 2)
    h, w = rng.integers(5, SIZE // 2, 2)
    region = (slice(y0, y0 + h), slice(x0, x0 + w))
    orig = base.copy()
    edit = base.copy()
    edit[region] = rng.uniform(0, 255, 3)
    edit += (3.0 * np.sin(xx / 3.0) * np.cos(yy / 4.0))[..., None]
    files = {"original": f"images/{tid}_orig.png", "edited": f"images/{tid}_edit.png"}
    write_png(OUT / files["original"], np.clip(orig, 0, 255).astype(np.uint8))
    write_png(OUT / files["edited"], np.clip(edit, 0, 255).astype(np.uint8))
    if with_gt:
        gt = base.copy()
        gt[region] = np.clip(edit[region].mean(axis=(0, 1)) + rng.normal(0, 10, 3), 0, 255)
        files["ground_truth"] = f"images/{tid}_gt.png"
        write_png(OUT / files["ground_truth"], np.clip(gt, 0, 255).astype(np.uint8))
    if masked:
        mask = np.zeros((SIZE, SIZE), dtype=np.uint8)
        mask[region] = 255
        files["mask"] = f"images/{tid}_mask.png"
        write_png(OUT / files["mask"], mask)
    return files


def main():
    rng = random.Random(SEED)
    nrng = np.random.default_rng(SEED)
    keys = factor_keys()

    types = [t for t, n in TYPE_COUNTS for _ in range(n)]
    rng.shuffle(types)
    tasks = []
    quality = {}
    for i, et in enumerate(types):
        tid = f"t{i:03d}"
        o, p = rng.sample(OBJECTS, 2)
        files = make_images(nrng, tid, with_gt=(i % 2 == 0), masked=et in MASKED)
        task = {"task_id": tid, "original": {"path": files["original"]},
                "instruction": INSTRUCTIONS[et].format(o=o, p=p), "edit_type": et,
                "edited": {"path": files["edited"]}}
        if "ground_truth" in files:
            task["ground_truth"] = {"path": files["ground_truth"]}
        if "mask" in files:
            task["mask"] = {"path": files["mask"]}
        tasks.append(task)
        quality[tid] = rng.uniform(2.0, 6.5)

    offsets = {k: rng.uniform(-0.8, 0.8) for k in keys}
    bias = {f"P{p + 1:02d}": rng.uniform(-0.7, 0.7) for p in range(PARTICIPANTS)}

    records = []
    for p in range(PARTICIPANTS):
        pid = f"P{p + 1:02d}"
        minute = 0
        for j in range(PER_PARTICIPANT):
            task = tasks[(4 * p + j) % len(tasks)]
            q = quality[task["task_id"]] + bias[pid]
            scores = {k: clamp(q + offsets[k] + rng.gauss(0, 0.9)) for k in keys}
            start = 10 * 3600 + minute * 60
            end = start + rng.randint(30, 170)
            minute += 3
            records.append({
                "participant_id": pid,
                "image_id": task["task_id"],
                "edit_type": task["edit_type"],
                "factor_scores": scores,
                "overall_score": clamp(q + rng.gauss(0, 0.8)),
                "timestamp_start": clock(start),
                "timestamp_end": clock(end),
                "annotator_id": f"annot-{p + 1:02d}",
            })

    verdicts = []
    for task in tasks:
        q = quality[task["task_id"]]
        factors = {}
        for k in keys:
            s = clamp(q + 0.5 + offsets[k] * 0.5 + rng.gauss(0, 1.3))
            factors[k] = {"score": s, "justification": f"The {k.replace('_', ' ')} rates {s}."}
        verdicts.append({
            "image_id": task["task_id"], "edit_type": task["edit_type"],
            "model": "fixture-judge", "prompt_variant": "main", "mode": "online",
            "factor_results": factors,
            "overall": sum(f["score"] for f in factors.values()) / len(keys),
            "attempts": 1, "warnings": [], "raw_response": [],
        })

    OUT.mkdir(parents=True, exist_ok=True)
    dump = lambda rows: "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in rows)
    (OUT / "tasks.jsonl").write_text(dump(tasks))
    (OUT / "records.jsonl").write_text(dump(records))
    (OUT / "verdicts").mkdir(exist_ok=True)
    (OUT / "verdicts" / "fixture-judge_main_online.jsonl").write_text(
        dump(sorted(verdicts, key=lambda v: v["image_id"])))


if __name__ == "__main__":
    main()
