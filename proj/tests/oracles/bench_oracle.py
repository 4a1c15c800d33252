# Copyright 2026 The editjudge Authors
# SPDX-License-Identifier: Apache-2.0
"""Golden aggregates and agreement statistics for tests/fixtures/bench.

Written with plain loops and no editjudge code. Aggregates sum in sorted
(image id, rater) order and in image-id order so that the C++ pipeline must
match them bit for bit. Correlation p-values come from scipy; pairwise gaps
are judged on exact rationals.

    python3 tests/oracles/bench_oracle.py > tests/golden/bench_expected.json
"""

import itertools
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from scipy import stats

ROOT = Path(__file__).resolve().parents[2]
BENCH = ROOT / "tests" / "fixtures" / "bench"
TYPES = ["Add", "Remove", "Replace", "Action", "Counting", "Relation"]


def taxonomy():
    tax = json.loads((ROOT / "data" / "taxonomy.json").read_text())
    keys = [f["id"] for f in sorted(tax["factors"], key=lambda f: f["order"])]
    cats = [(c["id"], c["factors"]) for c in tax["categories"]]
    return keys, cats


KEYS, CATEGORIES = taxonomy()


def load_jsonl(path):
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


def seq_sum(values):
    total = 0.0
    for v in values:
        total += v
    return total


def mean_std(values, sample=False):
    n = len(values)
    m = seq_sum(values) / n
    ss = 0.0
    for v in values:
        ss += (v - m) * (v - m)
    d = n - 1 if sample else n
    return {"mean": m, "std": math.sqrt(ss / d) if d > 0 else 0.0, "count": n}


def per_image(sheets):
    """sheets: (image_id, rater, edit_type, {factor: score}, overall or None)."""
    images = []
    for img, group in itertools.groupby(sorted(sheets, key=lambda s: (s[0], s[1])),
                                        key=lambda s: s[0]):
        group = list(group)
        n = len(group)
        factors = {}
        exact = {}
        for k in KEYS:
            total = 0.0
            for s in group:
                total += s[3][k]
            factors[k] = total / n
            exact[k] = Fraction(sum(s[3][k] for s in group), n)
        overall = None
        if all(s[4] is not None for s in group):
            total = 0.0
            for s in group:
                total += s[4]
            overall = total / n
        images.append({"id": img, "type": group[0][2], "raters": n, "factors": factors,
                       "exact": exact, "overall": overall})
    return images


def grid(images, label):
    def row_from_values(by_type):
        row = {}
        for t in TYPES:
            row[t] = mean_std(by_type[t]) if by_type[t] else None
        present = [row[t]["mean"] for t in TYPES if row[t] is not None]
        row["All"] = mean_std(present) if present else None
        return row

    factors = {}
    spread = {}
    for k in KEYS:
        by_type = {t: [] for t in TYPES}
        everything = []
        for img in images:
            by_type[img["type"]].append(img["factors"][k])
            everything.append(img["factors"][k])
        factors[k] = row_from_values(by_type)
        spread[k] = mean_std(everything, sample=True) if len(everything) >= 2 else None

    def rollup(members):
        row = {}
        for col in TYPES + ["All"]:
            cells = [factors[k][col] for k in members]
            row[col] = None if any(c is None for c in cells) else mean_std([c["mean"] for c in cells])
        return row

    overall_q = {t: None for t in TYPES + ["All"]}
    if images and all(img["overall"] is not None for img in images):
        by_type = {t: [] for t in TYPES}
        for img in images:
            by_type[img["type"]].append(img["overall"])
        overall_q = row_from_values(by_type)

    return {
        "label": label,
        "images": len(images),
        "sheets": sum(img["raters"] for img in images),
        "factors": factors,
        "categories": {cid: rollup(members) for cid, members in CATEGORIES},
        "overall_average": rollup(KEYS),
        "overall_question": overall_q,
        "factor_spread": spread,
    }


def kendall_a(x, y):
    n = len(x)
    s = 0
    for i in range(n):
        for j in range(i + 1, n):
            a = (x[i] > x[j]) - (x[i] < x[j])
            b = (y[i] > y[j]) - (y[i] < y[j])
            s += a * b
    n0 = n * (n - 1) / 2
    tau = s / n0
    z = s / math.sqrt(n * (n - 1) * (2 * n + 5) / 18)
    return tau, min(1.0, math.erfc(abs(z) / math.sqrt(2)))


def correlation(kind, x, y):
    if len(set(x)) < 2 or len(set(y)) < 2:
        return None
    if kind == "pearson":
        r = stats.pearsonr(x, y)
        return {"coefficient": float(r[0]), "p_value": float(r[1]), "n": len(x)}
    if kind == "spearman":
        r = stats.spearmanr(x, y)
        return {"coefficient": float(r[0]), "p_value": float(r[1]), "n": len(x)}
    tau, p = kendall_a(x, y)
    return {"coefficient": tau, "p_value": p, "n": len(x)}


def pointwise(scope, evaluator, h, m):
    n = len(h)
    sq = ab = 0.0
    exact = within = 0
    for a, b in zip(h, m):
        sq += (a - b) ** 2
        ab += abs(a - b)
        exact += math.floor(a + 0.5) == b
        within += abs(a - b) <= 1
    return {"factor": scope, "evaluator": evaluator, "n": n, "mse": sq / n, "mae": ab / n,
            "acc": exact / n, "acc_pm1": within / n,
            "pearson": correlation("pearson", h, m),
            "spearman": correlation("spearman", h, m),
            "kendall": correlation("kendall", h, m)}


def pairwise(h_exact, m, min_gap=2):
    agree = counted = 0
    n = len(m)
    for i in range(n):
        for j in range(i + 1, n):
            dh = h_exact[i] - h_exact[j]
            dm = m[i] - m[j]
            if abs(dh) <= min_gap or dh == 0 or dm == 0:
                continue
            counted += 1
            agree += (dh > 0) == (dm > 0)
    return {"agree": agree, "counted": counted, "accuracy": agree / counted if counted else None}


def icc_2k(rows):
    n, k = len(rows), len(rows[0])
    grand = sum(sum(r) for r in rows) / (n * k)
    row_means = [sum(r) / k for r in rows]
    col_means = [sum(rows[i][j] for i in range(n)) / n for j in range(k)]
    ss_r = k * sum((rm - grand) ** 2 for rm in row_means)
    ss_c = n * sum((cm - grand) ** 2 for cm in col_means)
    ss_t = sum((v - grand) ** 2 for r in rows for v in r)
    ss_e = ss_t - ss_r - ss_c
    ms_r = ss_r / (n - 1)
    ms_c = ss_c / (k - 1)
    ms_e = ss_e / ((n - 1) * (k - 1))
    return (ms_r - ms_e) / (ms_r + (ms_c - ms_e) / n)


def main():
    records = load_jsonl(BENCH / "records.jsonl")
    verdicts = load_jsonl(BENCH / "verdicts" / "fixture-judge_main_online.jsonl")

    human = per_image([(r["image_id"], r["participant_id"], r["edit_type"], r["factor_scores"],
                        r["overall_score"]) for r in records])
    judge = per_image([(v["image_id"], v["model"], v["edit_type"],
                        {k: f["score"] for k, f in v["factor_results"].items()}, None)
                       for v in verdicts])
    label = "fixture-judge main online"

    hmap = {img["id"]: img for img in human}
    common = sorted(set(hmap) & {img["id"] for img in judge})
    jmap = {img["id"]: img for img in judge}

    rows = []
    for k in KEYS:
        rows.append(pointwise(k, label, [hmap[i]["factors"][k] for i in common],
                              [jmap[i]["factors"][k] for i in common]))
    pooled = sorted((f"{i}/{k}", hmap[i]["factors"][k], jmap[i]["factors"][k])
                    for i in common for k in KEYS)
    rows.append(pointwise("All", label, [p[1] for p in pooled], [p[2] for p in pooled]))

    pair = {"evaluator": label, "factors": {}}
    agree = counted = 0
    for k in KEYS:
        r = pairwise([hmap[i]["exact"][k] for i in common], [jmap[i]["factors"][k] for i in common])
        pair["factors"][k] = r
        agree += r["agree"]
        counted += r["counted"]
    pair["all"] = {"agree": agree, "counted": counted, "accuracy": agree / counted}

    by_image = {}
    for r in records:
        by_image.setdefault(r["image_id"], []).append(r)
    icc = {}
    for k in KEYS:
        matrix = []
        for img in sorted(by_image):
            rs = sorted(by_image[img], key=lambda r: r["participant_id"])
            matrix.append([float(r["factor_scores"][k]) for r in rs])
        icc[k] = icc_2k(matrix)

    out = {
        "human": grid(human, "Human"),
        "judge": grid(judge, label),
        "pointwise": rows,
        "pairwise": [pair],
        "icc": {"raters_per_image": 5, "images": len(by_image), "factors": icc},
    }
    json.dump(out, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
