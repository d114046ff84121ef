#!/usr/bin/env python3
# Copyright 2026 The beliefbench Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/attributes.json and data/minibank_test.jsonl.

The mini-bank assigns each of the nine test-split attributes a test-tagged
level. Marginals are as close to uniform as 50 personas allow, and pairwise
co-occurrence counts are annealed towards independence, so that group means
of one attribute are only weakly confounded by the others.
"""

import json
import math
import random
import sys
from pathlib import Path

# (name, kind, [(level, tags)])
ATTRIBUTES = [
    ("age", "ordinal", [("18-29", "te"), ("30-44", "te"), ("45-64", "te"), ("65+", "te")]),
    ("agreeableness", "ordinal", [("High", "tr"), ("Low", "tr"), ("Medium", "tr")]),
    ("communication_quality", "ordinal", [("Excellent", "v"), ("Neutral", "v"), ("Poor", "v")]),
    ("conscientiousness", "ordinal", [("High", "te"), ("Low", "te"), ("Moderate", "te")]),
    ("cultural_norms", "categorical", [("Collectivist", "tr"), ("Hybrid", "tr"), ("Individualist", "tr")]),
    ("ethnicity", "categorical", [
        ("Arab", "v"), ("Black African", "v"), ("East Asian", "v"), ("Indigenous American", "v"),
        ("Latino", "v"), ("Other", "v"), ("South Asian", "v"), ("Southeast Asian", "v"), ("White", "v")]),
    ("extraversion", "ordinal", [("Ambivert", "v"), ("Extraverted", "v"), ("Introverted", "v")]),
    ("family_structure_at_16", "categorical", [
        ("Armed forces", "tr"), ("Both parents", "te"), ("Divorce", "tr"), ("Foster care", "te"),
        ("Grandparents", "te"), ("Institution", "tr"), ("Lived with parents", "tr"),
        ("Other guardian", "te"), ("Single parent - father", "te"), ("Single parent - mother", "te")]),
    ("general_activity_level", "ordinal", [
        ("Lightly active", "v"), ("Moderately active", "v"), ("Sedentary", "v"),
        ("Unstructured", "v"), ("Very active", "v")]),
    ("highest_degree_received", "ordinal", [
        ("Associate/junior college", "tr,te"), ("Bachelor's", "tr,te"), ("Bachelor's degree", "v"),
        ("Graduate", "tr,te"), ("Graduate or professional degree", "v"), ("High school", "tr,te"),
        ("High school diploma or GED", "v"), ("Less than high school", "tr,te"),
        ("No high school diploma", "v"), ("Some college or associate degree", "v")]),
    ("marital_status", "categorical", [
        ("Divorced", "tr"), ("Married", "tr"), ("Never married", "tr"), ("Separated", "tr"), ("Widowed", "tr")]),
    ("neuroticism", "ordinal", [("High", "v"), ("Low", "v"), ("Moderate", "v")]),
    ("openness_to_experience", "ordinal", [("High", "te"), ("Low", "te"), ("Moderate", "te")]),
    ("political_views", "ordinal", [
        ("Conservative", "tr"), ("Extremely conservative", "tr,te"), ("Extremely liberal", "tr,te"),
        ("Liberal", "tr"), ("Moderate, middle of the road", "tr"), ("Slightly conservative", "te"),
        ("Slightly liberal", "te")]),
    ("race", "categorical", [("Black", "tr"), ("Other", "tr"), ("White", "tr")]),
    ("religion", "categorical", [
        ("Buddhism", "tr"), ("Christian", "tr"), ("Hinduism", "tr"), ("Jewish", "te"),
        ("Muslim/Islam", "te"), ("None", "te"), ("Orthodox-Christian", "te"), ("Protestant", "te")]),
    ("same_residence_since_16", "categorical", [
        ("Different state", "te"), ("Same city", "te"), ("Same state, different city", "te")]),
    ("sex", "categorical", [("Female", "tr"), ("Male", "tr")]),
    ("total_wealth", "ordinal", [
        ("Less than $20,000", "tr"), ("$20,000–$75,000", "tr"), ("$75,000–$250,000", "tr"),
        ("$250,000–$1 million", "tr"), ("$1 million–$5 million", "tr"), ("Above $5 million", "tr")]),
    ("type_of_disability_if_any", "categorical", [
        ("Cognitive or learning disability", "v"), ("Mental health condition", "v"), ("None", "v"),
        ("Physical disability", "v"), ("Sensory disability (e.g., vision or hearing)", "v")]),
    ("us_citizenship_status", "categorical", [("A U.S. citizen", "te"), ("Not a U.S. citizen", "te")]),
    ("work_status", "categorical", [
        ("Full time", "tr"), ("In school", "te"), ("Keeping house", "te"), ("Other", "te"),
        ("Part time", "tr"), ("Retired", "te"), ("Temporarily not working", "tr"), ("Unemployed", "tr")]),
]

TEST_ATTRIBUTES = [
    "age", "conscientiousness", "family_structure_at_16", "highest_degree_received",
    "openness_to_experience", "political_views", "same_residence_since_16",
    "us_citizenship_status", "work_status",
]

TAG = {"tr": "train", "v": "val", "te": "test"}
N_PERSONAS = 50
SEED = 20250


def specs_document():
    out = []
    for name, kind, levels in ATTRIBUTES:
        out.append({
            "name": name,
            "kind": kind,
            "levels": [lvl for lvl, _ in levels],
            "splits": {lvl: [TAG[t] for t in tags.split(",")] for lvl, tags in levels},
        })
    return {"attributes": out}


def test_levels():
    table = {name: [lvl for lvl, tags in levels if "te" in tags.split(",")]
             for name, _, levels in ATTRIBUTES}
    return [table[name] for name in TEST_ATTRIBUTES]


def cost(bank, sizes):
    total = 0.0
    n = len(bank)
    for t, kt in enumerate(sizes):
        counts = [0] * kt
        for p in bank:
            counts[p[t]] += 1
        total += 10.0 * sum((c - n / kt) ** 2 for c in counts)
        for u, ku in enumerate(sizes):
            if u == t:
                continue
            cells = [[0] * ku for _ in range(kt)]
            for p in bank:
                cells[p[t]][p[u]] += 1
            for a in range(kt):
                row = sum(cells[a])
                total += sum((c - row / ku) ** 2 for c in cells[a])
    return total


def anneal(sizes, rng):
    # Start from a cyclic assignment so every level is populated.
    bank = [[i % k for k in sizes] for i in range(N_PERSONAS)]
    for t, k in enumerate(sizes):
        col = [p[t] for p in bank]
        rng.shuffle(col)
        for p, v in zip(bank, col):
            p[t] = v
    current = cost(bank, sizes)
    temperature = 5.0
    for _ in range(30000):
        i, j = rng.randrange(N_PERSONAS), rng.randrange(N_PERSONAS)
        t = rng.randrange(len(sizes))
        if bank[i][t] == bank[j][t]:
            continue
        # Swapping within a column keeps the marginals fixed.
        bank[i][t], bank[j][t] = bank[j][t], bank[i][t]
        c = cost(bank, sizes)
        if c <= current or rng.random() < math.exp((current - c) / temperature):
            current = c
        else:
            bank[i][t], bank[j][t] = bank[j][t], bank[i][t]
        temperature *= 0.9997
    return bank


def main(root):
    root = Path(root)
    (root / "data").mkdir(exist_ok=True)
    with open(root / "data" / "attributes.json", "w", encoding="utf-8") as f:
        json.dump(specs_document(), f, indent=2, ensure_ascii=False)
        f.write("\n")

    levels = test_levels()
    sizes = [len(l) for l in levels]
    bank = anneal(sizes, random.Random(SEED))
    with open(root / "data" / "minibank_test.jsonl", "w", encoding="utf-8") as f:
        for i, p in enumerate(bank):
            rec = {
                "id": f"te-{i + 1:04d}",
                "split": "test",
                "attributes": {name: levels[t][p[t]] for t, name in enumerate(TEST_ATTRIBUTES)},
            }
            f.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent)
