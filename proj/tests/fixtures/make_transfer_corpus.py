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

"""Writes transfer_corpus.jsonl: agent answers with the transfer each should yield.

Each case records the intended outcome from the way it was built, so the
corpus is an oracle independent of the extractor under test.
"""
import json
import random

rng = random.Random(20250)
OUT = "transfer_corpus.jsonl"

BELIEFS = [
    "I think most people return at least part of what they receive.",
    "Strangers can be unpredictable, so I stay careful.",
    "My experience says cooperation usually pays off.",
    "I am wary of being taken advantage of.",
]
DESIRES = [
    "I want to come out ahead while being fair.",
    "I would like to build some goodwill.",
    "I mostly want to protect what I have.",
]
INTENTIONS = [
    "I will send a moderate share.",
    "I will send a small share and see what happens.",
    "I will trust the other player with a good portion.",
]
THOUGHTS = [
    "Given my profile I lean toward caution.",
    "A generous transfer signals trust.",
    "The tripling makes sending attractive.",
]

cases = []


def add(text, max_dollars, expected, reason=None):
    case = {"id": f"t{len(cases) + 1:03d}", "text": text, "max_dollars": max_dollars, "expected": expected}
    if reason:
        case["reason"] = reason
    cases.append(case)


# Belief-desire-intention answers closing with the final-decision clause.
for _ in range(140):
    e = rng.choice([10, 10, 10, 44, 100])
    n = rng.randint(0, e)
    text = (f"BELIEF: {rng.choice(BELIEFS)}\nDESIRE: {rng.choice(DESIRES)}\n"
            f"INTENTION: {rng.choice(INTENTIONS)}\nFinally, I will give {n} dollars.")
    if rng.random() < 0.3:
        text = text.replace(f"give {n} dollars", f"give ${n} dollars")
    add(text, e, n)

# Thought/action/observation answers.
for _ in range(30):
    e = rng.choice([10, 44, 100])
    n = rng.randint(0, e)
    add(f"THOUGHT: {rng.choice(THOUGHTS)}\nACTION: send {n} dollars\nOBSERVATION: The amount will be tripled.",
        e, n)

# Valid but awkward answers.
add("I will transfer $10", 10, 10)
add("I will transfer $0 this time.", 10, 0)
add("Finally, I will give 05 dollars.", 10, 5)
add("$7", 10, 7)
add("I'll send 3 dollars now, and maybe 5 next time.", 10, 3)
add("Tripling 30 sounds great. Finally, I will give 6 dollars.", 10, 6)
add("If I sent 100 they would get 300. Finally, I will give 9 dollars.", 44, 9)
add("Sending 4.5 would be odd. Finally, I will give 4 dollars.", 10, 4)
add("A loss of -2 is fine. Finally, I will give 2 dollars.", 10, 2)
add("Finally, I will give 100 dollars.", 100, 100)
add("BELIEF: trust is earned.\nDESIRE: fairness.\nINTENTION: half.\nFinally, I will give $22 dollars.", 44, 22)
add("```\nFinally, I will give 8 dollars.\n```", 10, 8)
add("ACTION: send $1\nOBSERVATION: they get $3.", 10, 1)
add("Finally, I will give 3 dollars. (That is 30% of my money.)", 10, 3)
add("Finally, I will give 0 dollars.", 44, 0)
add("I choose 44.", 44, 44)
add("My transfer: $12.", 44, 12)
add("Finally, I will give 10 dollars", 10, 10)
add("Finally , I will give 6 dollars.", 10, 6)
add("Finally, I will give 1 dollar.", 10, 1)
add("Finally, I will give 50 dollars.", 100, 50)
add("send 2", 10, 2)

# Answers that must be excluded.
add("I send 15 dollars", 10, None, "bound violation")
add("I would rather not say.", 10, None, "no numeric decision")
add("-3 dollars is what I give.", 10, None, "bound violation")
add("I will give 4.50 dollars.", 10, None, "bound violation")
add("I will give 20.", 10, None, "bound violation")
add("ACTION: send all of it", 10, None, "no numeric decision")
add("Sending 45 dollars.", 44, None, "bound violation")
add("Finally, I will give 200 dollars.", 100, None, "bound violation")

assert len(cases) == 200, len(cases)
with open(OUT, "w") as f:
    for c in cases:
        f.write(json.dumps(c, ensure_ascii=False) + "\n")
