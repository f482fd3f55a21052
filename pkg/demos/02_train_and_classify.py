"""Train the code-structure judge on a tiny labeled set, then classify
fresh programs with it.

Run from the repo root:  python3 demos/02_train_and_classify.py
"""
import tempfile
from pathlib import Path

from proglogic import tree
from proglogic.analysis import extract_features
from proglogic.parsing import parse_program
from proglogic.taxonomy import TaxonomyLabel

# One exemplar per class; real training data comes from TPIR-annotated
# programs (see the annotation module), but structure alone is enough here.
LABELED = {
    TaxonomyLabel.CONCEPTUAL: "import math\ndef solution():\n    return math.gcd(48, 18)\n",
    TaxonomyLabel.PRIMITIVE: "def solution():\n    return 3 * 11\n",
    TaxonomyLabel.FROM_SCRATCH: (
        "def solution():\n"
        "    a, b = 48, 18\n"
        "    while b:\n"
        "        a, b = b, a % b\n"
        "    return a\n"),
    TaxonomyLabel.BRUTE_FORCE: (
        "def solution():\n"
        "    for n in range(1, 1000):\n"
        "        if n % 7 == 3 and n % 5 == 2:\n"
        "            return n\n"
        "    return -1\n"),
    TaxonomyLabel.DISORGANIZED: (
        "def solution():\n"
        "    leftover = total - used\n"
        "    answer = 14\n"
        "    return result\n"),
    TaxonomyLabel.NO_LOGIC: "def solution():\n    return 33\n",
}

rows = []
for label, source in LABELED.items():
    fv = extract_features(parse_program(source))
    rows.extend([(fv, label)] * 4)  # small, but enough to split on

model = tree.train(rows, tree.TrainParams(max_depth=5))
print(f"trained a depth-{model.depth()} tree on {len(rows)} rows")
print(f"training accuracy: {tree.evaluate(model, rows).accuracy:.3f}")

# models serialize to a versioned JSON file
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "judge.json"
    tree.save(model, path)
    model = tree.load(path)
    print(f"model round-tripped through {path.name}")

UNSEEN = {
    "sympy solver": (
        "import sympy\ndef solution():\n"
        "    x = sympy.symbols('x')\n"
        "    return sympy.solve(3 * x - 9, x)[0]\n"),
    "bare answer": "def solution():\n    return 42\n",
    "search loop": (
        "def solution():\n"
        "    for k in range(10000):\n"
        "        if k * k > 300:\n"
        "            return k\n"),
}
print()
for title, source in UNSEEN.items():
    fv = extract_features(parse_program(source))
    label = tree.predict(model, fv)
    print(f"{title:>14} -> {label.short_name} ({label.name})")
