"""Walk through the static-analysis layer on a few small solver programs.

Run from the repo root:  python3 demos/01_features_walkthrough.py
"""
from proglogic.analysis import FEATURE_NAMES, api_calls, cyclomatic, extract_features
from proglogic.parsing import dump, parse_program

# Three styles of solving "how many golf balls", from library-grounded to
# plain arithmetic to an unguided search.
CONCEPTUAL = """import math
def solution():
    return math.lcm(3, 11)
"""

PRIMITIVE = """def solution():
    boxes = 3
    balls_per_box = 11
    return boxes * balls_per_box
"""

BRUTE_FORCE = """def solution():
    for n in range(1, 1000):
        if n % 3 == 0 and n % 11 == 0:
            return n
    return -1
"""

for title, source in [("conceptual", CONCEPTUAL), ("primitive", PRIMITIVE),
                      ("brute force", BRUTE_FORCE)]:
    module = parse_program(source)
    fv = extract_features(module)
    print(f"--- {title} ---")
    for name, value in zip(FEATURE_NAMES, fv.as_tuple()):
        print(f"  {name:>18} = {value}")
    profile = cyclomatic(module)
    print(f"  complexity: {profile.per_function} (total {profile.program_total})")
    print(f"  library calls: {api_calls(module).per_library or '(none)'}")
    print()

# The lowered AST itself, for the curious
print("AST of the primitive version:")
print(dump(parse_program(PRIMITIVE)))
