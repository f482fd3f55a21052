"""Fixture functions for the McCabe oracle, with expected values computed by
hand from the counting rule (1 + decision points; branches, loops, extra
boolean operands, comprehension if-clauses, exception handlers, conditional
expressions)."""

# name -> (source, {function: expected_mccabe})
COMPLEXITY_PROGRAMS = {
    "straight_line": (
        "def f():\n    x = 1\n    y = x + 2\n    return y\n",
        {"f": 1, "<module>": 1},
    ),
    "single_if": (
        "def f(a):\n    if a > 0:\n        return 1\n    return 0\n",
        {"f": 2, "<module>": 1},
    ),
    "for_with_if": (
        "def f(xs):\n    t = 0\n    for x in xs:\n        if x > 0:\n            t += x\n    return t\n",
        {"f": 3, "<module>": 1},
    ),
    "if_and": (
        "def f(a, b):\n    if a and b:\n        return 1\n    return 0\n",
        {"f": 3, "<module>": 1},
    ),
    "if_elif_else": (
        "def f(a):\n    if a > 10:\n        return 2\n    elif a > 5:\n        return 1\n    else:\n        return 0\n",
        {"f": 3, "<module>": 1},
    ),
    "while_loop": (
        "def f(n):\n    while n > 1:\n        n = n // 2\n    return n\n",
        {"f": 2, "<module>": 1},
    ),
    "nested_loops": (
        "def f(n):\n    t = 0\n    for i in range(n):\n        for j in range(n):\n            if i == j:\n                t += 1\n    return t\n",
        {"f": 4, "<module>": 1},
    ),
    "ternary": (
        "def f(a, b):\n    return a if a > b else b\n",
        {"f": 2, "<module>": 1},
    ),
    "try_handler": (
        "def f(x):\n    try:\n        return 10 / x\n    except ZeroDivisionError:\n        return 0\n",
        {"f": 2, "<module>": 1},
    ),
    "two_handlers": (
        "def f(x):\n    try:\n        return int(x)\n    except ValueError:\n        return 0\n    except TypeError:\n        return -1\n",
        {"f": 3, "<module>": 1},
    ),
    "comprehension_filter": (
        "def f(n):\n    return [i for i in range(n) if i % 2 == 0]\n",
        {"f": 2, "<module>": 1},
    ),
    "bool_or_chain": (
        "def f(a, b, c):\n    if a or b or c:\n        return 1\n    return 0\n",
        {"f": 4, "<module>": 1},
    ),
    "helper_pair": (
        "def g(x):\n    if x < 0:\n        return -x\n    return x\n\ndef f(a, b):\n    return g(a) + g(b)\n",
        {"g": 2, "f": 1, "<module>": 1},
    ),
    "nested_def": (
        "def f(xs):\n    def inner(v):\n        if v > 0:\n            return v\n        return 0\n    total = 0\n    for x in xs:\n        total += inner(x)\n    return total\n",
        {"f": 2, "inner": 2, "<module>": 1},
    ),
    "module_level_branch": (
        "import math\nvalue = 16\nif value > 10:\n    result = math.sqrt(value)\nelse:\n    result = value\n",
        {"<module>": 2},
    ),
}
