"""Structural analysis of parsed programs.

Produces the six classifier features, per-function McCabe complexity, and
math-library API-call tallies.  All functions are pure over the AST.
"""

from __future__ import annotations

from dataclasses import dataclass, astuple
from typing import Iterable

from .parsing import AstModule, Node

# Modules whose calls count as math-library API usage; user-extensible.
DEFAULT_KNOWN_MODULES = frozenset(
    {"math", "sympy", "numpy", "fractions", "itertools", "functools", "statistics"}
)

# Ambient builtin names that must not inflate the used-undefined count.
BUILTIN_NAMES = frozenset(
    {"print", "range", "len", "abs", "round", "int", "float", "str",
     "sum", "max", "min", "sorted", "enumerate", "zip", "format"}
)

FEATURE_NAMES = (
    "n_calls",
    "n_imports",
    "n_builtin_ops",
    "n_control_flow",
    "n_defined_unused",
    "n_used_undefined",
)

_CONTROL_FLOW_KINDS = {"If", "For", "While", "Break", "Continue", "Try"}


@dataclass(frozen=True)
class FeatureVector:
    n_calls: int
    n_imports: int
    n_builtin_ops: int
    n_control_flow: int
    n_defined_unused: int
    n_used_undefined: int

    def as_tuple(self) -> tuple[int, ...]:
        return astuple(self)


@dataclass
class ComplexityProfile:
    per_function: dict[str, int]
    program_total: int


@dataclass
class ApiCallProfile:
    per_library: dict[str, int]


def extract_features(module: AstModule) -> FeatureVector:
    n_calls = n_imports = n_ops = n_flow = 0
    for node in module.walk():
        kind = node.kind
        if kind == "Call":
            n_calls += 1
        elif kind in ("Import", "ImportFrom"):
            n_imports += 1
        elif kind in ("BinOp", "UnaryOp", "BoolOp"):
            n_ops += 1
        elif kind == "Compare":
            n_ops += len(node.ops)
        elif kind in _CONTROL_FLOW_KINDS or kind in ("CompFor", "CompIf"):
            n_flow += 1
    unused, undefined = def_use(module)
    return FeatureVector(n_calls, n_imports, n_ops, n_flow,
                         len(unused), len(undefined))


def def_use(module: AstModule) -> tuple[set[str], set[str]]:
    """Defined-but-unused and used-but-undefined name sets.

    Scoping is flat: module and function bodies are merged, matching how the
    corpus programs are written (single small functions).  Function names
    bind, so calling a self-defined helper is not an undefined use, but a
    never-called top-level function is not reported as an unused variable.
    """
    defined: set[str] = set()
    used: set[str] = set()
    function_names: set[str] = set()
    for node in module.walk():
        kind = node.kind
        if kind == "Name":
            (defined if node.ctx == "store" else used).add(node.name)
        elif kind == "FunctionDef":
            function_names.add(node.name)
            defined.add(node.name)
            defined.update(node.params)
        elif kind == "Lambda":
            defined.update(node.params)
        elif kind in ("Import", "ImportFrom"):
            defined.update(bound for _, bound in node.imports)
        elif kind == "AugAssign":
            # x += 1 both reads and writes x
            for child in node.children[:1]:
                if child.kind == "Name":
                    used.add(child.name)
        elif kind == "ExceptHandler" and node.name:
            defined.add(node.name)
    defined_unused = defined - used - function_names
    used_undefined = used - defined - BUILTIN_NAMES
    return defined_unused, used_undefined


def _decision_points(nodes: Iterable[Node]) -> int:
    points = 0
    for node in nodes:
        kind = node.kind
        if kind in ("If", "For", "While", "IfExp", "CompIf"):
            points += 1
        elif kind == "BoolOp":
            points += max(len(node.children) - 1, 0)
        elif kind == "ExceptHandler":
            points += 1
    return points


def _subtree(node: Node) -> Iterable[Node]:
    stack = list(reversed(node.children))
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.children))


def cyclomatic(module: AstModule) -> ComplexityProfile:
    """McCabe numbers per function, plus a synthetic "<module>" entry for
    top-level code when it contributes any decision point."""
    per_function: dict[str, int] = {}
    module_points = 0

    def visit(nodes: list[Node]) -> None:
        nonlocal module_points
        for node in nodes:
            if node.kind == "FunctionDef":
                per_function[node.name] = 1 + _decision_points(_subtree_no_nested_defs(node))
                visit(list(_direct_nested_defs(node)))
            else:
                module_points += _decision_points([node])
                visit(node.children)

    visit(module.body)
    per_function["<module>"] = 1 + module_points
    program_total = sum(per_function.values())
    return ComplexityProfile(per_function=per_function, program_total=program_total)


def _subtree_no_nested_defs(func: Node) -> Iterable[Node]:
    stack = list(reversed(func.children))
    while stack:
        n = stack.pop()
        if n.kind == "FunctionDef":
            continue  # nested helper gets its own McCabe number
        yield n
        stack.extend(reversed(n.children))


def _direct_nested_defs(func: Node) -> Iterable[Node]:
    stack = list(reversed(func.children))
    while stack:
        n = stack.pop()
        if n.kind == "FunctionDef":
            yield n
        else:
            stack.extend(reversed(n.children))


def api_calls(module: AstModule, known_modules: frozenset[str] | set[str] = DEFAULT_KNOWN_MODULES) -> ApiCallProfile:
    """Call counts per math library.

    A call counts when its callee is ``alias.attr`` with ``alias`` bound by an
    import of a known module, or a bare name imported from a known module.
    """
    alias_to_lib: dict[str, str] = {}
    name_to_lib: dict[str, str] = {}
    for node in module.walk():
        if node.kind == "Import":
            for modname, bound in node.imports:
                root = modname.split(".")[0]
                if root in known_modules:
                    alias_to_lib[bound] = root
        elif node.kind == "ImportFrom":
            root = (node.module or "").split(".")[0]
            if root in known_modules:
                for _, bound in node.imports:
                    name_to_lib[bound] = root

    counts: dict[str, int] = {}
    for node in module.walk():
        if node.kind != "Call":
            continue
        callee = node.children[0]
        lib = None
        if callee.kind == "Attribute" and callee.children[0].kind == "Name":
            lib = alias_to_lib.get(callee.children[0].name)
        elif callee.kind == "Name":
            lib = name_to_lib.get(callee.name)
        if lib is not None:
            counts[lib] = counts.get(lib, 0) + 1
    return ApiCallProfile(per_library=counts)
