"""Independent reference implementations used to compute expected values.

These deliberately work on the stdlib ast module directly, never touching the
package's own lowering, so they form a second path for every count they check.
"""

from __future__ import annotations

import ast

BUILTINS = {"print", "range", "len", "abs", "round", "int", "float", "str",
            "sum", "max", "min", "sorted", "enumerate", "zip", "format"}


def oracle_features(source: str) -> tuple[int, int, int, int, int, int]:
    tree = ast.parse(source)
    n_calls = n_imports = n_ops = n_flow = 0
    for node in ast.walk(tree):
        if isinstance(node, ast.Call):
            n_calls += 1
        elif isinstance(node, (ast.Import, ast.ImportFrom)):
            n_imports += 1
        elif isinstance(node, (ast.BinOp, ast.UnaryOp, ast.BoolOp)):
            n_ops += 1
        elif isinstance(node, ast.Compare):
            n_ops += len(node.ops)
        elif isinstance(node, (ast.If, ast.For, ast.While, ast.Break,
                               ast.Continue, ast.Try)):
            n_flow += 1
        elif isinstance(node, (ast.ListComp, ast.SetComp, ast.DictComp,
                               ast.GeneratorExp)):
            n_flow += sum(1 + len(gen.ifs) for gen in node.generators)
    unused, undefined = oracle_def_use(source)
    return (n_calls, n_imports, n_ops, n_flow, len(unused), len(undefined))


def oracle_def_use(source: str) -> tuple[set[str], set[str]]:
    tree = ast.parse(source)
    defined: set[str] = set()
    used: set[str] = set()
    function_names: set[str] = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.Name):
            if isinstance(node.ctx, ast.Load):
                used.add(node.id)
            else:
                defined.add(node.id)
        elif isinstance(node, ast.FunctionDef):
            function_names.add(node.name)
            defined.add(node.name)
            args = node.args
            for arg in args.posonlyargs + args.args + args.kwonlyargs:
                defined.add(arg.arg)
            if args.vararg:
                defined.add(args.vararg.arg)
            if args.kwarg:
                defined.add(args.kwarg.arg)
        elif isinstance(node, ast.Lambda):
            for arg in node.args.posonlyargs + node.args.args + node.args.kwonlyargs:
                defined.add(arg.arg)
        elif isinstance(node, (ast.Import, ast.ImportFrom)):
            for alias in node.names:
                defined.add(alias.asname or alias.name.split(".")[0])
        elif isinstance(node, ast.AugAssign):
            if isinstance(node.target, ast.Name):
                used.add(node.target.id)
        elif isinstance(node, ast.ExceptHandler) and node.name:
            defined.add(node.name)
    return defined - used - function_names, used - defined - BUILTINS


def oracle_mccabe(source: str) -> dict[str, int]:
    """McCabe per function by the stated counting rule, straight off stdlib ast."""
    tree = ast.parse(source)

    def points(node: ast.AST) -> int:
        total = 0
        for child in ast.walk(node):
            if child is node:
                continue
            if isinstance(child, ast.FunctionDef):
                continue  # walk() still descends, so subtract below instead
            if isinstance(child, (ast.If, ast.For, ast.While, ast.IfExp)):
                total += 1
            elif isinstance(child, ast.BoolOp):
                total += len(child.values) - 1
            elif isinstance(child, ast.ExceptHandler):
                total += 1
            elif isinstance(child, (ast.ListComp, ast.SetComp, ast.DictComp,
                                    ast.GeneratorExp)):
                total += sum(len(gen.ifs) for gen in child.generators)
        return total

    def points_excluding_nested(func: ast.FunctionDef) -> int:
        nested = [n for n in ast.walk(func)
                  if isinstance(n, ast.FunctionDef) and n is not func]
        return points(func) - sum(points(n) for n in nested)

    result: dict[str, int] = {}
    module_points = points(tree) - sum(
        points(n) for n in tree.body if isinstance(n, ast.FunctionDef))
    for node in ast.walk(tree):
        if isinstance(node, ast.FunctionDef):
            result[node.name] = 1 + points_excluding_nested(node)
    result["<module>"] = 1 + module_points
    return result


def oracle_greedy_tree_predict(xs, ys, probe, max_depth, n_classes=6):
    """Brute-force greedy tree: at each node try every (feature, threshold)
    midpoint pair, recompute weighted Gini from scratch, recurse.  Returns the
    predicted class for one probe point."""

    def gini_of(labels):
        total = len(labels)
        return 1.0 - sum((labels.count(c) / total) ** 2
                         for c in set(labels))

    def majority(labels):
        counts = [labels.count(c + 1) for c in range(n_classes)]
        best = max(counts)
        return counts.index(best) + 1

    def classify(node_xs, node_ys, point, depth):
        if len(set(node_ys)) == 1 or depth >= max_depth:
            return majority(node_ys)
        n_features = len(node_xs[0])
        best_score, best_pair = None, None
        for f in range(n_features):
            values = sorted(set(x[f] for x in node_xs))
            for lo, hi in zip(values, values[1:]):
                t = (lo + hi) / 2.0
                left = [y for x, y in zip(node_xs, node_ys) if x[f] <= t]
                right = [y for x, y in zip(node_xs, node_ys) if x[f] > t]
                if not left or not right:
                    continue
                score = (len(left) / len(node_ys)) * gini_of(left) \
                    + (len(right) / len(node_ys)) * gini_of(right)
                if best_score is None or score < best_score - 1e-12:
                    best_score, best_pair = score, (f, t)
        if best_pair is None or best_score >= gini_of(node_ys) - 1e-12:
            return majority(node_ys)
        f, t = best_pair
        left = [(x, y) for x, y in zip(node_xs, node_ys) if x[f] <= t]
        right = [(x, y) for x, y in zip(node_xs, node_ys) if x[f] > t]
        if point[f] <= t:
            return classify([x for x, _ in left], [y for _, y in left],
                            point, depth + 1)
        return classify([x for x, _ in right], [y for _, y in right],
                        point, depth + 1)

    return classify(list(xs), list(ys), probe, 0)
