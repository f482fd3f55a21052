"""Parsing of generated programs into a compact AST.

The analyzed programs are small Python scripts.  We parse them with the host
grammar, then lower the tree into our own node inventory, which covers the
function-level subset these corpora use.  Anything outside the subset
(classes, decorators, async, global/nonlocal, match) is rejected with an
explicit :class:`UnsupportedConstruct` instead of being silently dropped.
"""

from __future__ import annotations

import ast
import io
import tokenize
from dataclasses import dataclass, field
from typing import Iterator, Optional


class ParseFailure(Exception):
    """Base class for anything that prevents building an AstModule."""


class SourceSyntaxError(ParseFailure):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"syntax error at line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class UnsupportedConstruct(ParseFailure):
    def __init__(self, construct: str, line: int):
        super().__init__(f"unsupported construct {construct!r} at line {line}")
        self.construct = construct
        self.line = line


@dataclass
class Node:
    """One AST node in the lowered tree.

    ``children`` is ordered; pre-order traversal over it defines ``walk``.
    Kind-specific payloads sit in the optional fields.
    """

    kind: str
    children: list["Node"] = field(default_factory=list)
    name: Optional[str] = None          # FunctionDef/Name/Attribute/arg name
    ctx: Optional[str] = None           # Name context: "load" or "store"
    op: Optional[str] = None            # BinOp/UnaryOp/BoolOp operator tag
    ops: tuple[str, ...] = ()           # Compare operator tags (chain-aware)
    value: object = None                # Constant payload
    params: tuple[str, ...] = ()        # FunctionDef/Lambda parameter names
    imports: tuple[tuple[str, str], ...] = ()  # (module_or_name, bound_name)
    module: Optional[str] = None        # ImportFrom source module
    line: int = 0
    end_line: int = 0


@dataclass
class Comment:
    line: int
    text: str


@dataclass
class AstModule:
    body: list[Node]
    comments: list[Comment]
    source: str

    def walk(self) -> Iterator[Node]:
        """Pre-order traversal; every node is yielded exactly once."""
        stack = list(reversed(self.body))
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


_REJECTED = {
    ast.ClassDef: "class definition",
    ast.AsyncFunctionDef: "async function",
    ast.AsyncFor: "async for",
    ast.AsyncWith: "async with",
    ast.Await: "await",
    ast.Global: "global statement",
    ast.Nonlocal: "nonlocal statement",
    ast.Yield: "yield",
    ast.YieldFrom: "yield from",
}
if hasattr(ast, "Match"):
    _REJECTED[ast.Match] = "match statement"

_BINOPS = {
    ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/",
    ast.FloorDiv: "//", ast.Mod: "%", ast.Pow: "**", ast.LShift: "<<",
    ast.RShift: ">>", ast.BitOr: "|", ast.BitAnd: "&", ast.BitXor: "^",
    ast.MatMult: "@",
}
_UNARYOPS = {ast.UAdd: "+", ast.USub: "-", ast.Not: "not", ast.Invert: "~"}
_CMPOPS = {
    ast.Lt: "<", ast.LtE: "<=", ast.Gt: ">", ast.GtE: ">=",
    ast.Eq: "==", ast.NotEq: "!=", ast.In: "in", ast.NotIn: "not in",
    ast.Is: "is", ast.IsNot: "is not",
}
_COMP_KINDS = {
    ast.ListComp: "Comprehension",
    ast.SetComp: "Comprehension",
    ast.DictComp: "Comprehension",
    ast.GeneratorExp: "Comprehension",
}


def parse_program(source: str) -> AstModule:
    """Parse program text; raises SourceSyntaxError or UnsupportedConstruct.

    Failure is total: no partial tree is ever returned.
    """
    try:
        tree = ast.parse(source)
    except SyntaxError as exc:
        raise SourceSyntaxError(exc.msg or "invalid syntax",
                                exc.lineno or 0, exc.offset or 0) from None
    body = [_lower(stmt) for stmt in tree.body]
    return AstModule(body=body, comments=_collect_comments(source), source=source)


def walk(module: AstModule) -> Iterator[Node]:
    return module.walk()


def _collect_comments(source: str) -> list[Comment]:
    comments = []
    try:
        for tok in tokenize.generate_tokens(io.StringIO(source).readline):
            if tok.type == tokenize.COMMENT:
                comments.append(Comment(line=tok.start[0], text=tok.string))
    except tokenize.TokenError:
        pass  # parseable source with an unterminated trailing token; keep what we have
    return comments


def _span(a: ast.AST) -> tuple[int, int]:
    line = getattr(a, "lineno", 0)
    return line, getattr(a, "end_lineno", None) or line


def _node(a: ast.AST, kind: str, children: list[Node], **extra) -> Node:
    line, end = _span(a)
    return Node(kind=kind, children=children, line=line, end_line=end, **extra)


def _lower_all(items) -> list[Node]:
    return [_lower(x) for x in items]


def _lower(a: ast.AST) -> Node:
    for rejected_type, label in _REJECTED.items():
        if isinstance(a, rejected_type):
            raise UnsupportedConstruct(label, getattr(a, "lineno", 0))

    if isinstance(a, ast.FunctionDef):
        if a.decorator_list:
            raise UnsupportedConstruct("decorator", a.lineno)
        args = a.args
        names = [p.arg for p in args.posonlyargs + args.args + args.kwonlyargs]
        if args.vararg:
            names.append(args.vararg.arg)
        if args.kwarg:
            names.append(args.kwarg.arg)
        children = _lower_all(args.defaults) + _lower_all(
            [d for d in args.kw_defaults if d is not None]) + _lower_all(a.body)
        return _node(a, "FunctionDef", children, name=a.name, params=tuple(names))
    if isinstance(a, ast.Return):
        return _node(a, "Return", _lower_all([a.value] if a.value else []))
    if isinstance(a, ast.Assign):
        return _node(a, "Assign", _lower_all(a.targets) + [_lower(a.value)])
    if isinstance(a, ast.AnnAssign):
        children = [_lower(a.target)] + (_lower_all([a.value]) if a.value else [])
        return _node(a, "Assign", children)
    if isinstance(a, ast.AugAssign):
        return _node(a, "AugAssign", [_lower(a.target), _lower(a.value)],
                     op=_BINOPS[type(a.op)])
    if isinstance(a, ast.Import):
        pairs = tuple((al.name, al.asname or al.name.split(".")[0]) for al in a.names)
        return _node(a, "Import", [], imports=pairs)
    if isinstance(a, ast.ImportFrom):
        if a.module is None or a.level:
            raise UnsupportedConstruct("relative import", a.lineno)
        pairs = tuple((al.name, al.asname or al.name) for al in a.names)
        return _node(a, "ImportFrom", [], module=a.module, imports=pairs)
    if isinstance(a, ast.If):
        return _node(a, "If",
                     [_lower(a.test)] + _lower_all(a.body) + _lower_all(a.orelse))
    if isinstance(a, ast.For):
        if a.orelse:
            children = ([_lower(a.target), _lower(a.iter)] + _lower_all(a.body)
                        + _lower_all(a.orelse))
        else:
            children = [_lower(a.target), _lower(a.iter)] + _lower_all(a.body)
        return _node(a, "For", children)
    if isinstance(a, ast.While):
        return _node(a, "While",
                     [_lower(a.test)] + _lower_all(a.body) + _lower_all(a.orelse))
    if isinstance(a, ast.Break):
        return _node(a, "Break", [])
    if isinstance(a, ast.Continue):
        return _node(a, "Continue", [])
    if isinstance(a, ast.Pass):
        return _node(a, "Pass", [])
    if isinstance(a, ast.Expr):
        return _node(a, "Expr", [_lower(a.value)])
    if isinstance(a, ast.Call):
        children = [_lower(a.func)] + _lower_all(a.args)
        children += [_lower(kw.value) for kw in a.keywords]
        return _node(a, "Call", children)
    if isinstance(a, ast.Attribute):
        return _node(a, "Attribute", [_lower(a.value)], name=a.attr,
                     ctx="store" if isinstance(a.ctx, ast.Store) else "load")
    if isinstance(a, ast.Name):
        ctx = "store" if isinstance(a.ctx, (ast.Store, ast.Del)) else "load"
        return _node(a, "Name", [], name=a.id, ctx=ctx)
    if isinstance(a, ast.BinOp):
        return _node(a, "BinOp", [_lower(a.left), _lower(a.right)],
                     op=_BINOPS[type(a.op)])
    if isinstance(a, ast.UnaryOp):
        return _node(a, "UnaryOp", [_lower(a.operand)], op=_UNARYOPS[type(a.op)])
    if isinstance(a, ast.BoolOp):
        return _node(a, "BoolOp", _lower_all(a.values),
                     op="and" if isinstance(a.op, ast.And) else "or")
    if isinstance(a, ast.Compare):
        tags = tuple(_CMPOPS[type(op)] for op in a.ops)
        return _node(a, "Compare", [_lower(a.left)] + _lower_all(a.comparators),
                     ops=tags)
    if isinstance(a, ast.Constant):
        return _node(a, "Constant", [], value=a.value)
    if isinstance(a, (ast.List, ast.Set)):
        kind = "List" if isinstance(a, ast.List) else "Set"
        return _node(a, kind, _lower_all(a.elts))
    if isinstance(a, ast.Tuple):
        return _node(a, "Tuple", _lower_all(a.elts))
    if isinstance(a, ast.Dict):
        children = _lower_all([k for k in a.keys if k is not None]) + _lower_all(a.values)
        return _node(a, "Dict", children)
    if isinstance(a, ast.Subscript):
        return _node(a, "Subscript", [_lower(a.value), _lower(a.slice)])
    if isinstance(a, ast.Slice):
        parts = [p for p in (a.lower, a.upper, a.step) if p is not None]
        return _node(a, "Slice", _lower_all(parts))
    if isinstance(a, ast.Starred):
        return _node(a, "Starred", [_lower(a.value)])
    if isinstance(a, ast.Lambda):
        args = a.args
        names = [p.arg for p in args.posonlyargs + args.args + args.kwonlyargs]
        return _node(a, "Lambda", _lower_all(args.defaults) + [_lower(a.body)],
                     params=tuple(names))
    if isinstance(a, ast.IfExp):
        return _node(a, "IfExp", [_lower(a.test), _lower(a.body), _lower(a.orelse)])
    if type(a) in _COMP_KINDS:
        children: list[Node] = []
        if isinstance(a, ast.DictComp):
            children += [_lower(a.key), _lower(a.value)]
        else:
            children.append(_lower(a.elt))
        for gen in a.generators:
            if gen.is_async:
                raise UnsupportedConstruct("async comprehension", a.lineno)
            clause = _node(a, "CompFor", [_lower(gen.target), _lower(gen.iter)])
            children.append(clause)
            for test in gen.ifs:
                children.append(_node(a, "CompIf", [_lower(test)]))
        return _node(a, "Comprehension", children)
    if isinstance(a, ast.Try):
        children = _lower_all(a.body)
        for handler in a.handlers:
            hchildren = (_lower_all([handler.type]) if handler.type else []) \
                + _lower_all(handler.body)
            children.append(_node(handler, "ExceptHandler", hchildren,
                                  name=handler.name))
        children += _lower_all(a.orelse) + _lower_all(a.finalbody)
        return _node(a, "Try", children)
    if isinstance(a, ast.Raise):
        parts = [p for p in (a.exc, a.cause) if p is not None]
        return _node(a, "Raise", _lower_all(parts))
    if isinstance(a, ast.With):
        children: list[Node] = []
        for item in a.items:
            children.append(_lower(item.context_expr))
            if item.optional_vars is not None:
                children.append(_lower(item.optional_vars))
        return _node(a, "With", children + _lower_all(a.body))
    if isinstance(a, ast.Assert):
        parts = [a.test] + ([a.msg] if a.msg else [])
        return _node(a, "Assert", _lower_all(parts))
    if isinstance(a, ast.Delete):
        return _node(a, "Delete", _lower_all(a.targets))
    if isinstance(a, ast.JoinedStr):
        parts = []
        for v in a.values:
            if isinstance(v, ast.FormattedValue):
                parts.append(_node(v, "FormattedValue", [_lower(v.value)]))
            else:
                parts.append(_lower(v))
        return _node(a, "FString", parts)
    if isinstance(a, ast.NamedExpr):
        return _node(a, "NamedExpr", [_lower(a.target), _lower(a.value)])

    raise UnsupportedConstruct(type(a).__name__, getattr(a, "lineno", 0))


def dump(module: AstModule, indent: int = 2) -> str:
    """Human-readable tree rendering for the --dump-ast debugging flag."""
    lines: list[str] = []

    def render(node: Node, depth: int) -> None:
        details = []
        if node.name is not None:
            details.append(f"name={node.name}")
        if node.op is not None:
            details.append(f"op={node.op}")
        if node.ops:
            details.append(f"ops={','.join(node.ops)}")
        if node.kind == "Constant":
            details.append(f"value={node.value!r}")
        if node.imports:
            details.append("imports=" + ",".join(f"{m}->{n}" for m, n in node.imports))
        suffix = (" [" + " ".join(details) + "]") if details else ""
        lines.append(" " * (indent * depth) + node.kind + suffix)
        for child in node.children:
            render(child, depth + 1)

    for top in module.body:
        render(top, 0)
    return "\n".join(lines)
