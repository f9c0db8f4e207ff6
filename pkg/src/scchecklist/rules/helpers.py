"""AST queries shared by several rules."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from ..frontend import ast
from ..frontend.tokens import Span
from ..semantics.context import AnalysisContext
from ..semantics.symbols import SymbolTable

COMPARISONS = frozenset(["==", "!=", "<", ">", "<=", ">="])
ARITHMETIC = frozenset(["+", "-", "*", "/", "%", "**"])


@dataclass(frozen=True)
class Finding:
    span: Span
    message: str
    evidence: tuple[Span, ...] = ()
    severity: Optional[str] = None  # None means the rule's default


RuleFn = Callable[["AnalysisContext", object], Iterable[Finding]]
RULE_FUNCS: dict[str, RuleFn] = {}


def register(rule_id: str) -> Callable[[RuleFn], RuleFn]:
    def deco(fn: RuleFn) -> RuleFn:
        RULE_FUNCS[rule_id] = fn
        return fn

    return deco


def is_builtin(expr: Optional[ast.Expression], name: str, symbols: SymbolTable) -> bool:
    expr = ast.unparen(expr)
    return isinstance(expr, ast.Identifier) and expr.name == name and symbols.resolve(expr).kind in ("builtin", "unknown")


def is_global_member(expr: Optional[ast.Expression], path: str, symbols: SymbolTable) -> bool:
    """``expr`` is e.g. ``block.timestamp`` with ``block`` not redeclared."""
    expr = ast.unparen(expr)
    if not isinstance(expr, ast.MemberAccess) or ast.member_path(expr) != path:
        return False
    root = expr
    while isinstance(root, ast.MemberAccess):
        root = ast.unparen(root.expression)
    return isinstance(root, ast.Identifier) and symbols.resolve(root).kind in ("builtin", "unknown")


def builtin_call(node: ast.Node, names: Iterable[str], symbols: SymbolTable) -> bool:
    if not isinstance(node, ast.Call):
        return False
    callee = ast.unparen(node.callee)
    return isinstance(callee, ast.Identifier) and callee.name in names and symbols.resolve(callee).kind in ("builtin", "unknown")


def is_guard_call(node: ast.Node, symbols: SymbolTable) -> bool:
    return builtin_call(node, ("require", "assert"), symbols)


def mentions_msg_sender(node: Optional[ast.Node], symbols: SymbolTable) -> bool:
    if node is None:
        return False
    return any(is_global_member(n, "msg.sender", symbols) for n in node.walk() if isinstance(n, ast.MemberAccess))


def is_this(expr: Optional[ast.Expression], symbols: SymbolTable) -> bool:
    return is_builtin(expr, "this", symbols)


def is_self_balance(expr: Optional[ast.Expression], symbols: SymbolTable) -> bool:
    """``address(this).balance`` or legacy ``this.balance``."""
    expr = ast.unparen(expr)
    if not isinstance(expr, ast.MemberAccess) or expr.member != "balance":
        return False
    base = ast.unparen(expr.expression)
    while isinstance(base, ast.TypeCast) and base.type_name.name == "address":
        base = ast.unparen(base.expression)
    return is_this(base, symbols)


def reverts(stmt: Optional[ast.Node], symbols: SymbolTable) -> bool:
    if stmt is None:
        return False
    for n in stmt.walk():
        if isinstance(n, ast.RevertStatement) or builtin_call(n, ("revert",), symbols):
            return True
    return False


def contract_roots(c: ast.ContractDef) -> Iterator[ast.Node]:
    """Every subtree of ``c`` that can hold expressions."""
    for v in c.state_vars:
        if v.value is not None:
            yield v.value
    for f in c.functions:
        for m in f.modifiers:
            yield m
        if f.body is not None:
            yield f.body
    for m in c.modifiers:
        if m.body is not None:
            yield m.body


def unit_nodes(ctx: AnalysisContext) -> Iterator[tuple[ast.ContractDef, ast.Node]]:
    for c in ctx.unit.contracts:
        for root in contract_roots(c):
            for n in root.walk():
                yield c, n


def condition_roots(root: ast.Node, symbols: SymbolTable) -> Iterator[ast.Expression]:
    """Expressions that decide control flow: branch/loop conditions and guard arguments."""
    for n in root.walk():
        if isinstance(n, (ast.If, ast.While, ast.DoWhile)):
            yield n.condition
        elif isinstance(n, ast.For):
            if n.condition is not None:
                yield n.condition
        elif isinstance(n, ast.Conditional):
            yield n.condition
        elif is_guard_call(n, symbols):
            yield from n.args  # type: ignore[union-attr]


def ids_within(exprs: Iterable[ast.Node]) -> set[int]:
    out: set[int] = set()
    for e in exprs:
        for n in e.walk():
            out.add(id(n))
    return out


def count_statements(stmt: Optional[ast.Statement]) -> int:
    """Statements inside ``stmt``, not counting block wrappers."""
    if stmt is None:
        return 0
    return sum(1 for n in stmt.walk() if isinstance(n, ast.Statement) and not isinstance(n, (ast.Block, ast.UncheckedBlock)))


def access_controlled(fn: ast.FunctionDef, symbols: SymbolTable) -> bool:
    """Has a modifier, or checks msg.sender in a guard or branch condition."""
    if fn.modifiers:
        return True
    if fn.body is None:
        return False
    return any(mentions_msg_sender(c, symbols) for c in condition_roots(fn.body, symbols))


def linearized_contracts(ctx: AnalysisContext, contract: str) -> list[ast.ContractDef]:
    return [ctx.contracts[n] for n in ctx.linearizations.get(contract, [contract]) if n in ctx.contracts]


def is_int_literal(expr: Optional[ast.Expression]) -> Optional[int]:
    expr = ast.unparen(expr)
    if isinstance(expr, ast.Literal) and expr.unit is None:
        return expr.int_value()
    return None
