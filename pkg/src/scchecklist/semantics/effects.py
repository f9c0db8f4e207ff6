"""State-variable read and write sets per function."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..frontend import ast
from ..frontend.tokens import Span
from .symbols import SymbolTable


@dataclass(frozen=True)
class StateAccess:
    var: str
    span: Span
    node: ast.Node = field(compare=False, repr=False, default=None)  # type: ignore[assignment]


@dataclass
class StateEffect:
    writes: list[StateAccess] = field(default_factory=list)
    reads: list[StateAccess] = field(default_factory=list)
    # writes through local storage pointers, which are not followed
    aliased_writes: list[Span] = field(default_factory=list)

    @property
    def written_vars(self) -> frozenset[str]:
        return frozenset(w.var for w in self.writes)

    @property
    def read_vars(self) -> frozenset[str]:
        return frozenset(r.var for r in self.reads)


def root_identifier(expr: Optional[ast.Expression]) -> Optional[ast.Identifier]:
    """Follow index and member access down to the base identifier."""
    expr = ast.unparen(expr)
    while isinstance(expr, (ast.IndexAccess, ast.MemberAccess)):
        expr = ast.unparen(expr.base if isinstance(expr, ast.IndexAccess) else expr.expression)
    return expr if isinstance(expr, ast.Identifier) else None


def _targets(target: ast.Expression) -> list[ast.Expression]:
    target = ast.unparen(target)
    if isinstance(target, ast.TupleExpr):
        return [t for c in target.components if c is not None for t in _targets(c)]
    return [target]


def collect_state_effects(fn: ast.FunctionDef, symbols: SymbolTable) -> StateEffect:
    effect = StateEffect()
    if fn.body is None:
        return effect
    pure_targets: set[int] = set()  # roots written without being read

    def write(target: ast.Expression, node: ast.Node, also_read: bool) -> None:
        root = root_identifier(target)
        if root is None:
            return
        r = symbols.resolve(root)
        if r.kind == "state-var":
            effect.writes.append(StateAccess(root.name, node.span, node))
            if not also_read and ast.unparen(target) is root:
                pure_targets.add(id(root))
        elif r.kind in ("local", "param") and getattr(r.decl, "location", None) == "storage":
            effect.aliased_writes.append(node.span)

    for n in fn.body.walk():
        if isinstance(n, ast.Assignment):
            for t in _targets(n.target):
                write(t, n, n.op != "=")
        elif isinstance(n, ast.UnaryOp) and n.op in ("++", "--", "delete"):
            write(n.operand, n, n.op != "delete")
        elif isinstance(n, ast.Call):
            callee = ast.unparen(n.callee)
            if isinstance(callee, ast.MemberAccess) and callee.member in ("push", "pop"):
                write(callee.expression, n, True)
    for n in fn.body.walk():
        if isinstance(n, ast.Identifier) and id(n) not in pure_targets:
            if symbols.resolve(n).kind == "state-var":
                effect.reads.append(StateAccess(n.name, n.span, n))
    effect.writes.sort(key=lambda a: (a.span.start, a.var))
    effect.reads.sort(key=lambda a: (a.span.start, a.var))
    return effect
