"""Classify every call expression in a function body."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from ..frontend import ast
from ..frontend.tokens import Span
from .symbols import SymbolTable, is_address, is_contract_typed, type_of

CALL_KINDS = ("low-level", "value-transfer", "external-high-level", "internal", "builtin", "event-emit")
LOW_LEVEL_MEMBERS = frozenset(["call", "delegatecall", "staticcall", "send"])
EXTERNAL_KINDS = frozenset(["low-level", "value-transfer", "external-high-level"])
_BUILTIN_BASES = frozenset(["abi", "msg", "tx", "block", "string", "bytes", "type"])


@dataclass(frozen=True)
class CallSite:
    span: Span
    kind: str
    result_used: bool
    name: str  # member or function name, "" when not nameable
    sends_value: bool = False
    node: ast.Call = field(compare=False, repr=False, default=None)  # type: ignore[assignment]
    target: Optional[ast.Expression] = field(compare=False, repr=False, default=None)

    @property
    def is_external(self) -> bool:
        return self.kind in EXTERNAL_KINDS


def is_type_conversion(call: ast.Call, table: SymbolTable) -> bool:
    """Contract casts like ``IERC20(x)`` and struct constructors are not calls."""
    callee = ast.unparen(call.callee)
    if isinstance(callee, ast.Identifier):
        r = table.resolve(callee)
        if r.kind == "type":
            return True
        if r.kind == "unknown" and callee.name[:1].isupper() and len(call.args) == 1 and call.arg_names is None:
            return True
    return False


def _is_option_setter(call: ast.Call) -> bool:
    callee = ast.unparen(call.callee)
    return isinstance(callee, ast.MemberAccess) and callee.member in ("value", "gas")


def iter_calls(root: Optional[ast.Node]) -> Iterator[ast.Call]:
    if root is None:
        return
    for n in root.walk():
        if isinstance(n, ast.Call):
            yield n


def call_expressions(root: Optional[ast.Node], table: SymbolTable) -> list[ast.Call]:
    """Call nodes that denote a call (casts and legacy ``.value()`` setters excluded)."""
    calls = list(iter_calls(root))
    setters = set()
    for c in calls:
        inner = ast.unparen(c.callee)
        while isinstance(inner, ast.Call) and _is_option_setter(inner):
            setters.add(id(inner))
            inner = ast.unparen(inner.callee.expression)  # type: ignore[union-attr]
    return [c for c in calls if id(c) not in setters and not is_type_conversion(c, table)]


def classify_calls(fn: ast.FunctionDef, symbols: SymbolTable, contract: str) -> list[CallSite]:
    """One CallSite per call expression in ``fn``'s body, in source order."""
    if fn.body is None:
        return []
    bare: set[int] = set()
    emitted: set[int] = set()
    for n in fn.body.walk():
        if isinstance(n, ast.ExpressionStatement):
            bare.add(id(n.expression))
        elif isinstance(n, ast.Emit):
            emitted.add(id(n.call))
    sites = [_classify(c, symbols, contract, id(c) not in bare, id(c) in emitted) for c in call_expressions(fn.body, symbols)]
    sites.sort(key=lambda s: (s.span.start, s.span.end))
    return sites


def _classify(call: ast.Call, table: SymbolTable, contract: str, used: bool, emitted: bool) -> CallSite:
    callee = ast.unparen(call.callee)
    sends_value = any(o.name == "value" for o in call.options)
    while isinstance(callee, ast.Call) and _is_option_setter(callee):
        setter = ast.unparen(callee.callee)
        sends_value = sends_value or setter.member == "value"  # type: ignore[union-attr]
        callee = ast.unparen(setter.expression)  # type: ignore[union-attr]

    def site(kind: str, name: str = "", target=None, value: bool = sends_value) -> CallSite:
        return CallSite(call.span, kind, used, name, value, call, target)

    if emitted:
        return site("event-emit", _name(callee))
    if isinstance(callee, ast.MemberAccess):
        member, base = callee.member, ast.unparen(callee.expression)
        base_t = type_of(base, table, contract)
        if member in LOW_LEVEL_MEMBERS:
            return site("low-level", member, base, sends_value or member == "send")
        if member == "transfer" and len(call.args) == 1 and not is_contract_typed(base_t, table, contract):
            return site("value-transfer", member, base, True)
        if isinstance(base, ast.Identifier):
            r = table.resolve(base)
            if r.kind == "builtin":
                if base.name == "this":
                    return site("external-high-level", member, base)
                if base.name == "super":
                    return site("internal", member, base)
                if base.name in _BUILTIN_BASES:
                    return site("builtin", member, base)
            elif r.kind == "type":
                if isinstance(r.decl, ast.ContractDef):
                    return site("internal", member, base)
                return site("builtin", member, base)
            elif r.kind == "unknown":
                return site("external-high-level", member, base)
        if member in ("push", "pop") and (isinstance(base_t, ast.ArrayType) or (isinstance(base_t, ast.ElementaryType) and base_t.name == "bytes")):
            return site("builtin", member, base)
        if is_contract_typed(base_t, table, contract) or is_address(base_t):
            return site("external-high-level", member, base)
        if base_t is not None:
            # bound library function through `using X for T`
            return site("internal", member, base)
        return site("external-high-level", member, base)
    if isinstance(callee, ast.Identifier):
        r = table.resolve(callee)
        if r.kind == "builtin":
            return site("builtin", callee.name)
        if r.kind == "event":
            return site("event-emit", callee.name)
        # bare-name calls cannot leave the contract
        return site("internal", callee.name)
    if isinstance(callee, ast.NewExpr):
        t = callee.type_name
        if isinstance(t, ast.UserType) and t.name in table.contracts:
            return site("internal", t.name)
        if isinstance(t, (ast.ArrayType, ast.ElementaryType)):
            return site("builtin", "new")
        return site("external-high-level", _name(t))
    return site("external-high-level")


def _name(node) -> str:
    if isinstance(node, ast.Identifier):
        return node.name
    if isinstance(node, ast.MemberAccess):
        return node.member
    if isinstance(node, ast.UserType):
        return node.name
    if isinstance(node, ast.Call):
        return _name(ast.unparen(node.callee))
    return ""
