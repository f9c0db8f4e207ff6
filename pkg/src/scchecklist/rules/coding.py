"""Coding-phase rules C01-C13."""
from __future__ import annotations

import re
from typing import Iterator, Optional

from ..frontend import ast
from ..frontend.printer import expr_str
from ..frontend.tokens import Span
from ..semantics.calls import CallSite, is_type_conversion
from ..semantics.cfg import Cfg
from ..semantics.context import AnalysisContext, FunctionFacts
from ..semantics.effects import StateEffect
from ..semantics.symbols import SymbolTable, is_integer, type_of
from .helpers import (
    ARITHMETIC,
    COMPARISONS,
    Finding,
    builtin_call,
    condition_roots,
    contract_roots,
    count_statements,
    ids_within,
    is_builtin,
    is_global_member,
    is_guard_call,
    is_int_literal,
    is_self_balance,
    mentions_msg_sender,
    register,
    reverts,
    unit_nodes,
)


@register("C01")
def unchecked_low_level_call(ctx: AnalysisContext, config) -> Iterator[Finding]:
    for facts in ctx.functions:
        for call in facts.calls:
            if call.kind == "low-level" and not call.result_used:
                yield Finding(call.span, f"return value of low-level '{call.name}' is not checked")


# ------------------------------------------------------------------ C02


def _in_subtree(node: ast.Node, root: Optional[ast.Node]) -> bool:
    return root is not None and any(n is node for n in root.walk())


def detect_cei_violation(fn: ast.FunctionDef, cfg: Cfg, calls: list[CallSite], effects: StateEffect) -> list[tuple[Span, Span]]:
    """(external call, state write) pairs where the write can run after the call."""
    pairs = []
    for call in calls:
        if not call.is_external:
            continue
        call_item = cfg.item_of(call.node)
        if call_item is None:
            continue
        for w in effects.writes:
            w_item = cfg.item_of(w.node)
            if w_item is None:
                continue
            if w_item is call_item:
                # same statement: only `x = ext()` orders the write after the call
                after = isinstance(w.node, ast.Assignment) and _in_subtree(call.node, w.node.value)
            else:
                after = cfg.happens_after(call_item, w_item)
            if after:
                pairs.append((call.span, w.span))
    return pairs


def _calls_after(cfg: Cfg, calls: list[CallSite]) -> list[tuple[Span, Span]]:
    ext = [c for c in calls if c.is_external]
    pairs = []
    for a in ext:
        ia = cfg.item_of(a.node)
        for b in ext:
            if a is b:
                continue
            ib = cfg.item_of(b.node)
            if ia is None or ib is None or ia is ib:
                continue
            if cfg.happens_after(ia, ib):
                pairs.append((a.span, b.span))
    return pairs


def _is_mutex_modifier(m: ast.ModifierDef, symbols: SymbolTable) -> bool:
    """Sets a state flag before the placeholder and resets it after."""
    if m.body is None:
        return False
    stmts = list(m.body.statements)
    idx = next((i for i, s in enumerate(stmts) if isinstance(s, ast.Placeholder)), None)
    if idx is None:
        return False

    def assigned(part) -> set[str]:
        out = set()
        for s in part:
            for n in s.walk():
                if isinstance(n, ast.Assignment) and isinstance(ast.unparen(n.target), ast.Identifier):
                    t = ast.unparen(n.target)
                    if symbols.resolve(t).kind == "state-var":  # type: ignore[arg-type]
                        out.add(t.name)  # type: ignore[union-attr]
        return out

    return bool(assigned(stmts[:idx]) & assigned(stmts[idx + 1 :]))


def _mutex_guarded(ctx: AnalysisContext, facts: FunctionFacts, pattern: re.Pattern[str]) -> bool:
    for inv in facts.function.modifiers:
        if pattern.search(inv.name):
            return True
        m = ctx.modifier(facts.contract.name, inv.name)
        if m is not None and _is_mutex_modifier(m, ctx.symbols):
            return True
    return False


@register("C02")
def reentrancy_cei(ctx: AnalysisContext, config) -> Iterator[Finding]:
    pattern = config.pattern("mutex_name_pattern")
    for facts in ctx.functions:
        if facts.cfg is None or not any(c.is_external for c in facts.calls):
            continue
        if _mutex_guarded(ctx, facts, pattern):
            continue
        later: dict[Span, list[Span]] = {}
        for call_span, other in detect_cei_violation(facts.function, facts.cfg, facts.calls, facts.effects):
            later.setdefault(call_span, []).append(other)
        for call_span, other in _calls_after(facts.cfg, facts.calls):
            later.setdefault(call_span, []).append(other)
        for call in facts.calls:
            spans = later.get(call.span)
            if not spans:
                continue
            writes = sum(1 for s in spans if any(w.span == s for w in facts.effects.writes))
            calls = len(set(spans)) - writes
            parts = []
            if writes:
                parts.append("state write" + ("s" if writes > 1 else ""))
            if calls > 0:
                parts.append("external call" + ("s" if calls > 1 else ""))
            yield Finding(
                call.span,
                f"external call '{call.name or 'call'}' in '{facts.function.display_name}' can be followed by {' and '.join(parts)}",
                tuple(sorted({call.span, *spans})),
            )


# ------------------------------------------------------------------ C03


def _full_balance_transfer(call: CallSite, symbols: SymbolTable) -> bool:
    if call.kind == "value-transfer" or (call.kind == "low-level" and call.name == "send"):
        return bool(call.node.args) and is_self_balance(call.node.args[0], symbols)
    node = call.node
    while node is not None:
        if any(o.name == "value" and is_self_balance(o.value, symbols) for o in node.options):
            return True
        callee = ast.unparen(node.callee)
        if isinstance(callee, ast.Call) and isinstance(ast.unparen(callee.callee), ast.MemberAccess):
            if ast.unparen(callee.callee).member == "value" and callee.args and is_self_balance(callee.args[0], symbols):  # type: ignore[union-attr]
                return True
            node = callee
        else:
            node = None
    return False


def _guard_items(facts: FunctionFacts, ctx: AnalysisContext) -> list[ast.Node]:
    """Items in the CFG that check msg.sender (directly or via an internal guard function)."""
    sym = ctx.symbols
    out = []
    assert facts.cfg is not None
    for item in facts.cfg.items():
        if isinstance(item, (ast.If, ast.While)) and mentions_msg_sender(item.condition, sym):
            out.append(item)
        elif isinstance(item, ast.ExpressionStatement):
            e = ast.unparen(item.expression)
            if is_guard_call(e, sym) and mentions_msg_sender(e, sym):
                out.append(item)
            elif isinstance(e, ast.Call) and isinstance(ast.unparen(e.callee), ast.Identifier):
                r = sym.resolve(ast.unparen(e.callee))  # type: ignore[arg-type]
                if r.kind == "function" and isinstance(r.decl, ast.FunctionDef) and r.decl.body is not None:
                    if any(mentions_msg_sender(c, sym) for c in condition_roots(r.decl.body, sym)):
                        out.append(item)
    return out


@register("C03")
def missing_access_control(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    owner_re = re.compile(config.threshold("owner_name_pattern"), re.IGNORECASE)
    for facts in ctx.functions:
        fn = facts.function
        if fn.kind == "constructor" or not fn.is_public or fn.body is None or fn.modifiers or facts.cfg is None:
            continue
        critical: list[tuple[ast.Node, str]] = []
        for call in facts.calls:
            if call.kind == "builtin" and call.name in ("selfdestruct", "suicide"):
                critical.append((call.node, f"'{call.name}'"))
            elif call.kind in ("value-transfer", "low-level") and _full_balance_transfer(call, sym):
                critical.append((call.node, "transfer of the full contract balance"))
        for w in facts.effects.writes:
            if owner_re.search(w.var):
                critical.append((w.node, f"write to '{w.var}'"))
        if not critical:
            continue
        guards = _guard_items(facts, ctx)
        for node, what in critical:
            item = facts.cfg.item_of(node)
            if item is None:
                continue
            if any(facts.cfg.dominates(g, item) for g in guards):
                continue
            yield Finding(node.span, f"{what} in '{fn.display_name}' is reachable without a caller check")


# ------------------------------------------------------------------ C04


@register("C04")
def tx_origin_auth(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    for c in ctx.unit.contracts:
        for root in contract_roots(c):
            conds = list(condition_roots(root, sym))
            in_cond = ids_within(conds)
            auth = ids_within(n for n in root.walk() if isinstance(n, ast.BinaryOp) and n.op in COMPARISONS and id(n) in in_cond)
            for n in root.walk():
                if isinstance(n, ast.MemberAccess) and is_global_member(n, "tx.origin", sym):
                    if id(n) in auth:
                        yield Finding(n.span, "tx.origin used for authorization; compare msg.sender instead", severity="error")
                    else:
                        yield Finding(n.span, "tx.origin read; it must not feed authorization decisions", severity="warning")


# ------------------------------------------------------------------ C05


def _arith_ops(root: ast.Node) -> Iterator[ast.Node]:
    for n in root.walk():
        if isinstance(n, ast.BinaryOp) and n.op in ("+", "-", "*", "**"):
            yield n
        elif isinstance(n, ast.Assignment) and n.op in ("+=", "-=", "*="):
            yield n


def _integer_operands(n: ast.Node, sym: SymbolTable, contract: str) -> bool:
    operands = (n.left, n.right) if isinstance(n, ast.BinaryOp) else (n.target, n.value)  # type: ignore[union-attr]
    return any(is_integer(type_of(o, sym, contract)) for o in operands)


@register("C05")
def unchecked_arithmetic(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    pragmas = [p for p in ctx.unit.solidity_pragmas if p.constraint is not None]
    legacy = not pragmas or any(p.constraint.allows_below((0, 8, 0)) for p in pragmas)
    safemath = config.pattern("safemath_name_pattern")
    for c in ctx.unit.contracts:
        if c.kind == "interface":
            continue
        roots: list[ast.Node] = [f.body for f in c.functions if f.body is not None] + [m.body for m in c.modifiers if m.body is not None]
        if legacy:
            # the safe-math library itself and its users are checked arithmetic
            if any(safemath.search(u.library) for u in c.using) or (c.kind == "library" and safemath.search(c.name)):
                continue
            where = "without overflow checks (pre-0.8 compiler admitted)"
        else:
            roots = [n for r in roots for n in r.walk() if isinstance(n, ast.UncheckedBlock)]
            where = "inside an unchecked block"
        seen: set[int] = set()
        for root in roots:
            for op in _arith_ops(root):
                if id(op) in seen or not _integer_operands(op, sym, c.name):
                    continue
                seen.add(id(op))
                yield Finding(op.span, f"integer '{op.op}' {where}")  # type: ignore[union-attr]


# ------------------------------------------------------------------ C06


def _is_div(e: Optional[ast.Expression]) -> bool:
    e = ast.unparen(e)
    return isinstance(e, ast.BinaryOp) and e.op == "/"


@register("C06")
def divide_before_multiply(ctx: AnalysisContext, config) -> Iterator[Finding]:
    for _c, n in unit_nodes(ctx):
        if isinstance(n, ast.BinaryOp) and n.op == "*" and (_is_div(n.left) or _is_div(n.right)):
            yield Finding(n.span, "multiplication of a truncated division result; multiply before dividing")
        elif isinstance(n, ast.Assignment) and n.op == "*=" and _is_div(n.value):
            yield Finding(n.span, "multiplication of a truncated division result; multiply before dividing")


# ------------------------------------------------------------------ C07


def _guard_expressions(fn: ast.FunctionDef, sym: SymbolTable) -> list[ast.Node]:
    out: list[ast.Node] = [a for m in fn.modifiers for a in (m.args or ())]
    assert fn.body is not None
    for n in fn.body.walk():
        if is_guard_call(n, sym):
            out.extend(n.args)  # type: ignore[union-attr]
        elif isinstance(n, ast.If) and (reverts(n.then, sym) or reverts(n.orelse, sym)):
            out.append(n.condition)
    return out


@register("C07")
def missing_input_validation(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    for facts in ctx.functions:
        fn = facts.function
        named = [p for p in fn.params if p.name]
        if fn.kind != "function" or not fn.is_public or fn.body is None or not named:
            continue
        guarded = ids_within(_guard_expressions(fn, sym))
        uses: list[ast.Identifier] = []
        for root in [*fn.modifiers, fn.body]:
            for n in root.walk():
                if isinstance(n, ast.Identifier) and sym.resolve(n).kind == "param":
                    uses.append(n)
        validated = False
        for p in named:
            mine = [u for u in uses if sym.resolve(u).decl is p]
            # modifier arguments come first in evaluation order
            if mine and id(mine[0]) in guarded:
                validated = True
                break
        if not validated:
            yield Finding(fn.name_span, f"'{fn.display_name}' uses its parameters without require/assert/revert validation")


# ------------------------------------------------------------------ C08


def _is_constant(e: Optional[ast.Expression], sym: SymbolTable) -> bool:
    e = ast.unparen(e)
    if is_int_literal(e) is not None or isinstance(e, ast.Literal):
        return True
    if isinstance(e, ast.Identifier):
        r = sym.resolve(e)
        return r.kind == "state-var" and getattr(r.decl, "mutability", None) == "constant"
    return False


def _mutable_state(e: Optional[ast.Expression], sym: SymbolTable) -> bool:
    e = ast.unparen(e)
    while isinstance(e, (ast.MemberAccess, ast.IndexAccess)):
        e = ast.unparen(e.expression if isinstance(e, ast.MemberAccess) else e.base)
    if not isinstance(e, ast.Identifier):
        return False
    r = sym.resolve(e)
    return r.kind == "state-var" and getattr(r.decl, "mutability", None) not in ("constant", "immutable")


def _conjuncts(e: ast.Expression) -> list[ast.Expression]:
    e = ast.unparen(e)
    if isinstance(e, ast.BinaryOp) and e.op == "&&":
        return _conjuncts(e.left) + _conjuncts(e.right)
    return [e]


def _unbounded_operands(cond: ast.Expression, sym: SymbolTable, contract: str) -> list[ast.Expression]:
    found = []
    for n in cond.walk():
        if isinstance(n, ast.MemberAccess) and n.member == "length" and _mutable_state(n.expression, sym):
            t = type_of(n.expression, sym, contract)
            if isinstance(t, ast.ArrayType) and t.is_dynamic or isinstance(t, ast.ElementaryType) and t.name in ("bytes", "string"):
                found.append(n)
        elif isinstance(n, ast.BinaryOp) and n.op in COMPARISONS - {"=="}:
            for side in (n.left, n.right):
                s = ast.unparen(side)
                if isinstance(s, ast.Identifier) and _mutable_state(s, sym):
                    found.append(s)
    return found


def _caps_constant(e: ast.Expression, sym: SymbolTable) -> bool:
    e = ast.unparen(e)
    return isinstance(e, ast.BinaryOp) and e.op in COMPARISONS and (_is_constant(e.left, sym) or _is_constant(e.right, sym))


@register("C08")
def unbounded_loop(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    for facts in ctx.functions:
        body, cfg = facts.function.body, facts.cfg
        if body is None or cfg is None:
            continue
        for loop in body.walk():
            if not isinstance(loop, (ast.For, ast.While, ast.DoWhile)) or loop.condition is None:
                continue
            unbounded = _unbounded_operands(loop.condition, sym, facts.contract.name)
            if not unbounded:
                continue
            if any(_caps_constant(c, sym) for c in _conjuncts(loop.condition)):
                continue
            texts = {expr_str(u) for u in unbounded}
            capped = False
            for item in cfg.items():
                if isinstance(item, ast.ExpressionStatement) and is_guard_call(item.expression, sym) and cfg.dominates(item, loop):
                    for arg in item.expression.args:  # type: ignore[union-attr]
                        for c in _conjuncts(arg):
                            if _caps_constant(c, sym) and any(expr_str(x) in texts for x in (c.left, c.right)):  # type: ignore[union-attr]
                                capped = True
            if capped:
                continue
            names = ", ".join(sorted(texts))
            yield Finding(loop.condition.span, f"loop bound depends on growing state ({names}) with no constant cap")


# ------------------------------------------------------------------ C09


def _checks_empty_calldata(body: ast.Node, sym: SymbolTable) -> bool:
    for n in body.walk():
        if isinstance(n, ast.BinaryOp) and n.op == "==":
            sides = (n.left, n.right)
            if any(is_global_member(s, "msg.data.length", sym) for s in sides) and any(is_int_literal(s) == 0 for s in sides):
                return True
    return False


@register("C09")
def fallback_hygiene(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    limit = int(config.threshold("fallback_max_statements"))
    for facts in ctx.functions:
        fn = facts.function
        if fn.kind not in ("fallback", "receive"):
            continue
        if fn.kind == "fallback" and fn.returns:
            yield Finding(fn.name_span, "fallback declares return values")
        if fn.body is None:
            continue
        n = count_statements(fn.body)
        if n > limit:
            yield Finding(fn.name_span, f"{fn.kind} has {n} statements, more than the limit of {limit}")
        for call in facts.calls:
            if call.is_external:
                yield Finding(call.span, f"{fn.kind} makes an external call '{call.name or 'call'}'")
        stmts = fn.body.statements
        if fn.kind == "fallback" and stmts and all(isinstance(s, ast.Emit) for s in stmts) and not _checks_empty_calldata(fn.body, sym):
            yield Finding(fn.name_span, "logging-only fallback does not require msg.data.length == 0", severity="info")


# ------------------------------------------------------------------ C10


@register("C10")
def builtin_shadowing(ctx: AnalysisContext, config) -> Iterator[Finding]:
    for s in ctx.symbols.shadowing:
        yield Finding(s.span, f"{s.kind} '{s.name}' shadows a built-in global")


# ------------------------------------------------------------------ C11


def _is_contract_cast(call: ast.Call, sym: SymbolTable) -> bool:
    if not is_type_conversion(call, sym):
        return False
    callee = ast.unparen(call.callee)
    r = sym.resolve(callee)  # type: ignore[arg-type]
    if r.kind == "type":
        return isinstance(r.decl, ast.ContractDef) and r.decl.kind != "library"
    return True  # capitalised unknown name: an imported contract or interface


def _param_ref(e: Optional[ast.Expression], sym: SymbolTable) -> Optional[ast.Parameter]:
    e = ast.unparen(e)
    while isinstance(e, ast.TypeCast):
        e = ast.unparen(e.expression)
    if isinstance(e, ast.Identifier):
        r = sym.resolve(e)
        if r.kind == "param" and isinstance(r.decl, ast.Parameter):
            return r.decl
    return None


@register("C11")
def address_param_interface(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    for facts in ctx.functions:
        fn = facts.function
        if fn.body is None:
            continue
        address_params = [p for p in fn.params if p.name and isinstance(p.type_name, ast.ElementaryType) and p.type_name.name == "address"]
        if not address_params:
            continue
        used: dict[int, str] = {}
        for n in fn.body.walk():
            if isinstance(n, ast.Call) and len(n.args) == 1 and _is_contract_cast(n, sym):
                p = _param_ref(n.args[0], sym)
                if p is not None:
                    used.setdefault(id(p), f"cast to '{expr_str(n.callee)}'")
        for call in facts.calls:
            if call.kind == "low-level":
                p = _param_ref(call.target, sym)
                if p is not None:
                    used.setdefault(id(p), f"target of '{call.name}'")
        for p in address_params:
            if id(p) in used:
                yield Finding(p.name_span, f"address parameter '{p.name}' is {used[id(p)]}; declare it with the contract or interface type")


# ------------------------------------------------------------------ C12 / C13

_BLOCK_SOURCES = ("block.timestamp", "block.difficulty", "block.number", "block.prevrandao")


def _block_source(n: ast.Node, sym: SymbolTable) -> Optional[str]:
    if isinstance(n, ast.MemberAccess):
        for path in _BLOCK_SOURCES:
            if is_global_member(n, path, sym):
                return path
    elif isinstance(n, ast.Identifier) and n.name == "now" and is_builtin(n, "now", sym):
        return "now"
    elif builtin_call(n, ("blockhash",), sym):
        return "blockhash"
    return None


@register("C12")
def weak_randomness(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    seen: set[int] = set()
    for _c, n in unit_nodes(ctx):
        if builtin_call(n, ("keccak256", "sha256", "sha3"), sym):
            scopes = list(n.args)  # type: ignore[union-attr]
            why = "hashed"
        elif isinstance(n, ast.BinaryOp) and n.op == "%":
            scopes = [n.left, n.right]
            why = "reduced with %"
        else:
            continue
        for scope in scopes:
            for x in scope.walk():
                src = _block_source(x, sym)
                if src is not None and id(x) not in seen:
                    seen.add(id(x))
                    yield Finding(x.span, f"'{src}' {why} as a source of randomness")


def _is_timestamp(n: ast.Node, sym: SymbolTable) -> bool:
    return is_global_member(n, "block.timestamp", sym) or (isinstance(n, ast.Identifier) and n.name == "now" and is_builtin(n, "now", sym))


@register("C13")
def timestamp_dependence(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    seen: set[int] = set()
    for c in ctx.unit.contracts:
        for root in contract_roots(c):
            conds = list(condition_roots(root, sym))
            in_cond = ids_within(conds)
            for n in root.walk():
                if isinstance(n, ast.BinaryOp) and n.op in COMPARISONS and id(n) in in_cond:
                    for x in n.walk():
                        if _is_timestamp(x, sym) and id(x) not in seen:
                            seen.add(id(x))
                            yield Finding(x.span, "branch depends on the block timestamp, which block producers can shift")
                if isinstance(n, ast.BinaryOp) and n.op in ARITHMETIC:
                    for a, b in ((n.left, n.right), (n.right, n.left)):
                        lit = is_int_literal(b)
                        if is_global_member(a, "block.number", sym) and lit is not None and lit >= 2 and id(ast.unparen(a)) not in seen:
                            seen.add(id(ast.unparen(a)))
                            yield Finding(ast.unparen(a).span, f"block.number combined with {lit} looks like a time estimate")  # type: ignore[union-attr]
