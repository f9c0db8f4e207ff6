"""Design-phase rules D01-D04."""
from __future__ import annotations

from collections import defaultdict
from typing import Iterator

from ..frontend import ast
from ..semantics.context import AnalysisContext
from .helpers import (
    Finding,
    access_controlled,
    builtin_call,
    condition_roots,
    is_self_balance,
    linearized_contracts,
    register,
    unit_nodes,
)


@register("D01")
def strict_balance_equality(ctx: AnalysisContext, config) -> Iterator[Finding]:
    sym = ctx.symbols
    for _c, n in unit_nodes(ctx):
        if isinstance(n, ast.BinaryOp) and n.op in ("==", "!="):
            if is_self_balance(n.left, sym) or is_self_balance(n.right, sym):
                yield Finding(n.span, f"strict '{n.op}' comparison on the contract's own balance; forced ether deposits can break it")


def _has_circuit_breaker(ctx: AnalysisContext, c: ast.ContractDef, config) -> bool:
    sym = ctx.symbols
    chain = linearized_contracts(ctx, c.name)
    pattern = config.pattern("circuit_breaker_pattern")
    functions = [f for k in chain for f in k.functions]
    if any(pattern.search(m.name) for f in functions for m in f.modifiers):
        return True
    for f in functions:
        if f.body is not None and access_controlled(f, sym):
            if any(builtin_call(n, ("selfdestruct", "suicide"), sym) for n in f.body.walk()):
                return True
    bool_vars = {v.name for k in chain for v in k.state_vars if isinstance(v.type_name, ast.ElementaryType) and v.type_name.name == "bool"}
    if not bool_vars:
        return False
    tested: set[str] = set()
    bodies = [f.body for f in functions if f.body is not None] + [m.body for k in chain for m in k.modifiers if m.body is not None]
    for body in bodies:
        for cond in condition_roots(body, sym):
            for n in cond.walk():
                if isinstance(n, ast.Identifier) and n.name in bool_vars and sym.resolve(n).kind == "state-var":
                    tested.add(n.name)
    for f in functions:
        if f.body is None or not access_controlled(f, sym):
            continue
        facts = ctx.facts_of(f)
        written = facts.effects.written_vars if facts else frozenset()
        if written & tested:
            return True
    return False


@register("D02")
def missing_circuit_breaker(ctx: AnalysisContext, config) -> Iterator[Finding]:
    for c in ctx.unit.contracts:
        if c.kind not in ("contract", "abstract-contract"):
            continue
        mutating = [f for f in c.functions if f.kind == "function" and f.is_public and f.is_mutating]
        if mutating and not _has_circuit_breaker(ctx, c, config):
            yield Finding(c.name_span, f"contract '{c.name}' has state-changing entry points but no emergency stop")


@register("D03")
def push_payment_in_loop(ctx: AnalysisContext, config) -> Iterator[Finding]:
    for facts in ctx.functions:
        body = facts.function.body
        if body is None:
            continue
        in_loop: set[int] = set()
        for n in body.walk():
            if isinstance(n, (ast.For, ast.While, ast.DoWhile)):
                in_loop.update(id(x) for x in n.body.walk())
        for call in facts.calls:
            pays = call.kind == "value-transfer" or (call.kind == "low-level" and call.sends_value)
            if pays and id(call.node) in in_loop:
                yield Finding(call.span, f"ether sent with '{call.name}' inside a loop; prefer letting recipients withdraw")


@register("D04")
def c3_hazard(ctx: AnalysisContext, config) -> Iterator[Finding]:
    for c in ctx.unit.contracts:
        if len(c.bases) < 2:
            continue
        definers: dict[str, list[str]] = defaultdict(list)
        for anc in linearized_contracts(ctx, c.name)[1:]:
            names = {f.name for f in anc.functions if f.kind == "function"} | {m.name for m in anc.modifiers}
            for name in names:
                definers[name].append(anc.name)
        lin = ", ".join(ctx.linearizations[c.name])
        for name in sorted(definers):
            if len(definers[name]) >= 2:
                yield Finding(
                    c.name_span,
                    f"'{name}' is defined by {', '.join(definers[name])}; resolution follows the linearization [{lin}]",
                )
