"""Testing-phase rules T01-T02."""
from __future__ import annotations

from typing import Iterator, Optional, Sequence

from ..frontend import ast
from ..frontend.tokens import FILE_START
from ..semantics.context import AnalysisContext
from .helpers import Finding, builtin_call, register


def check_pragma_lock(pragmas: Sequence[ast.PragmaDirective]) -> Optional[Finding]:
    solidity = [p for p in pragmas if p.name == "solidity"]
    if not solidity:
        return Finding(FILE_START, "no solidity version pragma; pin an exact compiler version")
    for p in solidity:
        if p.constraint is None or not p.constraint.is_exact:
            return Finding(p.span, f"version pragma 'solidity {p.value}' is not pinned to one compiler version")
    return None


@register("T01")
def unlocked_pragma(ctx: AnalysisContext, config) -> Iterator[Finding]:
    f = check_pragma_lock(ctx.unit.pragmas)
    if f is not None:
        yield f


def assert_inventory(ctx: AnalysisContext) -> dict[str, int]:
    """assert() calls per contract (interfaces excluded)."""
    out = {}
    for c in ctx.unit.contracts:
        if c.kind == "interface":
            continue
        bodies = [f.body for f in c.functions if f.body is not None] + [m.body for m in c.modifiers if m.body is not None]
        out[c.name] = sum(1 for b in bodies for n in b.walk() if builtin_call(n, ("assert",), ctx.symbols))
    return out


@register("T02")
def assert_guard_inventory(ctx: AnalysisContext, config) -> Iterator[Finding]:
    counts = assert_inventory(ctx)
    for c in ctx.unit.contracts:
        if c.kind not in ("contract", "abstract-contract"):
            continue
        writes = any(f.effects.writes for f in ctx.facts_for(c.name))
        if writes and counts.get(c.name, 0) == 0:
            yield Finding(c.name_span, f"contract '{c.name}' writes state but has no assert() invariant checks")
