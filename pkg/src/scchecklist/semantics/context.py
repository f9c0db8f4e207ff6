"""Per-file analysis context consumed by the rules."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..frontend import ast
from ..frontend.tokens import Span
from .calls import CallSite, classify_calls
from .cfg import Cfg, build_cfg
from .effects import StateEffect, collect_state_effects
from .linearize import LinearizationError, linearize
from .symbols import SymbolTable, build_symbols

NOTE_KINDS = ("assembly-not-analyzed", "unanalyzed-storage-alias", "unknown-base", "linearization-failed")


@dataclass(frozen=True)
class AnalysisNote:
    kind: str
    file: str
    span: Span
    message: str


@dataclass
class FunctionFacts:
    contract: ast.ContractDef
    function: ast.FunctionDef
    cfg: Optional[Cfg]
    calls: list[CallSite]
    effects: StateEffect


@dataclass
class AnalysisContext:
    unit: ast.SourceUnit
    contracts: dict[str, ast.ContractDef]
    linearizations: dict[str, list[str]]
    symbols: SymbolTable
    functions: list[FunctionFacts] = field(default_factory=list)
    notes: list[AnalysisNote] = field(default_factory=list)

    def facts_for(self, contract: str) -> list[FunctionFacts]:
        return [f for f in self.functions if f.contract.name == contract]

    def facts_of(self, fn: ast.FunctionDef) -> Optional[FunctionFacts]:
        for f in self.functions:
            if f.function is fn:
                return f
        return None

    def modifier(self, contract: str, name: str) -> Optional[ast.ModifierDef]:
        scope = self.symbols.scope(contract)
        if scope is None or name not in scope.modifiers:
            return None
        return scope.modifiers[name][0]


def build_context(unit: ast.SourceUnit, scan_contracts: Optional[Mapping[str, ast.ContractDef]] = None) -> AnalysisContext:
    """Analyze ``unit``; ``scan_contracts`` holds every contract in the scan set."""
    contracts: dict[str, ast.ContractDef] = dict(scan_contracts or {})
    for c in unit.contracts:
        contracts[c.name] = c
    notes: list[AnalysisNote] = []

    # bases we cannot see (imports) become empty stubs so linearization still works
    for c in unit.contracts:
        for b in c.inherits:
            if b.name not in contracts:
                contracts[b.name] = ast.ContractDef(name=b.name, span=b.span, name_span=b.span)
                notes.append(AnalysisNote("unknown-base", unit.path, b.span, f"base contract '{b.name}' is not in the scan set; treated as empty"))

    lins: dict[str, list[str]] = {}
    for c in unit.contracts:
        try:
            lins[c.name] = linearize(c, contracts)
        except LinearizationError as exc:
            lins[c.name] = [c.name] + [b for b in dict.fromkeys(reversed(c.bases)) if b != c.name]
            notes.append(AnalysisNote("linearization-failed", unit.path, c.name_span, str(exc)))

    symbols = build_symbols(unit, lins, contracts)
    ctx = AnalysisContext(unit, contracts, lins, symbols, notes=notes)
    for c in unit.contracts:
        scope = symbols.scope(c.name)
        modifiers = {name: m for name, (m, _owner) in scope.modifiers.items()} if scope else {}
        for fn in c.functions:
            cfg = build_cfg(fn, modifiers) if fn.body is not None else None
            facts = FunctionFacts(c, fn, cfg, classify_calls(fn, symbols, c.name), collect_state_effects(fn, symbols))
            ctx.functions.append(facts)
            for span in facts.effects.aliased_writes:
                notes.append(AnalysisNote("unanalyzed-storage-alias", unit.path, span, "write through a local storage pointer is not tracked to its state variable"))
        bodies = [*(f.body for f in c.functions), *(m.body for m in c.modifiers)]
        for body in bodies:
            if body is None:
                continue
            for n in body.walk():
                if isinstance(n, ast.InlineAssembly):
                    notes.append(AnalysisNote("assembly-not-analyzed", unit.path, n.span, "inline assembly is not analyzed"))
    notes.sort(key=lambda n: (n.span.start, n.kind, n.message))
    return ctx
