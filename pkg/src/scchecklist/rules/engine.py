"""Run the enabled rules over one analyzed file."""
from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Optional

from ..frontend import ast
from ..semantics.context import AnalysisContext
from . import coding, design, testing  # noqa: F401  (populate the registry)
from .base import Diagnostic
from .catalog import CATALOG, RULES
from .helpers import RULE_FUNCS

if TYPE_CHECKING:
    from ..checklist.config import ScanConfig


def enabled_rules(config: "ScanConfig", only: Optional[Iterable[str]] = None) -> list[str]:
    subset = set(only) if only is not None else None
    return [r.id for r in CATALOG if r.id not in config.disabled_rules and (subset is None or r.id in subset)]


def evaluate_rules(
    unit: ast.SourceUnit,
    ctx: AnalysisContext,
    config: "ScanConfig",
    only: Optional[Iterable[str]] = None,
) -> list[Diagnostic]:
    """Diagnostics from every enabled rule, sorted by (file, offset, rule id)."""
    out: list[Diagnostic] = []
    for rule_id in enabled_rules(config, only):
        spec = RULES[rule_id]
        override = config.severity_overrides.get(rule_id)
        for f in RULE_FUNCS[rule_id](ctx, config):
            severity = override or f.severity or spec.default_severity
            out.append(
                Diagnostic(
                    rule_id=rule_id,
                    severity=severity,
                    file=unit.path,
                    span=f.span,
                    message=f.message,
                    pattern_ids=spec.pattern_ids,
                    item_id=spec.checklist_item_id,
                    evidence=f.evidence,
                )
            )
    out.sort(key=Diagnostic.sort_key)
    return out
