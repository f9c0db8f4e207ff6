from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend.tokens import Span

SEVERITIES = ("error", "warning", "info")
SEVERITY_RANK = {"info": 0, "warning": 1, "error": 2}
PHASES = ("design", "coding", "testing")


@dataclass(frozen=True)
class RuleSpec:
    id: str
    name: str  # kebab-case slug
    title: str
    phase: str
    default_severity: str
    checklist_item_id: str
    pattern_ids: tuple[str, ...]
    doc: str


@dataclass(frozen=True)
class Diagnostic:
    rule_id: str
    severity: str
    file: str
    span: Span
    message: str
    pattern_ids: tuple[str, ...] = ()
    item_id: str = ""
    evidence: tuple[Span, ...] = field(default=())

    def sort_key(self) -> tuple:
        return (self.file, self.span.start, self.rule_id, self.span.end, self.message)
