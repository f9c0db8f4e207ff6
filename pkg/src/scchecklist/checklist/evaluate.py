"""Merge diagnostics and manual answers into per-item checklist statuses."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from ..rules.base import PHASES, Diagnostic
from .config import ManualAnswer, ScanConfig
from .manifest import ChecklistManifest

STATUSES = ("pass", "fail", "needs-review", "manual-pending", "disabled", "not-applicable")


@dataclass(frozen=True)
class ItemStatus:
    item_id: str
    phase: str
    title: str
    status: str
    evidence: tuple[int, ...]  # indices into the diagnostics list
    answer: Optional[ManualAnswer] = None


@dataclass(frozen=True)
class ChecklistReport:
    items: tuple[ItemStatus, ...]

    def status_of(self, item_id: str) -> str:
        return next(i.status for i in self.items if i.item_id == item_id)

    @property
    def by_status(self) -> dict[str, int]:
        counts = Counter(i.status for i in self.items)
        return {s: counts.get(s, 0) for s in STATUSES}

    @property
    def by_phase(self) -> dict[str, dict[str, int]]:
        out = {}
        for phase in PHASES:
            counts = Counter(i.status for i in self.items if i.phase == phase)
            out[phase] = {s: counts.get(s, 0) for s in STATUSES}
        return out


def evaluate_checklist(manifest: ChecklistManifest, diagnostics: Sequence[Diagnostic], config: ScanConfig) -> ChecklistReport:
    out = []
    for item in manifest.items:
        active = [r for r in item.automation if r not in config.disabled_rules]
        evidence = tuple(i for i, d in enumerate(diagnostics) if d.rule_id in active)
        answer = config.manual_answers.get(item.item_id)
        # with every rule switched off the item can only be judged by hand
        manual = item.manual_required or not active
        blocking = any(diagnostics[i].severity != "info" for i in evidence)

        if item.item_id in config.disabled_items:
            status = "disabled"
        elif answer is not None and answer.status == "not-applicable":
            status = "not-applicable"
        elif blocking or (answer is not None and answer.status == "fail"):
            status = "fail"
        elif evidence:
            status = "needs-review"
        elif manual and answer is None:
            status = "manual-pending"
        else:
            status = "pass"
        out.append(ItemStatus(item.item_id, item.phase, item.title, status, evidence, answer))
    return ChecklistReport(tuple(out))
