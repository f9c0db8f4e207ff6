"""Loading and validating the embedded checklist manifest."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any

from ..rules.base import PHASES
from ..rules.catalog import RULES

PATTERN_IDS = ("CEI", "PD", "AU", "OW", "OR", "RO", "RL", "BL", "GC", "TC", "TE", "MH", "PR", "REU", "MU", "SB")
PHASE_COUNTS = {"design": 8, "coding": 18, "testing": 6}


class ManifestError(Exception):
    pass


@dataclass(frozen=True)
class PatternRef:
    id: str
    name: str
    description: str


@dataclass(frozen=True)
class ChecklistItem:
    item_id: str
    phase: str
    title: str
    description: str
    pattern_ids: tuple[str, ...]
    automation: tuple[str, ...]
    manual_required: bool


@dataclass(frozen=True)
class AppendixEntry:
    id: str
    title: str
    description: str


@dataclass(frozen=True)
class ChecklistManifest:
    patterns: tuple[PatternRef, ...]
    items: tuple[ChecklistItem, ...]
    appendix: tuple[AppendixEntry, ...]
    metadata: dict

    def __iter__(self):
        # allows `patterns, items = load_manifest()`
        return iter((self.patterns, self.items))

    def item(self, item_id: str) -> ChecklistItem:
        for i in self.items:
            if i.item_id == item_id:
                return i
        raise KeyError(item_id)

    def pattern(self, pattern_id: str) -> PatternRef:
        for p in self.patterns:
            if p.id == pattern_id:
                return p
        raise KeyError(pattern_id)

    def by_phase(self, phase: str) -> list[ChecklistItem]:
        return [i for i in self.items if i.phase == phase]

    def to_json(self) -> dict[str, Any]:
        return {
            "metadata": self.metadata,
            "patterns": [{"id": p.id, "name": p.name, "description": p.description} for p in self.patterns],
            "items": [
                {
                    "item_id": i.item_id,
                    "phase": i.phase,
                    "title": i.title,
                    "description": i.description,
                    "pattern_ids": list(i.pattern_ids),
                    "automation": list(i.automation),
                    "manual_required": i.manual_required,
                }
                for i in self.items
            ],
            "appendix": [{"id": a.id, "title": a.title, "description": a.description} for a in self.appendix],
        }


def manifest_from_dict(doc: dict[str, Any]) -> ChecklistManifest:
    try:
        patterns = tuple(PatternRef(p["id"], p["name"], p["description"]) for p in doc["patterns"])
        items = tuple(
            ChecklistItem(
                i["item_id"], i["phase"], i["title"], i["description"],
                tuple(i["pattern_ids"]), tuple(i["automation"]), bool(i["manual_required"]),
            )
            for i in doc["items"]
        )
        appendix = tuple(AppendixEntry(a["id"], a["title"], a["description"]) for a in doc.get("appendix", []))
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"malformed manifest: {exc!r}") from None
    manifest = ChecklistManifest(patterns, items, appendix, dict(doc.get("metadata", {})))
    validate_manifest(manifest)
    return manifest


def validate_manifest(m: ChecklistManifest) -> None:
    ids = [p.id for p in m.patterns]
    if sorted(ids) != sorted(PATTERN_IDS) or len(set(ids)) != len(ids):
        raise ManifestError(f"pattern registry must hold exactly {len(PATTERN_IDS)} unique ids")
    item_ids = [i.item_id for i in m.items]
    if len(set(item_ids)) != len(item_ids):
        raise ManifestError("duplicate item ids")
    for phase in PHASES:
        n = sum(1 for i in m.items if i.phase == phase)
        if n != PHASE_COUNTS[phase]:
            raise ManifestError(f"{phase} phase has {n} items, expected {PHASE_COUNTS[phase]}")
    for i in m.items:
        if i.phase not in PHASES:
            raise ManifestError(f"{i.item_id}: unknown phase {i.phase!r}")
        for p in i.pattern_ids:
            if p not in PATTERN_IDS:
                raise ManifestError(f"{i.item_id}: unknown pattern {p!r}")
        for r in i.automation:
            if r not in RULES:
                raise ManifestError(f"{i.item_id}: unknown rule {r!r}")
            if RULES[r].checklist_item_id != i.item_id:
                raise ManifestError(f"{i.item_id}: rule {r} links to {RULES[r].checklist_item_id}")
        if not i.automation and not i.manual_required:
            raise ManifestError(f"{i.item_id}: an item without automation must be manual")
    for spec in RULES.values():
        if spec.checklist_item_id not in item_ids:
            raise ManifestError(f"rule {spec.id} links to unknown item {spec.checklist_item_id}")
        if spec.id not in m.item(spec.checklist_item_id).automation:
            raise ManifestError(f"rule {spec.id} missing from {spec.checklist_item_id} automation")
        for p in spec.pattern_ids:
            if p not in PATTERN_IDS:
                raise ManifestError(f"rule {spec.id}: unknown pattern {p!r}")


@lru_cache(maxsize=1)
def load_manifest() -> ChecklistManifest:
    """The embedded manifest (16 patterns, 32 items)."""
    text = resources.files(__package__).joinpath("manifest.json").read_text(encoding="utf-8")
    return manifest_from_dict(json.loads(text))


def export_manifest() -> str:
    return json.dumps(load_manifest().to_json(), indent=2, ensure_ascii=False) + "\n"
