"""Project configuration (``scchecklist.json``)."""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

from ..rules.base import SEVERITIES
from ..rules.catalog import RULES

CONFIG_FILENAME = "scchecklist.json"
CONFIG_ENV = "SC_CHECKLIST_CONFIG"
ANSWER_STATUSES = ("pass", "fail", "not-applicable")

DEFAULT_THRESHOLDS: dict[str, Any] = {
    "fallback_max_statements": 3,
    "owner_name_pattern": "owner",
    "safemath_name_pattern": "SafeMath",
    "circuit_breaker_pattern": "(?i)paus|emergency|stop",
    "mutex_name_pattern": "(?i)nonreentrant|mutex|lock",
}
_INT_THRESHOLDS = {"fallback_max_statements"}
_TOP_KEYS = ("disabled_rules", "disabled_items", "severity_overrides", "thresholds", "manual_answers")


class ConfigError(Exception):
    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path


@dataclass(frozen=True)
class ManualAnswer:
    status: str
    note: str = ""
    author: str = ""

    def to_json(self) -> dict[str, str]:
        return {"status": self.status, "note": self.note, "author": self.author}


@dataclass(frozen=True)
class ScanConfig:
    disabled_rules: frozenset[str] = frozenset()
    disabled_items: frozenset[str] = frozenset()
    severity_overrides: Mapping[str, str] = field(default_factory=dict)
    thresholds: Mapping[str, Any] = field(default_factory=lambda: dict(DEFAULT_THRESHOLDS))
    manual_answers: Mapping[str, ManualAnswer] = field(default_factory=dict)

    def threshold(self, key: str) -> Any:
        return self.thresholds.get(key, DEFAULT_THRESHOLDS[key])

    def pattern(self, key: str) -> re.Pattern[str]:
        return re.compile(self.threshold(key))

    def severity_for(self, rule_id: str) -> str:
        return self.severity_overrides.get(rule_id, RULES[rule_id].default_severity)

    def with_disabled(self, *rule_ids: str) -> ScanConfig:
        return ScanConfig(
            self.disabled_rules | set(rule_ids), self.disabled_items, self.severity_overrides, self.thresholds, self.manual_answers
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "disabled_rules": sorted(self.disabled_rules),
            "disabled_items": sorted(self.disabled_items),
            "severity_overrides": dict(sorted(self.severity_overrides.items())),
            "thresholds": {k: self.thresholds[k] for k in sorted(self.thresholds)},
            "manual_answers": {k: v.to_json() for k, v in sorted(self.manual_answers.items())},
        }


def default_config() -> ScanConfig:
    return ScanConfig()


def _item_ids() -> frozenset[str]:
    from .manifest import load_manifest

    return frozenset(i.item_id for i in load_manifest().items)


def _id_list(doc: Mapping[str, Any], key: str, known: frozenset[str], what: str) -> frozenset[str]:
    value = doc.get(key, [])
    if not isinstance(value, list):
        raise ConfigError(key, "expected a list of ids")
    for i, x in enumerate(value):
        if not isinstance(x, str) or x not in known:
            raise ConfigError(f"{key}[{i}]", f"unknown {what} id {x!r}")
    return frozenset(value)


def config_from_dict(doc: Any) -> ScanConfig:
    """Validate a decoded config document and apply defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("$", "config must be a JSON object")
    for key in doc:
        if key not in _TOP_KEYS:
            raise ConfigError(key, "unknown config key")
    rule_ids = frozenset(RULES)
    item_ids = _item_ids()
    disabled_rules = _id_list(doc, "disabled_rules", rule_ids, "rule")
    disabled_items = _id_list(doc, "disabled_items", item_ids, "item")

    overrides_doc = doc.get("severity_overrides", {})
    if not isinstance(overrides_doc, dict):
        raise ConfigError("severity_overrides", "expected an object")
    overrides = {}
    for rid, sev in overrides_doc.items():
        if rid not in rule_ids:
            raise ConfigError(f"severity_overrides.{rid}", f"unknown rule id {rid!r}")
        if sev not in SEVERITIES:
            raise ConfigError(f"severity_overrides.{rid}", f"severity must be one of {', '.join(SEVERITIES)}, got {sev!r}")
        overrides[rid] = sev

    thresholds_doc = doc.get("thresholds", {})
    if not isinstance(thresholds_doc, dict):
        raise ConfigError("thresholds", "expected an object")
    thresholds = dict(DEFAULT_THRESHOLDS)
    for key, value in thresholds_doc.items():
        path = f"thresholds.{key}"
        if key not in DEFAULT_THRESHOLDS:
            raise ConfigError(path, "unknown threshold")
        if key in _INT_THRESHOLDS:
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ConfigError(path, f"expected a non-negative integer, got {value!r}")
        else:
            if not isinstance(value, str):
                raise ConfigError(path, "expected a regular expression string")
            try:
                re.compile(value)
            except re.error as exc:
                raise ConfigError(path, f"invalid regular expression: {exc}") from None
        thresholds[key] = value

    answers_doc = doc.get("manual_answers", {})
    if not isinstance(answers_doc, dict):
        raise ConfigError("manual_answers", "expected an object")
    answers = {}
    for item, ans in answers_doc.items():
        path = f"manual_answers.{item}"
        if item not in item_ids:
            raise ConfigError(path, f"unknown item id {item!r}")
        if not isinstance(ans, dict):
            raise ConfigError(path, "expected an object with status, note, author")
        for k in ans:
            if k not in ("status", "note", "author"):
                raise ConfigError(f"{path}.{k}", "unknown answer field")
        status = ans.get("status")
        if status not in ANSWER_STATUSES:
            raise ConfigError(f"{path}.status", f"status must be one of {', '.join(ANSWER_STATUSES)}, got {status!r}")
        note, author = ans.get("note", ""), ans.get("author", "")
        if not isinstance(note, str) or not isinstance(author, str):
            raise ConfigError(path, "note and author must be strings")
        answers[item] = ManualAnswer(status, note, author)

    return ScanConfig(disabled_rules, disabled_items, overrides, thresholds, answers)


def load_config(path: str | os.PathLike[str]) -> ScanConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("$", f"cannot read {p}: {exc.strerror}") from None
    if not text.strip():
        return default_config()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return config_from_dict(doc)


def resolve_config_path(explicit: Optional[str], cwd: Optional[Path] = None) -> Optional[Path]:
    """--config, then $SC_CHECKLIST_CONFIG, then ./scchecklist.json."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(CONFIG_ENV)
    if env:
        return Path(env)
    local = (cwd or Path.cwd()) / CONFIG_FILENAME
    return local if local.is_file() else None


def render_default_config() -> str:
    return json.dumps(default_config().to_json(), indent=2) + "\n"
