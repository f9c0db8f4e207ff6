from __future__ import annotations

import json
import re
from collections import Counter

import pytest

from conftest import ALL_SOL, CORPUS, scan_files, scan_text
from scchecklist.checklist.config import default_config
from scchecklist.report import FORMATS, render, render_json, to_json_dict
from scchecklist.rules.catalog import RULES
from scchecklist.scan import scan_sources


def test_empty_result_shape():
    result = scan_sources([], default_config())
    doc = json.loads(render_json(result))
    assert doc["diagnostics"] == [] and doc["files"] == []
    assert len(doc["checklist"]) == 32
    assert {c["status"] for c in doc["checklist"]} <= {"pass", "manual-pending"}
    assert set(doc) >= {"tool", "version", "files", "diagnostics", "checklist", "summary"}


def test_c04_text_line():
    text = render(scan_files([CORPUS / "C04" / "trigger.sol"]), "text")
    lines = [l for l in text.splitlines() if re.match(r"^.+\.sol:\d+:\d+ error C04 .+\[AU\]$", l)]
    assert len(lines) == 1


def test_markdown_all_pass_has_32_entries_under_three_headings():
    result = scan_text("pragma solidity 0.8.19;\ncontract A {}\n", "clean.sol")
    md = render(result, "markdown")
    headings = [l for l in md.splitlines() if l.startswith("## ") and "phase" in l]
    assert headings == ["## Design phase", "## Coding phase", "## Testing phase"]
    sections = re.split(r"^## ", md, flags=re.M)
    counts = [len(re.findall(r"^- \[[ x]\] ", s, flags=re.M)) for s in sections[1:4]]
    assert counts == [8, 18, 6]
    checked = len(re.findall(r"^- \[x\] ", md, flags=re.M))
    assert checked == result.checklist.by_status["pass"]


def test_markdown_evidence_links(corpus_result):
    md = render(corpus_result, "markdown")
    assert re.search(r"evidence: .*corpus/C04/trigger\.sol:8\b", md)


@pytest.mark.parametrize("fmt", FORMATS)
def test_rendering_is_deterministic(fmt, corpus_result):
    again = scan_files(ALL_SOL)
    assert render(again, fmt) == render(corpus_result, fmt)


def test_json_round_trip(corpus_result):
    text = render_json(corpus_result)
    assert json.dumps(json.loads(text), indent=2, ensure_ascii=False) + "\n" == text


def test_json_schema_fields(corpus_result):
    doc = to_json_dict(corpus_result)
    for d in doc["diagnostics"]:
        assert set(d) >= {"rule", "severity", "file", "line", "col", "end_line", "end_col", "message", "patterns", "item"}
        assert d["line"] >= 1 and d["col"] >= 1
    for c in doc["checklist"]:
        assert set(c) >= {"item", "phase", "title", "status", "evidence"}
        assert all(0 <= i < len(doc["diagnostics"]) for i in c["evidence"])
    for f in doc["files"]:
        assert not f["path"].startswith("/")


def test_summary_counts_match_diagnostics(corpus_result):
    doc = to_json_dict(corpus_result)
    sev = Counter(d["severity"] for d in doc["diagnostics"])
    phase = Counter(RULES[d["rule"]].phase for d in doc["diagnostics"])
    assert doc["summary"]["by_severity"] == {s: sev.get(s, 0) for s in ("error", "warning", "info")}
    assert doc["summary"]["by_phase"] == {p: phase.get(p, 0) for p in ("design", "coding", "testing")}
    status = Counter(c["status"] for c in doc["checklist"])
    assert doc["summary"]["by_status"] == {s: status.get(s, 0) for s in doc["summary"]["by_status"]}


def test_text_summary_line_counts(corpus_result):
    text = render(corpus_result, "text")
    sev = Counter(d.severity for d in corpus_result.diagnostics)
    assert f"{len(corpus_result.diagnostics)} finding(s): {sev['error']} error, {sev['warning']} warning, {sev['info']} info" in text
    diag_lines = [l for l in text.splitlines() if re.match(r"^\S+\.sol:\d+:\d+ (error|warning|info) ", l)]
    assert len(diag_lines) == len(corpus_result.diagnostics)


def test_no_timestamps_or_absolute_paths(corpus_result):
    for fmt in FORMATS:
        out = render(corpus_result, fmt)
        assert str(CORPUS.parent) not in out
        assert not re.search(r"\d{4}-\d{2}-\d{2}T\d{2}:", out)


def test_unknown_format_rejected(corpus_result):
    with pytest.raises(ValueError):
        render(corpus_result, "html")
