"""Render a ScanResult as text, JSON or Markdown."""
from __future__ import annotations

import json
from collections import Counter
from typing import Any

from .checklist.evaluate import STATUSES
from .checklist.manifest import load_manifest
from .rules.base import PHASES, SEVERITIES
from .rules.catalog import RULES
from .scan import ScanResult

FORMATS = ("text", "json", "markdown")


def summarize(result: ScanResult) -> dict[str, Any]:
    sev = Counter(d.severity for d in result.diagnostics)
    phase = Counter(RULES[d.rule_id].phase for d in result.diagnostics)
    return {
        "files": {"scanned": len(result.files), "parsed": sum(1 for f in result.files if f.parsed)},
        "by_severity": {s: sev.get(s, 0) for s in SEVERITIES},
        "by_phase": {p: phase.get(p, 0) for p in PHASES},
        "by_status": result.checklist.by_status,
        "checklist_by_phase": result.checklist.by_phase,
        "assert_counts": dict(result.assert_counts),
    }


def _span(s) -> dict[str, int]:
    return {"line": s.line, "col": s.col, "end_line": s.end_line, "end_col": s.end_col}


def to_json_dict(result: ScanResult) -> dict[str, Any]:
    files = []
    for f in result.files:
        entry: dict[str, Any] = {"path": f.path, "parsed": f.parsed}
        if f.errors:
            entry["errors"] = list(f.errors)
        files.append(entry)
    diagnostics = [
        {
            "rule": d.rule_id,
            "severity": d.severity,
            "file": d.file,
            **_span(d.span),
            "message": d.message,
            "patterns": list(d.pattern_ids),
            "item": d.item_id,
            "evidence": [_span(e) for e in d.evidence],
        }
        for d in result.diagnostics
    ]
    checklist = []
    for i in result.checklist.items:
        entry = {"item": i.item_id, "phase": i.phase, "title": i.title, "status": i.status, "evidence": list(i.evidence)}
        if i.answer is not None:
            entry["answer"] = i.answer.to_json()
        checklist.append(entry)
    return {
        "tool": result.tool,
        "version": result.version,
        "files": files,
        "diagnostics": diagnostics,
        "checklist": checklist,
        "summary": summarize(result),
        "notes": [{"kind": n.kind, "file": n.file, "line": n.span.line, "col": n.span.col, "message": n.message} for n in result.notes],
        "appendix": [{"id": a.id, "title": a.title, "description": a.description} for a in load_manifest().appendix],
    }


def render_json(result: ScanResult) -> str:
    return json.dumps(to_json_dict(result), indent=2, ensure_ascii=False) + "\n"


def _diag_line(d) -> str:
    return f"{d.file}:{d.span.line}:{d.span.col} {d.severity} {d.rule_id} {d.message} [{','.join(d.pattern_ids)}]"


def render_text(result: ScanResult) -> str:
    lines = []
    for f in result.files:
        for e in f.errors:
            lines.append(f"{f.path}:{e} (parse error)")
    lines.extend(_diag_line(d) for d in result.diagnostics)
    for n in result.notes:
        lines.append(f"{n.file}:{n.span.line}:{n.span.col} note: {n.message}")
    summary = summarize(result)
    sev = summary["by_severity"]
    if lines:
        lines.append("")
    lines.append(
        f"{summary['files']['scanned']} file(s), {len(result.diagnostics)} finding(s): "
        + ", ".join(f"{sev[s]} {s}" for s in SEVERITIES)
    )
    lines.append("")
    width = max(len(s) for s in STATUSES)
    lines.append("checklist".ljust(9) + "".join(s.rjust(width + 2) for s in STATUSES))
    for phase in PHASES:
        row = summary["checklist_by_phase"][phase]
        lines.append(phase.ljust(9) + "".join(str(row[s]).rjust(width + 2) for s in STATUSES))
    total = summary["by_status"]
    lines.append("total".ljust(9) + "".join(str(total[s]).rjust(width + 2) for s in STATUSES))
    return "\n".join(lines) + "\n"


def render_markdown(result: ScanResult) -> str:
    manifest = load_manifest()
    summary = summarize(result)
    out = ["# Security checklist report", ""]
    out.append(f"Scanned {summary['files']['scanned']} file(s) with {len(result.diagnostics)} finding(s).")
    failed = [f.path for f in result.files if not f.parsed]
    if failed:
        out.append(f"Not analyzed (parse errors): {', '.join(failed)}.")
    out.append("")
    by_item = {i.item_id: i for i in result.checklist.items}
    for phase in PHASES:
        out.append(f"## {phase.capitalize()} phase")
        out.append("")
        for item in manifest.by_phase(phase):
            st = by_item[item.item_id]
            box = "x" if st.status == "pass" else " "
            out.append(f"- [{box}] **{item.item_id}** {item.title} ({st.status})")
            refs = sorted({f"{result.diagnostics[i].file}:{result.diagnostics[i].span.line}" for i in st.evidence})
            if refs:
                out.append(f"  - evidence: {', '.join(refs)}")
            if st.answer is not None and st.answer.note:
                who = f" ({st.answer.author})" if st.answer.author else ""
                out.append(f"  - note{who}: {st.answer.note}")
        out.append("")
    out.append("## Related design patterns (informational, not scored)")
    out.append("")
    out.append("| Id | Pattern | Summary |")
    out.append("| --- | --- | --- |")
    for a in manifest.appendix:
        out.append(f"| {a.id} | {a.title} | {a.description} |")
    return "\n".join(out) + "\n"


def render(result: ScanResult, fmt: str) -> str:
    if fmt == "text":
        return render_text(result)
    if fmt == "json":
        return render_json(result)
    if fmt == "markdown":
        return render_markdown(result)
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
