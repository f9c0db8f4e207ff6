"""Acceptance criteria, one check each; every check prints a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary lines,
or under pytest (``pytest -s tests/test_acceptance.py``) to see them inline.
"""
from __future__ import annotations

import json
import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ALL_SOL, CEI, CORPUS, RULE_DIRS, context_for, read_expected, rel, scan_files, strip_comments_and_strings
from scchecklist.checklist import config_from_dict, default_config, evaluate_checklist, load_manifest
from scchecklist.frontend import parse_source, pretty_print
from scchecklist.report import render_json
from scchecklist.rules.catalog import RULES
from scchecklist.rules.coding import detect_cei_violation
from scchecklist.semantics import LinearizationError, linearize


SUMMARY: list[str] = []


def _report(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    SUMMARY.append(line)
    print(line)
    assert ok, detail


def check_manifest_cardinalities() -> tuple[bool, str]:
    m = load_manifest()
    phases = [len(m.by_phase(p)) for p in ("design", "coding", "testing")]
    by_title = {i.title: set(i.pattern_ids) for i in m.items}
    links = (
        by_title["Avoid using tx.origin for authorizations"] == {"AU"}
        and by_title["Include fail-safe mechanisms"] == {"SB", "RL", "TE", "PD", "OW"}
    )
    from test_checklist import SOURCE_LINKAGE

    all_links = all(by_title[t] == p for t, p in SOURCE_LINKAGE.items())
    ok = len(m.patterns) == 16 and len(m.items) == 32 and phases == [8, 18, 6] and links and all_links
    return ok, f"{len(m.patterns)} patterns, {len(m.items)} items split {phases}, {len(SOURCE_LINKAGE)} linkages reproduced={all_links}"


def check_fixture_corpus() -> tuple[bool, str]:
    files = sorted(CORPUS.rglob("*.sol"))
    mismatches = []
    for path in files:
        got = {(d.rule_id, d.span.line) for d in scan_files([path]).diagnostics}
        if got != read_expected(path.with_suffix(".expected")):
            mismatches.append(rel(path))
        if path.name.startswith("fixed") and any(r == path.parent.name for r, _ in got):
            mismatches.append(rel(path) + " (fixed twin fires)")
    paired = all((d / "trigger.sol").exists() and (d / "fixed.sol").exists() for d in RULE_DIRS)
    covered = {d.name for d in RULE_DIRS} == set(RULES)
    ok = not mismatches and paired and covered and len(files) >= 38
    return ok, f"{len(files)} fixtures over {len(RULE_DIRS)} rules, {len(mismatches)} mismatches {mismatches[:3]}"


def check_oracle_equivalence() -> tuple[bool, str]:
    tx = re.compile(r"\btx\s*\.\s*origin\b")
    locked = re.compile(r"^\s*pragma\s+solidity\s+=?\s*\d+\.\d+\.\d+\s*;")
    any_pragma = re.compile(r"^\s*pragma\s+solidity\b")
    agree = 0
    for path in ALL_SOL:
        text = strip_comments_and_strings(path.read_text())
        diags = scan_files([path]).diagnostics
        pragmas = [l for l in text.splitlines() if any_pragma.match(l)]
        t01_oracle = not (pragmas and all(locked.match(l) for l in pragmas))
        c04_ok = sum(d.rule_id == "C04" for d in diags) == len(tx.findall(text))
        t01_ok = any(d.rule_id == "T01" for d in diags) == t01_oracle
        agree += c04_ok and t01_ok
    return agree == len(ALL_SOL), f"C04 and T01 agree with token oracles on {agree}/{len(ALL_SOL)} files"


def check_c3() -> tuple[bool, str]:
    from test_semantics import HAND_HIERARCHIES

    matched = 0
    for src, name, expected in HAND_HIERARCHIES:
        cs = {c.name: c for c in parse_source(src).contracts}
        matched += linearize(cs[name], cs) == expected
    bad = {c.name: c for c in parse_source("contract A {} contract B {} contract X is A, B {} contract Y is B, A {} contract Z is X, Y {}").contracts}
    try:
        linearize(bad["Z"], bad)
        errored = False
    except LinearizationError:
        errored = True
    ok = matched == len(HAND_HIERARCHIES) >= 5 and errored
    return ok, f"{matched}/{len(HAND_HIERARCHIES)} hand merges match (diamond included), inconsistent X/Y/Z errors={errored}"


def check_cei_matrix() -> tuple[bool, str]:
    from test_rules import CEI_ANSWERS

    right = 0
    for name, answer in CEI_ANSWERS.items():
        unit, ctx = context_for((CEI / f"{name}.sol").read_text())
        (f,) = [f for f in ctx.functions if f.function.name == "run"]
        pairs = sorted((c.line, w.line) for c, w in detect_cei_violation(f.function, f.cfg, f.calls, f.effects))
        right += pairs == answer
    return right == len(CEI_ANSWERS), f"{right}/{len(CEI_ANSWERS)} ordering fixtures match hand-derived reachability"


def check_determinism() -> tuple[bool, str]:
    a, b = render_json(scan_files(ALL_SOL)), render_json(scan_files(ALL_SOL))
    return a == b, f"two corpus scans give {len(a)} identical JSON bytes={a == b}"


def check_round_trip() -> tuple[bool, str]:
    ok = 0
    for path in ALL_SOL:
        unit = parse_source(path.read_text())
        ok += parse_source(pretty_print(unit)) == unit
    return ok == len(ALL_SOL), f"{ok}/{len(ALL_SOL)} files survive parse, print, parse"


def check_config_semantics() -> tuple[bool, str]:
    base = scan_files(ALL_SOL)
    exact = 0
    for rule in sorted(RULES):
        reduced = scan_files(ALL_SOL, config_from_dict({"disabled_rules": [rule]}))
        exact += list(reduced.diagnostics) == [d for d in base.diagnostics if d.rule_id != rule]
    m = load_manifest()
    forced = 0
    for item in m.items:
        cfg = config_from_dict({"manual_answers": {item.item_id: {"status": "fail"}}})
        forced += evaluate_checklist(m, [], cfg).status_of(item.item_id) == "fail"
    ok = exact == len(RULES) and forced == len(m.items)
    return ok, f"disabling removes exactly that rule for {exact}/{len(RULES)} rules; manual fail forces fail on {forced}/{len(m.items)} items"


CRITERIA = [
    ("manifest cardinalities and linkages", check_manifest_cardinalities),
    ("fixture corpus exactness", check_fixture_corpus),
    ("token-oracle equivalence (C04, T01)", check_oracle_equivalence),
    ("C3 linearization", check_c3),
    ("CEI ordering matrix", check_cei_matrix),
    ("report determinism", check_determinism),
    ("pretty-print round-trip", check_round_trip),
    ("config semantics", check_config_semantics),
]


def test_manifest_cardinalities():
    _report(CRITERIA[0][0], *check_manifest_cardinalities())


def test_fixture_corpus():
    _report(CRITERIA[1][0], *check_fixture_corpus())


def test_oracle_equivalence():
    _report(CRITERIA[2][0], *check_oracle_equivalence())


def test_c3_linearization():
    _report(CRITERIA[3][0], *check_c3())


def test_cei_matrix():
    _report(CRITERIA[4][0], *check_cei_matrix())


def test_determinism():
    _report(CRITERIA[5][0], *check_determinism())


def test_round_trip():
    _report(CRITERIA[6][0], *check_round_trip())


def test_config_semantics():
    _report(CRITERIA[7][0], *check_config_semantics())


if __name__ == "__main__":
    failed = 0
    for name, check in CRITERIA:
        ok, detail = check()
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failed += not ok
    sys.exit(1 if failed else 0)
