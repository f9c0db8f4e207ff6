from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scchecklist.checklist import (
    DEFAULT_THRESHOLDS,
    STATUSES,
    ConfigError,
    config_from_dict,
    default_config,
    evaluate_checklist,
    export_manifest,
    load_config,
    load_manifest,
)
from scchecklist.checklist.manifest import manifest_from_dict
from scchecklist.frontend.tokens import Span
from scchecklist.rules.base import SEVERITIES, Diagnostic
from scchecklist.rules.catalog import RULES

# Related-pattern column of the design, coding and testing tables, transcribed by hand.
SOURCE_LINKAGE = {
    "Include fail-safe mechanisms": {"SB", "RL", "TE", "PD", "OW"},
    "Never assume that a contract has zero balance": {"CEI", "MH", "GC"},
    "State Channel / Off-chain Support": {"RL"},
    "Limit the amount of ether": {"RL", "BL", "AU"},
    "Beware of transaction ordering": {"TC"},
    "Be careful with multiple inheritance": {"PD", "REU"},
    "Use trustworthy dependencies": {"REU"},
    "Withdrawal from Contracts / Pull over Push": {"CEI"},
    "Be careful with external calls": {"CEI", "MU", "GC"},
    "Beware of re-entrancy": {"CEI", "MU"},
    "Embed addresses to grant permissions": {"AU", "OW"},
    "Use hash secrets to grant permissions": {"AU"},
    "Use multi-signature": {"AU", "OW"},
    "Avoid using tx.origin for authorizations": {"AU"},
    "Encrypt on-chain data": {"PR"},
    "Hash objects for tracking off-chain data": {"PR"},
    "Use platform related standards": {"REU"},
    "Prevent overflow and underflow": {"MH", "GC", "REU", "BL"},
    "Beware of rounding errors": {"MH", "GC", "REU"},
    "Validate inputs to external and public functions": {"GC"},
    "Prevent unbounded loops": {"RL", "BL", "TC", "TE"},
    "Provide fallback functions": {"CEI", "MU", "GC"},
    "Check if built-in variables or functions were overridden": {"GC"},
    "Use interface type instead of the address for type safety": {"GC"},
    "Be careful with randomness": {"OR", "REU"},
    "Be careful with Timestamp": {"TC"},
}
TESTING_TITLES = [
    "Fix compiler warnings",
    "Lock programs to specific compiler version",
    "Enforce invariants with assert",
    "Develop unit testing",
    "Use frameworks for testing",
    "Use test networks",
]


@pytest.fixture(scope="module")
def manifest():
    return load_manifest()


def test_cardinalities(manifest):
    patterns, items = manifest
    assert len(patterns) == 16
    assert len(items) == 32
    assert [len(manifest.by_phase(p)) for p in ("design", "coding", "testing")] == [8, 18, 6]
    assert len({i.item_id for i in items}) == 32


def test_every_table_linkage_reproduced(manifest):
    by_title = {i.title: i for i in manifest.items}
    for title, patterns in SOURCE_LINKAGE.items():
        assert set(by_title[title].pattern_ids) == patterns, title
    assert [i.title for i in manifest.by_phase("testing")] == TESTING_TITLES


def test_tx_origin_item(manifest):
    item = manifest.item("COD-06")
    assert set(item.pattern_ids) == {"AU"} and list(item.automation) == ["C04"]


def test_fail_safe_item_is_partially_automated(manifest):
    item = manifest.item("DES-01")
    assert set(item.pattern_ids) == {"SB", "RL", "TE", "PD", "OW"}
    assert list(item.automation) == ["D02"] and item.manual_required


def test_rules_and_items_cross_reference(manifest):
    for rule in RULES.values():
        assert rule.id in manifest.item(rule.checklist_item_id).automation
    for item in manifest.items:
        assert all(RULES[r].checklist_item_id == item.item_id for r in item.automation)
        assert set(item.pattern_ids) <= {p.id for p in manifest.patterns}


def test_appendix_is_six_informational_entries(manifest):
    assert len(manifest.appendix) == 6
    assert not {a.id for a in manifest.appendix} & {i.item_id for i in manifest.items}


def test_manifest_export_round_trip(manifest):
    doc = json.loads(export_manifest())
    assert {"patterns", "items"} <= set(doc)
    again = manifest_from_dict(doc)
    assert again == manifest
    assert json.loads(export_manifest()) == doc


# ---------------------------------------------------------------- config


def test_empty_document_is_default(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("")
    assert load_config(p) == default_config()
    p.write_text("{}")
    assert load_config(p) == default_config()


def test_disable_one_rule():
    cfg = config_from_dict({"disabled_rules": ["C07"]})
    assert cfg.disabled_rules == {"C07"}
    assert cfg.thresholds == DEFAULT_THRESHOLDS and not cfg.disabled_items and not cfg.manual_answers


@pytest.mark.parametrize(
    "doc,path",
    [
        ({"disabled_rules": ["C99"]}, "disabled_rules"),
        ({"severity_overrides": {"C04": "fatal"}}, "severity_overrides.C04"),
        ({"thresholds": {"fallback_max_statements": "3"}}, "thresholds.fallback_max_statements"),
        ({"thresholds": {"fallback_max_statements": 2.5}}, "thresholds.fallback_max_statements"),
        ({"disabled_items": ["DES-99"]}, "disabled_items"),
        ({"manual_answers": {"DES-01": {"status": "maybe"}}}, "manual_answers.DES-01.status"),
        ({"bogus": 1}, "bogus"),
    ],
)
def test_config_errors_name_the_field(doc, path):
    with pytest.raises(ConfigError) as exc:
        config_from_dict(doc)
    assert exc.value.field_path.startswith(path)


def test_unknown_rule_error_names_it():
    with pytest.raises(ConfigError, match="C99"):
        config_from_dict({"disabled_rules": ["C99"]})


def test_config_json_round_trip():
    cfg = config_from_dict(
        {
            "disabled_rules": ["C07"],
            "severity_overrides": {"C13": "error"},
            "thresholds": {"fallback_max_statements": 5},
            "manual_answers": {"TST-04": {"status": "pass", "note": "coverage 100%", "author": "qa"}},
        }
    )
    assert config_from_dict(json.loads(json.dumps(cfg.to_json()))) == cfg


# ---------------------------------------------------------------- status function


def _diag(rule, severity=None, line=1):
    r = RULES[rule]
    return Diagnostic(rule, severity or r.default_severity, "a.sol", Span(0, 1, line, 1, line, 2), "m", r.pattern_ids, r.checklist_item_id)


def test_no_diagnostics_no_answers(manifest):
    report = evaluate_checklist(manifest, [], default_config())
    for item in manifest.items:
        assert report.status_of(item.item_id) == ("manual-pending" if item.manual_required or not item.automation else "pass")


def test_single_c04_error_fails_cod06(manifest):
    report = evaluate_checklist(manifest, [_diag("C04", "error")], default_config())
    (st_,) = [i for i in report.items if i.item_id == "COD-06"]
    assert st_.status == "fail" and st_.evidence == (0,)


def test_info_evidence_needs_review(manifest):
    report = evaluate_checklist(manifest, [_diag("C04", "info")], default_config())
    assert report.status_of("COD-06") == "needs-review"


def test_disabled_item_beats_answers(manifest):
    cfg = config_from_dict({"disabled_items": ["DES-03"], "manual_answers": {"DES-03": {"status": "fail"}}})
    assert evaluate_checklist(manifest, [], cfg).status_of("DES-03") == "disabled"


def test_manual_fail_beats_automated_pass(manifest):
    cfg = config_from_dict({"manual_answers": {"COD-06": {"status": "fail"}}})
    assert evaluate_checklist(manifest, [], default_config()).status_of("COD-06") == "pass"
    assert evaluate_checklist(manifest, [], cfg).status_of("COD-06") == "fail"


def test_manual_pass_clears_pending(manifest):
    cfg = config_from_dict({"manual_answers": {"TST-04": {"status": "pass"}}})
    assert evaluate_checklist(manifest, [], cfg).status_of("TST-04") == "pass"


def test_not_applicable_answer(manifest):
    cfg = config_from_dict({"manual_answers": {"DES-03": {"status": "not-applicable"}}})
    assert evaluate_checklist(manifest, [], cfg).status_of("DES-03") == "not-applicable"


def test_disabling_every_rule_of_an_item_makes_it_manual(manifest):
    cfg = config_from_dict({"disabled_rules": ["C04"]})
    report = evaluate_checklist(manifest, [], cfg)
    assert report.status_of("COD-06") == "manual-pending"


ITEM_IDS = [i.item_id for i in load_manifest().items]
answers = st.dictionaries(
    st.sampled_from(ITEM_IDS),
    st.sampled_from(["pass", "fail", "not-applicable"]).map(lambda s: {"status": s}),
    max_size=6,
)
diagnostic_sets = st.lists(st.tuples(st.sampled_from(sorted(RULES)), st.sampled_from(SEVERITIES)), max_size=12)


@settings(max_examples=150, deadline=None)
@given(
    diags=diagnostic_sets,
    answers=answers,
    disabled_items=st.lists(st.sampled_from(ITEM_IDS), unique=True, max_size=4),
    disabled_rules=st.lists(st.sampled_from(sorted(RULES)), unique=True, max_size=4),
)
def test_status_function_properties(diags, answers, disabled_items, disabled_rules):
    manifest = load_manifest()
    cfg = config_from_dict({"disabled_items": disabled_items, "disabled_rules": disabled_rules, "manual_answers": answers})
    diagnostics = [_diag(r, s, i + 1) for i, (r, s) in enumerate(diags) if r not in disabled_rules]
    report = evaluate_checklist(manifest, diagnostics, cfg)

    # partition: every item exactly once, counts add up
    assert [i.item_id for i in report.items] == ITEM_IDS
    assert sum(report.by_status.values()) == 32
    assert all(i.status in STATUSES for i in report.items)
    assert {p: sum(v.values()) for p, v in report.by_phase.items()} == {"design": 8, "coding": 18, "testing": 6}

    # evidence closure
    for item in report.items:
        for idx in item.evidence:
            assert 0 <= idx < len(diagnostics) and diagnostics[idx].item_id == item.item_id

    # precedence
    for item in report.items:
        if item.item_id in disabled_items:
            assert item.status == "disabled"
        elif answers.get(item.item_id, {}).get("status") == "fail":
            assert item.status == "fail"

    assert evaluate_checklist(manifest, diagnostics, cfg) == report
