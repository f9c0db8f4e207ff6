from __future__ import annotations

import json

import pytest

from conftest import CORPUS
from scchecklist.checklist.config import CONFIG_ENV, default_config, load_config
from scchecklist.cli import main

TRIGGER_C04 = str(CORPUS / "C04" / "trigger.sol")
CLEAN = "pragma solidity 0.8.19;\ncontract A {}\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def clean_file(tmp_path):
    p = tmp_path / "clean.sol"
    p.write_text(CLEAN)
    return p


def test_clean_scan_exits_zero(capsys, clean_file):
    code, out, _ = run(capsys, "scan", str(clean_file), "--fail-on", "error")
    assert code == 0
    assert "0 error" in out


def test_tx_origin_fixture_exits_one(capsys):
    code, out, _ = run(capsys, "scan", TRIGGER_C04)
    assert code == 1
    assert sum(" C04 " in l for l in out.splitlines()) == 2  # the fixture reads tx.origin twice


def test_tx_origin_single_use_exits_one(capsys, tmp_path):
    p = tmp_path / "auth.sol"
    p.write_text("pragma solidity 0.8.19;\ncontract A { address o; function f() public { require(tx.origin == o); } }\n")
    code, out, _ = run(capsys, "scan", str(p))
    assert code == 1
    assert sum(" C04 " in l for l in out.splitlines()) == 1


def test_empty_directory_exits_two(capsys, tmp_path):
    code, _, err = run(capsys, "scan", str(tmp_path))
    assert code == 2 and "no Solidity sources found" in err


def test_missing_path_exits_two(capsys, tmp_path):
    code, _, err = run(capsys, "scan", str(tmp_path / "nope.sol"))
    assert code == 2 and "nope.sol" in err


def test_non_utf8_exits_two(capsys, tmp_path):
    (tmp_path / "bad.sol").write_bytes(b"contract A { string s = \"\xff\xfe\"; }")
    code, _, err = run(capsys, "scan", str(tmp_path))
    assert code == 2 and "UTF-8" in err


def test_parse_error_exits_two_unless_skipped(capsys, tmp_path):
    (tmp_path / "broken.sol").write_text("contract A { function f() public { x = ; } }")
    (tmp_path / "ok.sol").write_text(CLEAN)
    code, out, err = run(capsys, "scan", str(tmp_path))
    assert code == 2 and "broken.sol" in err and "parse error" in out
    code, _, _ = run(capsys, "scan", str(tmp_path), "--skip-unparsable")
    assert code == 0


def test_fail_on_threshold(capsys, tmp_path):
    p = tmp_path / "info.sol"
    p.write_text("pragma solidity 0.8.19;\ncontract A {\n    event E();\n    function f() public {\n        emit E();\n    }\n}\n")
    code, out, _ = run(capsys, "scan", str(p), "--fail-on", "info")
    assert code == 1 and " info D02 " in out
    assert run(capsys, "scan", str(p), "--fail-on", "warning")[0] == 0
    assert run(capsys, "scan", str(p))[0] == 0


def test_rules_subset(capsys):
    code, out, _ = run(capsys, "scan", str(CORPUS / "C02"), "--rules", "C04", "--fail-on", "info")
    assert code == 0 and " C02 " not in out
    code, _, err = run(capsys, "scan", str(CORPUS / "C02"), "--rules", "C99")
    assert code == 2 and "C99" in err


def test_output_file_and_json(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "scan", TRIGGER_C04, "--format", "json", "--output", str(out_file))
    assert code == 1 and out == ""
    doc = json.loads(out_file.read_text())
    assert [d["rule"] for d in doc["diagnostics"]].count("C04") == 2


def test_stdout_is_deterministic(capsys):
    a = run(capsys, "scan", str(CORPUS), "--format", "json")
    b = run(capsys, "scan", str(CORPUS), "--format", "json")
    assert a == b


def test_config_from_env_and_flag(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"disabled_rules": ["C04"]}))
    monkeypatch.setenv(CONFIG_ENV, str(cfg))
    code, out, _ = run(capsys, "scan", TRIGGER_C04)
    assert " C04 " not in out
    monkeypatch.delenv(CONFIG_ENV)
    code, out, _ = run(capsys, "scan", TRIGGER_C04, "--config", str(cfg))
    assert " C04 " not in out


def test_bad_config_exits_two(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"disabled_rules": ["C99"]}))
    code, _, err = run(capsys, "scan", TRIGGER_C04, "--config", str(cfg))
    assert code == 2 and "disabled_rules" in err and "C99" in err


def test_explain_rule(capsys):
    code, out, _ = run(capsys, "explain", "C04")
    assert code == 0 and "authorization" in out and "AU" in out and "COD-06" in out


def test_explain_pattern_and_item(capsys):
    code, out, _ = run(capsys, "explain", "CEI")
    assert code == 0 and out.startswith("CEI: Check Effect Interaction")
    code, out, _ = run(capsys, "explain", "cod-06")
    assert code == 0 and "Avoid using tx.origin for authorizations" in out


def test_explain_unknown(capsys):
    code, _, err = run(capsys, "explain", "ZZZ")
    assert code == 2 and "unknown" in err
    code, _, err = run(capsys, "explain", "C4")
    assert code == 2 and "did you mean" in err


def test_init_twice_and_force(capsys, tmp_path):
    code, _, _ = run(capsys, "init", str(tmp_path))
    target = tmp_path / "scchecklist.json"
    assert code == 0 and load_config(target) == default_config()
    code, _, err = run(capsys, "init", str(tmp_path))
    assert code == 2 and "--force" in err
    target.write_text(json.dumps({"disabled_rules": ["C07"]}))
    code, _, _ = run(capsys, "init", str(tmp_path), "--force")
    assert code == 0 and load_config(target) == default_config()


def test_init_default_is_picked_up_from_cwd(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(CONFIG_ENV, raising=False)
    (tmp_path / "scchecklist.json").write_text(json.dumps({"disabled_rules": ["C04"]}))
    code, out, _ = run(capsys, "scan", TRIGGER_C04)
    assert " C04 " not in out


def test_list_rules_and_checklist(capsys, tmp_path):
    code, out, _ = run(capsys, "list-rules")
    assert code == 0 and len(out.splitlines()) == 19
    code, out, _ = run(capsys, "checklist")
    assert code == 0 and sum(l.startswith("  ") for l in out.splitlines()) == 32
    dest = tmp_path / "m.json"
    code, _, _ = run(capsys, "checklist", "--export", str(dest))
    doc = json.loads(dest.read_text())
    assert code == 0 and len(doc["patterns"]) == 16 and len(doc["items"]) == 32


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["scan"], ["scan", "--format", "xml", "x.sol"], ["explain"], ["--version"], ["list-rules"]],
)
def test_exit_code_is_always_0_1_or_2(capsys, argv):
    assert main(argv) in (0, 1, 2)
