from __future__ import annotations

import re
import sys
from pathlib import Path

import pytest

from scchecklist.checklist.config import default_config
from scchecklist.frontend import parse_source
from scchecklist.scan import scan_sources
from scchecklist.semantics import build_context

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"
CEI = FIXTURES / "cei"
ALL_SOL = sorted(FIXTURES.rglob("*.sol"))
RULE_DIRS = sorted(p for p in CORPUS.iterdir() if p.is_dir())


def rel(path: Path) -> str:
    return path.relative_to(FIXTURES).as_posix()


def read_expected(path: Path) -> set[tuple[str, int]]:
    out = set()
    for line in path.read_text().splitlines():
        if line.strip():
            rule, lineno = line.split()
            out.add((rule, int(lineno)))
    return out


def scan_text(text: str, path: str = "t.sol", config=None, only=None):
    return scan_sources([(path, text)], config or default_config(), only)


def scan_files(paths, config=None, only=None):
    return scan_sources([(rel(p), p.read_text()) for p in paths], config or default_config(), only)


def context_for(text: str):
    unit = parse_source(text, "t.sol")
    return unit, build_context(unit)


def strip_comments_and_strings(text: str) -> str:
    """Blank out comments and string literals, keeping everything else in place."""
    pattern = re.compile(r'//[^\n]*|/\*.*?\*/|"(?:\\.|[^"\\\n])*"|\'(?:\\.|[^\'\\\n])*\'', re.S)
    return pattern.sub(lambda m: re.sub(r"[^\n]", " ", m.group(0)), text)


@pytest.fixture(scope="session")
def corpus_result():
    return scan_files(ALL_SOL)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "SUMMARY", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
