"""Compare C04 and T01 against token-level oracles on every .sol file under the given roots.

C04 must report one finding per `tx.origin` outside comments and strings.
T01 must fire exactly when some solidity pragma line is not an exact `x.y.z` pin.
"""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from scchecklist.checklist import default_config
from scchecklist.scan import scan_sources

ROOT = Path(__file__).resolve().parents[1]
TX_ORIGIN = re.compile(r"\btx\s*\.\s*origin\b")
LOCKED = re.compile(r"^\s*pragma\s+solidity\s+=?\s*\d+\.\d+\.\d+\s*;")
ANY_PRAGMA = re.compile(r"^\s*pragma\s+solidity\b")
NOISE = re.compile(r'//[^\n]*|/\*.*?\*/|"(?:\\.|[^"\\\n])*"|\'(?:\\.|[^\'\\\n])*\'', re.S)


def blank(text: str) -> str:
    return NOISE.sub(lambda m: re.sub(r"[^\n]", " ", m.group(0)), text)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("roots", nargs="*", default=[str(ROOT / "tests" / "fixtures")])
    args = ap.parse_args()
    files = sorted(p for r in args.roots for p in Path(r).rglob("*.sol"))
    disagree = 0
    for path in files:
        text = path.read_text(encoding="utf-8")
        result = scan_sources([(path.name, text)], default_config(), only=["C04", "T01"])
        if result.parse_failures:
            print(f"skip (unparsable)  {path}")
            continue
        code = blank(text)
        pragmas = [l for l in code.splitlines() if ANY_PRAGMA.match(l)]
        want_c04 = len(TX_ORIGIN.findall(code))
        want_t01 = not (pragmas and all(LOCKED.match(l) for l in pragmas))
        got_c04 = sum(d.rule_id == "C04" for d in result.diagnostics)
        got_t01 = any(d.rule_id == "T01" for d in result.diagnostics)
        if (got_c04, got_t01) != (want_c04, want_t01):
            disagree += 1
            print(f"DISAGREE  {path}: C04 {got_c04} vs {want_c04}, T01 {got_t01} vs {want_t01}")
    print(f"{len(files) - disagree}/{len(files)} files agree")
    sys.exit(1 if disagree else 0)


if __name__ == "__main__":
    main()
