"""Write each fixture's .expected file from its `// expect: RULE[,RULE]` line annotations.

The annotations are hand-written next to the construct they describe, so the
expected sets never come from running the linter.
"""
from __future__ import annotations

import argparse
import re
from pathlib import Path

ANNOTATION = re.compile(r"//\s*expect:\s*([A-Z0-9, ]+)$")


def annotations(path: Path) -> list[tuple[str, int]]:
    pairs = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        m = ANNOTATION.search(line)
        if m:
            pairs.extend((r.strip(), lineno) for r in m.group(1).split(",") if r.strip())
    return sorted(pairs)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("corpus", nargs="?", default=str(Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "corpus"))
    ap.add_argument("--check", action="store_true", help="only report files whose .expected is stale")
    args = ap.parse_args()
    stale = 0
    for sol in sorted(Path(args.corpus).rglob("*.sol")):
        text = "".join(f"{rule} {line}\n" for rule, line in annotations(sol))
        target = sol.with_suffix(".expected")
        if args.check:
            if not target.exists() or target.read_text() != text:
                print(f"stale: {target}")
                stale += 1
        else:
            target.write_text(text)
    raise SystemExit(1 if stale else 0)


if __name__ == "__main__":
    main()
