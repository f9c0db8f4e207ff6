"""Scan the fixture corpus and print per-rule finding counts next to the checklist summary."""
from __future__ import annotations

import argparse
from collections import Counter
from pathlib import Path

from scchecklist.checklist import default_config, load_config
from scchecklist.report import render
from scchecklist.scan import scan_paths

ROOT = Path(__file__).resolve().parents[1]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("paths", nargs="*", default=[str(ROOT / "tests" / "fixtures")])
    ap.add_argument("--config")
    ap.add_argument("--format", choices=("counts", "text", "json", "markdown"), default="counts")
    args = ap.parse_args()
    config = load_config(args.config) if args.config else default_config()
    result = scan_paths(args.paths, config)
    if args.format != "counts":
        print(render(result, args.format), end="")
        return
    per_rule = Counter(d.rule_id for d in result.diagnostics)
    print(f"{len(result.files)} files, {len(result.parse_failures)} unparsable, {len(result.diagnostics)} findings")
    for rule, n in sorted(per_rule.items()):
        print(f"  {rule}  {n}")
    print("checklist:", ", ".join(f"{k}={v}" for k, v in result.checklist.by_status.items()))


if __name__ == "__main__":
    main()
