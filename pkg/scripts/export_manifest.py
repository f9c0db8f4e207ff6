"""Write the checklist manifest (patterns, items, appendix) as JSON."""
from __future__ import annotations

import argparse
import sys

from scchecklist.checklist import export_manifest


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("output", nargs="?", help="file to write (default: stdout)")
    args = ap.parse_args()
    text = export_manifest()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
