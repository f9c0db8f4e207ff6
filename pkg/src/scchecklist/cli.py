"""Command-line entry point.

Exit codes: 0 clean, 1 findings at or above --fail-on, 2 usage/config/parse problems.
"""
from __future__ import annotations

import argparse
import difflib
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .checklist.config import CONFIG_FILENAME, ConfigError, default_config, load_config, render_default_config, resolve_config_path
from .checklist.manifest import export_manifest, load_manifest
from .report import FORMATS, render
from .rules.base import SEVERITIES, SEVERITY_RANK
from .rules.catalog import CATALOG, RULES
from .scan import ScanInputError, scan_paths

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


def _err(msg: str) -> None:
    print(f"scchecklist: {msg}", file=sys.stderr)


def _write(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_scan(args: argparse.Namespace) -> int:
    try:
        path = resolve_config_path(args.config)
        config = load_config(path) if path is not None else default_config()
    except ConfigError as exc:
        _err(f"config error: {exc}")
        return EXIT_USAGE
    only = None
    if args.rules:
        only = [r.strip().upper() for r in args.rules.split(",") if r.strip()]
        unknown = [r for r in only if r not in RULES]
        if unknown:
            _err(f"unknown rule id(s): {', '.join(unknown)}")
            return EXIT_USAGE
    try:
        result = scan_paths(args.paths, config, only)
    except ScanInputError as exc:
        _err(str(exc))
        return EXIT_USAGE
    try:
        _write(render(result, args.format), args.output)
    except OSError as exc:
        _err(f"cannot write {args.output}: {exc.strerror}")
        return EXIT_USAGE
    failures = result.parse_failures
    for f in failures:
        _err(f"{f.path}: {len(f.errors)} parse error(s); file not analyzed")
    if failures and not args.skip_unparsable:
        return EXIT_USAGE
    threshold = SEVERITY_RANK[args.fail_on]
    if any(SEVERITY_RANK[d.severity] >= threshold for d in result.diagnostics):
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_list_rules(args: argparse.Namespace) -> int:
    for r in CATALOG:
        patterns = ",".join(r.pattern_ids) or "-"
        print(f"{r.id}  {r.default_severity:<7}  {r.phase:<7}  {r.checklist_item_id}  {r.name:<26}  [{patterns}]  {r.title}")
    return EXIT_OK


def _phase_label(phase: str) -> str:
    return f"{phase} phase"


def explain_text(ident: str) -> Optional[str]:
    manifest = load_manifest()
    key = ident.strip().upper()
    if key in RULES:
        r = RULES[key]
        item = manifest.item(r.checklist_item_id)
        patterns = ", ".join(f"{p} ({manifest.pattern(p).name})" for p in r.pattern_ids) or "none"
        return (
            f"{r.id} {r.name}: {r.title}\n"
            f"Phase: {r.phase}\n"
            f"Default severity: {r.default_severity}\n"
            f"Patterns: {patterns}\n"
            f"Checklist: {_phase_label(r.phase)} ({item.item_id}, {item.title})\n\n"
            f"{r.doc}\n"
        )
    for item in manifest.items:
        if item.item_id == key:
            rules = ", ".join(item.automation) or "none (manual review)"
            patterns = ", ".join(item.pattern_ids) or "none"
            return (
                f"{item.item_id}: {item.title}\n"
                f"Phase: {item.phase}\n"
                f"Patterns: {patterns}\n"
                f"Automated by: {rules}\n"
                f"Manual sign-off required: {'yes' if item.manual_required else 'no'}\n"
                f"Checklist: {_phase_label(item.phase)}\n\n"
                f"{item.description}\n"
            )
    for p in manifest.patterns:
        if p.id == key:
            items = ", ".join(i.item_id for i in manifest.items if p.id in i.pattern_ids) or "none"
            return f"{p.id}: {p.name}\nSecurity pattern, linked from: {items}\n\n{p.description}\n"
    for a in manifest.appendix:
        if a.id == key:
            return f"{a.id}: {a.title}\nInformational design pattern (not scored)\n\n{a.description}\n"
    return None


def known_ids() -> list[str]:
    m = load_manifest()
    return [*RULES, *(i.item_id for i in m.items), *(p.id for p in m.patterns), *(a.id for a in m.appendix)]


def cmd_explain(args: argparse.Namespace) -> int:
    text = explain_text(args.id)
    if text is None:
        near = difflib.get_close_matches(args.id.upper(), known_ids(), n=5, cutoff=0.4)
        hint = f"; did you mean: {', '.join(near)}" if near else ""
        _err(f"unknown rule, item or pattern id {args.id!r}{hint}")
        return EXIT_USAGE
    sys.stdout.write(text)
    return EXIT_OK


def cmd_init(args: argparse.Namespace) -> int:
    target = Path(args.path)
    if target.is_dir() or not target.suffix:
        target = target / CONFIG_FILENAME
    if target.exists() and not args.force:
        _err(f"{target} already exists; use --force to overwrite")
        return EXIT_USAGE
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(render_default_config(), encoding="utf-8")
    except OSError as exc:
        _err(f"cannot write {target}: {exc.strerror}")
        return EXIT_USAGE
    print(f"wrote {target}")
    return EXIT_OK


def cmd_checklist(args: argparse.Namespace) -> int:
    if args.export is not None:
        text = export_manifest()
        if args.export == "-":
            sys.stdout.write(text)
        else:
            Path(args.export).write_text(text, encoding="utf-8")
        return EXIT_OK
    m = load_manifest()
    for phase in ("design", "coding", "testing"):
        print(f"{phase}:")
        for i in m.by_phase(phase):
            auto = ",".join(i.automation) or "manual"
            print(f"  {i.item_id}  {i.title}  [{','.join(i.pattern_ids) or '-'}]  ({auto})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scchecklist", description="Solidity security linter and checklist report.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="lint Solidity files and evaluate the checklist")
    scan.add_argument("paths", nargs="+", help=".sol files or directories (searched recursively)")
    scan.add_argument("--format", choices=FORMATS, default="text")
    scan.add_argument("--output", help="write the report here instead of stdout")
    scan.add_argument("--config", help=f"config file (default: ${'SC_CHECKLIST_CONFIG'} or ./{CONFIG_FILENAME})")
    scan.add_argument("--fail-on", choices=SEVERITIES, default="error", help="lowest severity that makes the exit code 1")
    scan.add_argument("--rules", help="comma-separated rule ids to run (default: all enabled)")
    scan.add_argument("--skip-unparsable", action="store_true", help="report parse errors but do not exit 2 for them")
    scan.set_defaults(func=cmd_scan)

    lr = sub.add_parser("list-rules", help="print the rule catalog")
    lr.set_defaults(func=cmd_list_rules)

    ex = sub.add_parser("explain", help="describe a rule, checklist item or pattern")
    ex.add_argument("id")
    ex.set_defaults(func=cmd_explain)

    init = sub.add_parser("init", help=f"write a default {CONFIG_FILENAME}")
    init.add_argument("path", nargs="?", default=".")
    init.add_argument("--force", action="store_true")
    init.set_defaults(func=cmd_init)

    cl = sub.add_parser("checklist", help="list checklist items or export the manifest")
    cl.add_argument("--export", metavar="FILE", help="write the manifest as JSON ('-' for stdout)")
    cl.set_defaults(func=cmd_checklist)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
