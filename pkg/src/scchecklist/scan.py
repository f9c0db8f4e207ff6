"""Scan orchestration: files -> ASTs -> contexts -> diagnostics -> checklist."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import __version__
from .checklist.config import ScanConfig
from .checklist.evaluate import ChecklistReport, evaluate_checklist
from .checklist.manifest import load_manifest
from .frontend import LexError, ParseErrors, ast, parse_source
from .rules.base import Diagnostic
from .rules.engine import evaluate_rules
from .rules.testing import assert_inventory
from .semantics.context import AnalysisNote, build_context

TOOL_NAME = "scchecklist"


class ScanInputError(Exception):
    """Unusable scan input: no sources, unreadable or non-UTF-8 file."""


@dataclass(frozen=True)
class FileResult:
    path: str
    parsed: bool
    errors: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScanResult:
    files: tuple[FileResult, ...]
    diagnostics: tuple[Diagnostic, ...]
    checklist: ChecklistReport
    notes: tuple[AnalysisNote, ...] = ()
    assert_counts: dict[str, int] = field(default_factory=dict)
    tool: str = TOOL_NAME
    version: str = __version__

    @property
    def parse_failures(self) -> list[FileResult]:
        return [f for f in self.files if not f.parsed]


def collect_sources(paths: Sequence[str | os.PathLike[str]]) -> tuple[Path, list[Path]]:
    """Expand files and directories into .sol files, ordered by path relative to the scan root."""
    found: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            found.extend(x for x in p.rglob("*.sol") if x.is_file())
        elif p.is_file():
            found.append(p)
        else:
            raise ScanInputError(f"{p}: no such file or directory")
    resolved = sorted({f.resolve() for f in found})
    if not resolved:
        return Path.cwd(), []
    bases = [p.resolve() if p.is_dir() else p.resolve().parent for p in map(Path, paths)]
    root = Path(os.path.commonpath([str(b) for b in bases]))
    resolved.sort(key=lambda f: f.relative_to(root).as_posix())
    return root, resolved


def read_sources(paths: Sequence[str | os.PathLike[str]]) -> list[tuple[str, str]]:
    root, files = collect_sources(paths)
    out = []
    for f in files:
        try:
            text = f.read_bytes().decode("utf-8")
        except OSError as exc:
            raise ScanInputError(f"{f}: cannot read: {exc.strerror}") from None
        except UnicodeDecodeError:
            raise ScanInputError(f"{f}: not valid UTF-8") from None
        out.append((f.relative_to(root).as_posix(), text))
    return out


def parse_file(path: str, text: str) -> tuple[Optional[ast.SourceUnit], tuple[str, ...]]:
    try:
        return parse_source(text, path), ()
    except LexError as exc:
        return None, (f"{exc.span.line}:{exc.span.col}: {exc.message}",)
    except ParseErrors as exc:
        return None, tuple(f"{e.span.line}:{e.span.col}: {e.message}" for e in exc.errors)


def scan_sources(sources: Iterable[tuple[str, str]], config: ScanConfig, only: Optional[Iterable[str]] = None) -> ScanResult:
    """Scan (relative path, text) pairs as one scan set."""
    files: list[FileResult] = []
    units: list[ast.SourceUnit] = []
    for path, text in sorted(sources):
        unit, errors = parse_file(path, text)
        files.append(FileResult(path, unit is not None, errors))
        if unit is not None:
            units.append(unit)

    scan_set: dict[str, ast.ContractDef] = {}
    for u in units:
        for c in u.contracts:
            scan_set.setdefault(c.name, c)

    only = list(only) if only is not None else None
    diagnostics: list[Diagnostic] = []
    notes: list[AnalysisNote] = []
    asserts: dict[str, int] = {}
    for u in units:
        ctx = build_context(u, scan_set)
        diagnostics.extend(evaluate_rules(u, ctx, config, only))
        notes.extend(ctx.notes)
        for name, n in assert_inventory(ctx).items():
            asserts[f"{u.path}:{name}"] = n
    diagnostics.sort(key=Diagnostic.sort_key)
    notes.sort(key=lambda n: (n.file, n.span.start, n.kind, n.message))
    checklist = evaluate_checklist(load_manifest(), diagnostics, config)
    return ScanResult(tuple(files), tuple(diagnostics), checklist, tuple(notes), dict(sorted(asserts.items())))


def scan_paths(paths: Sequence[str | os.PathLike[str]], config: ScanConfig, only: Optional[Iterable[str]] = None) -> ScanResult:
    sources = read_sources(paths)
    if not sources:
        raise ScanInputError("no Solidity sources found")
    return scan_sources(sources, config, only)
