"""Intraprocedural control-flow graphs over statements.

Blocks hold "items": simple statements, the heads of compound statements
(an ``if`` or loop statement stands for its condition), and for-loop update
expressions. Nested blocks are flattened; every item lands in exactly one
basic block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Optional

from ..frontend import ast

EDGE_KINDS = ("seq", "true-branch", "false-branch", "loop-back", "loop-exit")


@dataclass
class BasicBlock:
    index: int
    items: list[ast.Node] = field(default_factory=list)
    dead: bool = False


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    kind: str


@dataclass
class Cfg:
    blocks: list[BasicBlock]
    edges: list[Edge]
    entry: int
    exit: int
    _pos: dict[int, tuple[int, int]] = field(default_factory=dict, repr=False)
    _owner: dict[int, ast.Node] = field(default_factory=dict, repr=False)

    def successors(self, b: int) -> list[int]:
        return [e.dst for e in self.edges if e.src == b]

    def predecessors(self, b: int) -> list[int]:
        return [e.src for e in self.edges if e.dst == b]

    def items(self) -> Iterator[ast.Node]:
        for b in self.blocks:
            yield from b.items

    def position(self, item: ast.Node) -> Optional[tuple[int, int]]:
        return self._pos.get(id(item))

    def item_of(self, node: ast.Node) -> Optional[ast.Node]:
        """The block item whose evaluation contains ``node``."""
        return self._owner.get(id(node))

    @cached_property
    def _reach(self) -> dict[int, frozenset[int]]:
        succ: dict[int, list[int]] = {b.index: [] for b in self.blocks}
        for e in self.edges:
            succ[e.src].append(e.dst)
        out = {}
        for b in succ:
            seen: set[int] = set()
            stack = list(succ[b])
            while stack:
                n = stack.pop()
                if n not in seen:
                    seen.add(n)
                    stack.extend(succ[n])
            out[b] = frozenset(seen)
        return out

    def reachable_from(self, block: int) -> frozenset[int]:
        """Blocks reachable over at least one edge."""
        return self._reach[block]

    def happens_after(self, first: ast.Node, second: ast.Node) -> bool:
        """Can item ``second`` execute strictly after item ``first``?"""
        pa, pb = self.position(first), self.position(second)
        if pa is None or pb is None:
            return False
        (ba, ia), (bb, ib) = pa, pb
        if ba == bb and ib > ia:
            return True
        return bb in self._reach[ba]

    @cached_property
    def dominators(self) -> dict[int, frozenset[int]]:
        live = {self.entry} | set(self._reach[self.entry])
        preds: dict[int, list[int]] = {b: [] for b in live}
        for e in self.edges:
            if e.src in live and e.dst in live:
                preds[e.dst].append(e.src)
        dom = {b: frozenset(live) for b in live}
        dom[self.entry] = frozenset([self.entry])
        changed = True
        while changed:
            changed = False
            for b in sorted(live):
                if b == self.entry:
                    continue
                ps = [dom[p] for p in preds[b]]
                new = (frozenset.intersection(*ps) if ps else frozenset()) | {b}
                if new != dom[b]:
                    dom[b] = new
                    changed = True
        return dom

    def dominates(self, a: ast.Node, b: ast.Node) -> bool:
        """Every path from entry to item ``b`` passes item ``a`` first."""
        pa, pb = self.position(a), self.position(b)
        if pa is None or pb is None:
            return False
        if pa[0] == pb[0]:
            return pa[1] < pb[1]
        return pa[0] in self.dominators.get(pb[0], frozenset())


def _own_expressions(item: ast.Node) -> list[ast.Node]:
    if isinstance(item, (ast.If, ast.While, ast.DoWhile)):
        return [item.condition]
    if isinstance(item, ast.For):
        return [item.condition] if item.condition is not None else []
    return list(item.children())


def _is_revert_call(s: ast.Statement) -> bool:
    if isinstance(s, ast.RevertStatement):
        return True
    if isinstance(s, ast.ExpressionStatement) and isinstance(s.expression, ast.Call):
        callee = s.expression.callee
        return isinstance(callee, ast.Identifier) and callee.name == "revert"
    return False


class _Builder:
    def __init__(self) -> None:
        self.blocks: list[BasicBlock] = []
        self.edges: list[Edge] = []
        self.entry = self.new().index
        self.exit = self.new().index
        self.cur: Optional[int] = self.entry
        self.loops: list[tuple[int, int]] = []  # (continue target, break target)
        self.pending: list[list[ast.Statement]] = []

    def new(self) -> BasicBlock:
        b = BasicBlock(len(self.blocks))
        self.blocks.append(b)
        return b

    def edge(self, a: int, b: int, kind: str) -> None:
        self.edges.append(Edge(a, b, kind))

    def here(self) -> int:
        if self.cur is None:
            self.cur = self.new().index
        return self.cur

    def add(self, item: ast.Node) -> int:
        b = self.here()
        self.blocks[b].items.append(item)
        return b

    def stmts(self, stmts) -> None:
        for s in stmts:
            self.stmt(s)

    def stmt(self, s: ast.Statement) -> None:
        if isinstance(s, ast.Block):
            self.stmts(s.statements)
        elif isinstance(s, ast.UncheckedBlock):
            self.stmts(s.block.statements)
        elif isinstance(s, ast.If):
            cond = self.add(s)
            then = self.new().index
            self.edge(cond, then, "true-branch")
            self.cur = then
            self.stmt(s.then)
            then_end = self.cur
            else_end = None
            if s.orelse is not None:
                els = self.new().index
                self.edge(cond, els, "false-branch")
                self.cur = els
                self.stmt(s.orelse)
                else_end = self.cur
            join = self.new().index
            if then_end is not None:
                self.edge(then_end, join, "seq")
            if s.orelse is None:
                self.edge(cond, join, "false-branch")
            elif else_end is not None:
                self.edge(else_end, join, "seq")
            self.cur = join
        elif isinstance(s, ast.While):
            self._loop(s, s.body, s.condition is not None)
        elif isinstance(s, ast.For):
            if s.init is not None:
                self.stmt(s.init)
            self._loop(s, s.body, s.condition is not None, update=s.update)
        elif isinstance(s, ast.DoWhile):
            before = self.here()
            body = self.new().index
            self.edge(before, body, "seq")
            cond = self.new()
            cond.items.append(s)
            after = self.new().index
            self.loops.append((cond.index, after))
            self.cur = body
            self.stmt(s.body)
            if self.cur is not None:
                self.edge(self.cur, cond.index, "seq")
            self.loops.pop()
            self.edge(cond.index, body, "loop-back")
            self.edge(cond.index, after, "loop-exit")
            self.cur = after
        elif isinstance(s, (ast.Return,)) or _is_revert_call(s):
            b = self.add(s)
            self.edge(b, self.exit, "seq")
            self.cur = None
        elif isinstance(s, ast.Break):
            b = self.add(s)
            if self.loops:
                self.edge(b, self.loops[-1][1], "loop-exit")
            self.cur = None
        elif isinstance(s, ast.Continue):
            b = self.add(s)
            if self.loops:
                self.edge(b, self.loops[-1][0], "loop-back")
            self.cur = None
        elif isinstance(s, ast.Placeholder) and self.pending:
            inner = self.pending.pop(0)
            self.stmts(inner)
        else:
            self.add(s)

    def _loop(self, s: ast.Statement, body_stmt: ast.Statement, has_exit: bool, update: Optional[ast.Expression] = None) -> None:
        before = self.here()
        header = self.new()
        header.items.append(s)
        self.edge(before, header.index, "seq")
        body = self.new().index
        self.edge(header.index, body, "true-branch")
        latch = None
        if update is not None:
            latch = self.new()
            latch.items.append(update)
        after = self.new().index
        if has_exit:
            self.edge(header.index, after, "loop-exit")
        self.loops.append((latch.index if latch else header.index, after))
        self.cur = body
        self.stmt(body_stmt)
        if self.cur is not None:
            if latch is not None:
                self.edge(self.cur, latch.index, "seq")
            else:
                self.edge(self.cur, header.index, "loop-back")
        if latch is not None:
            self.edge(latch.index, header.index, "loop-back")
        self.loops.pop()
        self.cur = after

    def finish(self) -> Cfg:
        if self.cur is not None:
            self.edge(self.cur, self.exit, "seq")
        cfg = Cfg(self.blocks, self.edges, self.entry, self.exit)
        reach = cfg.reachable_from(self.entry) | {self.entry}
        for b in self.blocks:
            b.dead = b.index not in reach
            for i, item in enumerate(b.items):
                cfg._pos[id(item)] = (b.index, i)
                cfg._owner[id(item)] = item
                for own in _own_expressions(item):
                    if own is None:
                        continue
                    for n in own.walk():
                        cfg._owner.setdefault(id(n), item)
        return cfg


def build_cfg(fn: ast.FunctionDef, modifiers: Optional[Mapping[str, ast.ModifierDef]] = None) -> Cfg:
    """CFG of ``fn``'s body.

    Modifiers found in ``modifiers`` (name -> definition) are inlined: the
    first modifier's body runs with its placeholder replaced by the next
    modifier, and so on down to the function body.
    """
    b = _Builder()
    layers: list[list[ast.Statement]] = []
    for inv in fn.modifiers:
        m = (modifiers or {}).get(inv.name)
        if m is not None and m.body is not None:
            layers.append(list(m.body.statements))
    layers.append(list(fn.body.statements) if fn.body is not None else [])
    b.pending = layers[1:]
    b.stmts(layers[0])
    # a modifier without a placeholder never reaches the wrapped body
    return b.finish()
