"""Symbol tables, identifier resolution and shallow expression typing."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from ..frontend import ast
from ..frontend.tokens import Span

# Names the coding checklist cares about when they get redeclared.
BUILTIN_NAMES = frozenset(
    ["msg", "tx", "block", "now", "require", "assert", "revert", "selfdestruct", "keccak256", "blockhash", "address", "this"]
)
# Everything else that resolves to the language rather than to user code.
GLOBAL_NAMES = BUILTIN_NAMES | frozenset(
    ["abi", "super", "sha256", "sha3", "ripemd160", "ecrecover", "gasleft", "addmod", "mulmod", "suicide", "type", "bytes", "string"]
)

RESOLUTION_KINDS = ("state-var", "local", "param", "function", "modifier", "builtin", "type", "event", "unknown")


@dataclass(frozen=True)
class Resolution:
    kind: str
    name: str
    decl: Optional[ast.Node] = None
    owner: Optional[str] = None  # defining contract

    @property
    def type_name(self) -> Optional[ast.TypeName]:
        if isinstance(self.decl, (ast.VarDecl, ast.LocalVar, ast.Parameter)):
            return self.decl.type_name
        return None


@dataclass
class ContractScope:
    contract: ast.ContractDef
    linearization: list[str]
    state_vars: dict[str, tuple[ast.VarDecl, str]] = field(default_factory=dict)
    functions: dict[str, list[tuple[ast.FunctionDef, str]]] = field(default_factory=dict)
    modifiers: dict[str, tuple[ast.ModifierDef, str]] = field(default_factory=dict)
    events: dict[str, tuple[ast.EventDef, str]] = field(default_factory=dict)
    types: dict[str, ast.Node] = field(default_factory=dict)

    def function(self, name: str, arity: Optional[int] = None) -> Optional[tuple[ast.FunctionDef, str]]:
        for fn, owner in self.functions.get(name, []):
            if arity is None or len(fn.params) == arity:
                return fn, owner
        return None


@dataclass(frozen=True)
class Shadowing:
    name: str
    kind: str  # contract, function, modifier, variable, parameter
    span: Span
    contract: Optional[str]


@dataclass
class SymbolTable:
    contracts: dict[str, ast.ContractDef]
    scopes: dict[str, ContractScope]
    resolutions: dict[int, Resolution] = field(default_factory=dict)
    shadowing: list[Shadowing] = field(default_factory=list)
    unresolved: list[tuple[str, str, Span]] = field(default_factory=list)

    def resolve(self, ident: ast.Identifier) -> Resolution:
        return self.resolutions.get(id(ident), Resolution("unknown", ident.name))

    def scope(self, contract: str) -> Optional[ContractScope]:
        return self.scopes.get(contract)

    def is_contract(self, name: str) -> bool:
        c = self.contracts.get(name)
        return c is not None and c.kind != "library"

    def is_library(self, name: str) -> bool:
        c = self.contracts.get(name)
        return c is not None and c.kind == "library"


def build_symbols(
    unit: ast.SourceUnit,
    linearizations: Mapping[str, list[str]],
    contracts: Optional[Mapping[str, ast.ContractDef]] = None,
) -> SymbolTable:
    """Build per-contract scopes and resolve every identifier in ``unit``.

    ``contracts`` is the whole scan set (defaults to the unit's own
    contracts); inherited members are found through ``linearizations``.
    """
    all_contracts = dict(contracts) if contracts is not None else {c.name: c for c in unit.contracts}
    for c in unit.contracts:
        all_contracts.setdefault(c.name, c)
    table = SymbolTable(all_contracts, {})
    for c in unit.contracts:
        table.scopes[c.name] = _scope_for(c, linearizations.get(c.name, [c.name]), all_contracts)
    for c in unit.contracts:
        if c.name in BUILTIN_NAMES:
            table.shadowing.append(Shadowing(c.name, "contract", c.name_span, None))
        _Resolver(table, table.scopes[c.name]).contract(c)
    return table


def _scope_for(c: ast.ContractDef, lin: list[str], contracts: Mapping[str, ast.ContractDef]) -> ContractScope:
    scope = ContractScope(c, list(lin))
    # most-derived first, so the first definition seen wins
    for name in lin:
        base = contracts.get(name)
        if base is None:
            continue
        for v in base.state_vars:
            scope.state_vars.setdefault(v.name, (v, name))
        for f in base.functions:
            if f.kind == "function":
                scope.functions.setdefault(f.name, []).append((f, name))
        for m in base.modifiers:
            scope.modifiers.setdefault(m.name, (m, name))
        for e in base.events:
            scope.events.setdefault(e.name, (e, name))
        for t in (*base.structs, *base.enums):
            scope.types.setdefault(t.name, t)
    return scope


class _Resolver:
    def __init__(self, table: SymbolTable, scope: ContractScope):
        self.table = table
        self.scope = scope
        self.env: list[dict[str, Resolution]] = []

    def shadow(self, name: Optional[str], kind: str, span: Span) -> None:
        if name in BUILTIN_NAMES:
            self.table.shadowing.append(Shadowing(name, kind, span, self.scope.contract.name))

    def contract(self, c: ast.ContractDef) -> None:
        for b in c.inherits:
            for a in b.args or ():
                self.expr(a)
        for v in c.state_vars:
            self.shadow(v.name, "variable", v.name_span)
            if v.value is not None:
                self.expr(v.value)
            self._type(v.type_name)
        for m in c.modifiers:
            self.shadow(m.name, "modifier", m.name_span)
            self.callable(m.params, (), m.body, ())
        for f in c.functions:
            if f.kind == "function":
                self.shadow(f.name, "function", f.name_span)
            self.callable(f.params, f.returns, f.body, f.modifiers)

    def callable(self, params, returns, body, modifiers) -> None:
        frame: dict[str, Resolution] = {}
        for p in (*params, *returns):
            self.shadow(p.name, "parameter", p.name_span)
            if p.name:
                frame[p.name] = Resolution("param", p.name, p, self.scope.contract.name)
        self.env = [frame]
        for m in modifiers:
            for a in m.args or ():
                self.expr(a)
        if body is not None:
            self.stmt(body)
        self.env = []

    def lookup(self, name: str) -> Resolution:
        for frame in reversed(self.env):
            if name in frame:
                return frame[name]
        s = self.scope
        if name in s.state_vars:
            decl, owner = s.state_vars[name]
            return Resolution("state-var", name, decl, owner)
        if name in s.functions:
            fn, owner = s.functions[name][0]
            return Resolution("function", name, fn, owner)
        if name in s.modifiers:
            decl, owner = s.modifiers[name]
            return Resolution("modifier", name, decl, owner)
        if name in s.events:
            decl, owner = s.events[name]
            return Resolution("event", name, decl, owner)
        if name in s.types:
            return Resolution("type", name, s.types[name])
        if name in self.table.contracts:
            return Resolution("type", name, self.table.contracts[name])
        if name in GLOBAL_NAMES:
            return Resolution("builtin", name)
        return Resolution("unknown", name)

    def _type(self, t: Optional[ast.TypeName]) -> None:
        if t is None:
            return
        for n in t.walk():
            if isinstance(n, ast.Expression):
                self.expr(n)
                return

    def expr(self, e: Optional[ast.Expression]) -> None:
        if e is None:
            return
        stack: list[ast.Node] = [e]
        while stack:
            n = stack.pop()
            if isinstance(n, ast.Identifier):
                r = self.lookup(n.name)
                self.table.resolutions[id(n)] = r
                if r.kind == "unknown":
                    self.table.unresolved.append((self.scope.contract.name, n.name, n.span))
                continue
            stack.extend(n.children())

    def declare(self, d: ast.LocalVar) -> None:
        self.shadow(d.name, "variable", d.name_span)
        self._type(d.type_name)
        self.env[-1][d.name] = Resolution("local", d.name, d, self.scope.contract.name)

    def stmt(self, s: Optional[ast.Statement]) -> None:
        if s is None:
            return
        if isinstance(s, ast.Block):
            self.env.append({})
            for x in s.statements:
                self.stmt(x)
            self.env.pop()
        elif isinstance(s, ast.UncheckedBlock):
            self.stmt(s.block)
        elif isinstance(s, ast.VarDeclStatement):
            self.expr(s.value)
            for d in s.declarations:
                if d is not None:
                    self.declare(d)
        elif isinstance(s, ast.For):
            self.env.append({})
            self.stmt(s.init)
            self.expr(s.condition)
            self.expr(s.update)
            self.stmt(s.body)
            self.env.pop()
        elif isinstance(s, ast.If):
            self.expr(s.condition)
            self.stmt(s.then)
            self.stmt(s.orelse)
        elif isinstance(s, ast.While):
            self.expr(s.condition)
            self.stmt(s.body)
        elif isinstance(s, ast.DoWhile):
            self.stmt(s.body)
            self.expr(s.condition)
        else:
            for child in s.children():
                if isinstance(child, ast.Expression):
                    self.expr(child)


# ------------------------------------------------------------------ typing

ADDRESS = ast.ElementaryType("address")
UINT = ast.ElementaryType("uint256")
BOOL = ast.ElementaryType("bool")
BYTES32 = ast.ElementaryType("bytes32")

_GLOBAL_MEMBER_TYPES = {
    "msg.sender": ADDRESS,
    "msg.value": UINT,
    "msg.data": ast.ElementaryType("bytes"),
    "msg.sig": ast.ElementaryType("bytes4"),
    "tx.origin": ADDRESS,
    "tx.gasprice": UINT,
    "block.timestamp": UINT,
    "block.number": UINT,
    "block.difficulty": UINT,
    "block.prevrandao": UINT,
    "block.gaslimit": UINT,
    "block.coinbase": ADDRESS,
    "block.chainid": UINT,
    "block.basefee": UINT,
    "now": UINT,
}


def type_of(expr: Optional[ast.Expression], table: SymbolTable, contract: str) -> Optional[ast.TypeName]:
    """Best-effort static type of ``expr``; None when it cannot be told."""
    expr = ast.unparen(expr)
    if expr is None:
        return None
    if isinstance(expr, ast.Identifier):
        r = table.resolve(expr)
        if r.kind == "builtin":
            if expr.name == "this":
                return ast.UserType(contract)
            return _GLOBAL_MEMBER_TYPES.get(expr.name)
        return r.type_name
    if isinstance(expr, ast.MemberAccess):
        path = ast.member_path(expr)
        if path in _GLOBAL_MEMBER_TYPES:
            base = expr.expression
            if isinstance(base, ast.Identifier) and table.resolve(base).kind == "builtin":
                return _GLOBAL_MEMBER_TYPES[path]
        if expr.member in ("balance", "length"):
            return UINT
        base_t = type_of(expr.expression, table, contract)
        struct = _struct_def(base_t, table, contract)
        if struct is not None:
            for m in struct.members:
                if m.name == expr.member:
                    return m.type_name
        return None
    if isinstance(expr, ast.IndexAccess):
        base_t = type_of(expr.base, table, contract)
        if isinstance(base_t, ast.MappingType):
            return base_t.value
        if isinstance(base_t, ast.ArrayType):
            return base_t.base
        return None
    if isinstance(expr, ast.TypeCast):
        return expr.type_name
    if isinstance(expr, ast.Call):
        callee = ast.unparen(expr.callee)
        if isinstance(callee, ast.Identifier):
            r = table.resolve(callee)
            if r.kind == "type" and isinstance(r.decl, ast.ContractDef):
                return ast.UserType(callee.name)
            if r.kind == "function" and isinstance(r.decl, ast.FunctionDef) and r.decl.returns:
                return r.decl.returns[0].type_name
            if r.kind == "builtin" and callee.name in ("keccak256", "sha256", "blockhash"):
                return BYTES32
        if isinstance(callee, ast.NewExpr):
            return callee.type_name
        return None
    if isinstance(expr, ast.BinaryOp):
        if expr.op in ("==", "!=", "<", ">", "<=", ">=", "&&", "||"):
            return BOOL
        return type_of(expr.left, table, contract) or type_of(expr.right, table, contract)
    if isinstance(expr, ast.UnaryOp):
        return BOOL if expr.op == "!" else type_of(expr.operand, table, contract)
    if isinstance(expr, ast.Assignment):
        return type_of(expr.target, table, contract)
    if isinstance(expr, ast.Conditional):
        return type_of(expr.if_true, table, contract) or type_of(expr.if_false, table, contract)
    return None


def _struct_def(t: Optional[ast.TypeName], table: SymbolTable, contract: str) -> Optional[ast.StructDef]:
    if not isinstance(t, ast.UserType):
        return None
    scope = table.scope(contract)
    name = t.name.split(".")[-1]
    if scope is not None and isinstance(scope.types.get(name), ast.StructDef):
        return scope.types[name]  # type: ignore[return-value]
    for c in table.contracts.values():
        for s in c.structs:
            if s.name == name:
                return s
    return None


def is_integer(t: Optional[ast.TypeName]) -> bool:
    return isinstance(t, ast.ElementaryType) and ast.is_integer_type_name(t.name)


def is_address(t: Optional[ast.TypeName]) -> bool:
    return isinstance(t, ast.ElementaryType) and t.name == "address"


def is_contract_typed(t: Optional[ast.TypeName], table: SymbolTable, contract: str) -> bool:
    """Contract/interface typed, including user types we cannot see (imports)."""
    if not isinstance(t, ast.UserType):
        return False
    name = t.name.split(".")[-1]
    scope = table.scope(contract)
    if scope is not None and name in scope.types:
        return False
    if any(name in (s.name for s in (*c.structs, *c.enums)) for c in table.contracts.values()):
        return False
    if table.is_library(name):
        return False
    return True


def identifiers(node: Union[ast.Node, Iterable[ast.Node], None]) -> Iterable[ast.Identifier]:
    if node is None:
        return
    nodes = [node] if isinstance(node, ast.Node) else list(node)
    for n in nodes:
        for x in n.walk():
            if isinstance(x, ast.Identifier):
                yield x
