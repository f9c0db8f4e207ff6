"""Span-annotated syntax tree for the supported Solidity subset.

Nodes are frozen dataclasses. Equality is structural and ignores spans, so
two parses of differently formatted but equivalent text compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Iterator, Optional

from .tokens import FILE_START, Span
from .versions import VersionConstraint

ELEMENTARY_TYPES = frozenset(
    ["address", "bool", "string", "bytes", "byte", "uint", "int", "fixed", "ufixed"]
    + [f"uint{n}" for n in range(8, 257, 8)]
    + [f"int{n}" for n in range(8, 257, 8)]
    + [f"bytes{n}" for n in range(1, 33)]
)


def is_elementary(name: str) -> bool:
    return name in ELEMENTARY_TYPES


def is_integer_type_name(name: str) -> bool:
    return name in ELEMENTARY_TYPES and (name.startswith("uint") or name.startswith("int"))


@dataclass(frozen=True, kw_only=True)
class Node:
    span: Span = field(default=FILE_START, compare=False, repr=False)

    def children(self) -> Iterator[Node]:
        for f in fields(self):
            if f.name == "span" or not f.compare:
                continue
            yield from _nodes_in(getattr(self, f.name))

    def walk(self) -> Iterator[Node]:
        """Pre-order traversal including ``self``."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(list(node.children())))


def _nodes_in(value) -> Iterator[Node]:
    if isinstance(value, Node):
        yield value
    elif isinstance(value, tuple):
        for v in value:
            yield from _nodes_in(v)


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class TypeName(Node):
    pass


@dataclass(frozen=True)
class ElementaryType(TypeName):
    name: str
    payable: bool = False


@dataclass(frozen=True)
class UserType(TypeName):
    name: str  # possibly dotted, e.g. "Lib.Struct"


@dataclass(frozen=True)
class MappingType(TypeName):
    key: TypeName
    value: TypeName


@dataclass(frozen=True)
class ArrayType(TypeName):
    base: TypeName
    length: Optional[Expression] = None

    @property
    def is_dynamic(self) -> bool:
        return self.length is None


# ---------------------------------------------------------- expressions


@dataclass(frozen=True)
class Expression(Node):
    pass


@dataclass(frozen=True)
class Identifier(Expression):
    name: str


@dataclass(frozen=True)
class MemberAccess(Expression):
    expression: Expression
    member: str


@dataclass(frozen=True)
class IndexAccess(Expression):
    base: Expression
    index: Optional[Expression]


@dataclass(frozen=True)
class CallOption(Node):
    name: str
    value: Expression


@dataclass(frozen=True)
class Call(Expression):
    callee: Expression
    args: tuple[Expression, ...] = ()
    # set when called with named arguments: f({a: 1, b: 2})
    arg_names: Optional[tuple[str, ...]] = None
    # value/gas options: addr.call{value: v}("")
    options: tuple[CallOption, ...] = ()


@dataclass(frozen=True)
class BinaryOp(Expression):
    op: str
    left: Expression
    right: Expression


@dataclass(frozen=True)
class UnaryOp(Expression):
    op: str
    operand: Expression
    prefix: bool = True


@dataclass(frozen=True)
class Assignment(Expression):
    op: str  # "=", "+=", ...
    target: Expression
    value: Expression


@dataclass(frozen=True)
class Conditional(Expression):
    condition: Expression
    if_true: Expression
    if_false: Expression


@dataclass(frozen=True)
class Literal(Expression):
    kind: str  # number, string, bool, hex-string, unicode-string
    value: str
    unit: Optional[str] = None  # ether, wei, days, ...

    def int_value(self) -> Optional[int]:
        if self.kind != "number":
            return None
        text = self.value.replace("_", "")
        try:
            if text.lower().startswith("0x"):
                return int(text, 16)
            if "e" in text.lower():
                mant, exp = text.lower().split("e")
                if int(exp) < 0 or "." in mant:
                    return None
                return int(mant) * 10 ** int(exp)
            if "." in text:
                return None
            return int(text)
        except ValueError:
            return None


@dataclass(frozen=True)
class TupleExpr(Expression):
    """Parenthesised expression list; a one-element tuple is a grouping."""

    components: tuple[Optional[Expression], ...]
    is_array: bool = False


@dataclass(frozen=True)
class NewExpr(Expression):
    type_name: TypeName


@dataclass(frozen=True)
class TypeCast(Expression):
    """Conversion to an elementary type: ``address(x)``, ``uint8(y)``, ``payable(z)``."""

    type_name: ElementaryType
    expression: Expression


@dataclass(frozen=True)
class TypeExpr(Expression):
    """A type used in expression position, e.g. ``type(uint).max`` or ``abi.decode(d, (uint[]))``."""

    type_name: TypeName


# ----------------------------------------------------------- statements


@dataclass(frozen=True)
class Statement(Node):
    pass


@dataclass(frozen=True)
class Block(Statement):
    statements: tuple[Statement, ...] = ()


@dataclass(frozen=True)
class UncheckedBlock(Statement):
    block: Block


@dataclass(frozen=True)
class If(Statement):
    condition: Expression
    then: Statement
    orelse: Optional[Statement] = None


@dataclass(frozen=True)
class For(Statement):
    init: Optional[Statement]
    condition: Optional[Expression]
    update: Optional[Expression]
    body: Statement


@dataclass(frozen=True)
class While(Statement):
    condition: Expression
    body: Statement


@dataclass(frozen=True)
class DoWhile(Statement):
    body: Statement
    condition: Expression


@dataclass(frozen=True)
class Return(Statement):
    value: Optional[Expression] = None


@dataclass(frozen=True)
class Break(Statement):
    pass


@dataclass(frozen=True)
class Continue(Statement):
    pass


@dataclass(frozen=True)
class Emit(Statement):
    call: Call


@dataclass(frozen=True)
class RevertStatement(Statement):
    """``revert CustomError(...)``; plain ``revert(...)`` is an ordinary call."""

    call: Call


@dataclass(frozen=True)
class ExpressionStatement(Statement):
    expression: Expression


@dataclass(frozen=True)
class LocalVar(Node):
    type_name: TypeName
    name: str
    location: Optional[str] = None
    name_span: Span = field(default=FILE_START, compare=False, repr=False)


@dataclass(frozen=True)
class VarDeclStatement(Statement):
    # None entries are skipped tuple slots: (bool ok, ) = ...
    declarations: tuple[Optional[LocalVar], ...]
    value: Optional[Expression] = None
    is_tuple: bool = False


@dataclass(frozen=True)
class InlineAssembly(Statement):
    """Opaque assembly region; ``body`` is the token texts joined by spaces."""

    body: str
    dialect: Optional[str] = None


@dataclass(frozen=True)
class Placeholder(Statement):
    pass


# ---------------------------------------------------------- definitions


@dataclass(frozen=True)
class Parameter(Node):
    type_name: TypeName
    name: Optional[str] = None
    location: Optional[str] = None
    indexed: bool = False
    name_span: Span = field(default=FILE_START, compare=False, repr=False)


@dataclass(frozen=True)
class VarDecl(Node):
    """A state variable."""

    type_name: TypeName
    name: str
    visibility: str = "internal"
    mutability: Optional[str] = None  # constant, immutable
    overrides: bool = False
    value: Optional[Expression] = None
    name_span: Span = field(default=FILE_START, compare=False, repr=False)


@dataclass(frozen=True)
class ModifierInvocation(Node):
    name: str
    args: Optional[tuple[Expression, ...]] = None


@dataclass(frozen=True)
class FunctionDef(Node):
    name: str
    kind: str = "function"  # function, constructor, fallback, receive
    params: tuple[Parameter, ...] = ()
    returns: tuple[Parameter, ...] = ()
    visibility: str = "unspecified"
    mutability: str = "nonpayable"
    modifiers: tuple[ModifierInvocation, ...] = ()
    is_virtual: bool = False
    overrides: Optional[tuple[str, ...]] = None
    body: Optional[Block] = None
    name_span: Span = field(default=FILE_START, compare=False, repr=False)

    @property
    def display_name(self) -> str:
        return self.name or self.kind

    @property
    def is_public(self) -> bool:
        return self.visibility in ("public", "external") or self.kind in ("fallback", "receive")

    @property
    def is_mutating(self) -> bool:
        return self.mutability not in ("view", "pure")


@dataclass(frozen=True)
class ModifierDef(Node):
    name: str
    params: tuple[Parameter, ...] = ()
    is_virtual: bool = False
    overrides: Optional[tuple[str, ...]] = None
    body: Optional[Block] = None
    name_span: Span = field(default=FILE_START, compare=False, repr=False)


@dataclass(frozen=True)
class EventDef(Node):
    name: str
    params: tuple[Parameter, ...] = ()
    anonymous: bool = False
    name_span: Span = field(default=FILE_START, compare=False, repr=False)


@dataclass(frozen=True)
class ErrorDef(Node):
    name: str
    params: tuple[Parameter, ...] = ()
    name_span: Span = field(default=FILE_START, compare=False, repr=False)


@dataclass(frozen=True)
class StructDef(Node):
    name: str
    members: tuple[Parameter, ...] = ()
    name_span: Span = field(default=FILE_START, compare=False, repr=False)


@dataclass(frozen=True)
class EnumDef(Node):
    name: str
    values: tuple[str, ...] = ()
    name_span: Span = field(default=FILE_START, compare=False, repr=False)


@dataclass(frozen=True)
class UsingFor(Node):
    library: str
    target: Optional[TypeName] = None  # None means "*"


@dataclass(frozen=True)
class InheritanceSpec(Node):
    name: str
    args: Optional[tuple[Expression, ...]] = None


@dataclass(frozen=True)
class ContractDef(Node):
    name: str
    kind: str = "contract"  # contract, interface, library, abstract-contract
    inherits: tuple[InheritanceSpec, ...] = ()
    state_vars: tuple[VarDecl, ...] = ()
    functions: tuple[FunctionDef, ...] = ()
    modifiers: tuple[ModifierDef, ...] = ()
    events: tuple[EventDef, ...] = ()
    errors: tuple[ErrorDef, ...] = ()
    structs: tuple[StructDef, ...] = ()
    enums: tuple[EnumDef, ...] = ()
    using: tuple[UsingFor, ...] = ()
    name_span: Span = field(default=FILE_START, compare=False, repr=False)

    @property
    def bases(self) -> list[str]:
        return [b.name for b in self.inherits]

    @property
    def event_names(self) -> list[str]:
        return [e.name for e in self.events]

    @property
    def has_fallback(self) -> bool:
        return any(f.kind == "fallback" for f in self.functions)

    @property
    def has_receive(self) -> bool:
        return any(f.kind == "receive" for f in self.functions)


@dataclass(frozen=True)
class PragmaDirective(Node):
    name: str
    value: str  # raw text after the pragma name, tokens joined by single spaces
    constraint: Optional[VersionConstraint] = field(default=None, compare=False)


@dataclass(frozen=True)
class SourceUnit(Node):
    path: str = field(compare=False)
    pragmas: tuple[PragmaDirective, ...] = ()
    imports: tuple[str, ...] = ()
    contracts: tuple[ContractDef, ...] = ()
    length: int = field(default=0, compare=False)

    def contract(self, name: str) -> Optional[ContractDef]:
        for c in self.contracts:
            if c.name == name:
                return c
        return None

    @property
    def solidity_pragmas(self) -> list[PragmaDirective]:
        return [p for p in self.pragmas if p.name == "solidity"]


def unparen(expr: Optional[Expression]) -> Optional[Expression]:
    """Strip grouping parentheses."""
    while isinstance(expr, TupleExpr) and not expr.is_array and len(expr.components) == 1:
        expr = expr.components[0]
    return expr


def member_path(expr: Expression) -> Optional[str]:
    """``block.timestamp`` -> "block.timestamp"; None for anything but identifier chains."""
    expr = unparen(expr)
    if isinstance(expr, Identifier):
        return expr.name
    if isinstance(expr, MemberAccess):
        base = member_path(expr.expression)
        return f"{base}.{expr.member}" if base is not None else None
    return None
