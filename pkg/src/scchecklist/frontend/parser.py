"""Recursive-descent parser for the supported Solidity subset.

Errors are collected rather than raised one at a time: after a malformed
statement or member the parser skips to the next ``;`` or closing brace and
carries on, so a single run reports every problem it can find.
"""
from __future__ import annotations

from typing import Optional

from . import ast
from .tokens import Span, Token, TokenKind, significant
from .versions import VersionSyntaxError, parse_constraint

ASSIGN_OPS = frozenset(["=", "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=", "<<=", ">>=", ">>>="])
BINARY_PREC = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3,
    "<": 4, ">": 4, "<=": 4, ">=": 4,
    "|": 5,
    "^": 6,
    "&": 7,
    "<<": 8, ">>": 8, ">>>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
    "**": 11,
}
PREFIX_OPS = frozenset(["!", "~", "-", "++", "--", "delete"])
VISIBILITIES = frozenset(["public", "external", "internal", "private"])
LOCATIONS = frozenset(["memory", "storage", "calldata"])
UNITS = frozenset(["wei", "gwei", "ether", "finney", "szabo", "seconds", "minutes", "hours", "days", "weeks", "years"])
CONTRACT_STARTERS = frozenset(["contract", "interface", "library", "abstract"])
UNSUPPORTED = {
    "try": "try/catch is not supported",
    "throw": "'throw' is pre-0.5 syntax; use revert()",
    "var": "'var' declarations are pre-0.5 syntax",
}


class ParseError(Exception):
    def __init__(self, message: str, span: Span, path: str = "<input>"):
        super().__init__(f"{path}:{span.line}:{span.col}: {message}")
        self.message = message
        self.span = span
        self.path = path


class ParseErrors(Exception):
    """Raised by :func:`parse` when the file has at least one syntax error."""

    def __init__(self, errors: list[ParseError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


class _Backtrack(Exception):
    pass


def parse(tokens: list[Token], path: str = "<input>", source_length: Optional[int] = None) -> ast.SourceUnit:
    return _Parser(tokens, path, source_length).parse_unit()


def parse_source(source: str, path: str = "<input>") -> ast.SourceUnit:
    from .tokens import tokenize

    return parse(tokenize(source, path), path, len(source.encode("utf-8")))


class _Parser:
    def __init__(self, tokens: list[Token], path: str, source_length: Optional[int]):
        self.toks = significant(tokens)
        self.path = path
        self.pos = 0
        self.errors: list[ParseError] = []
        self.speculating = 0
        if source_length is None:
            source_length = self.toks[-1].span.end if self.toks else 0
        self.length = source_length
        last = self.toks[-1].span if self.toks else Span(0, 0)
        self.eof = Token(TokenKind.PUNCT, "<eof>", Span(last.end, last.end, last.end_line, last.end_col, last.end_line, last.end_col))
        self.stmt_start: Optional[Token] = None

    # ------------------------------------------------------------ helpers

    def peek(self, k: int = 0) -> Token:
        j = self.pos + k
        return self.toks[j] if j < len(self.toks) else self.eof

    @property
    def last(self) -> Token:
        return self.toks[self.pos - 1] if self.pos > 0 else self.peek()

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.text == text and t.kind in (TokenKind.PUNCT, TokenKind.KEYWORD)

    def at_ident(self, k: int = 0, text: Optional[str] = None) -> bool:
        t = self.peek(k)
        return t.kind is TokenKind.IDENTIFIER and (text is None or t.text == text)

    def advance(self) -> Token:
        t = self.peek()
        if self.pos < len(self.toks):
            self.pos += 1
        return t

    def accept(self, text: str) -> Optional[Token]:
        return self.advance() if self.at(text) else None

    def fail(self, message: str, tok: Optional[Token] = None):
        if self.speculating:
            raise _Backtrack()
        tok = tok or self.peek()
        span = tok.span
        if self.stmt_start is not None and self.stmt_start.span.start <= span.start:
            span = self.stmt_start.span.join(span)
        if span.end <= span.start:
            span = Span(span.start, min(span.start + 1, max(self.length, span.start + 1)), span.line, span.col, span.end_line, span.end_col + 1)
        raise ParseError(message, span, self.path)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.peek().text
            self.fail(f"expected '{text}' but found '{found}'")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        if not self.at_ident():
            self.fail(f"expected {what} but found '{self.peek().text}'")
        return self.advance()

    def span_from(self, start: Token) -> Span:
        return start.span.join(self.last.span)

    def record(self, err: ParseError) -> None:
        self.errors.append(err)

    def speculate(self, fn):
        saved = self.pos
        self.speculating += 1
        try:
            return fn()
        except _Backtrack:
            self.pos = saved
            return None
        finally:
            self.speculating -= 1

    def skip_balanced(self) -> None:
        """Skip a bracketed group starting at the current opening token."""
        pairs = {"(": ")", "[": "]", "{": "}"}
        closing = [pairs[self.advance().text]]
        while closing and self.peek() is not self.eof:
            t = self.advance()
            if t.kind is TokenKind.PUNCT:
                if t.text in pairs:
                    closing.append(pairs[t.text])
                elif t.text == closing[-1]:
                    closing.pop()

    def sync(self, stop_at_keywords: frozenset = frozenset()) -> None:
        """Recover after an error.

        Skips past the next ``;`` at bracket depth zero, stops before an
        unmatched ``}``, and (when ``stop_at_keywords`` is given) stops after
        a balanced ``{...}`` group or before one of those keywords.
        """
        start = self.pos
        depth = 0
        while self.peek() is not self.eof:
            t = self.peek()
            punct = t.kind is TokenKind.PUNCT
            if punct and t.text in ("(", "[", "{"):
                depth += 1
            elif punct and t.text in (")", "]"):
                depth = max(0, depth - 1)
            elif punct and t.text == "}":
                if depth == 0:
                    if self.pos == start:
                        self.advance()
                    return
                depth -= 1
                if depth == 0 and stop_at_keywords:
                    self.advance()
                    return
            elif punct and t.text == ";" and depth == 0:
                self.advance()
                return
            elif depth == 0 and self.pos > start and t.kind is TokenKind.KEYWORD and t.text in stop_at_keywords:
                return
            self.advance()

    # ----------------------------------------------------------- top level

    def parse_unit(self) -> ast.SourceUnit:
        pragmas, imports, contracts = [], [], []
        names: set[str] = set()
        while self.peek() is not self.eof:
            self.stmt_start = self.peek()
            try:
                if self.at("pragma"):
                    pragmas.append(self.parse_pragma())
                elif self.at("import"):
                    imports.append(self.parse_import())
                elif self.peek().text in CONTRACT_STARTERS and self.peek().kind is TokenKind.KEYWORD:
                    c = self.parse_contract()
                    if c.name in names:
                        self.record(ParseError(f"duplicate contract name '{c.name}'", c.name_span, self.path))
                    names.add(c.name)
                    contracts.append(c)
                else:
                    self.fail(f"expected pragma, import or contract definition but found '{self.peek().text}'")
            except ParseError as e:
                self.record(e)
                self.sync(stop_at_keywords=CONTRACT_STARTERS | {"pragma", "import"})
        if self.errors:
            raise ParseErrors(self.errors)
        return ast.SourceUnit(
            path=self.path,
            pragmas=tuple(pragmas),
            imports=tuple(imports),
            contracts=tuple(contracts),
            length=self.length,
            span=Span(0, self.length, 1, 1, self.eof.span.end_line, self.eof.span.end_col),
        )

    def parse_pragma(self) -> ast.PragmaDirective:
        start = self.expect("pragma")
        name_tok = self.advance()
        if name_tok.kind not in (TokenKind.IDENTIFIER, TokenKind.KEYWORD):
            self.fail("expected pragma name", name_tok)
        parts: list[Token] = []
        while not self.at(";"):
            if self.peek() is self.eof:
                self.fail("unterminated pragma directive")
            parts.append(self.advance())
        self.expect(";")
        value = _glue(parts)
        constraint = None
        if name_tok.text == "solidity":
            try:
                constraint = parse_constraint(value)
            except VersionSyntaxError as e:
                self.fail(str(e), parts[0] if parts else name_tok)
        return ast.PragmaDirective(name_tok.text, value, constraint, span=self.span_from(start))

    def parse_import(self) -> str:
        self.expect("import")
        path = None
        while not self.at(";"):
            t = self.peek()
            if t is self.eof:
                self.fail("unterminated import directive")
            if t.kind is TokenKind.STRING and path is None:
                path = t.text[1:-1]
            if t.text == "{":
                self.skip_balanced()
                continue
            self.advance()
        self.expect(";")
        if path is None:
            self.fail("import without a path")
        return path

    # ------------------------------------------------------------ contracts

    def parse_contract(self) -> ast.ContractDef:
        start = self.peek()
        kind = self.advance().text
        if kind == "abstract":
            self.expect("contract")
            kind = "abstract-contract"
        name_tok = self.expect_ident("contract name")
        inherits = []
        if self.accept("is"):
            while True:
                s = self.peek()
                base = self.parse_dotted_name()
                args = self.parse_call_args()[0] if self.at("(") else None
                inherits.append(ast.InheritanceSpec(base, args, span=self.span_from(s)))
                if not self.accept(","):
                    break
        self.expect("{")
        members: dict[str, list] = {k: [] for k in ("state_vars", "functions", "modifiers", "events", "errors", "structs", "enums", "using")}
        while not self.at("}"):
            if self.peek() is self.eof:
                self.fail(f"unterminated contract '{name_tok.text}'")
            self.stmt_start = self.peek()
            try:
                key, node = self.parse_member()
                members[key].append(node)
            except ParseError as e:
                self.record(e)
                self.sync(stop_at_keywords=frozenset(["function", "modifier", "event", "constructor", "struct", "enum", "using"]))
        self.expect("}")
        return ast.ContractDef(
            name_tok.text,
            kind,
            tuple(inherits),
            name_span=name_tok.span,
            span=self.span_from(start),
            **{k: tuple(v) for k, v in members.items()},
        )

    def parse_dotted_name(self) -> str:
        parts = [self.expect_ident().text]
        while self.at(".") and self.at_ident(1):
            self.advance()
            parts.append(self.advance().text)
        return ".".join(parts)

    def parse_member(self):
        t = self.peek()
        if t.kind is TokenKind.KEYWORD:
            if t.text in ("function", "constructor", "fallback", "receive"):
                return "functions", self.parse_function()
            if t.text == "modifier":
                return "modifiers", self.parse_modifier()
            if t.text == "event":
                return "events", self.parse_event()
            if t.text == "struct":
                return "structs", self.parse_struct()
            if t.text == "enum":
                return "enums", self.parse_enum()
            if t.text == "using":
                return "using", self.parse_using()
            if t.text in UNSUPPORTED:
                self.fail(UNSUPPORTED[t.text])
        if self.at_ident(0, "error") and self.at_ident(1) and self.at("(", 2):
            return "errors", self.parse_error_def()
        return "state_vars", self.parse_state_var()

    def parse_using(self) -> ast.UsingFor:
        start = self.expect("using")
        if self.at("{"):
            self.fail("'using {...} for' lists are not supported")
        lib = self.parse_dotted_name()
        self.expect("for")
        target = None
        if not self.accept("*"):
            target = self.parse_type()
        if self.at_ident(0, "global"):
            self.advance()
        self.expect(";")
        return ast.UsingFor(lib, target, span=self.span_from(start))

    def parse_struct(self) -> ast.StructDef:
        start = self.expect("struct")
        name = self.expect_ident("struct name")
        self.expect("{")
        members = []
        while not self.at("}"):
            s = self.peek()
            ty = self.parse_type()
            n = self.expect_ident("member name")
            self.expect(";")
            members.append(ast.Parameter(ty, n.text, name_span=n.span, span=self.span_from(s)))
        self.expect("}")
        return ast.StructDef(name.text, tuple(members), name_span=name.span, span=self.span_from(start))

    def parse_enum(self) -> ast.EnumDef:
        start = self.expect("enum")
        name = self.expect_ident("enum name")
        self.expect("{")
        values = []
        while not self.at("}"):
            values.append(self.expect_ident("enum value").text)
            if not self.accept(","):
                break
        self.expect("}")
        return ast.EnumDef(name.text, tuple(values), name_span=name.span, span=self.span_from(start))

    def parse_event(self) -> ast.EventDef:
        start = self.expect("event")
        name = self.expect_ident("event name")
        params = self.parse_params(allow_indexed=True)
        anonymous = bool(self.accept("anonymous"))
        self.expect(";")
        return ast.EventDef(name.text, params, anonymous, name_span=name.span, span=self.span_from(start))

    def parse_error_def(self) -> ast.ErrorDef:
        start = self.advance()
        name = self.expect_ident("error name")
        params = self.parse_params()
        self.expect(";")
        return ast.ErrorDef(name.text, params, name_span=name.span, span=self.span_from(start))

    def parse_state_var(self) -> ast.VarDecl:
        start = self.peek()
        ty = self.parse_type()
        visibility, mutability, overrides = "internal", None, False
        while True:
            t = self.peek()
            if t.text in VISIBILITIES and t.kind is TokenKind.KEYWORD:
                if t.text == "external":
                    self.fail("state variables cannot be external")
                visibility = self.advance().text
            elif t.text in ("constant", "immutable") and t.kind is TokenKind.KEYWORD:
                mutability = self.advance().text
            elif self.at("override"):
                self.advance()
                overrides = True
                if self.at("("):
                    self.skip_balanced()
            else:
                break
        name = self.expect_ident("state variable name")
        value = None
        if self.accept("="):
            value = self.parse_expression()
        self.expect(";")
        return ast.VarDecl(ty, name.text, visibility, mutability, overrides, value, name_span=name.span, span=self.span_from(start))

    def parse_params(self, allow_indexed: bool = False) -> tuple[ast.Parameter, ...]:
        self.expect("(")
        params = []
        while not self.at(")"):
            s = self.peek()
            ty = self.parse_type()
            location = None
            indexed = False
            if self.peek().text in LOCATIONS and self.peek().kind is TokenKind.KEYWORD:
                location = self.advance().text
            if allow_indexed and self.accept("indexed"):
                indexed = True
            name = None
            name_span = s.span
            if self.at_ident():
                nt = self.advance()
                name, name_span = nt.text, nt.span
            params.append(ast.Parameter(ty, name, location, indexed, name_span=name_span, span=self.span_from(s)))
            if not self.accept(","):
                break
        self.expect(")")
        return tuple(params)

    def parse_function(self) -> ast.FunctionDef:
        start = self.advance()
        kind = start.text
        name = ""
        name_span = start.span
        if kind == "function":
            if self.at_ident():
                nt = self.advance()
                name, name_span = nt.text, nt.span
            elif self.at("("):
                kind = "fallback"  # pre-0.6 unnamed fallback
            else:
                self.fail("expected function name")
        params = self.parse_params()
        visibility, mutability, virtual, overrides = "unspecified", "nonpayable", False, None
        modifiers, returns = [], ()
        while True:
            t = self.peek()
            if t.kind is TokenKind.KEYWORD and t.text in VISIBILITIES:
                visibility = self.advance().text
            elif t.kind is TokenKind.KEYWORD and t.text in ("payable", "view", "pure"):
                mutability = self.advance().text
            elif self.at("constant"):
                self.fail("'constant' functions are pre-0.5 syntax; use view")
            elif self.accept("virtual"):
                virtual = True
            elif self.accept("override"):
                names: list[str] = []
                if self.accept("("):
                    while not self.at(")"):
                        names.append(self.parse_dotted_name())
                        if not self.accept(","):
                            break
                    self.expect(")")
                overrides = tuple(names)
            elif self.accept("returns"):
                returns = self.parse_params()
            elif self.at_ident():
                ms = self.peek()
                mname = self.parse_dotted_name()
                args = self.parse_call_args()[0] if self.at("(") else None
                modifiers.append(ast.ModifierInvocation(mname, args, span=self.span_from(ms)))
            else:
                break
        body = None
        if not self.accept(";"):
            body = self.parse_block()
        if kind == "receive" and params:
            self.fail("receive function cannot take parameters", start)
        return ast.FunctionDef(
            name, kind, params, returns, visibility, mutability, tuple(modifiers), virtual, overrides, body,
            name_span=name_span, span=self.span_from(start),
        )

    def parse_modifier(self) -> ast.ModifierDef:
        start = self.expect("modifier")
        name = self.expect_ident("modifier name")
        params = self.parse_params() if self.at("(") else ()
        virtual, overrides = False, None
        while True:
            if self.accept("virtual"):
                virtual = True
            elif self.accept("override"):
                names: list[str] = []
                if self.accept("("):
                    while not self.at(")"):
                        names.append(self.parse_dotted_name())
                        if not self.accept(","):
                            break
                    self.expect(")")
                overrides = tuple(names)
            else:
                break
        body = None if self.accept(";") else self.parse_block()
        return ast.ModifierDef(name.text, params, virtual, overrides, body, name_span=name.span, span=self.span_from(start))

    # ---------------------------------------------------------------- types

    def parse_type(self) -> ast.TypeName:
        start = self.peek()
        if self.accept("mapping"):
            self.expect("(")
            key = self.parse_type()
            if self.at_ident():
                self.advance()
            self.expect("=>")
            value = self.parse_type()
            if self.at_ident():
                self.advance()
            self.expect(")")
            ty: ast.TypeName = ast.MappingType(key, value, span=self.span_from(start))
        elif self.at("function"):
            self.fail("function types are not supported")
        elif self.at_ident() and ast.is_elementary(start.text):
            self.advance()
            payable = start.text == "address" and bool(self.accept("payable"))
            ty = ast.ElementaryType(start.text, payable, span=self.span_from(start))
        elif self.at_ident():
            ty = ast.UserType(self.parse_dotted_name(), span=self.span_from(start))
        else:
            self.fail(f"expected type name but found '{start.text}'")
        while self.at("["):
            self.advance()
            length = None if self.at("]") else self.parse_expression()
            self.expect("]")
            ty = ast.ArrayType(ty, length, span=self.span_from(start))
        return ty

    # ----------------------------------------------------------- statements

    def parse_block(self) -> ast.Block:
        start = self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.peek() is self.eof:
                self.fail("unterminated block", start)
            outer = self.stmt_start
            self.stmt_start = self.peek()
            try:
                stmts.append(self.parse_statement())
            except ParseError as e:
                if self.speculating:
                    raise
                self.record(e)
                self.sync()
            finally:
                self.stmt_start = outer
        self.expect("}")
        return ast.Block(tuple(stmts), span=self.span_from(start))

    def parse_statement(self) -> ast.Statement:
        t = self.peek()
        if t.kind is TokenKind.PUNCT and t.text == "{":
            return self.parse_block()
        if t.kind is TokenKind.KEYWORD:
            handler = {
                "if": self.parse_if,
                "for": self.parse_for,
                "while": self.parse_while,
                "do": self.parse_do,
                "return": self.parse_return,
                "emit": self.parse_emit,
                "unchecked": self.parse_unchecked,
                "assembly": self.parse_assembly,
            }.get(t.text)
            if handler:
                return handler()
            if t.text in ("break", "continue"):
                self.advance()
                self.expect(";")
                cls = ast.Break if t.text == "break" else ast.Continue
                return cls(span=self.span_from(t))
            if t.text in UNSUPPORTED:
                self.fail(UNSUPPORTED[t.text])
        if self.at_ident(0, "_") and self.at(";", 1):
            self.advance()
            self.advance()
            return ast.Placeholder(span=self.span_from(t))
        if self.at_ident(0, "revert") and self.at_ident(1):
            self.advance()
            call = self.parse_expression()
            if not isinstance(call, ast.Call):
                self.fail("expected error call after 'revert'")
            self.expect(";")
            return ast.RevertStatement(call, span=self.span_from(t))
        return self.parse_simple_statement()

    def parse_simple_statement(self) -> ast.Statement:
        start = self.peek()
        decl = self.speculate(self._var_decl_statement)
        if decl is not None:
            return decl
        expr = self.parse_expression()
        self.expect(";")
        return ast.ExpressionStatement(expr, span=self.span_from(start))

    def _local_var(self) -> ast.LocalVar:
        s = self.peek()
        ty = self.parse_type()
        location = None
        if self.peek().text in LOCATIONS and self.peek().kind is TokenKind.KEYWORD:
            location = self.advance().text
        name = self.expect_ident()
        return ast.LocalVar(ty, name.text, location, name_span=name.span, span=self.span_from(s))

    def _var_decl_statement(self) -> ast.VarDeclStatement:
        start = self.peek()
        if self.at("("):
            self.advance()
            decls: list[Optional[ast.LocalVar]] = []
            while True:
                if self.at(",") or self.at(")"):
                    decls.append(None)
                else:
                    decls.append(self._local_var())
                if not self.accept(","):
                    break
            self.expect(")")
            if not any(decls):
                self.fail("empty tuple declaration")
            self.expect("=")
            # committed: this is a declaration, errors are real from here on
            self.speculating -= 1
            try:
                value = self.parse_expression()
                self.expect(";")
            finally:
                self.speculating += 1
            return ast.VarDeclStatement(tuple(decls), value, True, span=self.span_from(start))
        var = self._local_var()
        if not (self.at("=") or self.at(";")):
            self.fail("not a declaration")
        self.speculating -= 1
        try:
            value = self.parse_expression() if self.accept("=") else None
            self.expect(";")
        finally:
            self.speculating += 1
        return ast.VarDeclStatement((var,), value, False, span=self.span_from(start))

    def parse_if(self) -> ast.If:
        start = self.expect("if")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        then = self.parse_statement()
        orelse = self.parse_statement() if self.accept("else") else None
        return ast.If(cond, then, orelse, span=self.span_from(start))

    def parse_for(self) -> ast.For:
        start = self.expect("for")
        self.expect("(")
        init = None if self.accept(";") else self.parse_simple_statement()
        cond = None if self.at(";") else self.parse_expression()
        self.expect(";")
        update = None if self.at(")") else self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        return ast.For(init, cond, update, body, span=self.span_from(start))

    def parse_while(self) -> ast.While:
        start = self.expect("while")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        return ast.While(cond, body, span=self.span_from(start))

    def parse_do(self) -> ast.DoWhile:
        start = self.expect("do")
        body = self.parse_statement()
        self.expect("while")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        self.expect(";")
        return ast.DoWhile(body, cond, span=self.span_from(start))

    def parse_return(self) -> ast.Return:
        start = self.expect("return")
        value = None if self.at(";") else self.parse_expression()
        self.expect(";")
        return ast.Return(value, span=self.span_from(start))

    def parse_emit(self) -> ast.Emit:
        start = self.expect("emit")
        call = self.parse_expression()
        if not isinstance(call, ast.Call):
            self.fail("expected event invocation after 'emit'")
        self.expect(";")
        return ast.Emit(call, span=self.span_from(start))

    def parse_unchecked(self) -> ast.UncheckedBlock:
        start = self.expect("unchecked")
        block = self.parse_block()
        return ast.UncheckedBlock(block, span=self.span_from(start))

    def parse_assembly(self) -> ast.InlineAssembly:
        start = self.expect("assembly")
        dialect = None
        if self.peek().kind is TokenKind.STRING:
            dialect = self.advance().text
        if self.at("("):
            self.fail("assembly flags are not supported")
        if not self.at("{"):
            self.fail("expected '{' after 'assembly'")
        body_start = self.pos
        self.skip_balanced()
        inner = self.toks[body_start + 1 : self.pos - 1]
        if self.last.text != "}":
            self.fail("unterminated assembly block", start)
        return ast.InlineAssembly(" ".join(t.text for t in inner), dialect, span=self.span_from(start))

    # ---------------------------------------------------------- expressions

    def parse_expression(self) -> ast.Expression:
        start = self.peek()
        lhs = self.parse_conditional()
        if self.peek().kind is TokenKind.PUNCT and self.peek().text in ASSIGN_OPS:
            op = self.advance().text
            rhs = self.parse_expression()
            return ast.Assignment(op, lhs, rhs, span=self.span_from(start))
        return lhs

    def parse_conditional(self) -> ast.Expression:
        start = self.peek()
        cond = self.parse_binary(1)
        if self.accept("?"):
            a = self.parse_expression()
            self.expect(":")
            b = self.parse_expression()
            return ast.Conditional(cond, a, b, span=self.span_from(start))
        return cond

    def parse_binary(self, min_prec: int) -> ast.Expression:
        start = self.peek()
        left = self.parse_unary()
        while True:
            t = self.peek()
            prec = BINARY_PREC.get(t.text) if t.kind is TokenKind.PUNCT else None
            if prec is None or prec < min_prec:
                return left
            self.advance()
            right = self.parse_binary(prec if t.text == "**" else prec + 1)
            left = ast.BinaryOp(t.text, left, right, span=self.span_from(start))

    def parse_unary(self) -> ast.Expression:
        t = self.peek()
        if t.text in PREFIX_OPS and t.kind in (TokenKind.PUNCT, TokenKind.KEYWORD):
            self.advance()
            operand = self.parse_unary()
            return ast.UnaryOp(t.text, operand, True, span=self.span_from(t))
        if t.kind is TokenKind.PUNCT and t.text == "+":
            self.fail("unary '+' is not allowed")
        return self.parse_postfix()

    def parse_call_args(self) -> tuple[tuple[ast.Expression, ...], Optional[tuple[str, ...]]]:
        self.expect("(")
        if self.at("{"):
            self.advance()
            names, args = [], []
            while not self.at("}"):
                names.append(self.expect_ident("argument name").text)
                self.expect(":")
                args.append(self.parse_expression())
                if not self.accept(","):
                    break
            self.expect("}")
            self.expect(")")
            return tuple(args), tuple(names)
        args = []
        while not self.at(")"):
            args.append(self.parse_expression())
            if not self.accept(","):
                break
        self.expect(")")
        return tuple(args), None

    def parse_postfix(self) -> ast.Expression:
        start = self.peek()
        expr = self.parse_primary()
        options: tuple[ast.CallOption, ...] = ()
        while True:
            t = self.peek()
            if t.kind is not TokenKind.PUNCT:
                break
            if t.text == ".":
                self.advance()
                m = self.advance()
                if m.kind not in (TokenKind.IDENTIFIER, TokenKind.KEYWORD):
                    self.fail("expected member name", m)
                expr = ast.MemberAccess(expr, m.text, span=self.span_from(start))
            elif t.text == "[":
                self.advance()
                index = None if self.at("]") else self.parse_expression()
                if self.at(":"):
                    self.fail("array slices are not supported")
                self.expect("]")
                expr = ast.IndexAccess(expr, index, span=self.span_from(start))
            elif t.text == "{" and self.at_ident(1) and self.at(":", 2):
                self.advance()
                opts = []
                while not self.at("}"):
                    os_ = self.peek()
                    name = self.expect_ident("call option").text
                    self.expect(":")
                    opts.append(ast.CallOption(name, self.parse_expression(), span=self.span_from(os_)))
                    if not self.accept(","):
                        break
                self.expect("}")
                options = tuple(opts)
                if not self.at("("):
                    self.fail("call options must be followed by an argument list")
                continue
            elif t.text == "(":
                args, names = self.parse_call_args()
                expr = ast.Call(expr, args, names, options, span=self.span_from(start))
                options = ()
            elif t.text in ("++", "--"):
                self.advance()
                expr = ast.UnaryOp(t.text, expr, False, span=self.span_from(start))
            else:
                break
        return expr

    def parse_primary(self) -> ast.Expression:
        t = self.peek()
        if t.kind is TokenKind.IDENTIFIER:
            if ast.is_elementary(t.text) and self.at("(", 1):
                self.advance()
                ty = ast.ElementaryType(t.text, span=t.span)
                self.expect("(")
                inner = self.parse_expression()
                self.expect(")")
                return ast.TypeCast(ty, inner, span=self.span_from(t))
            if t.text in ("hex", "unicode") and self.peek(1).kind is TokenKind.STRING:
                self.advance()
                s = self.advance()
                return ast.Literal(f"{t.text}-string", t.text + s.text, span=self.span_from(t))
            if t.text == "type" and self.at("(", 1):
                self.advance()
                self.advance()
                ty = self.parse_type()
                self.expect(")")
                te = ast.TypeExpr(ty, span=ty.span)
                return ast.Call(ast.Identifier("type", span=t.span), (te,), span=self.span_from(t))
            self.advance()
            return ast.Identifier(t.text, span=t.span)
        if t.kind is TokenKind.KEYWORD:
            if t.text == "payable" and self.at("(", 1):
                self.advance()
                self.advance()
                inner = self.parse_expression()
                self.expect(")")
                return ast.TypeCast(ast.ElementaryType("address", True, span=t.span), inner, span=self.span_from(t))
            if t.text in ("true", "false"):
                self.advance()
                return ast.Literal("bool", t.text, span=t.span)
            if t.text == "new":
                self.advance()
                ty = self.parse_type()
                return ast.NewExpr(ty, span=self.span_from(t))
            if t.text in UNSUPPORTED:
                self.fail(UNSUPPORTED[t.text])
            self.fail(f"unexpected keyword '{t.text}' in expression")
        if t.kind is TokenKind.INTEGER:
            self.advance()
            text = t.text
            # "1.5" arrives as INTEGER "." INTEGER with no gaps
            if self.at(".") and self.peek(1).kind is TokenKind.INTEGER and self.peek().span.start == t.span.end and self.peek(1).span.start == self.peek().span.end:
                self.advance()
                text += "." + self.advance().text
            unit = None
            if self.at_ident() and self.peek().text in UNITS:
                unit = self.advance().text
            return ast.Literal("number", text, unit, span=self.span_from(t))
        if t.kind is TokenKind.STRING:
            parts = [self.advance().text]
            while self.peek().kind is TokenKind.STRING:
                parts.append(self.advance().text)
            return ast.Literal("string", " ".join(parts), span=self.span_from(t))
        if t.kind is TokenKind.PUNCT and t.text in ("(", "["):
            closer = ")" if t.text == "(" else "]"
            self.advance()
            comps: list[Optional[ast.Expression]] = []
            if not self.at(closer):
                while True:
                    if self.at(",") or self.at(closer):
                        comps.append(None)
                    else:
                        comps.append(self.parse_expression())
                    if not self.accept(","):
                        break
            self.expect(closer)
            if t.text == "[" and (not comps or any(c is None for c in comps)):
                self.fail("inline arrays cannot have empty components", t)
            return ast.TupleExpr(tuple(comps), t.text == "[", span=self.span_from(t))
        if t is self.eof:
            self.fail("unexpected end of file in expression")
        self.fail(f"expected expression but found '{t.text}'")


def _glue(tokens: list[Token]) -> str:
    """Rebuild text from tokens, keeping a space only where the source had a gap."""
    out = []
    prev_end = None
    for t in tokens:
        if prev_end is not None and t.span.start > prev_end:
            out.append(" ")
        out.append(t.text)
        prev_end = t.span.end
    return "".join(out)
