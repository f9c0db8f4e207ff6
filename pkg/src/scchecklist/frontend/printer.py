"""Render a SourceUnit back to Solidity text.

Output is canonical (4-space indent, one member per line) rather than
layout-preserving; re-parsing it yields a structurally equal tree.
"""
from __future__ import annotations

from . import ast

INDENT = "    "


def pretty_print(unit: ast.SourceUnit) -> str:
    out: list[str] = []
    for p in unit.pragmas:
        out.append(f"pragma {p.name} {p.value};" if p.value else f"pragma {p.name};")
    for path in unit.imports:
        out.append(f'import "{path}";')
    for c in unit.contracts:
        if out:
            out.append("")
        out.extend(_contract(c))
    return "\n".join(out) + ("\n" if out else "")


def _contract(c: ast.ContractDef) -> list[str]:
    kind = "abstract contract" if c.kind == "abstract-contract" else c.kind
    head = f"{kind} {c.name}"
    if c.inherits:
        head += " is " + ", ".join(
            b.name + (f"({_args(b.args)})" if b.args is not None else "") for b in c.inherits
        )
    lines = [head + " {"]
    body: list[str] = []
    for u in c.using:
        body.append(f"using {u.library} for {type_str(u.target) if u.target else '*'};")
    for s in c.structs:
        body.append(f"struct {s.name} {{")
        body.extend(INDENT + f"{type_str(m.type_name)} {m.name};" for m in s.members)
        body.append("}")
    for e in c.enums:
        body.append(f"enum {e.name} {{ {', '.join(e.values)} }}")
    for e in c.events:
        body.append(f"event {e.name}({_params(e.params)}){' anonymous' if e.anonymous else ''};")
    for e in c.errors:
        body.append(f"error {e.name}({_params(e.params)});")
    for v in c.state_vars:
        parts = [type_str(v.type_name), v.visibility]
        if v.mutability:
            parts.append(v.mutability)
        if v.overrides:
            parts.append("override")
        parts.append(v.name)
        text = " ".join(parts)
        if v.value is not None:
            text += " = " + expr_str(v.value)
        body.append(text + ";")
    for m in c.modifiers:
        head = f"modifier {m.name}({_params(m.params)})"
        if m.is_virtual:
            head += " virtual"
        if m.overrides is not None:
            head += _override(m.overrides)
        body.extend(_with_body(head, m.body))
    for f in c.functions:
        body.extend(_function(f))
    lines.extend(INDENT + line if line else line for line in body)
    lines.append("}")
    return lines


def _override(names: tuple[str, ...]) -> str:
    return " override" + (f"({', '.join(names)})" if names else "")


def _function(f: ast.FunctionDef) -> list[str]:
    if f.kind == "function":
        head = f"function {f.name}({_params(f.params)})"
    else:
        head = f"{f.kind}({_params(f.params)})"
    if f.visibility != "unspecified":
        head += " " + f.visibility
    if f.mutability != "nonpayable":
        head += " " + f.mutability
    if f.is_virtual:
        head += " virtual"
    if f.overrides is not None:
        head += _override(f.overrides)
    for m in f.modifiers:
        head += " " + m.name + (f"({_args(m.args)})" if m.args is not None else "")
    if f.returns:
        head += f" returns ({_params(f.returns)})"
    return _with_body(head, f.body)


def _with_body(head: str, body: ast.Block | None) -> list[str]:
    if body is None:
        return [head + ";"]
    return _attach(head, _block(body))


def _params(params: tuple[ast.Parameter, ...]) -> str:
    out = []
    for p in params:
        parts = [type_str(p.type_name)]
        if p.location:
            parts.append(p.location)
        if p.indexed:
            parts.append("indexed")
        if p.name:
            parts.append(p.name)
        out.append(" ".join(parts))
    return ", ".join(out)


def type_str(t: ast.TypeName) -> str:
    if isinstance(t, ast.ElementaryType):
        return t.name + (" payable" if t.payable else "")
    if isinstance(t, ast.UserType):
        return t.name
    if isinstance(t, ast.MappingType):
        return f"mapping({type_str(t.key)} => {type_str(t.value)})"
    if isinstance(t, ast.ArrayType):
        return f"{type_str(t.base)}[{expr_str(t.length) if t.length is not None else ''}]"
    raise TypeError(f"unknown type node {t!r}")


# ------------------------------------------------------------- statements


def _block(b: ast.Block) -> list[str]:
    if not b.statements:
        return ["{ }"]
    lines = ["{"]
    for s in b.statements:
        lines.extend(INDENT + line for line in _stmt(s))
    lines.append("}")
    return lines


def _attach(head: str, inner: list[str]) -> list[str]:
    return [head + " " + inner[0]] + inner[1:]


def _stmt(s: ast.Statement) -> list[str]:
    if isinstance(s, ast.Block):
        return _block(s)
    if isinstance(s, ast.UncheckedBlock):
        return _attach("unchecked", _block(s.block))
    if isinstance(s, ast.If):
        lines = _attach(f"if ({expr_str(s.condition)})", _stmt(s.then))
        if s.orelse is not None:
            lines = lines[:-1] + _attach(lines[-1] + " else", _stmt(s.orelse))
        return lines
    if isinstance(s, ast.For):
        init = _stmt(s.init)[0] if s.init is not None else ";"
        cond = expr_str(s.condition) if s.condition is not None else ""
        upd = expr_str(s.update) if s.update is not None else ""
        return _attach(f"for ({init} {cond}; {upd})", _stmt(s.body))
    if isinstance(s, ast.While):
        return _attach(f"while ({expr_str(s.condition)})", _stmt(s.body))
    if isinstance(s, ast.DoWhile):
        lines = _attach("do", _stmt(s.body))
        lines[-1] += f" while ({expr_str(s.condition)});"
        return lines
    if isinstance(s, ast.Return):
        return ["return;" if s.value is None else f"return {expr_str(s.value)};"]
    if isinstance(s, ast.Break):
        return ["break;"]
    if isinstance(s, ast.Continue):
        return ["continue;"]
    if isinstance(s, ast.Emit):
        return [f"emit {expr_str(s.call)};"]
    if isinstance(s, ast.RevertStatement):
        return [f"revert {expr_str(s.call)};"]
    if isinstance(s, ast.ExpressionStatement):
        return [expr_str(s.expression) + ";"]
    if isinstance(s, ast.VarDeclStatement):
        decls = [_local(d) if d is not None else "" for d in s.declarations]
        lhs = f"({', '.join(decls)})" if s.is_tuple else decls[0]
        return [lhs + (f" = {expr_str(s.value)}" if s.value is not None else "") + ";"]
    if isinstance(s, ast.InlineAssembly):
        dialect = f" {s.dialect}" if s.dialect else ""
        return [f"assembly{dialect} {{ {s.body} }}" if s.body else f"assembly{dialect} {{ }}"]
    if isinstance(s, ast.Placeholder):
        return ["_;"]
    raise TypeError(f"unknown statement {s!r}")


def _local(d: ast.LocalVar) -> str:
    return " ".join(x for x in (type_str(d.type_name), d.location, d.name) if x)


# ------------------------------------------------------------ expressions


def _args(args: tuple[ast.Expression, ...] | None) -> str:
    return ", ".join(expr_str(a) for a in args or ())


def expr_str(e: ast.Expression) -> str:
    if isinstance(e, ast.Identifier):
        return e.name
    if isinstance(e, ast.Literal):
        return e.value + (f" {e.unit}" if e.unit else "")
    if isinstance(e, ast.MemberAccess):
        return f"{expr_str(e.expression)}.{e.member}"
    if isinstance(e, ast.IndexAccess):
        return f"{expr_str(e.base)}[{expr_str(e.index) if e.index is not None else ''}]"
    if isinstance(e, ast.Call):
        opts = ""
        if e.options:
            opts = "{" + ", ".join(f"{o.name}: {expr_str(o.value)}" for o in e.options) + "}"
        if e.arg_names is not None:
            inner = "{" + ", ".join(f"{n}: {expr_str(a)}" for n, a in zip(e.arg_names, e.args)) + "}"
        else:
            inner = _args(e.args)
        return f"{expr_str(e.callee)}{opts}({inner})"
    if isinstance(e, ast.BinaryOp):
        return f"{expr_str(e.left)} {e.op} {expr_str(e.right)}"
    if isinstance(e, ast.UnaryOp):
        inner = expr_str(e.operand)
        if not e.prefix:
            return inner + e.op
        if e.op == "delete":
            return f"delete {inner}"
        # keep "- -x" from lexing as "--x"
        sep = " " if inner[:1] in ("-", "+", "!", "~") or inner.startswith(e.op[-1]) else ""
        return f"{e.op}{sep}{inner}"
    if isinstance(e, ast.Assignment):
        return f"{expr_str(e.target)} {e.op} {expr_str(e.value)}"
    if isinstance(e, ast.Conditional):
        return f"{expr_str(e.condition)} ? {expr_str(e.if_true)} : {expr_str(e.if_false)}"
    if isinstance(e, ast.TupleExpr):
        inner = ", ".join(expr_str(c) if c is not None else "" for c in e.components)
        return f"[{inner}]" if e.is_array else f"({inner})"
    if isinstance(e, ast.NewExpr):
        return f"new {type_str(e.type_name)}"
    if isinstance(e, ast.TypeCast):
        if e.type_name.payable:
            return f"payable({expr_str(e.expression)})"
        return f"{e.type_name.name}({expr_str(e.expression)})"
    if isinstance(e, ast.TypeExpr):
        return type_str(e.type_name)
    raise TypeError(f"unknown expression {e!r}")
