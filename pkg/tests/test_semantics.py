from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ALL_SOL, context_for
from scchecklist.frontend import ast, parse_source
from scchecklist.semantics import (
    BUILTIN_NAMES,
    CALL_KINDS,
    EXTERNAL_KINDS,
    LinearizationError,
    build_cfg,
    build_context,
    classify_calls,
    collect_state_effects,
    linearize,
    linearize_all,
)


def contracts_of(src: str) -> dict[str, ast.ContractDef]:
    return {c.name: c for c in parse_source(src).contracts}


# ---------------------------------------------------------------- C3

HAND_HIERARCHIES = [
    ("contract A {}", "A", ["A"]),
    ("contract A {} contract B is A {}", "B", ["B", "A"]),
    ("contract A {} contract B is A {} contract C is A {} contract D is B, C {}", "D", ["D", "C", "B", "A"]),
    ("contract X {} contract A is X {} contract C is X, A {}", "C", ["C", "A", "X"]),
    (
        "contract O {} contract A is O {} contract B is O {} contract C is O {}"
        " contract K1 is A, B {} contract K2 is B, C {} contract Z is K1, K2 {}",
        "Z",
        ["Z", "K2", "C", "K1", "B", "A", "O"],
    ),
]


@pytest.mark.parametrize("src,name,expected", HAND_HIERARCHIES)
def test_c3_hand_computed(src, name, expected):
    cs = contracts_of(src)
    assert linearize(cs[name], cs) == expected


@pytest.mark.parametrize(
    "src,name",
    [
        ("contract A {} contract B {} contract X is A, B {} contract Y is B, A {} contract Z is X, Y {}", "Z"),
        ("contract X {} contract A is X {} contract C is A, X {}", "C"),
    ],
)
def test_c3_inconsistent_hierarchy_errors(src, name):
    cs = contracts_of(src)
    with pytest.raises(LinearizationError):
        linearize(cs[name], cs)


def test_c3_cycle_errors():
    cs = contracts_of("contract A is B {} contract B is A {}")
    with pytest.raises(LinearizationError) as exc:
        linearize(cs["A"], cs)
    assert exc.value.cycle is not None


def test_base_free_file_linearizes_to_self():
    cs = contracts_of("contract A {} contract B {} library L {} interface I {}")
    assert linearize_all(cs) == {n: [n] for n in cs}


@st.composite
def hierarchies(draw):
    """Random acyclic hierarchies: contract i may inherit from any subset of contracts < i."""
    n = draw(st.integers(1, 6))
    bases = []
    for i in range(n):
        picked = draw(st.lists(st.integers(0, i - 1), unique=True, max_size=3)) if i else []
        bases.append(picked)
    return bases


def _python_mro(bases: list[list[int]], target: int) -> list[str] | None:
    """CPython's MRO is C3; Solidity lists bases most-base-like first, so reverse them."""
    classes: dict[int, type | None] = {}
    for i, bs in enumerate(bases):
        parents = [classes[b] for b in reversed(bs)]
        try:
            classes[i] = None if None in parents else type(f"K{i}", tuple(parents) or (object,), {})
        except TypeError:
            classes[i] = None
    cls = classes[target]
    return None if cls is None else [c.__name__ for c in cls.__mro__ if c is not object]


def _consistent_orders(bases: list[list[int]], target: int, lins: dict[int, list[str]]) -> list[list[str]]:
    """Brute force: ancestor orders keeping each parent linearization and the local precedence."""
    ancestors = {f"K{target}"}
    stack = [target]
    while stack:
        for b in bases[stack.pop()]:
            if f"K{b}" not in ancestors:
                ancestors.add(f"K{b}")
                stack.append(b)
    rest = sorted(ancestors - {f"K{target}"})
    constraints = [lins[b] for b in bases[target]] + [[f"K{b}" for b in reversed(bases[target])]]
    out = []
    for perm in itertools.permutations(rest):
        pos = {name: i for i, name in enumerate(perm)}
        if all(all(pos[a] < pos[b] for a, b in zip(c, c[1:])) for c in constraints):
            out.append([f"K{target}", *perm])
    return out


@settings(max_examples=150, deadline=None)
@given(hierarchies())
def test_c3_matches_python_mro_and_brute_force(bases):
    src = " ".join(f"contract K{i}" + (" is " + ", ".join(f"K{b}" for b in bs) if bs else "") + " {}" for i, bs in enumerate(bases))
    cs = contracts_of(src)
    target = len(bases) - 1
    expected = _python_mro(bases, target)
    try:
        got = linearize(cs[f"K{target}"], cs)
    except LinearizationError:
        got = None
    assert got == expected
    if got is not None:
        lins = {i: linearize(cs[f"K{i}"], cs) for i in bases[target]}
        assert got in _consistent_orders(bases, target, lins)
        assert linearize(cs[f"K{target}"], cs) == got


# ---------------------------------------------------------------- symbols


def _fn(unit, contract, name):
    return next(f for f in unit.contract(contract).functions if f.name == name)


def _idents(node, name):
    return [n for n in node.walk() if isinstance(n, ast.Identifier) and n.name == name]


def test_state_var_resolution():
    unit, ctx = context_for("contract A { uint x; function f() public { x = 1; } }")
    (ident,) = _idents(_fn(unit, "A", "f").body, "x")
    r = ctx.symbols.resolve(ident)
    assert r.kind == "state-var" and r.decl is unit.contract("A").state_vars[0]


def test_inherited_state_var_resolves_through_linearization():
    src = "contract A { uint x; } contract B is A { } contract C is B { function f() public { x = 2; } }"
    unit, ctx = context_for(src)
    (ident,) = _idents(_fn(unit, "C", "f").body, "x")
    r = ctx.symbols.resolve(ident)
    decl = unit.contract("A").state_vars[0]
    assert r.kind == "state-var" and r.owner == "A"
    assert r.decl.span == decl.span and src[decl.span.start:decl.span.end] == "uint x;"


def test_local_shadowing_builtin():
    unit, ctx = context_for("contract A { function f() public { uint msg; msg = 1; } }")
    (use,) = _idents(_fn(unit, "A", "f").body, "msg")
    assert ctx.symbols.resolve(use).kind == "local"
    assert [s.name for s in ctx.symbols.shadowing] == ["msg"]


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(sorted(BUILTIN_NAMES)), where=st.sampled_from(["state", "param", "local", "function"]))
def test_builtin_declarations_always_reported(name, where):
    decl = {
        "state": f"uint {name}; function g() public {{}}",
        "param": f"function g(uint {name}) public {{}}",
        "local": f"function g() public {{ uint {name}; }}",
        "function": f"function {name}() public {{}}",
    }[where]
    try:
        unit, ctx = context_for(f"contract A {{ {decl} }}")
    except Exception:
        return  # names the grammar reserves cannot be declared at all
    assert name in {s.name for s in ctx.symbols.shadowing}


# ---------------------------------------------------------------- CFG


def _cfg(body: str, extra: str = ""):
    unit = parse_source(f"contract A {{ {extra} function f(bool c) public {{ {body} }} }}")
    return build_cfg(_fn(unit, "A", "f"))


def test_empty_body_cfg():
    cfg = _cfg("")
    assert len(cfg.blocks) == 2 and len(cfg.edges) == 1
    assert cfg.edges[0].src == cfg.entry and cfg.edges[0].dst == cfg.exit
    assert all(not b.items for b in cfg.blocks)


def test_if_cfg_shape():
    cfg = _cfg("if (c) { a(); } b();", "function a() internal {} function b() internal {}")
    kinds = sorted(e.kind for e in cfg.edges)
    assert len(cfg.blocks) == 4
    assert kinds.count("true-branch") == 1 and kinds.count("false-branch") == 1
    assert len(cfg.edges) == 4


def test_while_cfg_shape():
    cfg = _cfg("while (c) { c = false; }")
    back = [e for e in cfg.edges if e.kind == "loop-back"]
    exit_ = [e for e in cfg.edges if e.kind == "loop-exit"]
    assert len(back) == 1 and len(exit_) == 1
    assert back[0].dst == exit_[0].src  # both touch the condition block
    assert [type(i).__name__ for i in cfg.blocks[back[0].dst].items] == ["While"]
    assert back[0].src in cfg.successors(back[0].dst)


def _leaf_statements(fn):
    compound = (ast.Block, ast.UncheckedBlock, ast.If, ast.For, ast.While, ast.DoWhile, ast.Placeholder)
    return [n for n in fn.body.walk() if isinstance(n, ast.Statement) and not isinstance(n, compound)]


@pytest.mark.parametrize("path", ALL_SOL, ids=lambda p: p.parent.name + "/" + p.name)
def test_each_statement_in_exactly_one_block(path):
    unit = parse_source(path.read_text())
    for c in unit.contracts:
        for fn in c.functions:
            if fn.body is None:
                continue
            cfg = build_cfg(fn)
            placed = [id(i) for b in cfg.blocks for i in b.items]
            for s in _leaf_statements(fn):
                assert placed.count(id(s)) == 1, (path.name, fn.name, type(s).__name__)


# ---------------------------------------------------------------- calls


def _sites(body: str, extra: str = ""):
    unit, ctx = context_for(f"contract T {{ {extra} function f(address payable addr, address target, uint v, uint x) public {{ {body} }} }}")
    return classify_calls(_fn(unit, "T", "f"), ctx.symbols, "T")


def test_send_is_low_level_unused():
    (s,) = _sites("addr.send(1);")
    assert (s.kind, s.result_used) == ("low-level", False)


def test_call_with_value_is_low_level_used():
    (s,) = _sites('(bool ok, ) = target.call{value: v}("");')
    assert (s.kind, s.result_used) == ("low-level", True)


def test_require_is_builtin():
    (s,) = _sites("require(x > 0);")
    assert s.kind == "builtin"


def test_unknown_receiver_is_external_high_level():
    (s,) = _sites("Mystery(target).poke();")
    assert s.kind == "external-high-level" and s.is_external


def test_internal_call():
    (s,) = _sites("g();", "function g() internal {}")
    assert s.kind == "internal" and not s.is_external


def _oracle_call_count(fn, known_types, events):
    """Call nodes minus casts to known or capitalised types and legacy `.value()`/`.gas()` setters."""
    n = 0
    for node in fn.body.walk():
        if not isinstance(node, ast.Call):
            continue
        callee = ast.unparen(node.callee)
        if isinstance(callee, ast.Identifier) and callee.name not in events and (
            callee.name in known_types or (callee.name[:1].isupper() and len(node.args) == 1 and node.arg_names is None)
        ):
            continue
        if isinstance(callee, ast.MemberAccess) and callee.member in ("value", "gas") and isinstance(_parent_call(fn, node), ast.Call):
            continue
        n += 1
    return n


def _parent_call(fn, call):
    for node in fn.body.walk():
        if isinstance(node, ast.Call) and ast.unparen(node.callee) is call:
            return node
    return None


@pytest.mark.parametrize("path", ALL_SOL, ids=lambda p: p.parent.name + "/" + p.name)
def test_callsites_total_and_exclusive(path):
    unit = parse_source(path.read_text())
    ctx = build_context(unit)
    known_types = set(ctx.symbols.contracts)
    events = set()
    for c in unit.contracts:
        known_types |= {s.name for s in c.structs} | {e.name for e in c.enums}
        events |= set(c.event_names)
    for c in unit.contracts:
        for fn in c.functions:
            if fn.body is None:
                continue
            sites = classify_calls(fn, ctx.symbols, c.name)
            assert len(sites) == _oracle_call_count(fn, known_types, events)
            assert len({id(s.node) for s in sites}) == len(sites)
            assert all(s.kind in CALL_KINDS for s in sites)
            assert all(s.is_external == (s.kind in EXTERNAL_KINDS) for s in sites)


# ---------------------------------------------------------------- effects


def _effects(src, name="f", contract="A"):
    unit, ctx = context_for(src)
    return collect_state_effects(_fn(unit, contract, name), ctx.symbols)


def test_plain_write():
    e = _effects("contract A { uint x; function f() public { x = 1; } }")
    assert e.written_vars == {"x"} and e.read_vars == set()


def test_compound_assign_on_mapping_reads_and_writes():
    e = _effects("contract A { mapping(address => uint) balances; function f(uint amt) public { balances[msg.sender] -= amt; } }")
    assert e.written_vars == {"balances"} and e.read_vars == {"balances"}


def test_pure_function_touching_params_only():
    e = _effects("contract A { uint x; function f(uint a) public pure returns (uint) { return a + 1; } }")
    assert e.written_vars == set() and e.read_vars == set()
