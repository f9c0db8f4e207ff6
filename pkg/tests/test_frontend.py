from __future__ import annotations

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ALL_SOL
from scchecklist.frontend import LexError, ParseErrors, TokenKind, parse_source, pretty_print, tokenize
from scchecklist.frontend.tokens import significant

K, I, P, N = TokenKind.KEYWORD, TokenKind.IDENTIFIER, TokenKind.PUNCT, TokenKind.INTEGER


def kinds(src):
    return [(t.kind, t.text) for t in tokenize(src)]


def test_tokenize_pragma():
    assert kinds("pragma solidity ^0.8.0;") == [
        (K, "pragma"), (I, "solidity"), (P, "^"), (N, "0"), (P, "."), (N, "8"), (P, "."), (N, "0"), (P, ";"),
    ]


def test_tokenize_empty():
    assert tokenize("") == []


def test_comment_is_one_token_and_parse_skips_it():
    src = "uint x = /*c*/ 1;"
    toks = tokenize(src)
    oracle = re.findall(r"/\*.*?\*/|\w+|[^\w\s]", src)
    assert len(toks) == len(oracle) == 6
    assert sum(t.kind is TokenKind.COMMENT for t in toks) == 1
    assert [t.text for t in significant(toks)] == [x for x in oracle if not x.startswith("/*")]
    plain = parse_source("contract A { uint x = 1; }")
    commented = parse_source("contract A { uint x = /*c*/ 1; }")
    assert plain == commented


def test_maximal_munch_on_shift_assign():
    assert [t.text for t in tokenize("a >>>= b >> c")] == ["a", ">>>=", "b", ">>", "c"]


def test_unterminated_string_is_lex_error():
    with pytest.raises(LexError) as exc:
        tokenize('string s = "abc')
    assert exc.value.span.start >= 0


def test_minimal_contract():
    unit = parse_source("contract A { }")
    assert [c.name for c in unit.contracts] == ["A"]
    assert unit.contracts[0].functions == ()


def test_bases_in_source_order():
    unit = parse_source("contract B {} contract C {} contract D is B, C { }")
    assert unit.contract("D").bases == ["B", "C"]


def test_parse_error_locality_and_recovery():
    src = "contract A { function f() public { x = ; } function g() public {} }"
    with pytest.raises(ParseErrors) as exc:
        parse_source(src)
    errs = exc.value.errors
    assert len(errs) >= 1
    bad = src.index("x = ;")
    assert errs[0].span.start == bad and errs[0].span.end == bad + len("x = ;")
    for e in errs:
        assert 0 <= e.span.start <= e.span.end <= len(src)


def test_recovery_reports_independent_errors():
    src = "contract A { function f() public { x = ; } function g() public { y = ; } }"
    with pytest.raises(ParseErrors) as exc:
        parse_source(src)
    assert len(exc.value.errors) == 2


def test_round_trip_minimal():
    unit = parse_source("contract A{}")
    assert parse_source(pretty_print(unit)) == unit


def test_empty_unit_prints_to_reparseable_text():
    unit = parse_source("")
    assert parse_source(pretty_print(unit)) == unit
    assert unit.contracts == ()


@pytest.mark.parametrize("path", ALL_SOL, ids=lambda p: p.parent.name + "/" + p.name)
def test_round_trip_corpus(path):
    unit = parse_source(path.read_text(), str(path))
    again = parse_source(pretty_print(unit), str(path))
    assert again == unit
    assert pretty_print(again) == pretty_print(unit)


@pytest.mark.parametrize("path", ALL_SOL, ids=lambda p: p.parent.name + "/" + p.name)
def test_span_sanity(path):
    text = path.read_text()
    unit = parse_source(text, str(path))
    for node in unit.walk():
        if node is unit:
            continue
        assert 0 <= node.span.start < node.span.end <= len(text)
        for child in node.children():
            assert node.span.covers(child.span), (type(node).__name__, type(child).__name__)


@pytest.mark.parametrize("path", ALL_SOL[:5], ids=lambda p: p.parent.name + "/" + p.name)
def test_parse_is_deterministic(path):
    text = path.read_text()
    a, b = parse_source(text), parse_source(text)
    assert a == b
    assert [n.span for n in a.walk()] == [n.span for n in b.walk()]


# identifiers, integers and simple operators joined by single spaces
_atoms = st.one_of(
    st.from_regex(r"[a-z_][a-z0-9_]{0,6}", fullmatch=True).filter(lambda s: s not in {"do", "if", "is", "for", "new", "var", "try"}),
    st.integers(min_value=0, max_value=10**9).map(str),
    st.sampled_from(["+", "-", "*", "(", ")", "==", "=>", ";", "{", "}", "&&", "<<="]),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(_atoms, max_size=30))
def test_tokenize_spans_reconstruct_source(atoms):
    src = " ".join(atoms)
    toks = tokenize(src)
    assert [src[t.span.start:t.span.end] for t in toks] == [t.text for t in toks]
    assert "".join(t.text for t in toks) == src.replace(" ", "")


_idents = st.from_regex(r"[A-Z][a-zA-Z0-9]{0,5}", fullmatch=True)


@settings(max_examples=100, deadline=None)
@given(
    name=_idents,
    nvars=st.integers(0, 3),
    value=st.integers(0, 2**64),
    op=st.sampled_from(["+", "-", "*", "/", "%", "**", "<<"]),
)
def test_generated_contract_round_trips(name, nvars, value, op):
    vars_ = "".join(f"uint256 public v{i} = {value} {op} {i + 1};" for i in range(nvars))
    body = f"function f(uint256 a) public returns (uint256) {{ if (a > {value}) {{ return a {op} 1; }} return a; }}"
    src = f"pragma solidity 0.8.19; contract {name} {{ {vars_} {body} }}"
    unit = parse_source(src)
    assert parse_source(pretty_print(unit)) == unit
    assert parse_source(src) == unit
