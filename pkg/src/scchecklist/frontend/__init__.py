from . import ast
from .parser import ParseError, ParseErrors, parse, parse_source
from .printer import pretty_print
from .tokens import LexError, Span, Token, TokenKind, tokenize
from .versions import VersionConstraint, parse_constraint

__all__ = [
    "ast",
    "LexError",
    "ParseError",
    "ParseErrors",
    "Span",
    "Token",
    "TokenKind",
    "VersionConstraint",
    "parse",
    "parse_constraint",
    "parse_source",
    "pretty_print",
    "tokenize",
]
