"""Surface language: tokens, parser, pretty printer."""

from .ast import (
    DEFAULT_FIXITIES,
    AttackDef,
    DeclAST,
    Fixity,
    ImportDef,
    PushoutDef,
    SourceGraphAST,
    TheoryDef,
    ViewDef,
)
from .lexer import Token, tokenize
from .parser import parse_expression, parse_graph
from .printer import TermPrinter, print_graph, print_term


def parse_source(source: str, file: str | None = None, fixities=None) -> SourceGraphAST:
    return parse_graph(tokenize(source, file), fixities)


def parse_term(source: str, fixities=None):
    return parse_expression(tokenize(source), fixities)


__all__ = [
    "DEFAULT_FIXITIES", "AttackDef", "DeclAST", "Fixity", "ImportDef", "PushoutDef",
    "SourceGraphAST", "TheoryDef", "Token", "TermPrinter", "ViewDef", "parse_expression",
    "parse_graph", "parse_source", "parse_term", "print_graph", "print_term", "tokenize",
]
