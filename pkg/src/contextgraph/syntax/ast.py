"""Surface syntax tree. Expressions reuse the kernel term classes with unresolved constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..errors import Span
from ..terms import Term


@dataclass(frozen=True)
class Fixity:
    kind: str  # infixl | infixr | prefix
    prec: int


DEFAULT_FIXITIES: dict[str, Fixity] = {
    "⊢": Fixity("prefix", 0),
    "⊦~": Fixity("prefix", 0),
    "¬": Fixity("prefix", 40),
    "∧": Fixity("infixr", 30),
    "⇒": Fixity("infixr", 20),
}


@dataclass
class DeclAST:
    name: str
    type: Term | None = None
    definiens: Term | None = None
    fixity: Fixity | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class TheoryDef:
    name: str
    meta: str | None
    includes: list[str]
    decls: list[DeclAST]
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class ViewDef:
    name: str
    domain: str
    codomain: str
    assignments: list[tuple[str, Term]]
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class PushoutDef:
    """``pushout P = apply B along v [renaming {...}] [with {...}]``."""

    name: str
    base: str
    view: str
    renaming: list[tuple[str, str]] = field(default_factory=list)
    extra: list[DeclAST] = field(default_factory=list)
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class AttackDef:
    attacker: str
    target: str
    witness: Term
    span: Span | None = field(default=None, compare=False, repr=False)

    @property
    def name(self) -> str:
        return self.attacker


@dataclass
class ImportDef:
    name: str
    span: Span | None = field(default=None, compare=False, repr=False)


Item = Union[TheoryDef, ViewDef, PushoutDef, AttackDef, ImportDef]


@dataclass
class SourceGraphAST:
    items: list[Item] = field(default_factory=list)

    def fixities(self) -> dict[str, Fixity]:
        table = dict(DEFAULT_FIXITIES)
        for item in self.items:
            decls = item.decls if isinstance(item, TheoryDef) else item.extra if isinstance(item, PushoutDef) else []
            for d in decls:
                if d.fixity is not None:
                    table[d.name] = d.fixity
        return table
