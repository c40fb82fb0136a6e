"""Pretty printer; output re-parses to the same tree (see tests/test_syntax.py)."""

from __future__ import annotations

from typing import Callable

from ..terms import ANON, App, Const, Lam, Meta, Pi, Term, TypeSort, Var, spine
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

ATOM = 1000
APP = 100
ARROW = -10
CLOSED = ATOM + 1

ConstNamer = Callable[[Const, frozenset[str]], str]


def _default_namer(c: Const, bound: frozenset[str]) -> str:
    if c.theory is not None:
        return f"{c.theory}?{c.name}"
    return c.name


class TermPrinter:
    def __init__(self, fixities: dict[str, Fixity] | None = None, namer: ConstNamer | None = None,
                 show_implicit: bool = False):
        self.fix = dict(DEFAULT_FIXITIES)
        if fixities:
            self.fix.update(fixities)
        self.namer = namer or _default_namer
        self.show_implicit = show_implicit

    def __call__(self, t: Term) -> str:
        return self.pp(t, ARROW, None, frozenset())

    def _name(self, c: Const, bound: frozenset[str]) -> str:
        text = self.namer(c, bound)
        return "@" + text if c.explicit else text

    def _op(self, t: Term) -> Fixity | None:
        if isinstance(t, Const) and not t.explicit:
            return self.fix.get(t.name)
        return None

    def _visible_args(self, t: Term) -> tuple[Term, list[Term]]:
        head, _ = spine(t)
        args = []
        node = t
        stack = []
        while isinstance(node, App):
            stack.append(node)
            node = node.fn
        for a in reversed(stack):
            if a.implicit and not self.show_implicit:
                continue
            args.append(a.arg)
        return head, args

    def pp(self, t: Term, min_prec: int, follow: int | None, bound: frozenset[str]) -> str:
        """Print ``t`` where the parser will read it at ``min_prec``.

        ``follow`` is the precedence of the operator printed right after ``t``
        (None when ``t`` is rightmost); forms that would absorb it get parentheses.
        """
        text, prec, absorb = self._render(t, bound)
        if prec < min_prec or (follow is not None and absorb <= follow):
            return f"({text})"
        return text

    def _render(self, t: Term, bound: frozenset[str]) -> tuple[str, int, int]:
        """Return (text, precedence level, lowest operator precedence the form absorbs to its right)."""
        if isinstance(t, Var):
            return t.name, ATOM, CLOSED
        if isinstance(t, TypeSort):
            return "type", ATOM, CLOSED
        if isinstance(t, Meta):
            return f"?{t.hint}{t.ident}", ATOM, CLOSED
        if isinstance(t, Const):
            fx = self._op(t)
            name = self._name(t, bound)
            if fx is not None:
                return f"({name})", ATOM, CLOSED
            return name, ATOM, CLOSED
        if isinstance(t, Lam):
            return self._lambda(t, bound)
        if isinstance(t, Pi):
            if t.implicit:
                b = bound | {t.var}
                dom = self.pp(t.dom, ARROW, None, bound)
                return f"{{{t.var}:{dom}}} {self.pp(t.cod, ARROW, None, b)}", ARROW, ARROW
            if t.var == ANON:
                left = self.pp(t.dom, ARROW + 1, ARROW, bound)
                return f"{left} → {self.pp(t.cod, ARROW, None, bound)}", ARROW, ARROW
            b = bound | {t.var}
            dom = self.pp(t.dom, ARROW, None, bound)
            return f"({t.var}:{dom}) → {self.pp(t.cod, ARROW, None, b)}", ARROW, ARROW
        if isinstance(t, App):
            head, args = self._visible_args(t)
            if not args:
                return self._render(head, bound)
            fx = self._op(head)
            if fx is not None and fx.kind == "prefix" and len(args) == 1:
                name = self._name(head, bound)
                _, oprec, oabsorb = self._render(args[0], bound)
                operand = self.pp(args[0], fx.prec, None, bound)
                absorb = fx.prec if oprec < fx.prec else min(fx.prec, oabsorb)
                return f"{name} {operand}", fx.prec, absorb
            if fx is not None and fx.kind != "prefix" and len(args) == 2:
                name = self._name(head, bound)
                lp, rp = (fx.prec, fx.prec + 1) if fx.kind == "infixl" else (fx.prec + 1, fx.prec)
                left = self.pp(args[0], lp, fx.prec, bound)
                right = self.pp(args[1], rp, None, bound)
                _, rprec, rabsorb = self._render(args[1], bound)
                absorb = rp if rprec < rp else min(rp, rabsorb)
                return f"{left} {name} {right}", fx.prec, absorb
            if fx is not None and fx.kind != "prefix" and len(args) > 2:
                # (a op b) c ...
                inner = App(App(head, args[0]), args[1])
                rest = args[2:]
                parts = [f"({self._render(inner, bound)[0]})"]
            elif fx is not None and fx.kind == "prefix":
                inner = App(head, args[0])
                rest = args[1:]
                parts = [f"({self._render(inner, bound)[0]})"]
            else:
                rest = args
                parts = [self.pp(head, ATOM, APP, bound)]
            for a in rest:
                parts.append(self.pp(a, ATOM, APP, bound))
            return " ".join(parts), APP, CLOSED
        raise TypeError(f"cannot print {t!r}")

    def _lambda(self, t: Lam, bound: frozenset[str]) -> tuple[str, int, bool]:
        groups: list[str] = []
        annotated = t.ann is not None
        current: list[str] = []
        b = bound
        while isinstance(t, Lam):
            if (t.ann is not None) != annotated:
                groups.append("[" + ", ".join(current) + "]")
                current = []
                annotated = t.ann is not None
            if t.ann is not None:
                current.append(f"{t.var}:{self.pp(t.ann, ARROW, None, b)}")
            else:
                current.append(t.var)
            b = b | {t.var}
            t = t.body
        groups.append("[" + ", ".join(current) + "]")
        return " ".join(groups) + " " + self.pp(t, ARROW, None, b), ARROW, ARROW


def print_term(t: Term, fixities: dict[str, Fixity] | None = None, namer: ConstNamer | None = None) -> str:
    return TermPrinter(fixities, namer)(t)


def print_decl(d: DeclAST, pr: TermPrinter) -> str:
    text = d.name
    if d.type is not None:
        text += " : " + pr(d.type)
    if d.definiens is not None:
        text += " = " + pr(d.definiens)
    if d.fixity is not None:
        text += f"  {d.fixity.kind} {d.fixity.prec}"
    return text


def _block(lines: list[str]) -> str:
    return "".join(f"  {line}\n" for line in lines)


def print_graph(ast: SourceGraphAST, fixities: dict[str, Fixity] | None = None) -> str:
    table = ast.fixities()
    if fixities:
        table.update(fixities)
    pr = TermPrinter(table)
    chunks: list[str] = []
    for item in ast.items:
        if isinstance(item, ImportDef):
            chunks.append(f"import {item.name}\n")
        elif isinstance(item, TheoryDef):
            head = f"theory {item.name}" + (f" : {item.meta}" if item.meta else "")
            lines = [f"include {i}" for i in item.includes] + [print_decl(d, pr) for d in item.decls]
            chunks.append(f"{head} {{\n{_block(lines)}}}\n")
        elif isinstance(item, ViewDef):
            lines = [f"{c} := {pr(e)}" for c, e in item.assignments]
            chunks.append(f"view {item.name} : {item.domain} -> {item.codomain} {{\n{_block(lines)}}}\n")
        elif isinstance(item, PushoutDef):
            text = f"pushout {item.name} = apply {item.base} along {item.view}"
            if item.renaming:
                text += " renaming {\n" + _block([f"{a} := {b}" for a, b in item.renaming]) + "}"
            if item.extra:
                text += " with {\n" + _block([print_decl(d, pr) for d in item.extra]) + "}"
            chunks.append(text + "\n")
        elif isinstance(item, AttackDef):
            chunks.append(f"attack {item.attacker} -> {item.target} on ({pr(item.witness)})\n")
        else:
            raise TypeError(f"unknown item {item!r}")
    return "\n".join(chunks)
