"""Term language of the logical framework.

Bound variables are named. Every operation that goes under a binder is
capture-avoiding, and equality of terms modulo bound-variable renaming is
provided by :func:`alpha_eq`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

QName = tuple[str, str]
"""Qualified constant name ``(theory, name)``."""

PRELUDE = "FOLND"


@dataclass(frozen=True, slots=True)
class Const:
    name: str
    theory: str | None = None
    # `@c` in source: suppress implicit-argument insertion for this head.
    explicit: bool = field(default=False, compare=False)

    @property
    def qname(self) -> QName:
        assert self.theory is not None, f"unresolved constant {self.name}"
        return (self.theory, self.name)


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"
    # Inserted by implicit-argument solving; hidden by the printer.
    implicit: bool = field(default=False, compare=False)


@dataclass(frozen=True, slots=True)
class Lam:
    var: str
    ann: "Term | None"
    body: "Term"


@dataclass(frozen=True, slots=True)
class Pi:
    var: str
    dom: "Term"
    cod: "Term"
    implicit: bool = False


@dataclass(frozen=True, slots=True)
class TypeSort:
    pass


@dataclass(frozen=True, slots=True)
class Meta:
    """Metavariable; only lives inside implicit-argument matching."""

    ident: int
    hint: str = "?"


Term = Union[Const, Var, App, Lam, Pi, TypeSort, Meta]

TYPE = TypeSort()
ANON = "_"


def prelude(name: str) -> Const:
    return Const(name, PRELUDE)


PROVES = prelude("⊢")
ASSUMES = prelude("⊦~")
NOT = prelude("¬")
AND = prelude("∧")
IMPLIES = prelude("⇒")


def arrow(dom: Term, cod: Term) -> Pi:
    return Pi(ANON, dom, cod)


def apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``f a1 ... an`` into ``(f, [a1, ..., an])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def spine_apps(t: Term) -> list[App]:
    nodes = []
    while isinstance(t, App):
        nodes.append(t)
        t = t.fn
    nodes.reverse()
    return nodes


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, Lam):
        inner = free_vars(t.body) - {t.var}
        return inner | free_vars(t.ann) if t.ann is not None else inner
    if isinstance(t, Pi):
        return free_vars(t.dom) | (free_vars(t.cod) - {t.var})
    return frozenset()


def constants(t: Term) -> set[Const]:
    out: set[Const] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Const):
            out.add(u)
        elif isinstance(u, App):
            stack += (u.fn, u.arg)
        elif isinstance(u, Lam):
            stack.append(u.body)
            if u.ann is not None:
                stack.append(u.ann)
        elif isinstance(u, Pi):
            stack += (u.dom, u.cod)
    return out


def has_metas(t: Term) -> bool:
    if isinstance(t, Meta):
        return True
    if isinstance(t, App):
        return has_metas(t.fn) or has_metas(t.arg)
    if isinstance(t, Lam):
        return has_metas(t.body) or (t.ann is not None and has_metas(t.ann))
    if isinstance(t, Pi):
        return has_metas(t.dom) or has_metas(t.cod)
    return False


def fresh(name: str, avoid) -> str:
    base = name if name != ANON else "x"
    while base in avoid:
        base += "'"
    return base


def substitute(body: Term, var: str, value: Term) -> Term:
    """``body[var := value]``, renaming binders that would capture free variables of ``value``."""
    return _subst(body, var, value, free_vars(value))


def _subst(t: Term, x: str, v: Term, fvv: frozenset[str]) -> Term:
    if isinstance(t, Var):
        return v if t.name == x else t
    if isinstance(t, App):
        return App(_subst(t.fn, x, v, fvv), _subst(t.arg, x, v, fvv), t.implicit)
    if isinstance(t, Lam):
        ann = _subst(t.ann, x, v, fvv) if t.ann is not None else None
        if t.var == x:
            return Lam(t.var, ann, t.body)
        y, body = _avoid_capture(t.var, t.body, x, fvv)
        return Lam(y, ann, _subst(body, x, v, fvv))
    if isinstance(t, Pi):
        dom = _subst(t.dom, x, v, fvv)
        if t.var == x:
            return Pi(t.var, dom, t.cod, t.implicit)
        y, cod = _avoid_capture(t.var, t.cod, x, fvv)
        return Pi(y, dom, _subst(cod, x, v, fvv), t.implicit)
    return t


def _avoid_capture(y: str, body: Term, x: str, fvv: frozenset[str]) -> tuple[str, Term]:
    if y not in fvv:
        return y, body
    fvb = free_vars(body)
    if x not in fvb:
        return y, body
    y2 = fresh(y, fvv | fvb | {x})
    return y2, rename(body, y, y2)


def rename(t: Term, old: str, new: str) -> Term:
    return substitute(t, old, Var(new))


def alpha_eq(a: Term, b: Term) -> bool:
    """Structural equality up to bound-variable renaming.

    Lambda annotations and implicit/explicit presentation flags are ignored.
    """
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Term, b: Term, ea: dict[str, int], eb: dict[str, int], depth: int) -> bool:
    if isinstance(a, Var) and isinstance(b, Var):
        ia, ib = ea.get(a.name), eb.get(b.name)
        if ia is None and ib is None:
            return a.name == b.name
        return ia == ib
    if type(a) is not type(b):
        return False
    if isinstance(a, Const):
        return a.name == b.name and a.theory == b.theory
    if isinstance(a, App):
        return _alpha(a.fn, b.fn, ea, eb, depth) and _alpha(a.arg, b.arg, ea, eb, depth)
    if isinstance(a, Lam):
        return _alpha(a.body, b.body, {**ea, a.var: depth}, {**eb, b.var: depth}, depth + 1)
    if isinstance(a, Pi):
        if a.implicit != b.implicit or not _alpha(a.dom, b.dom, ea, eb, depth):
            return False
        return _alpha(a.cod, b.cod, {**ea, a.var: depth}, {**eb, b.var: depth}, depth + 1)
    return a == b


def show(t: Term | None) -> str:
    if t is None:
        return "<none>"
    from .syntax.printer import print_term

    return print_term(t)
