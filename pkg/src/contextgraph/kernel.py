"""Type checking, normalization and implicit-argument solving.

One sort (``type``), dependent function types, beta-delta definitional
equality without eta. Checking is bidirectional: lambdas are checked against
function types; everything else is inferred and compared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Any, Callable, Mapping, Protocol

from .errors import (
    AmbiguousName,
    CannotInfer,
    DepthExceeded,
    NotAFunction,
    SortError,
    TypeMismatch,
    Unannotated,
    UnknownConstant,
)
from .terms import (
    ANON,
    TYPE,
    App,
    Const,
    Lam,
    Meta,
    Pi,
    QName,
    Term,
    TypeSort,
    Var,
    alpha_eq,
    free_vars,
    fresh,
    has_metas,
    rename,
    show,
    spine,
    spine_apps,
    substitute,
)

DEFAULT_UNFOLD_BOUND = 10_000


class DeclLike(Protocol):
    type: Term | None
    definiens: Term | None


@dataclass(frozen=True)
class TypingContext:
    """Visible constants of one theory plus a stack of local binders."""

    signature: Mapping[QName, Any]
    by_name: Mapping[str, list[QName]]
    lookup: Callable[[QName], Any] | None = None
    locals: tuple[tuple[str, Term | None], ...] = ()
    theory: str | None = None
    unfold_bound: int = DEFAULT_UNFOLD_BOUND

    @classmethod
    def from_decls(cls, decls: Mapping[QName, Any], **kw) -> "TypingContext":
        by_name: dict[str, list[QName]] = {}
        for q in decls:
            by_name.setdefault(q[1], []).append(q)
        return cls(decls, by_name, **kw)

    def extend(self, name: str, ty: Term | None) -> "TypingContext":
        return replace(self, locals=self.locals + ((name, ty),))

    def local_names(self) -> set[str]:
        return {n for n, _ in self.locals}

    def local_type(self, name: str) -> Term | None:
        for n, ty in reversed(self.locals):
            if n == name:
                if ty is None:
                    raise Unannotated(f"type of bound variable {name} is unknown; annotate the binder")
                return ty
        raise UnknownConstant(name)

    def declaration(self, q: QName):
        d = self.signature.get(q)
        if d is None:
            raise UnknownConstant(f"{q[0]}?{q[1]}")
        return d

    def definiens(self, q: QName) -> Term | None:
        d = self.signature.get(q)
        if d is None and self.lookup is not None:
            d = self.lookup(q)
        return None if d is None else d.definiens


@dataclass
class _Budget:
    limit: int
    used: int = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise DepthExceeded(f"unfolding exceeded {self.limit} steps (cyclic definition?)")


# -- reduction ----------------------------------------------------------------


def _rebuild(head: Term, nodes: list[App]) -> Term:
    for n in nodes:
        head = App(head, n.arg, n.implicit)
    return head


def whnf(ctx: TypingContext, t: Term, budget: _Budget | None = None) -> Term:
    budget = budget or _Budget(ctx.unfold_bound)
    while True:
        nodes = spine_apps(t)
        head = nodes[0].fn if nodes else t
        if isinstance(head, Lam) and nodes:
            budget.tick()
            t = _rebuild(substitute(head.body, head.var, nodes[0].arg), nodes[1:])
            continue
        if isinstance(head, Const) and head.theory is not None:
            d = ctx.definiens(head.qname)
            if d is not None:
                budget.tick()
                t = _rebuild(d, nodes)
                continue
        return t


def normalize(ctx: TypingContext, t: Term) -> Term:
    """Beta-delta normal form. Raises DepthExceeded past ``ctx.unfold_bound`` steps."""
    return _nf(ctx, t, _Budget(ctx.unfold_bound))


def _nf(ctx: TypingContext, t: Term, budget: _Budget) -> Term:
    t = whnf(ctx, t, budget)
    if isinstance(t, App):
        nodes = spine_apps(t)
        head = _nf(ctx, nodes[0].fn, budget)
        for n in nodes:
            head = App(head, _nf(ctx, n.arg, budget), n.implicit)
        return head
    if isinstance(t, Lam):
        ann = _nf(ctx, t.ann, budget) if t.ann is not None else None
        return Lam(t.var, ann, _nf(ctx, t.body, budget))
    if isinstance(t, Pi):
        return Pi(t.var, _nf(ctx, t.dom, budget), _nf(ctx, t.cod, budget), t.implicit)
    return t


def equal(ctx: TypingContext, a: Term, b: Term) -> bool:
    if alpha_eq(a, b):
        return True
    return alpha_eq(normalize(ctx, a), normalize(ctx, b))


# -- type checking --------------------------------------------------------------


def _binder_name(ctx: TypingContext, var: str, *terms: Term) -> str:
    taken = ctx.local_names()
    if var == ANON or var not in taken:
        return var
    avoid = set(taken)
    for t in terms:
        avoid |= free_vars(t)
    return fresh(var, avoid)


def infer_type(ctx: TypingContext, t: Term) -> Term:
    if isinstance(t, Const):
        if t.theory is None:
            raise UnknownConstant(t.name)
        d = ctx.declaration(t.qname)
        if d.type is not None:
            return d.type
        if d.definiens is not None:
            return infer_type(ctx, d.definiens)
        raise Unannotated(f"{t.name} has neither type nor definiens")
    if isinstance(t, Var):
        return ctx.local_type(t.name)
    if isinstance(t, TypeSort):
        raise SortError("type has no type: there is no sort above type")
    if isinstance(t, App):
        if isinstance(t.fn, Lam) and t.fn.ann is None:
            return infer_type(ctx, substitute(t.fn.body, t.fn.var, t.arg))
        fty = whnf(ctx, infer_type(ctx, t.fn))
        if not isinstance(fty, Pi):
            raise NotAFunction(f"{show(t.fn)} has type {show(fty)}, which is not a function type")
        if isinstance(t.arg, TypeSort):
            raise SortError("type cannot be an argument")
        check_type(ctx, t.arg, fty.dom)
        return substitute(fty.cod, fty.var, t.arg)
    if isinstance(t, Lam):
        if t.ann is None:
            raise Unannotated(f"cannot infer the type of [{t.var}] ...; annotate the binder")
        check_classifier(ctx, t.ann)
        x = _binder_name(ctx, t.var, t.body)
        body = rename(t.body, t.var, x) if x != t.var else t.body
        cod = infer_type(ctx.extend(x, t.ann), body)
        return Pi(x if x in free_vars(cod) else ANON, t.ann, cod)
    if isinstance(t, Pi):
        check_classifier(ctx, t.dom)
        x = _binder_name(ctx, t.var, t.cod)
        cod = rename(t.cod, t.var, x) if x != t.var else t.cod
        check_classifier(ctx.extend(x, t.dom), cod)
        return TYPE
    raise Unannotated(f"unsolved metavariable {show(t)}")


def check_classifier(ctx: TypingContext, a: Term) -> None:
    """``a`` must be ``type`` or have type ``type``."""
    if isinstance(a, TypeSort):
        return
    ty = infer_type(ctx, a)
    if not isinstance(whnf(ctx, ty), TypeSort):
        raise SortError(f"{show(a)} is not a type (it has type {show(ty)})")


def check_type(ctx: TypingContext, t: Term, expected: Term) -> None:
    if isinstance(t, TypeSort):
        raise SortError("type has no type")
    if isinstance(t, Lam):
        e = whnf(ctx, expected)
        if not isinstance(e, Pi):
            raise TypeMismatch(Pi(t.var, t.ann or Var("?"), Var("?")), expected, detail="a function is not a " + show(e))
        if t.ann is not None:
            check_classifier(ctx, t.ann)
            if not equal(ctx, t.ann, e.dom):
                raise TypeMismatch(t.ann, e.dom, detail=f"annotation of {t.var}")
        taken = ctx.local_names() | free_vars(t.body) | free_vars(e.cod)
        x = t.var if t.var not in ctx.local_names() and (t.var == e.var or t.var not in free_vars(e.cod)) else fresh(t.var, taken)
        body = rename(t.body, t.var, x) if x != t.var else t.body
        cod = rename(e.cod, e.var, x) if x != e.var else e.cod
        check_type(ctx.extend(x, e.dom), body, cod)
        return
    actual = infer_type(ctx, t)
    if not equal(ctx, actual, expected):
        raise TypeMismatch(actual, expected)


# -- elaboration: name resolution and implicit arguments ----------------------------


def resolve(ctx: TypingContext, t: Term) -> Term:
    """Attach theories to unqualified constants by looking them up among visible names."""
    if isinstance(t, Const):
        if t.theory is not None:
            if t.qname not in ctx.signature:
                raise UnknownConstant(f"{t.theory}?{t.name}")
            return t
        qs = ctx.by_name.get(t.name, [])
        if not qs:
            raise UnknownConstant(t.name)
        if len(qs) > 1:
            opts = ", ".join(f"{a}?{b}" for a, b in qs)
            raise AmbiguousName(f"{t.name} is ambiguous: {opts}")
        return Const(t.name, qs[0][0], t.explicit)
    if isinstance(t, App):
        return App(resolve(ctx, t.fn), resolve(ctx, t.arg), t.implicit)
    if isinstance(t, Lam):
        return Lam(t.var, resolve(ctx, t.ann) if t.ann is not None else None, resolve(ctx, t.body))
    if isinstance(t, Pi):
        return Pi(t.var, resolve(ctx, t.dom), resolve(ctx, t.cod), t.implicit)
    return t


_meta_ids = itertools.count()


def instantiate(t: Term, sol: Mapping[int, Term]) -> Term:
    if not sol:
        return t
    if isinstance(t, Meta):
        v = sol.get(t.ident)
        return instantiate(v, sol) if v is not None else t
    if isinstance(t, App):
        return App(instantiate(t.fn, sol), instantiate(t.arg, sol), t.implicit)
    if isinstance(t, Lam):
        return Lam(t.var, instantiate(t.ann, sol) if t.ann is not None else None, instantiate(t.body, sol))
    if isinstance(t, Pi):
        return Pi(t.var, instantiate(t.dom, sol), instantiate(t.cod, sol), t.implicit)
    return t


def _match(p: Term, t: Term, sol: dict[int, Term], bound: frozenset[str]) -> bool:
    if isinstance(p, Meta):
        if p.ident in sol:
            return alpha_eq(sol[p.ident], t)
        if free_vars(t) & bound:
            return False
        sol[p.ident] = t
        return True
    if type(p) is not type(t):
        return False
    if isinstance(p, Const):
        return p.name == t.name and p.theory == t.theory
    if isinstance(p, Var):
        return p.name == t.name
    if isinstance(p, App):
        return _match(p.fn, t.fn, sol, bound) and _match(p.arg, t.arg, sol, bound)
    if isinstance(p, (Lam, Pi)):
        if isinstance(p, Pi) and p.implicit != t.implicit:
            return False
        if isinstance(p, Pi) and not _match(p.dom, t.dom, sol, bound):
            return False
        pbody, tbody = (p.body, t.body) if isinstance(p, Lam) else (p.cod, t.cod)
        if p.var != t.var:
            tbody = rename(tbody, t.var, p.var) if p.var not in free_vars(tbody) else None
            if tbody is None:
                return False
        return _match(pbody, tbody, sol, bound | {p.var})
    return p == t


def match(ctx: TypingContext, pattern: Term, target: Term, sol: dict[int, Term]) -> bool:
    """First-order matching of ``pattern`` (with metas) against ``target``, modulo definitions."""
    trial = dict(sol)
    p = instantiate(pattern, sol)
    if _match(p, target, trial, frozenset()):
        sol.update(trial)
        return True
    trial = dict(sol)
    if _match(normalize(ctx, p), normalize(ctx, target), trial, frozenset()):
        sol.update(trial)
        return True
    return False


def _leading_implicits(ctx: TypingContext, head: Term) -> bool:
    try:
        ty = whnf(ctx, infer_type(ctx, head))
    except Exception:
        return False
    return isinstance(ty, Pi) and ty.implicit


def solve_implicits(ctx: TypingContext, head: Term, args: list[Term], expected: Term | None = None) -> Term:
    """Insert the implicit arguments of ``head`` applied to explicit ``args``.

    Each implicit is solved by matching the declared argument types against the
    inferred types of the explicit arguments, then against ``expected``.
    """
    ty = whnf(ctx, infer_type(ctx, head))
    term: Term = head
    metas: list[Meta] = []
    sol: dict[int, Term] = {}

    def open_implicits(ty: Term) -> Term:
        nonlocal term
        ty = whnf(ctx, instantiate(ty, sol))
        while isinstance(ty, Pi) and ty.implicit:
            m = Meta(next(_meta_ids), ty.var)
            metas.append(m)
            term = App(term, m, implicit=True)
            ty = whnf(ctx, substitute(ty.cod, ty.var, m))
        return ty

    for arg in args:
        ty = open_implicits(ty)
        if not isinstance(ty, Pi):
            raise NotAFunction(f"{show(head)} is applied to too many arguments")
        dom = instantiate(ty.dom, sol)
        arg = elaborate(ctx, arg, None if has_metas(dom) else dom)
        if has_metas(dom):
            aty = infer_type(ctx, arg)
            if not match(ctx, dom, aty, sol):
                raise TypeMismatch(aty, instantiate(dom, sol), detail=f"argument {show(arg)} of {show(head)}")
        term = App(term, arg)
        ty = substitute(ty.cod, ty.var, arg)
    if not args:
        ty = open_implicits(ty)
    if expected is not None:
        rest = instantiate(ty, sol)
        if has_metas(rest):
            match(ctx, rest, expected, sol)
    for m in metas:
        if m.ident not in sol:
            raise CannotInfer(m.hint)
    return instantiate(term, sol)


def elaborate(ctx: TypingContext, t: Term, expected: Term | None = None) -> Term:
    """Resolve names, then make every implicit argument explicit."""
    return _elab(ctx, resolve(ctx, t), expected)


def _elab(ctx: TypingContext, t: Term, expected: Term | None) -> Term:
    if isinstance(t, (App, Const)):
        nodes = spine_apps(t)
        head = nodes[0].fn if nodes else t
        already = bool(nodes) and nodes[0].implicit
        if isinstance(head, Const) and not head.explicit and not already and _leading_implicits(ctx, head):
            return solve_implicits(ctx, head, [n.arg for n in nodes], expected)
        if not nodes:
            return t
        out = head if isinstance(head, Const) else _elab(ctx, head, None)
        try:
            fty = whnf(ctx, infer_type(ctx, out))
        except Exception:
            fty = None
        for n in nodes:
            dom = fty.dom if isinstance(fty, Pi) else None
            arg = n.arg if n.implicit else _elab(ctx, n.arg, dom)
            out = App(out, arg, n.implicit)
            if isinstance(fty, Pi):
                fty = whnf(ctx, substitute(fty.cod, fty.var, arg))
            else:
                fty = None
        return out
    if isinstance(t, Lam):
        e = whnf(ctx, expected) if expected is not None else None
        ann = _elab(ctx, t.ann, None) if t.ann is not None else None
        x = _binder_name(ctx, t.var, t.body)
        body = rename(t.body, t.var, x) if x != t.var else t.body
        if ann is not None:
            inner_ctx, body_expected = ctx.extend(x, ann), None
        elif isinstance(e, Pi):
            ann = e.dom
            inner_ctx = ctx.extend(x, e.dom)
            body_expected = rename(e.cod, e.var, x) if x != e.var else e.cod
        else:
            inner_ctx, body_expected = ctx.extend(x, None), None
        if isinstance(e, Pi) and ann is not None:
            body_expected = rename(e.cod, e.var, x) if x != e.var else e.cod
        return Lam(x, ann, _elab(inner_ctx, body, body_expected))
    if isinstance(t, Pi):
        dom = _elab(ctx, t.dom, None)
        x = _binder_name(ctx, t.var, t.cod)
        cod = rename(t.cod, t.var, x) if x != t.var else t.cod
        return Pi(x, dom, _elab(ctx.extend(x, dom), cod, None), t.implicit)
    return t
