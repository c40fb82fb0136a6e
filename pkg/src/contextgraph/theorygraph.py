"""Theories, includes and views, and the graph that holds them."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    AmbiguousName,
    CGError,
    EndpointMismatch,
    IncludeCycle,
    KernelError,
    ObligationFailed,
    Span,
    UnknownConstant,
    UnknownTheory,
    UnmappedConstant,
)
from .kernel import DEFAULT_UNFOLD_BOUND, TypingContext, check_classifier, check_type, elaborate, equal, infer_type
from .syntax.ast import Fixity
from .terms import App, Const, Lam, Pi, QName, Term, substitute


@dataclass
class Declaration:
    name: str
    theory: str
    type: Term | None = None
    definiens: Term | None = None
    fixity: Fixity | None = None
    origin: str | None = None  # set on constants generated by a pushout
    span: Span | None = field(default=None, compare=False, repr=False)
    checked: bool = False

    @property
    def qname(self) -> QName:
        return (self.theory, self.name)

    @property
    def defined(self) -> bool:
        return self.definiens is not None


@dataclass
class Theory:
    name: str
    meta: str | None = None
    includes: list[str] = field(default_factory=list)
    decls: dict[str, Declaration] = field(default_factory=dict)
    generated_by: str | None = None  # the pushout item that produced this theory
    span: Span | None = field(default=None, compare=False, repr=False)

    def parents(self) -> list[str]:
        return ([self.meta] if self.meta else []) + list(self.includes)

    def add(self, d: Declaration) -> Declaration:
        d.theory = self.name
        self.decls[d.name] = d
        return d


@dataclass
class Morphism:
    """Maps constants of ``domain`` to closed terms over ``codomain``.

    Constants of the domain that are also visible in the codomain map to
    themselves, and defined constants map to the image of their definiens, so
    only the remaining undefined ones need an assignment.
    """

    name: str
    domain: str
    codomain: str
    assignments: dict[QName, Term] = field(default_factory=dict)
    kind: str = "view"  # view | include | pushout | composite
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass
class ViewReport:
    view: str
    status: str  # verified | partial | failed
    discharged: list[QName] = field(default_factory=list)
    unmapped: list[QName] = field(default_factory=list)
    failures: list[ObligationFailed] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "verified"


class ContextGraph:
    def __init__(self) -> None:
        self.theories: dict[str, Theory] = {}
        self.views: dict[str, Morphism] = {}
        self.attacks: list = []  # asserted attacks, see loader
        self.pushouts: dict[str, object] = {}
        self.fixities: dict[str, Fixity] = {}
        self.unfold_bound = DEFAULT_UNFOLD_BOUND
        self._flat: dict[str, list[Declaration]] = {}

    # -- construction ------------------------------------------------------

    def add_theory(self, th: Theory) -> Theory:
        self.theories[th.name] = th
        self._flat.clear()
        return th

    def add_view(self, m: Morphism) -> Morphism:
        self.views[m.name] = m
        return m

    def theory(self, name: str) -> Theory:
        th = self.theories.get(name)
        if th is None:
            raise UnknownTheory(f"unknown theory {name}")
        return th

    def invalidate(self) -> None:
        self._flat.clear()

    # -- structure ---------------------------------------------------------

    def flatten(self, name: str) -> list[Declaration]:
        """All declarations visible in ``name``: meta-theory first, then includes, then its own."""
        if name in self._flat:
            return self._flat[name]
        out: list[Declaration] = []
        seen: set[QName] = set()
        self._collect(name, [], out, seen)
        self._flat[name] = out
        return out

    def _collect(self, name: str, path: list[str], out: list[Declaration], seen: set[QName]) -> None:
        if name in path:
            raise IncludeCycle(path[path.index(name):] + [name])
        th = self.theory(name)
        for p in th.parents():
            self._collect(p, path + [name], out, seen)
        for d in th.decls.values():
            if d.qname not in seen:
                seen.add(d.qname)
                out.append(d)

    def ancestors(self, name: str) -> set[str]:
        """``name`` and every theory it includes, transitively."""
        out: set[str] = set()
        stack = [name]
        while stack:
            n = stack.pop()
            if n in out:
                continue
            out.add(n)
            stack.extend(self.theory(n).parents())
        return out

    def visible(self, name: str) -> dict[QName, Declaration]:
        return {d.qname: d for d in self.flatten(name)}

    def lookup(self, q: QName) -> Declaration | None:
        th = self.theories.get(q[0])
        return th.decls.get(q[1]) if th else None

    def context(self, name: str, upto: str | None = None) -> TypingContext:
        """Typing context of theory ``name``; with ``upto``, only its declarations before that one."""
        th = self.theory(name)
        sig: dict[QName, Declaration] = {}
        for p in th.parents():
            for d in self.flatten(p):
                sig[d.qname] = d
        for d in th.decls.values():
            if d.name == upto:
                break
            sig[d.qname] = d
        return TypingContext.from_decls(sig, lookup=self.lookup, theory=name, unfold_bound=self.unfold_bound)

    def includes_edges(self) -> list[tuple[str, str, bool]]:
        """(child, parent, is_meta) for every include."""
        out = []
        for th in self.theories.values():
            if th.meta:
                out.append((th.name, th.meta, True))
            out.extend((th.name, i, False) for i in th.includes)
        return out

    # -- checking ------------------------------------------------------------

    def check_declaration(self, theory: str, d: Declaration, ctx: TypingContext | None = None) -> None:
        """Elaborate and check ``d`` in place. Raises on the first error."""
        ctx = ctx or self.context(theory, upto=d.name)
        try:
            if d.type is not None:
                d.type = elaborate(ctx, d.type)
                check_classifier(ctx, d.type)
            if d.definiens is not None:
                d.definiens = elaborate(ctx, d.definiens, d.type)
                if d.type is not None:
                    check_type(ctx, d.definiens, d.type)
                else:
                    d.type = infer_type(ctx, d.definiens)
        except CGError as e:
            if e.span is None:
                e.span = d.span
            e.message = f"{theory}?{d.name}: {e.message}"
            raise
        d.checked = True

    def check_theory(self, name: str) -> list[CGError]:
        """Check every unchecked local declaration in order and return the diagnostics."""
        errors: list[CGError] = []
        for d in self.theory(name).decls.values():
            if d.checked:
                continue
            try:
                self.check_declaration(name, d)
            except CGError as e:
                errors.append(e)
        return errors

    # -- morphisms -------------------------------------------------------------

    def needs_assignment(self, domain: str, codomain: str) -> list[Declaration]:
        """Undefined constants of ``domain`` that a morphism into ``codomain`` must assign."""
        vis = self.visible(codomain)
        return [d for d in self.flatten(domain) if not d.defined and d.qname not in vis]

    def translate(self, m: Morphism, t: Term, _vis: dict | None = None) -> Term:
        vis = _vis if _vis is not None else self.visible(m.codomain)
        if isinstance(t, Const):
            q = t.qname
            if q in m.assignments:
                return m.assignments[q]
            if q in vis:
                return t
            d = self.lookup(q)
            if d is not None and d.definiens is not None:
                return self.translate(m, d.definiens, vis)
            raise UnmappedConstant(q, m.name)
        if isinstance(t, App):
            fn, arg = self.translate(m, t.fn, vis), self.translate(m, t.arg, vis)
            if isinstance(fn, Lam) and isinstance(t.fn, (Const, App)):
                # an unfolded definition applied to arguments: reduce on the spot
                return substitute(fn.body, fn.var, arg)
            return App(fn, arg, t.implicit)
        if isinstance(t, Lam):
            ann = self.translate(m, t.ann, vis) if t.ann is not None else None
            return Lam(t.var, ann, self.translate(m, t.body, vis))
        if isinstance(t, Pi):
            return Pi(t.var, self.translate(m, t.dom, vis), self.translate(m, t.cod, vis), t.implicit)
        return t

    def resolve_domain_name(self, domain: str, name: str) -> QName:
        if "?" in name:
            th, _, c = name.partition("?")
            q = (th, c)
            if q not in self.visible(domain):
                raise UnknownConstant(name)
            return q
        qs = [d.qname for d in self.flatten(domain) if d.name == name]
        if not qs:
            raise UnknownConstant(name)
        if len(qs) > 1:
            raise AmbiguousName(f"{name} is ambiguous in {domain}")
        return qs[0]

    def check_view(self, m: Morphism) -> ViewReport:
        """Elaborate the assignments of ``m`` in place and discharge the typing obligations."""
        self.theory(m.domain)
        self.theory(m.codomain)
        ctx = self.context(m.codomain)
        report = ViewReport(m.name, "verified")
        vis = self.visible(m.codomain)
        for d in self.flatten(m.domain):
            q = d.qname
            if q in vis and q not in m.assignments:
                continue
            if q not in m.assignments:
                if not d.defined:
                    report.unmapped.append(q)
                continue
            label = f"{q[0]}?{q[1]}"
            try:
                expected = self.translate(m, d.type) if d.type is not None else None
            except UnmappedConstant as e:
                report.failures.append(ObligationFailed(label, d.type, f"type mentions unmapped {e.qname[1]}"))
                continue
            try:
                val = elaborate(ctx, m.assignments[q], expected)
                if expected is not None:
                    check_type(ctx, val, expected)
                if d.definiens is not None and not equal(ctx, val, self.translate(m, d.definiens)):
                    raise KernelError(f"assignment disagrees with the translated definition of {d.name}")
                m.assignments[q] = val
                report.discharged.append(q)
            except (KernelError, UnmappedConstant) as e:
                report.failures.append(ObligationFailed(label, expected, e.message))
        if report.failures:
            report.status = "failed"
        elif report.unmapped:
            report.status = "partial"
        return report

    def compose(self, m1: Morphism, m2: Morphism, name: str | None = None) -> Morphism:
        """``m2 ∘ m1``: first ``m1`` then ``m2``."""
        if m1.codomain != m2.domain:
            raise EndpointMismatch(f"cannot compose {m1.name}: {m1.domain}->{m1.codomain} with {m2.name}: {m2.domain}->{m2.codomain}")
        out = Morphism(name or f"{m2.name}∘{m1.name}", m1.domain, m2.codomain, kind="composite")
        vis = self.visible(m2.codomain)
        for d in self.flatten(m1.domain):
            if d.defined:
                continue
            c = Const(d.name, d.theory)
            try:
                img = self.translate(m2, self.translate(m1, c))
            except UnmappedConstant:
                continue
            if d.qname not in vis or img != c:
                out.assignments[d.qname] = img
        return out

    def missing(self, m: Morphism, sub: str | None = None) -> list[QName]:
        """Undefined constants of ``sub`` (default: the domain) that ``m`` leaves unassigned."""
        return [d.qname for d in self.needs_assignment(sub or m.domain, m.codomain) if d.qname not in m.assignments]

    def is_total(self, m: Morphism, sub: str | None = None) -> bool:
        return not self.missing(m, sub)

    def include_morphism(self, child: str, parent: str) -> Morphism:
        if parent not in self.ancestors(child):
            raise EndpointMismatch(f"{child} does not include {parent}")
        return Morphism(f"{parent}↪{child}", parent, child, kind="include")

    def equal_in(self, theory: str, a: Term, b: Term) -> bool:
        return equal(self.context(theory), a, b)

    def show(self, t: Term | None, theory: str | None = None) -> str:
        from .syntax.printer import print_term

        if t is None:
            return "?"
        if theory is None:
            return print_term(t, self.fixities)
        names: dict[str, int] = {}
        for d in self.flatten(theory):
            names[d.name] = names.get(d.name, 0) + 1

        def namer(c: Const, bound: frozenset[str]) -> str:
            if c.theory is None or (names.get(c.name) == 1 and c.name not in bound):
                return c.name
            return f"{c.theory}?{c.name}"

        return print_term(t, self.fixities, namer)
