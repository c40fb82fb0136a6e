"""Pushouts along views: applying a rule theory to a new case.

Given a rule theory B that includes a condition theory A, and a view
φ : A → C into a case C, the pushout P includes C and receives a translated
copy of everything B adds on top of A. The induced morphism φ* : B → P sends
A-constants through φ and the copied ones to their copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CGError, EndpointMismatch, GraphError, NameClash, NoMediator, UnknownConstant, UnmappedConstant
from .syntax.ast import DeclAST
from .terms import Const, QName, Term
from .theorygraph import ContextGraph, Declaration, Morphism, Theory


@dataclass
class PushoutRequest:
    name: str
    base: str
    view: str
    renaming: dict[str, str] = field(default_factory=dict)
    extra: list[DeclAST] = field(default_factory=list)


@dataclass
class PushoutResult:
    theory: Theory
    induced: Morphism  # φ* : B → P
    view: Morphism  # φ : A → C
    base: str
    generated: dict[QName, QName] = field(default_factory=dict)  # B-constant -> its copy in P
    diagnostics: list[CGError] = field(default_factory=list)


def _fresh_name(pname: str, name: str, taken: set[str]) -> str:
    cand = f"{pname}/{name}"
    k = 1
    while cand in taken:
        k += 1
        cand = f"{pname}/{name}${k}"
    return cand


def compute_pushout(graph: ContextGraph, req: PushoutRequest, check: bool = True) -> PushoutResult:
    """Build the pushout theory, add it to ``graph`` and return it with φ*.

    Raises GraphError subclasses for ill-formed requests; type errors in the
    generated theory are returned as diagnostics (and raised when ``check``).
    """
    if req.name in graph.theories:
        raise NameClash(f"theory {req.name} already exists")
    phi = graph.views.get(req.view)
    if phi is None:
        raise UnknownConstant(f"view {req.view}")
    graph.theory(req.base)
    if phi.domain not in graph.ancestors(req.base):
        raise EndpointMismatch(f"{req.base} does not include {phi.domain}, the domain of {phi.name}")

    in_a = {d.qname for d in graph.flatten(phi.domain)}
    c_flat = graph.flatten(phi.codomain)
    in_c = {d.qname for d in c_flat}
    copy = [d for d in graph.flatten(req.base) if d.qname not in in_a and d.qname not in in_c]

    copy_names = {d.name for d in copy}
    for old in req.renaming:
        if old not in copy_names:
            raise UnknownConstant(f"{req.base}?{old} (renamed in {req.name}, but not copied)")

    taken = {d.name for d in c_flat}
    explicit = set()
    for old, new in req.renaming.items():
        if new in taken or new in explicit:
            raise NameClash(f"renaming {old} := {new} in {req.name} clashes with an existing name")
        explicit.add(new)
    taken |= explicit

    names: dict[QName, str] = {}
    for d in copy:
        if d.name in req.renaming:
            names[d.qname] = req.renaming[d.name]
        else:
            n = d.name if d.name not in taken else _fresh_name(req.name, d.name, taken)
            taken.add(n)
            names[d.qname] = n

    star = Morphism(f"{phi.name}*", req.base, req.name, dict(phi.assignments), kind="pushout")
    for q, n in names.items():
        star.assignments[q] = Const(n, req.name)

    p = Theory(req.name, meta=None, includes=[phi.codomain], generated_by=req.name)
    graph.add_theory(p)
    try:
        for d in copy:
            p.add(Declaration(
                names[d.qname], req.name,
                type=graph.translate(star, d.type) if d.type is not None else None,
                definiens=graph.translate(star, d.definiens) if d.definiens is not None else None,
                fixity=d.fixity,
                origin=f"{d.theory}?{d.name}",
                checked=False,
            ))
        for e in req.extra:
            if e.name in taken or e.name in p.decls:
                raise NameClash(f"{e.name} in {req.name} clashes with an existing name")
            p.add(Declaration(e.name, req.name, e.type, e.definiens, e.fixity, span=e.span))
    except (UnmappedConstant, GraphError):
        del graph.theories[req.name]
        graph.invalidate()
        raise
    graph.invalidate()

    result = PushoutResult(p, star, phi, req.base, {q: (req.name, n) for q, n in names.items()})
    result.diagnostics.extend(graph.check_theory(req.name))
    report = graph.check_view(star)
    result.diagnostics.extend(report.failures)
    if report.unmapped:
        result.diagnostics.append(GraphError(f"induced morphism {star.name} leaves {len(report.unmapped)} constants unmapped"))
    graph.add_view(star)
    graph.pushouts[req.name] = result
    if check and result.diagnostics:
        raise result.diagnostics[0]
    return result


def apply_rule(graph: ContextGraph, base: str, view: str, name: str, renaming: dict[str, str] | None = None) -> PushoutResult:
    return compute_pushout(graph, PushoutRequest(name, base, view, dict(renaming or {})))


def _agree(graph: ContextGraph, theory: str, a: Term, b: Term) -> bool:
    try:
        return graph.equal_in(theory, a, b)
    except CGError:
        return False


def verify_universal_property(graph: ContextGraph, result: PushoutResult, chi: Morphism, psi: Morphism,
                              name: str = "u") -> Morphism:
    """Given χ : C → D and ψ : B → D agreeing on A, return the mediator u : P → D.

    The mediator is checked to commute with both legs; NoMediator is raised when
    ψ and χ∘φ disagree on A, so no mediator can exist.
    """
    phi, star, p = result.view, result.induced, result.theory.name
    if chi.domain != phi.codomain or psi.domain != result.base or chi.codomain != psi.codomain:
        raise EndpointMismatch("χ and ψ must form a cocone over the span")
    d = chi.codomain
    for decl in graph.needs_assignment(phi.domain, d):
        c = Const(decl.name, decl.theory)
        try:
            via_c = graph.translate(chi, graph.translate(phi, c))
            via_b = graph.translate(psi, c)
        except UnmappedConstant as e:
            raise NoMediator(f"cocone is undefined on {decl.name}: {e.message}") from e
        if not _agree(graph, d, via_c, via_b):
            raise NoMediator(f"ψ and χ∘φ disagree on {decl.theory}?{decl.name}")

    u = Morphism(name, p, d, kind="view")
    for decl in graph.needs_assignment(phi.codomain, d):
        if decl.qname in chi.assignments:
            u.assignments[decl.qname] = chi.assignments[decl.qname]
    for src, (_, n) in result.generated.items():
        if (p, n) in graph.visible(d):
            continue
        gen = graph.lookup((p, n))
        if gen is not None and not gen.defined:
            u.assignments[(p, n)] = graph.translate(psi, Const(src[1], src[0]))

    for decl in graph.needs_assignment(result.base, d):
        c = Const(decl.name, decl.theory)
        if not _agree(graph, d, graph.translate(u, graph.translate(star, c)), graph.translate(psi, c)):
            raise NoMediator(f"u∘φ* differs from ψ on {decl.name}")
    for decl in graph.needs_assignment(phi.codomain, d):
        c = Const(decl.name, decl.theory)
        if not _agree(graph, d, graph.translate(u, c), graph.translate(chi, c)):
            raise NoMediator(f"u differs from χ on {decl.name}")
    return u
