"""View finding and the analogy questions A1 to A3.

The view finder maps undefined constants of one theory to constants of
another whose types match after translation. Axioms (constants of type
``⊢ p``) are mapped to existing declarations proving the translated ``p``;
no proofs are synthesized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .argumentation import IN, OUT, AttackEdge, Labeling, _judgment, contrary
from .errors import CGError, SearchBudgetExceeded, UnmappedConstant
from .kernel import TypingContext, equal, normalize
from .terms import ASSUMES, PRELUDE, Const, QName, Term, alpha_eq, constants
from .theorygraph import ContextGraph, Declaration, Morphism

DEFAULT_BUDGET = 100_000


@dataclass
class ViewCandidate:
    domain: str
    codomain: str
    assignment: dict[QName, Term]
    unmapped: list[QName]
    score: float

    @property
    def status(self) -> str:
        return "total" if not self.unmapped else "partial"

    def pairs(self) -> list[tuple[str, str]]:
        return sorted((q[1], t.name if isinstance(t, Const) else str(t)) for q, t in self.assignment.items())

    def to_morphism(self, name: str = "candidate") -> Morphism:
        return Morphism(name, self.domain, self.codomain, dict(self.assignment))


@dataclass
class FinderOptions:
    max_results: int | None = None
    allow_partial: bool = True
    budget: int = DEFAULT_BUDGET


@dataclass
class Verdict:
    holds: bool
    evidence: dict = field(default_factory=dict)


@dataclass
class AnalogyReport:
    application: str
    a1: Verdict
    a2: Verdict
    a3: Verdict
    a4: str = "unsupported (value-based reasoning is out of scope)"


def _candidate_images(graph: ContextGraph, codomain: str) -> list[Declaration]:
    return [d for d in graph.flatten(codomain) if d.theory != PRELUDE and d.type is not None]


class _Finder:
    def __init__(self, graph: ContextGraph, domain: str, codomain: str, opts: FinderOptions):
        self.g, self.dom, self.cod, self.opts = graph, domain, codomain, opts
        self.todo = graph.needs_assignment(domain, codomain)
        self.ctx = graph.context(codomain)
        self.images = [(d, normalize(self.ctx, d.type)) for d in _candidate_images(graph, codomain)]
        self.nodes = 0
        self.leaves: list[dict[QName, Term]] = []

    def options_for(self, d: Declaration, assignment: dict[QName, Term]) -> list[Term]:
        m = Morphism("σ", self.dom, self.cod, assignment)
        try:
            want = normalize(self.ctx, self.g.translate(m, d.type))
        except UnmappedConstant:
            return []
        return [Const(img.name, img.theory) for img, ty in self.images if alpha_eq(ty, want)]

    def search(self, i: int, assignment: dict[QName, Term]) -> None:
        self.nodes += 1
        if self.nodes > self.opts.budget:
            raise SearchBudgetExceeded(f"view search from {self.dom} to {self.cod} exceeded {self.opts.budget} nodes")
        if i == len(self.todo):
            self.leaves.append(dict(assignment))
            return
        d = self.todo[i]
        for img in self.options_for(d, assignment):
            assignment[d.qname] = img
            self.search(i + 1, assignment)
            del assignment[d.qname]
        if self.opts.allow_partial:
            self.search(i + 1, assignment)

    def maximal(self, assignment: dict[QName, Term]) -> bool:
        return all(d.qname in assignment or not self.options_for(d, assignment) for d in self.todo)


def find_views(graph: ContextGraph, domain: str, codomain: str, opts: FinderOptions | None = None) -> list[ViewCandidate]:
    """Ranked type-correct assignments from ``domain`` into ``codomain``.

    Partial candidates are only returned when no further constant could be
    added to them. Ranking is by score, then by the sorted assignment pairs.
    """
    opts = opts or FinderOptions()
    f = _Finder(graph, domain, codomain, opts)
    f.search(0, {})
    n = len(f.todo)
    out = []
    for a in f.leaves:
        if len(a) < n and not f.maximal(a):
            continue
        unmapped = [d.qname for d in f.todo if d.qname not in a]
        out.append(ViewCandidate(domain, codomain, a, unmapped, len(a) / n if n else 1.0))
    out.sort(key=lambda c: (-c.score, c.pairs()))
    if opts.max_results is not None:
        out = out[: opts.max_results]
    return out


# -- the analogy questions ------------------------------------------------------------


def check_A1(graph: ContextGraph, precedent: str, present: str, opts: FinderOptions | None = None) -> Verdict:
    """Is there a partial view relating the precedent to the present case?

    Views run from the precedent's condition theory into the case, the same
    direction in which rules are applied.
    """
    cands = find_views(graph, precedent, present, opts or FinderOptions(allow_partial=True))
    best = next((c for c in cands if c.score > 0), None)
    return Verdict(best is not None, {"candidate": best, "candidates": len(cands)})


def check_A2(graph: ContextGraph, view: Morphism, condition: str) -> Verdict:
    """Does the view map every condition of the rule?"""
    missing = graph.missing(view, condition)
    return Verdict(not missing, {"missing": [q[1] for q in missing]})


def assumptions_used(graph: ContextGraph, theory: str) -> list[tuple[Declaration, Term]]:
    """Assumptions reachable from the proof terms of ``theory``'s own declarations."""
    seen: set[QName] = set()
    out: list[tuple[Declaration, Term]] = []
    stack = [d.definiens for d in graph.theory(theory).decls.values() if d.definiens is not None]
    while stack:
        for c in constants(stack.pop()):
            if c.qname in seen:
                continue
            seen.add(c.qname)
            d = graph.lookup(c.qname)
            if d is None:
                continue
            q = _judgment(d.type, ASSUMES)
            if q is not None:
                out.append((d, q))
            if d.definiens is not None:
                stack.append(d.definiens)
    return out


def check_A3(graph: ContextGraph, application: str, labeling: Labeling, edges: list[AttackEdge]) -> Verdict:
    """No defeated theory in the ancestry and no used assumption attacked by an IN theory."""
    ancestry = set(graph.ancestors(application))
    res = graph.pushouts.get(application)
    if res is not None:
        ancestry |= graph.ancestors(res.base)
    out = sorted(t for t in ancestry if labeling.labels.get(t) == OUT)
    ctx = TypingContext({}, {}, lookup=graph.lookup)
    attacked = []
    for d, q in assumptions_used(graph, application):
        for e in edges:
            if labeling.labels.get(e.attacker) == IN and d.theory in graph.ancestors(e.target) \
                    and equal(ctx, contrary(q), e.witness):
                attacked.append((d.name, e.attacker))
    return Verdict(not out and not attacked, {"out": out, "attacked_assumptions": attacked})


def analogy_report(graph: ContextGraph, application: str, labeling: Labeling, edges: list[AttackEdge]) -> AnalogyReport:
    """Answer A1 to A3 for a rule application produced by a pushout."""
    res = graph.pushouts[application]
    condition, present = res.view.domain, res.view.codomain
    try:
        a1 = check_A1(graph, condition, present)
    except CGError as e:
        a1 = Verdict(False, {"error": str(e)})
    a2 = check_A2(graph, res.view, condition)
    if not a1.holds and res.view.assignments:
        # the applied view itself witnesses A1 even when it maps to compound terms
        a1 = Verdict(True, {"candidate": res.view.name, "candidates": a1.evidence.get("candidates", 0)})
    a3 = check_A3(graph, application, labeling, edges)
    return AnalogyReport(application, a1, a2, a3)
