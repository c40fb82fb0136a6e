"""Attacks between theories and labelings of the resulting argumentation framework.

A theory proving ``⊢ c`` attacks a theory assuming ``⊦~ q`` when ``c`` is the
contrary of ``q``. Attacks found between the theories that own the
declarations are inherited by theories that extend both endpoints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .errors import SemanticsTooLarge
from .kernel import TypingContext, normalize
from .terms import ASSUMES, NOT, PROVES, App, Const, Term, alpha_eq, show
from .theorygraph import ContextGraph, Declaration

IN, OUT, UNDEC = "IN", "OUT", "UNDEC"
MAX_ENUMERATED = 20


@dataclass(frozen=True)
class AttackEdge:
    attacker: str
    target: str
    witness: Term
    provenance: str = "detected"  # detected | inherited:<A>-><B> | asserted


@dataclass
class Labeling:
    labels: dict[str, str]

    def with_label(self, lab: str) -> set[str]:
        return {n for n, l in self.labels.items() if l == lab}

    def __getitem__(self, node: str) -> str:
        return self.labels[node]


@dataclass
class DefeatReport:
    defeated: list[str] = field(default_factory=list)
    distinguished: list[str] = field(default_factory=list)
    inconsistent: list[str] = field(default_factory=list)


# -- attacks ---------------------------------------------------------------------------


def _global_ctx(graph: ContextGraph) -> TypingContext:
    return TypingContext({}, {}, lookup=graph.lookup)


def _judgment(t: Term | None, judge: Const) -> Term | None:
    if isinstance(t, App) and isinstance(t.fn, Const) and t.fn == judge:
        return t.arg
    return None


def contrary(q: Term) -> Term:
    """Strip one negation, or add one."""
    if isinstance(q, App) and q.fn == NOT:
        return q.arg
    return App(NOT, q)


def assumptions_of(graph: ContextGraph, theory: str, local: bool = False) -> list[tuple[Declaration, Term]]:
    decls = graph.theory(theory).decls.values() if local else graph.flatten(theory)
    out = []
    for d in decls:
        q = _judgment(d.type, ASSUMES)
        if q is not None:
            out.append((d, q))
    return out


def proofs_of(graph: ContextGraph, theory: str, local: bool = False) -> list[tuple[Declaration, Term]]:
    decls = graph.theory(theory).decls.values() if local else graph.flatten(theory)
    out = []
    for d in decls:
        c = _judgment(d.type, PROVES)
        if c is not None:
            out.append((d, c))
    return out


def _same(ctx: TypingContext, a: Term, b: Term) -> bool:
    return alpha_eq(a, b) or alpha_eq(normalize(ctx, a), normalize(ctx, b))


def verify_attack(graph: ContextGraph, attacker: str, target: str, witness: Term) -> bool:
    """``attacker`` proves ``witness`` and ``target`` assumes something whose contrary it is."""
    ctx = _global_ctx(graph)
    if not any(_same(ctx, c, witness) for _, c in proofs_of(graph, attacker)):
        return False
    return any(_same(ctx, contrary(q), witness) for _, q in assumptions_of(graph, target))


def detect_attacks(graph: ContextGraph, theories: Iterable[str] | None = None) -> list[AttackEdge]:
    """Attacks between the owners of a proof and of a contrary assumption.

    If one owner extends the other (or some theory includes both), that theory
    is inconsistent and attacks itself instead.
    """
    names = list(theories if theories is not None else graph.theories)
    ctx = _global_ctx(graph)
    anc = {n: graph.ancestors(n) for n in names}
    proofs = [(n, d, c) for n in names for d, c in proofs_of(graph, n, local=True)]
    assumed = [(n, d, q) for n in names for d, q in assumptions_of(graph, n, local=True)]
    edges: dict[tuple[str, str], AttackEdge] = {}
    for t1, _, c in proofs:
        for t2, _, q in assumed:
            if not _same(ctx, contrary(q), c):
                continue
            joint = [x for x in names if t1 in anc[x] and t2 in anc[x]]
            for x in joint:
                edges.setdefault((x, x), AttackEdge(x, x, c, "detected"))
            if t1 != t2 and t1 not in anc[t2] and t2 not in anc[t1]:
                edges.setdefault((t1, t2), AttackEdge(t1, t2, c, "detected"))
    return list(edges.values())


def inherit_attacks(graph: ContextGraph, base: list[AttackEdge], theories: Iterable[str] | None = None) -> list[AttackEdge]:
    """Lift each attack A→B to X→Y for X strictly extending A and Y strictly extending B."""
    names = list(theories if theories is not None else graph.theories)
    anc = {n: graph.ancestors(n) for n in names}
    have = {(e.attacker, e.target) for e in base}
    out: list[AttackEdge] = []
    for e in base:
        if e.attacker == e.target:
            continue
        ups_a = [x for x in names if x != e.attacker and e.attacker in anc[x] and e.target not in anc[x]]
        ups_b = [y for y in names if y != e.target and e.target in anc[y] and e.attacker not in anc[y]]
        for x, y in itertools.product(ups_a, ups_b):
            if x != y and (x, y) not in have:
                have.add((x, y))
                out.append(AttackEdge(x, y, e.witness, f"inherited:{e.attacker}->{e.target}"))
    return out


def all_attacks(graph: ContextGraph, theories: Iterable[str] | None = None) -> list[AttackEdge]:
    names = list(theories if theories is not None else graph.theories)
    base = detect_attacks(graph, names)
    seen = {(e.attacker, e.target) for e in base}
    for e in graph.attacks:
        if (e.attacker, e.target) not in seen and e.attacker in names and e.target in names:
            seen.add((e.attacker, e.target))
            base.append(e)
    return base + inherit_attacks(graph, base, names)


# -- labelings ---------------------------------------------------------------------------


def _attackers(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> dict[str, set[str]]:
    att: dict[str, set[str]] = {n: set() for n in nodes}
    for a, b in edges:
        att.setdefault(b, set()).add(a)
        att.setdefault(a, set())
    return att


def grounded(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> Labeling:
    att = _attackers(nodes, edges)
    lab = {n: UNDEC for n in att}
    changed = True
    while changed:
        changed = False
        for n in att:
            if lab[n] != UNDEC:
                continue
            if all(lab[a] == OUT for a in att[n]):
                lab[n], changed = IN, True
            elif any(lab[a] == IN for a in att[n]):
                lab[n], changed = OUT, True
    return Labeling(lab)


def is_complete(att: dict[str, set[str]], lab: dict[str, str]) -> bool:
    for n, l in lab.items():
        all_out = all(lab[a] == OUT for a in att[n])
        some_in = any(lab[a] == IN for a in att[n])
        if (l == IN) != all_out or (l == OUT) != some_in:
            return False
    return True


def complete_labelings(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> list[Labeling]:
    edges = list(edges)
    att = _attackers(nodes, edges)
    involved = sorted({a for a, _ in edges} | {b for _, b in edges})
    if len(involved) > MAX_ENUMERATED:
        raise SemanticsTooLarge(f"{len(involved)} attacking or attacked nodes; at most {MAX_ENUMERATED} can be enumerated")
    fixed = {n: IN for n in att if n not in set(involved)}
    out = []
    for bits in itertools.product((False, True), repeat=len(involved)):
        ins = {n for n, b in zip(involved, bits) if b}
        lab = dict(fixed)
        for n in involved:
            if n in ins:
                lab[n] = IN
            elif att[n] & ins:
                lab[n] = OUT
            else:
                lab[n] = UNDEC
        if is_complete(att, lab):
            out.append(Labeling(lab))
    return out


def preferred_labelings(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> list[Labeling]:
    comp = complete_labelings(nodes, edges)
    sets = [frozenset(l.with_label(IN)) for l in comp]
    return [l for l, s in zip(comp, sets) if not any(s < t for t in sets)]


def label(nodes: Iterable[str], edges: Iterable[tuple[str, str]], semantics: str = "grounded") -> list[Labeling]:
    nodes, edges = list(nodes), list(edges)
    if semantics == "grounded":
        return [grounded(nodes, edges)]
    if semantics == "complete":
        return complete_labelings(nodes, edges)
    if semantics == "preferred":
        return preferred_labelings(nodes, edges)
    raise ValueError(f"unknown semantics {semantics!r}")


def is_admissible(ins: set[str], edges: Iterable[tuple[str, str]]) -> bool:
    """Conflict-free and defends each member against every attacker."""
    edges = list(edges)
    if any(a in ins and b in ins for a, b in edges):
        return False
    attacked_by_ins = {b for a, b in edges if a in ins}
    return all(a in attacked_by_ins for a, b in edges if b in ins)


def defeated_report(graph: ContextGraph, lab: Labeling, edges: Iterable[AttackEdge]) -> DefeatReport:
    rep = DefeatReport()
    rep.defeated = sorted(n for n, l in lab.labels.items() if l == OUT)
    rep.inconsistent = sorted({e.attacker for e in edges if e.attacker == e.target})
    out = set(rep.defeated)
    for name, res in graph.pushouts.items():
        if res.view.codomain in out:
            rep.distinguished.append(name)
    rep.distinguished.sort()
    return rep


def witness_text(graph: ContextGraph, e: AttackEdge) -> str:
    return graph.show(e.witness) if graph else show(e.witness)
