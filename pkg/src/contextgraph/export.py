"""DOT and JSON renderings of a context graph."""

from __future__ import annotations

from .argumentation import AttackEdge, DefeatReport, Labeling
from .terms import PRELUDE
from .theorygraph import ContextGraph

LABEL_COLORS = {"IN": "palegreen", "OUT": "lightpink", "UNDEC": "lightgray"}


def _q(s: str) -> str:
    # backslashes are left alone so that label escapes such as \n keep working
    return '"' + s.replace('"', '\\"') + '"'


def _nodes(graph: ContextGraph, with_prelude: bool) -> list[str]:
    return [n for n in graph.theories if with_prelude or n != PRELUDE]


def to_dot(graph: ContextGraph, labeling: Labeling | None = None, attacks: list[AttackEdge] | None = None,
           with_prelude: bool = False) -> str:
    """Includes point from the included theory to the includer; views are bold, attacks red.

    Theories produced by a pushout are drawn as double octagons.
    """
    nodes = _nodes(graph, with_prelude)
    keep = set(nodes)
    lines = ["digraph contextgraph {", "  rankdir=BT;", "  node [shape=box];"]
    for n in nodes:
        attrs = {"label": n}
        if graph.theories[n].generated_by:
            attrs["shape"] = "doubleoctagon"
            attrs["generated"] = "true"
        if labeling is not None and n in labeling.labels:
            attrs["style"] = "filled"
            attrs["fillcolor"] = LABEL_COLORS[labeling.labels[n]]
            attrs["label"] = f"{n}\\n{labeling.labels[n]}"
        body = ", ".join(f"{k}={_q(v)}" for k, v in attrs.items())
        lines.append(f"  {_q(n)} [{body}];")
    for child, parent, meta in graph.includes_edges():
        if child in keep and parent in keep:
            style = "dashed" if meta else "solid"
            lines.append(f"  {_q(parent)} -> {_q(child)} [style={style}, kind={_q('meta' if meta else 'include')}];")
    for m in graph.views.values():
        if m.domain in keep and m.codomain in keep:
            lines.append(f"  {_q(m.domain)} -> {_q(m.codomain)} [style=bold, color=blue, label={_q(m.name)}, kind={_q(m.kind)}];")
    for e in attacks or []:
        lines.append(f"  {_q(e.attacker)} -> {_q(e.target)} [color=red, label={_q('attacks')}, kind={_q('attack')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(graph: ContextGraph, with_prelude: bool = False) -> dict:
    theories = []
    for n in _nodes(graph, with_prelude):
        th = graph.theories[n]
        theories.append({
            "name": n,
            "meta": th.meta,
            "includes": th.includes,
            "generated_by": th.generated_by,
            "declarations": [
                {"name": d.name, "type": graph.show(d.type, n) if d.type is not None else None,
                 "definiens": graph.show(d.definiens, n) if d.definiens is not None else None,
                 "origin": d.origin}
                for d in th.decls.values()
            ],
        })
    views = [
        {"name": m.name, "domain": m.domain, "codomain": m.codomain, "kind": m.kind,
         "assignments": {f"{q[0]}?{q[1]}": graph.show(t, m.codomain) for q, t in m.assignments.items()}}
        for m in graph.views.values()
    ]
    return {"theories": theories, "views": views}


def argue_json(graph: ContextGraph, semantics: str, labelings: list[Labeling], attacks: list[AttackEdge],
               report: DefeatReport) -> dict:
    lab = labelings[0] if len(labelings) == 1 else None
    nodes = sorted(n for n in graph.theories if n != PRELUDE)
    out: dict = {"semantics": semantics}
    if lab is not None:
        out["nodes"] = [{"name": n, "label": lab.labels.get(n, "IN")} for n in nodes]
    else:
        out["nodes"] = [{"name": n} for n in nodes]
        out["labelings"] = [{n: l.labels.get(n, "IN") for n in nodes} for l in labelings]
    out["edges"] = [
        {"from": e.attacker, "to": e.target, "witness": graph.show(e.witness, e.attacker), "provenance": e.provenance}
        for e in attacks
    ]
    out["defeated"] = report.defeated
    out["distinguished"] = report.distinguished
    out["inconsistent"] = report.inconsistent
    return out
