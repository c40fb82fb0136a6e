"""Command line interface: ``cg <command> FILE...``.

Exit codes: 0 success, 1 diagnostics were reported, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .analogy import FinderOptions, find_views
from .argumentation import UNDEC, Labeling, all_attacks, defeated_report, label
from .errors import CGError
from .export import argue_json, to_dot, to_json
from .loader import Loader
from .syntax import print_graph
from .syntax.ast import AttackDef, DeclAST, ImportDef, SourceGraphAST, TheoryDef, ViewDef
from .terms import PRELUDE, App, Const, Lam, Pi, Term
from .theorygraph import ContextGraph

EXIT_OK, EXIT_DIAG, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    semantics: str = "grounded"
    theory: str | None = None
    source: str | None = None
    target: str | None = None
    allow_partial: bool = False
    as_json: bool = False
    max_results: int | None = None
    unfold_bound: int = 10_000
    search_budget: int = 100_000


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cg", description="Check and explore context graphs.")
    p.add_argument("--unfold-bound", type=int, default=10_000, help="maximum definition unfoldings per normalization")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name: str, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.add_argument("inputs", nargs="*", metavar="FILE")
        sp.add_argument("-o", "--output")
        return sp

    cmd("check", "type check all theories, views and pushouts")
    cmd("flatten", "print every declaration visible in a theory").add_argument("--theory", required=True)
    cmd("elaborate", "compute pushouts and print the resulting graph as plain source")
    cmd("argue", "detect attacks and label theories").add_argument(
        "--semantics", choices=("grounded", "complete", "preferred"), default="grounded")
    an = cmd("analogies", "search for views between two theories")
    an.add_argument("--from", dest="source", required=True)
    an.add_argument("--to", dest="target", required=True)
    an.add_argument("--partial", action="store_true")
    an.add_argument("--json", dest="as_json", action="store_true")
    an.add_argument("--max", dest="max_results", type=int)
    an.add_argument("--budget", dest="search_budget", type=int, default=100_000)
    cmd("dot", "export the graph in Graphviz format").add_argument(
        "--semantics", choices=("grounded",), default="grounded")
    cmd("json", "export theories and views as JSON")
    return p


def config_from_args(argv: list[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(ns.command)
    for k, v in vars(ns).items():
        if hasattr(cfg, k) and v is not None:
            setattr(cfg, k, v)
    return cfg


# -- elaborated source -----------------------------------------------------------------------


def _surface(graph: ContextGraph, theory: str, t: Term) -> Term:
    """Drop theory qualifiers that are not needed to resolve a name in ``theory``."""
    counts: dict[str, int] = {}
    for d in graph.flatten(theory):
        counts[d.name] = counts.get(d.name, 0) + 1

    def go(t: Term) -> Term:
        if isinstance(t, Const):
            return Const(t.name, None if counts.get(t.name) == 1 else t.theory, t.explicit)
        if isinstance(t, App):
            return App(go(t.fn), go(t.arg), t.implicit)
        if isinstance(t, Lam):
            return Lam(t.var, go(t.ann) if t.ann is not None else None, go(t.body))
        if isinstance(t, Pi):
            return Pi(t.var, go(t.dom), go(t.cod), t.implicit)
        return t

    return go(t)


def elaborated_ast(graph: ContextGraph) -> SourceGraphAST:
    """The graph with every pushout replaced by the theory it produced."""
    items: list = []
    if PRELUDE in graph.theories:
        items.append(ImportDef("folnd"))
    for th in graph.theories.values():
        if th.name == PRELUDE:
            continue
        meta = th.meta if th.meta not in (None, PRELUDE) else None
        decls = [
            DeclAST(d.name,
                    _surface(graph, th.name, d.type) if d.type is not None else None,
                    _surface(graph, th.name, d.definiens) if d.definiens is not None else None,
                    d.fixity)
            for d in th.decls.values()
        ]
        items.append(TheoryDef(th.name, meta, list(th.includes), decls))
    for m in graph.views.values():
        if m.kind != "view":
            continue
        pairs = []
        for q, t in m.assignments.items():
            dom_names = [d.name for d in graph.flatten(m.domain)]
            lhs = q[1] if dom_names.count(q[1]) == 1 else f"{q[0]}?{q[1]}"
            pairs.append((lhs, _surface(graph, m.codomain, t)))
        items.append(ViewDef(m.name, m.domain, m.codomain, pairs))
    for e in graph.attacks:
        items.append(AttackDef(e.attacker, e.target, _surface(graph, e.attacker, e.witness)))
    return SourceGraphAST(items)


# -- commands ------------------------------------------------------------------------------------


def _skeptical(labelings: list[Labeling]) -> Labeling:
    nodes = labelings[0].labels if labelings else {}
    out = {}
    for n in nodes:
        seen = {l.labels[n] for l in labelings}
        out[n] = seen.pop() if len(seen) == 1 else UNDEC
    return Labeling(out)


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def load(cfg: RunConfig) -> tuple[ContextGraph, list[CGError], int]:
    ld = Loader()
    ld.graph.unfold_bound = cfg.unfold_bound
    for path in cfg.inputs:
        p = Path(path)
        ld.base_dir = p.parent
        try:
            ld.load(p.read_text(encoding="utf-8"), str(p))
        except CGError as e:
            ld.diagnostics.append(e)
    checked = sum(len(t.decls) for t in ld.graph.theories.values() if t.name != PRELUDE)
    return ld.graph, ld.diagnostics, checked


def run(cfg: RunConfig) -> int:
    for path in cfg.inputs:
        if not Path(path).is_file():
            print(f"cg: cannot read {path}", file=sys.stderr)
            return EXIT_IO
    graph, diags, checked = load(cfg)
    for d in diags:
        print(f"error: {d}", file=sys.stderr)
    if cfg.command == "check":
        print(f"{checked} declarations checked, {sum(m.kind == 'view' for m in graph.views.values())} views, {len(graph.pushouts)} pushouts, "
              f"{len(diags)} errors")
        return EXIT_DIAG if diags else EXIT_OK
    if diags:
        return EXIT_DIAG

    try:
        if cfg.command == "flatten":
            lines = []
            for d in graph.flatten(cfg.theory):
                text = f"{d.theory}?{d.name}"
                if d.type is not None:
                    text += " : " + graph.show(d.type, cfg.theory)
                if d.definiens is not None:
                    text += " = " + graph.show(d.definiens, cfg.theory)
                lines.append(text)
            _emit("\n".join(lines) + "\n", cfg)
        elif cfg.command == "elaborate":
            _emit(print_graph(elaborated_ast(graph), graph.fixities), cfg)
        elif cfg.command in ("argue", "dot"):
            nodes = [n for n in graph.theories if n != PRELUDE]
            edges = all_attacks(graph, nodes)
            labs = label(nodes, [(e.attacker, e.target) for e in edges], cfg.semantics)
            if cfg.command == "dot":
                _emit(to_dot(graph, labs[0], edges), cfg)
            else:
                report = defeated_report(graph, _skeptical(labs), edges)
                _emit(json.dumps(argue_json(graph, cfg.semantics, labs, edges, report), indent=2, ensure_ascii=False) + "\n", cfg)
        elif cfg.command == "analogies":
            opts = FinderOptions(cfg.max_results, cfg.allow_partial, cfg.search_budget)
            cands = find_views(graph, cfg.source, cfg.target, opts)
            if cfg.as_json:
                data = [{"rank": i + 1, "score": c.score, "status": c.status,
                         "assignment": dict(c.pairs()), "unmapped": [q[1] for q in c.unmapped]}
                        for i, c in enumerate(cands)]
                _emit(json.dumps(data, indent=2, ensure_ascii=False) + "\n", cfg)
            else:
                lines = []
                for i, c in enumerate(cands):
                    pairs = ", ".join(f"{a} ↦ {b}" for a, b in c.pairs())
                    extra = f"  missing: {', '.join(q[1] for q in c.unmapped)}" if c.unmapped else ""
                    lines.append(f"{i + 1}. score {c.score:.3f} ({c.status}) {{{pairs}}}{extra}")
                _emit("\n".join(lines) + ("\n" if lines else "no candidates\n"), cfg)
        elif cfg.command == "json":
            _emit(json.dumps(to_json(graph), indent=2, ensure_ascii=False) + "\n", cfg)
    except CGError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIAG
    except OSError as e:
        print(f"cg: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
