"""Build a checked ContextGraph from ``.cg`` source."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .argumentation import AttackEdge, verify_attack
from .errors import CGError, GraphError, UnknownConstant, UnknownTheory
from .kernel import elaborate
from .pushout import PushoutRequest, compute_pushout
from .syntax import parse_source, tokenize
from .syntax.ast import AttackDef, DeclAST, Fixity, ImportDef, PushoutDef, SourceGraphAST, TheoryDef, ViewDef
from .terms import PRELUDE
from .theorygraph import ContextGraph, Declaration, Morphism, Theory


@dataclass
class LoadResult:
    graph: ContextGraph
    ast: SourceGraphAST
    diagnostics: list[CGError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def prelude_source() -> tuple[str, str]:
    """Text and file name of the logic prelude; ``CG_PRELUDE`` overrides the bundled one."""
    override = os.environ.get("CG_PRELUDE")
    if override:
        return Path(override).read_text(encoding="utf-8"), override
    f = resources.files("contextgraph") / "data" / "folnd.cg"
    return f.read_text(encoding="utf-8"), "folnd.cg"


def corpus_source() -> tuple[str, str]:
    f = resources.files("contextgraph") / "data" / "pvh.cg"
    return f.read_text(encoding="utf-8"), "pvh.cg"


def _import_source(name: str, base_dir: Path | None) -> tuple[str, str]:
    if name.lower() == "folnd":
        return prelude_source()
    cand = (base_dir or Path.cwd()) / f"{name}.cg"
    if not cand.exists():
        raise UnknownTheory(f"cannot import {name}: no file {cand}")
    return cand.read_text(encoding="utf-8"), str(cand)


def _imports(source: str, file: str | None) -> list[str]:
    toks = tokenize(source, file)
    return [toks[i + 1].text for i, t in enumerate(toks[:-1]) if t.kind == "keyword" and t.text == "import"]


def _decl(d: DeclAST, theory: str) -> Declaration:
    return Declaration(d.name, theory, d.type, d.definiens, d.fixity, span=d.span)


class Loader:
    def __init__(self, graph: ContextGraph | None = None, base_dir: Path | None = None):
        self.graph = graph or ContextGraph()
        self.base_dir = base_dir
        self.diagnostics: list[CGError] = []
        self._loaded: set[str] = set()

    def fixities(self) -> dict[str, Fixity]:
        return dict(self.graph.fixities)

    def load(self, source: str, file: str | None = None) -> SourceGraphAST:
        for name in _imports(source, file):
            self.load_import(name)
        ast = parse_source(source, file, self.fixities())
        self.graph.fixities.update(ast.fixities())
        for item in ast.items:
            try:
                self.add_item(item)
            except CGError as e:
                if e.span is None:
                    e.span = item.span
                self.diagnostics.append(e)
        return ast

    def load_import(self, name: str) -> None:
        key = name.lower()
        if key in self._loaded:
            return
        self._loaded.add(key)
        src, fname = _import_source(name, self.base_dir)
        self.load(src, fname)

    def default_meta(self, name: str) -> str | None:
        if name != PRELUDE and PRELUDE in self.graph.theories:
            return PRELUDE
        return None

    def add_item(self, item) -> None:
        g = self.graph
        if isinstance(item, ImportDef):
            return
        if isinstance(item, TheoryDef):
            if item.name in g.theories:
                raise GraphError(f"theory {item.name} is already defined", item.span)
            for dep in ([item.meta] if item.meta else []) + item.includes:
                if dep not in g.theories:
                    raise UnknownTheory(f"{item.name} includes unknown theory {dep}", item.span)
            th = Theory(item.name, item.meta or self.default_meta(item.name), list(item.includes), span=item.span)
            for d in item.decls:
                th.add(_decl(d, th.name))
            g.add_theory(th)
            self.diagnostics.extend(g.check_theory(th.name))
        elif isinstance(item, ViewDef):
            for t in (item.domain, item.codomain):
                if t not in g.theories:
                    raise UnknownTheory(f"view {item.name} mentions unknown theory {t}", item.span)
            m = Morphism(item.name, item.domain, item.codomain, span=item.span)
            for lhs, rhs in item.assignments:
                m.assignments[g.resolve_domain_name(item.domain, lhs)] = rhs
            report = g.check_view(m)
            g.add_view(m)
            for f in report.failures:
                f.span = item.span
                self.diagnostics.append(f)
            if report.unmapped:
                names = ", ".join(q[1] for q in report.unmapped)
                self.diagnostics.append(GraphError(f"view {item.name} leaves unmapped: {names}", item.span))
        elif isinstance(item, PushoutDef):
            req = PushoutRequest(item.name, item.base, item.view, dict(item.renaming), list(item.extra))
            res = compute_pushout(g, req, check=False)
            res.theory.span = item.span
            self.diagnostics.extend(res.diagnostics)
        elif isinstance(item, AttackDef):
            for t in (item.attacker, item.target):
                if t not in g.theories:
                    raise UnknownTheory(f"attack mentions unknown theory {t}", item.span)
            w = elaborate(g.context(item.attacker), item.witness)
            if not verify_attack(g, item.attacker, item.target, w):
                raise GraphError(
                    f"{item.attacker} does not attack {item.target} on {g.show(w)}", item.span)
            g.attacks.append(AttackEdge(item.attacker, item.target, w, "asserted"))
        else:
            raise TypeError(f"unknown item {item!r}")


def load_source(source: str, file: str | None = None, base_dir: Path | None = None) -> LoadResult:
    ld = Loader(base_dir=base_dir)
    ast = ld.load(source, file)
    return LoadResult(ld.graph, ast, ld.diagnostics)


def load_file(path: str | Path) -> LoadResult:
    path = Path(path)
    return load_source(path.read_text(encoding="utf-8"), str(path), path.parent)


def load_corpus() -> LoadResult:
    src, name = corpus_source()
    return load_source(src, name)
