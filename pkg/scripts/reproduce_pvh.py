#!/usr/bin/env python3
"""Load the Popov v. Hayashi corpus and print the argument it reconstructs."""

from __future__ import annotations

import argparse
import sys

from contextgraph.analogy import analogy_report, find_views
from contextgraph.argumentation import all_attacks, defeated_report, grounded
from contextgraph.loader import load_corpus, load_file


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("corpus", nargs="?", help="corpus file (default: the shipped one)")
    args = ap.parse_args(argv)
    res = load_file(args.corpus) if args.corpus else load_corpus()
    for d in res.diagnostics:
        print(f"error: {d}", file=sys.stderr)
    if not res.ok:
        return 1
    g = res.graph

    print("Rule applications:")
    for name, po in g.pushouts.items():
        print(f"  {name} = apply {po.base} along {po.view.name} : {po.view.domain} -> {po.view.codomain}")
        for src, (_, new) in po.generated.items():
            d = g.lookup((name, new))
            if d.type is not None:
                print(f"      {new} : {g.show(d.type, name)}")

    nodes = [n for n in g.theories if n != "FOLND"]
    edges = all_attacks(g, nodes)
    lab = grounded(nodes, [(e.attacker, e.target) for e in edges])
    print("\nAttacks:")
    for e in edges:
        print(f"  {e.attacker} -> {e.target} on {g.show(e.witness, e.attacker)}  ({e.provenance})")
    rep = defeated_report(g, lab, edges)
    print(f"\nDefeated: {', '.join(rep.defeated)}")
    print(f"Distinguished precedent applications: {', '.join(rep.distinguished)}")

    print("\nAnalogy questions:")
    for name in g.pushouts:
        r = analogy_report(g, name, lab, edges)
        print(f"  {name}: A1 {r.a1.holds}, A2 {r.a2.holds}, A3 {r.a3.holds}, A4 {r.a4}")

    print("\nViews relevance-Reduct -> PvH-Asp-Default:")
    for i, c in enumerate(find_views(g, "relevance-Reduct", "PvH-Asp-Default")[:3]):
        print(f"  {i + 1}. score {c.score:.2f} {dict(c.pairs())}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
