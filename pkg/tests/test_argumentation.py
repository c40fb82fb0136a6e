import random

import pytest
from hypothesis import given, settings, strategies as st

from contextgraph.argumentation import (
    IN, OUT, UNDEC, all_attacks, complete_labelings, contrary, defeated_report, detect_attacks, grounded,
    is_admissible, label, preferred_labelings, verify_attack,
)
from contextgraph.errors import SemanticsTooLarge
from contextgraph.loader import load_source
from contextgraph.terms import NOT, App, Const

from conftest import load_ok
from generators import gen_attack_graph
from oracles import all_complete_labelings, minimal_in_complete, preferred_by_enumeration

SHADOW = """
import folnd
theory T { p : bool }
theory Prover { include T
  pr : ⊢ p }
theory Assumer { include T
  as : ⊦~ ¬ p }
theory Both { include Prover
  include Assumer }
"""


def nodes_of(g):
    return [n for n in g.theories if n != "FOLND"]


def test_contrary_is_an_involution():
    p = Const("p", "T")
    assert contrary(p) == App(NOT, p)
    assert contrary(contrary(p)) == p


def test_corpus_attacks(pvh):
    edges = all_attacks(pvh, nodes_of(pvh))
    pairs = {(e.attacker, e.target): e.provenance for e in edges}
    assert pairs == {
        ("PvH-Asp-McCart", "PvH-Asp-Default"): "detected",
        ("PvH-Ruling", "PvH-Alt"): "inherited:PvH-Asp-McCart->PvH-Asp-Default",
    }


def test_corpus_attack_witness(pvh):
    e = detect_attacks(pvh, nodes_of(pvh))[0]
    assert pvh.show(e.witness, "PvH-Asp-McCart") == "Popov has_right ball"
    assert verify_attack(pvh, "PvH-Asp-McCart", "PvH-Asp-Default", e.witness)
    assert not verify_attack(pvh, "PvH-Asp-Default", "PvH-Asp-McCart", e.witness)


def test_corpus_grounded_labels(pvh):
    nodes = nodes_of(pvh)
    edges = all_attacks(pvh, nodes)
    lab = grounded(nodes, [(e.attacker, e.target) for e in edges])
    assert lab.with_label(OUT) == {"PvH-Asp-Default", "PvH-Alt"}
    assert lab.with_label(UNDEC) == set()
    rep = defeated_report(pvh, lab, edges)
    assert rep.defeated == ["PvH-Alt", "PvH-Asp-Default"]
    assert rep.distinguished == ["PvH-Alt"]
    assert rep.inconsistent == []


def test_shadowing_theory_attacks_itself():
    g = load_ok(SHADOW)
    edges = {(e.attacker, e.target) for e in all_attacks(g, nodes_of(g))}
    assert ("Prover", "Assumer") in edges
    assert ("Both", "Both") in edges
    lab = grounded(nodes_of(g), edges)
    assert lab["Both"] == UNDEC or lab["Both"] == OUT
    assert lab["Assumer"] == OUT


def test_asserted_attack_must_hold():
    res = load_source(SHADOW + "attack Assumer -> Prover on (p)\n")
    assert not res.ok


def test_negated_assumption_is_not_attacked_by_itself():
    g = load_ok("import folnd\ntheory T { p : bool\n  a : ⊦~ p }")
    assert all_attacks(g, nodes_of(g)) == []


def test_grounded_on_cycles():
    assert grounded(["a", "b"], [("a", "b"), ("b", "a")]).labels == {"a": UNDEC, "b": UNDEC}
    assert grounded(["a", "b", "c"], [("a", "b"), ("b", "c")]).labels == {"a": IN, "b": OUT, "c": IN}
    assert grounded(["a"], [("a", "a")]).labels == {"a": UNDEC}


def test_preferred_two_cycle():
    labs = preferred_labelings(["a", "b"], [("a", "b"), ("b", "a")])
    assert sorted(l.labels["a"] for l in labs) == [IN, OUT]
    assert len(label(["a", "b"], [("a", "b"), ("b", "a")], "complete")) == 3


def test_semantics_too_large():
    nodes = [f"n{i}" for i in range(22)]
    edges = [(nodes[i], nodes[i + 1]) for i in range(21)]
    with pytest.raises(SemanticsTooLarge):
        complete_labelings(nodes, edges)
    assert grounded(nodes, edges)["n21"] == OUT


def test_unknown_semantics():
    with pytest.raises(ValueError):
        label(["a"], [], "stable")


def test_admissibility():
    edges = [("a", "b"), ("b", "c")]
    assert is_admissible({"a", "c"}, edges)
    assert not is_admissible({"c"}, edges)
    assert not is_admissible({"a", "b"}, edges)
    assert is_admissible(set(), edges)


def _canon(labs):
    return sorted(tuple(sorted(l.items())) for l in labs)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_labelings_match_enumeration(seed):
    nodes, edges = gen_attack_graph(random.Random(seed), max_nodes=7)
    assert grounded(nodes, edges).labels == minimal_in_complete(nodes, edges)
    assert _canon(l.labels for l in complete_labelings(nodes, edges)) == _canon(all_complete_labelings(nodes, edges))
    assert _canon(l.labels for l in preferred_labelings(nodes, edges)) == _canon(preferred_by_enumeration(nodes, edges))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_grounded_in_set_is_admissible(seed):
    nodes, edges = gen_attack_graph(random.Random(seed))
    assert is_admissible(grounded(nodes, edges).with_label(IN), edges)
