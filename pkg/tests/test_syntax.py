import random

import pytest
from hypothesis import given, settings, strategies as st

from contextgraph.errors import DuplicateName, IllegalCharacter, ParseError
from contextgraph.syntax import (
    AttackDef,
    PushoutDef,
    TheoryDef,
    ViewDef,
    parse_source,
    parse_term,
    print_graph,
    print_term,
    tokenize,
)
from contextgraph.terms import ANON, TYPE, App, Const, Lam, Pi, Var

from conftest import CORPUS
from generators import gen_graph_ast


def C(name, theory=None):
    return Const(name, theory)


def ap(f, *args):
    for a in args:
        f = App(f, a)
    return f


# -- lexer ------------------------------------------------------------------------


def test_rule_names_lex_as_identifiers():
    toks = tokenize("a : ⊢ φ = ∧E c c")
    assert len(toks) == 8
    assert [t.kind for t in toks][:3] == ["identifier", "colon", "symbol"]
    assert toks[5].kind == "identifier" and toks[5].text == "∧E"


def test_ascii_aliases_map_to_glyphs():
    toks = tokenize("|- |~ /\\ ~ => -> forall")
    assert [t.value for t in toks] == ["⊢", "⊦~", "∧", "¬", "⇒", "→", "∀"]


def test_identifier_characters():
    toks = tokenize("PvH-Asp-Gray P/d$2 T?c x' a->b")
    assert [t.text for t in toks] == ["PvH-Asp-Gray", "P/d$2", "T?c", "x'", "a", "->", "b"]


def test_lone_dash_is_illegal():
    with pytest.raises(IllegalCharacter):
        tokenize("a - b")


def test_comments_are_skipped():
    assert [t.text for t in tokenize("a // b c\nd")] == ["a", "d"]


def test_illegal_character_has_position():
    with pytest.raises(IllegalCharacter) as e:
        tokenize("theory T {\n  a : #\n}")
    assert (e.value.span.line, e.value.span.col) == (2, 7)


def test_empty_input():
    assert tokenize("") == []
    assert parse_source("").items == []


# -- expressions --------------------------------------------------------------------


def test_operator_precedence():
    assert parse_term("a ∧ b ⇒ c") == ap(C("⇒"), ap(C("∧"), C("a"), C("b")), C("c"))
    assert parse_term("¬ p ∧ q") == ap(C("∧"), ap(C("¬"), C("p")), C("q"))
    assert parse_term("⊢ a ⇒ b") == ap(C("⊢"), ap(C("⇒"), C("a"), C("b")))
    assert parse_term("a ∧ b ∧ c") == ap(C("∧"), C("a"), ap(C("∧"), C("b"), C("c")))


def test_arrow_is_right_associative_and_loosest():
    assert parse_term("A → B → C") == Pi(ANON, C("A"), Pi(ANON, C("B"), C("C")))
    assert parse_term("⊢ a → ⊢ b") == Pi(ANON, ap(C("⊢"), C("a")), ap(C("⊢"), C("b")))


def test_application_binds_tighter_than_operators():
    assert parse_term("f x ∧ g y") == ap(C("∧"), ap(C("f"), C("x")), ap(C("g"), C("y")))


def test_binders():
    assert parse_term("[x, y] f x y") == Lam("x", None, Lam("y", None, ap(C("f"), Var("x"), Var("y"))))
    assert parse_term("{a:bool} ⊢ a") == Pi("a", C("bool"), ap(C("⊢"), Var("a")), implicit=True)
    assert parse_term("(n:nat) → P n") == Pi("n", C("nat"), ap(C("P"), Var("n")))
    assert parse_term("[A:type, x:A] x") == Lam("A", TYPE, Lam("x", Var("A"), Var("x")))


def test_bound_names_shadow_constants():
    t = parse_term("[x] x y")
    assert t == Lam("x", None, ap(Var("x"), C("y")))


def test_qualified_and_explicit_constants():
    t = parse_term("@MP T?p")
    assert t == App(C("MP"), C("p", "T"))
    assert t.fn.explicit


def test_operator_sections():
    assert parse_term("(∧) a") == App(C("∧"), C("a"))


def test_user_fixity_declarations():
    g = parse_source("theory T {\n  has : a → b → bool  infixl 50\n  x = p has q ∧ r\n}")
    x = g.items[0].decls[1]
    assert x.definiens == ap(C("∧"), ap(C("has"), C("p"), C("q")), C("r"))


# -- declarations and items ----------------------------------------------------------------


def test_layout_separates_declarations():
    g = parse_source("theory T {\n  a : A\n  b : B\n    → C\n  c = a; d = b\n}")
    names = [d.name for d in g.items[0].decls]
    assert names == ["a", "b", "c", "d"]
    assert g.items[0].decls[1].type == Pi(ANON, C("B"), C("C"))


def test_item_kinds():
    src = """
    theory A { x : s }
    theory B : M { include A
      y : s }
    view v : A -> B { x := y }
    pushout P = apply B along v renaming { y := z } with { w = z }
    attack P -> B on (z)
    """
    items = parse_source(src).items
    assert [type(i) for i in items] == [TheoryDef, TheoryDef, ViewDef, PushoutDef, AttackDef]
    assert items[1].meta == "M" and items[1].includes == ["A"]
    assert items[3].renaming == [("y", "z")] and items[3].extra[0].name == "w"


@pytest.mark.parametrize("src", [
    "theory T { a : A }\ntheory T { b : B }",
    "theory T {\n  a : A\n  a : B\n}",
    "theory A { x : s }\nview v : A -> A { x := x\n x := x }",
    "theory A { x : s }\nview v : A -> A { x := x }\npushout P = apply A along v renaming { x := y\n x := z }",
])
def test_duplicate_names(src):
    with pytest.raises(DuplicateName):
        parse_source(src)


@pytest.mark.parametrize("src", ["theory {", "theory T { a }", "view v : A B { }", "theory T { a : }"])
def test_parse_errors(src):
    with pytest.raises(ParseError):
        parse_source(src)


def test_parse_error_lists_expectations():
    with pytest.raises(ParseError) as e:
        parse_source("theory T { a }")
    assert e.value.expected


# -- printing ---------------------------------------------------------------------------


@pytest.mark.parametrize("text", [
    "{a:bool} {b:bool} ⊢ a ⇒ b → ⊢ a → ⊢ b",
    "⊢ notitle ∧ noright ∧ nopos ⇒ ¬ proposition",
    "¬ p ∧ q",
    "¬ (⊢ a ∧ b)",
    "(a → b) → c",
    "[x, y] x takes y ∧ i x",
    "f ([x] x) y",
    "(n:nat) → P n",
])
def test_canonical_printing(text):
    assert print_term(parse_term(text)) == text


def test_printing_adds_needed_parentheses():
    assert print_term(parse_term("(¬ p) ∧ q")) == "¬ p ∧ q"
    assert print_term(parse_term("(a ∧ b) ∧ c")) == "(a ∧ b) ∧ c"
    assert print_term(parse_term("(¬ ⊢ a) ∧ b")) == "¬ (⊢ a) ∧ b"


def test_corpus_round_trip():
    ast = parse_source(CORPUS.read_text(encoding="utf-8"))
    text = print_graph(ast)
    again = parse_source(text)
    assert again == ast
    assert print_graph(again) == text


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_generated_round_trip(rng):
    ast = gen_graph_ast(rng)
    text = print_graph(ast)
    again = parse_source(text)
    assert again == ast
    assert print_graph(again) == text


def test_round_trip_sample_is_varied():
    rng = random.Random(0)
    texts = {print_graph(gen_graph_ast(rng)) for _ in range(50)}
    assert len(texts) == 50
