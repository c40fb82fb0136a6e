"""Random instance generators shared by the property tests and the acceptance gate.

All generators take a ``random.Random`` so that hypothesis (via ``st.randoms``)
and seeded loops can drive them alike.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from contextgraph.syntax.ast import (
    AttackDef,
    DeclAST,
    Fixity,
    ImportDef,
    PushoutDef,
    SourceGraphAST,
    TheoryDef,
    ViewDef,
)
from contextgraph.terms import ANON, TYPE, App, Const, Lam, Pi, Term, Var

# -- well-typed kernel terms --------------------------------------------------------

KERNEL_SIG = """
theory Sig {
  nat : type
  z : nat
  s : nat → nat
  add : nat → nat → nat
  two : nat = s (s z)
  twice : (nat → nat) → nat → nat = [f, x] f (f x)
  id : (A:type) → A → A = [A, x] x
  P : nat → type
  p0 : P z
  pall : (n:nat) → P n
  pmap : (n:nat) → P n → P (s n)
}
"""


def c(name: str) -> Const:
    return Const(name, "Sig")


NAT = c("nat")
NAT_FN = Pi(ANON, NAT, NAT)
BINDERS = ("x", "y", "f", "n")


def ap(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def gen_nat(rng: random.Random, depth: int, env: list[str]) -> Term:
    leaves = [c("z"), c("two")] + [Var(v) for v in env]
    if depth <= 0 or rng.random() < 0.2:
        return rng.choice(leaves)
    k = rng.randrange(7)
    d = depth - 1
    if k == 0:
        return App(c("s"), gen_nat(rng, d, env))
    if k == 1:
        return ap(c("add"), gen_nat(rng, d, env), gen_nat(rng, d, env))
    if k == 2:
        return ap(c("twice"), gen_fn(rng, d, env), gen_nat(rng, d, env))
    if k == 3:
        x = rng.choice(BINDERS)
        return App(Lam(x, NAT, gen_nat(rng, d, env + [x])), gen_nat(rng, d, env))
    if k == 4:
        return ap(c("id"), NAT, gen_nat(rng, d, env))
    if k == 5:
        return App(gen_fn(rng, d, env), gen_nat(rng, d, env))
    return rng.choice(leaves)


def gen_fn(rng: random.Random, depth: int, env: list[str]) -> Term:
    if depth <= 0 or rng.random() < 0.25:
        return c("s")
    k = rng.randrange(5)
    d = depth - 1
    if k == 0:
        return App(c("add"), gen_nat(rng, d, env))
    if k == 1:
        return App(c("twice"), gen_fn(rng, d, env))
    if k == 2:
        x = rng.choice(BINDERS)
        return Lam(x, NAT, gen_nat(rng, d, env + [x]))
    if k == 3:
        return ap(c("id"), NAT_FN, gen_fn(rng, d, env))
    return c("s")


def gen_proof(rng: random.Random, depth: int, env: list[str]) -> tuple[Term, Term]:
    """A term of type ``P idx`` together with ``idx``."""
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return c("p0"), c("z")
        n = gen_nat(rng, 1, env)
        return App(c("pall"), n), n
    k = rng.randrange(3)
    p, idx = gen_proof(rng, depth - 1, env)
    if k == 0:
        # a convertible copy of the index exercises conversion checking
        alt = rng.choice([idx, ap(c("id"), NAT, idx), App(Lam("y", NAT, Var("y")), idx)])
        return ap(c("pmap"), alt, p), App(c("s"), alt)
    if k == 1:
        return ap(c("id"), App(c("P"), idx), p), idx
    n = gen_nat(rng, depth - 1, env)
    return App(c("pall"), n), n


def gen_typed(rng: random.Random, depth: int = 4, env: list[str] | None = None) -> tuple[Term, Term]:
    """A random well-typed term over ``Sig`` and its type."""
    env = env or []
    k = rng.randrange(3)
    if k == 0:
        return gen_nat(rng, depth, env), NAT
    if k == 1:
        return gen_fn(rng, depth, env), NAT_FN
    p, idx = gen_proof(rng, depth, env)
    return p, App(c("P"), idx)


# -- pushout instances ---------------------------------------------------------------


@dataclass
class PushoutInstance:
    source: str
    compatible: bool


def gen_pushout_instance(rng: random.Random) -> PushoutInstance:
    """Span B ⊇ A → C plus a cocone C → D ← B, written as source.

    The cocone is compatible (ψ agrees with χ∘φ on A) unless the instance is
    flagged otherwise. Every theory has at most five declarations.
    """
    tys = ["s", "t"]
    a = {f"a{i}": rng.choice(tys) for i in range(rng.randint(1, 2))}
    b = {f"b{i}": rng.choice(tys) for i in range(rng.randint(0, 2))}
    use_g = rng.random() < 0.6
    cc = {f"c{i}": rng.choice(tys) for i in range(rng.randint(1, 3))}
    for ty in set(a.values()) - set(cc.values()):
        cc[f"c{len(cc)}"] = ty
    dd = {f"d{i}": ty for i, ty in enumerate(["s", "t"] + [rng.choice(tys) for _ in range(rng.randint(0, 1))])}
    hs = [f"h{i}" for i in range(rng.randint(1, 2))]

    b_decls = [f"{n} : {ty}" for n, ty in b.items()]
    if use_g:
        b_decls.append("g : s → t")
    s_consts = [n for n, ty in {**a, **b}.items() if ty == "s"]
    if s_consts:
        fn = "g" if use_g else "f0"
        b_decls.append(f"e : t = {fn} {rng.choice(s_consts)}")

    def pick(ty: str, pool: dict[str, str]) -> str:
        return rng.choice([n for n, t in pool.items() if t == ty])

    phi = {n: pick(ty, cc) for n, ty in a.items()}
    chi = {n: pick(ty, dd) for n, ty in cc.items()}
    psi = {n: chi[phi[n]] for n in a}
    compatible = True
    if rng.random() < 0.25:
        n = rng.choice(list(a))
        others = [d for d, t in dd.items() if t == a[n] and d != psi[n]]
        if others:
            psi[n] = rng.choice(others)
            compatible = False
    for n, ty in b.items():
        psi[n] = pick(ty, dd)
    if use_g:
        psi["g"] = rng.choice(hs)

    def block(lines: list[str]) -> str:
        return "".join(f"  {ln}\n" for ln in lines)

    src = "theory Base {\n  s : type\n  t : type\n  f0 : s → t\n}\n"
    src += "theory A {\n  include Base\n" + block([f"{n} : {t}" for n, t in a.items()]) + "}\n"
    src += "theory B {\n  include A\n" + block(b_decls) + "}\n"
    src += "theory C {\n  include Base\n" + block([f"{n} : {t}" for n, t in cc.items()]) + "}\n"
    src += "theory D {\n  include Base\n" + block([f"{n} : {t}" for n, t in dd.items()] + [f"{h} : s → t" for h in hs]) + "}\n"
    src += "view phi : A -> C {\n" + block([f"{k} := {v}" for k, v in phi.items()]) + "}\n"
    src += "pushout P = apply B along phi\n"
    src += "view chi : C -> D {\n" + block([f"{k} := {v}" for k, v in chi.items()]) + "}\n"
    src += "view psi : B -> D {\n" + block([f"{k} := {v}" for k, v in psi.items()]) + "}\n"
    return PushoutInstance(src, compatible)


# -- view-finder toys ------------------------------------------------------------------------


@dataclass
class ToySide:
    # name -> type, where a type is "s", "t" or ("Q", name-of-an-earlier-s-constant)
    consts: dict[str, object]

    def lines(self) -> list[str]:
        return [f"{n} : {ty if isinstance(ty, str) else 'Q ' + ty[1]}" for n, ty in self.consts.items()]


def gen_toy_side(rng: random.Random, prefix: str) -> ToySide:
    consts: dict[str, object] = {}
    for i in range(rng.randint(0, 4)):
        s_names = [n for n, t in consts.items() if t == "s"]
        choice = rng.choice(["s", "t", "Q"] if s_names else ["s", "t"])
        consts[f"{prefix}{i}"] = ("Q", rng.choice(s_names)) if choice == "Q" else choice
    return ToySide(consts)


def toy_source(dom: ToySide, cod: ToySide) -> str:
    def block(lines: list[str]) -> str:
        return "".join(f"  {ln}\n" for ln in lines)

    return (
        "theory Base {\n  s : type\n  t : type\n  Q : s → type\n}\n"
        "theory Dom {\n  include Base\n" + block(dom.lines()) + "}\n"
        "theory Cod {\n  include Base\n" + block(cod.lines()) + "}\n"
    )


# -- random syntax trees -------------------------------------------------------------------


CONST_NAMES = ("a", "b", "foo", "bar_1", "Popov", "has-claim", "p'", "∧El", "MP")
BOUND_NAMES = ("x", "y", "z2", "w")
THEORY_NAMES = ("T", "U", "Rule-1", "Case_A", "relevance-Reduct")
OPERATORS = {"⊢": 1, "⊦~": 1, "¬": 1, "∧": 2, "⇒": 2}


def gen_expr(rng: random.Random, depth: int, scope: list[str]) -> Term:
    if depth <= 0 or rng.random() < 0.15:
        k = rng.randrange(6)
        if k == 0 and scope:
            return Var(rng.choice(scope))
        if k == 1:
            return TYPE
        if k == 2:
            # `T?c` needs c to start like an ordinary identifier
            return Const(rng.choice([n for n in CONST_NAMES if n[0].isalnum()]), rng.choice(THEORY_NAMES))
        if k == 3:
            return Const(rng.choice(CONST_NAMES), None, explicit=True)
        if k == 4:
            return Const(rng.choice(list(OPERATORS)))
        return Const(rng.choice(CONST_NAMES))
    d = depth - 1
    k = rng.randrange(8)
    if k == 0:
        op = rng.choice(list(OPERATORS))
        return ap(Const(op), *[gen_expr(rng, d, scope) for _ in range(OPERATORS[op])])
    if k == 1:
        return ap(gen_expr(rng, d, scope), gen_expr(rng, d, scope))
    if k == 2:
        x = rng.choice(BOUND_NAMES)
        ann = gen_expr(rng, d, scope) if rng.random() < 0.5 else None
        return Lam(x, ann, gen_expr(rng, d, scope + [x]))
    if k == 3:
        return Pi(ANON, gen_expr(rng, d, scope), gen_expr(rng, d, scope))
    if k == 4:
        x = rng.choice(BOUND_NAMES)
        return Pi(x, gen_expr(rng, d, scope), gen_expr(rng, d, scope + [x]), implicit=rng.random() < 0.5)
    if k == 5:
        op = rng.choice(list(OPERATORS))
        # operator applied to one argument too many
        return ap(Const(op), *[gen_expr(rng, d, scope) for _ in range(OPERATORS[op] + 1)])
    return ap(Const(rng.choice(CONST_NAMES)), *[gen_expr(rng, d, scope) for _ in range(rng.randint(1, 3))])


def gen_decl(rng: random.Random, name: str) -> DeclAST:
    ty = gen_expr(rng, 3, []) if rng.random() < 0.8 else None
    df = gen_expr(rng, 3, []) if ty is None or rng.random() < 0.4 else None
    fx = None
    if rng.random() < 0.1:
        fx = Fixity(rng.choice(["infixl", "infixr", "prefix"]), rng.randint(0, 60))
    return DeclAST(name, ty, df, fx)


def gen_graph_ast(rng: random.Random) -> SourceGraphAST:
    items: list = []
    if rng.random() < 0.5:
        items.append(ImportDef("folnd"))
    theories = [f"Th{i}" for i in range(rng.randint(1, 3))]
    for i, th in enumerate(theories):
        incl = rng.sample(theories[:i], rng.randint(0, i)) if i else []
        decls = [gen_decl(rng, f"d{i}_{j}") for j in range(rng.randint(0, 4))]
        items.append(TheoryDef(th, rng.choice([None, "FOLND"]), incl, decls))
    if rng.random() < 0.6:
        assigns = [(f"k{j}", gen_expr(rng, 2, [])) for j in range(rng.randint(0, 3))]
        items.append(ViewDef("v", rng.choice(theories), rng.choice(theories), assigns))
        if rng.random() < 0.5:
            ren = [(f"k{j}", f"r{j}") for j in range(rng.randint(0, 2))]
            extra = [gen_decl(rng, f"e{j}") for j in range(rng.randint(0, 2))]
            items.append(PushoutDef("Po", rng.choice(theories), "v", ren, extra))
    if rng.random() < 0.4:
        items.append(AttackDef(rng.choice(theories), rng.choice(theories), gen_expr(rng, 2, [])))
    return SourceGraphAST(items)


def gen_attack_graph(rng: random.Random, max_nodes: int = 10) -> tuple[list[str], list[tuple[str, str]]]:
    n = rng.randint(1, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    p = rng.uniform(0.05, 0.4)
    edges = [(a, b) for a in nodes for b in nodes if rng.random() < p]
    return nodes, edges
