"""Recursive-descent parser for ``.cg`` token streams.

Declarations end at ``;`` or at a token that starts a new line at or left of
the column where the declaration began; deeper-indented lines continue it.
"""

from __future__ import annotations

from ..errors import DuplicateName, ParseError, Span
from ..terms import ANON, TYPE, App, Const, Lam, Pi, Term, Var
from .ast import (
    AttackDef,
    DeclAST,
    Fixity,
    ImportDef,
    PushoutDef,
    SourceGraphAST,
    TheoryDef,
    ViewDef,
)
from .lexer import Token

ARROW_PREC = -10
DECL_NAME_SYMBOLS = frozenset({"⊢", "⊦~", "¬", "∀", "∧", "⇒"})


def parse_graph(tokens: list[Token], fixities: dict[str, Fixity] | None = None) -> SourceGraphAST:
    return _Parser(tokens, fixities).graph()


def parse_expression(tokens: list[Token], fixities: dict[str, Fixity] | None = None) -> Term:
    p = _Parser(tokens, fixities)
    t = p.expr(ARROW_PREC)
    if p.pos < len(tokens):
        p.fail("trailing input", ("end of input",))
    return t


class _Parser:
    def __init__(self, tokens: list[Token], fixities: dict[str, Fixity] | None):
        from .ast import DEFAULT_FIXITIES

        self.tokens = tokens
        self.pos = 0
        self.fix: dict[str, Fixity] = dict(DEFAULT_FIXITIES)
        if fixities:
            self.fix.update(fixities)
        self.scope: list[str] = []
        self.decl_col = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, k: int = 0) -> Token | None:
        i = self.pos + k
        return self.tokens[i] if i < len(self.tokens) else None

    def cont(self) -> Token | None:
        """Next token if it continues the current declaration under the layout rule."""
        tok = self.peek()
        if tok is None or self.pos == 0:
            return tok
        prev = self.tokens[self.pos - 1]
        if tok.span.line == prev.span.line or tok.span.col > self.decl_col:
            return tok
        return None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of input")
        self.pos += 1
        return tok

    def fail(self, msg: str, expected: tuple[str, ...] = ()):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1].span if self.tokens else Span(0, 0)
            span = Span(last.end, last.end, last.line, last.col, last.file)
            raise ParseError(f"{msg} at end of input", span, expected)
        raise ParseError(f"{msg} at {tok.text!r}", tok.span, expected)

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind and (value is None or tok.value == value)

    def expect(self, kind: str, value: str | None = None) -> Token:
        if not self.at(kind, value):
            self.fail("unexpected token", (value or kind,))
        return self.advance()

    def name(self) -> str:
        return self.expect("identifier").text

    def span_from(self, start: Token) -> Span:
        end = self.tokens[self.pos - 1].span
        s = start.span
        return Span(s.start, end.end, s.line, s.col, s.file)

    # -- items --------------------------------------------------------------

    def graph(self) -> SourceGraphAST:
        items = []
        names: set[str] = set()
        views: set[str] = set()
        while self.peek() is not None:
            item = self.item()
            if isinstance(item, (TheoryDef, PushoutDef)):
                if item.name in names:
                    raise DuplicateName(f"theory {item.name} defined twice", item.span)
                names.add(item.name)
            elif isinstance(item, ViewDef):
                if item.name in views:
                    raise DuplicateName(f"view {item.name} defined twice", item.span)
                views.add(item.name)
            items.append(item)
        return SourceGraphAST(items)

    def item(self):
        tok = self.peek()
        self.decl_col = 0
        if tok.kind == "keyword":
            if tok.text == "import":
                self.advance()
                return ImportDef(self.name(), self.span_from(tok))
            if tok.text == "theory":
                return self.theory()
            if tok.text == "view":
                return self.view()
            if tok.text == "pushout":
                return self.pushout()
            if tok.text == "attack":
                return self.attack()
        self.fail("expected a top-level item", ("import", "theory", "view", "pushout", "attack"))

    def theory(self) -> TheoryDef:
        start = self.advance()
        name = self.name()
        meta = None
        if self.at("colon"):
            self.advance()
            meta = self.name()
        self.expect("binder-open", "{")
        includes, decls = self.body(allow_includes=True)
        self.expect("binder-close", "}")
        return TheoryDef(name, meta, includes, decls, self.span_from(start))

    def body(self, allow_includes: bool) -> tuple[list[str], list[DeclAST]]:
        includes: list[str] = []
        decls: list[DeclAST] = []
        seen: set[str] = set()
        while not self.at("binder-close", "}"):
            if self.peek() is None:
                self.fail("unterminated block", ("}",))
            if self.at("symbol", ";"):
                self.advance()
                continue
            if allow_includes and self.at("keyword", "include"):
                self.advance()
                includes.append(self.name())
                continue
            d = self.decl()
            if d.name in seen:
                raise DuplicateName(f"{d.name} is declared twice", d.span)
            seen.add(d.name)
            decls.append(d)
        return includes, decls

    def decl(self) -> DeclAST:
        start = self.peek()
        if start.kind == "identifier" or (start.kind in ("symbol", "infix-operator") and start.value in DECL_NAME_SYMBOLS):
            self.advance()
        else:
            self.fail("expected a declaration", ("identifier",))
        name = start.value
        self.decl_col = start.span.col
        typ = definiens = fixity = None
        if self.cont() is not None and self.at("colon"):
            self.advance()
            typ = self.expr(ARROW_PREC)
        if self.cont() is not None and self.at("assign", "="):
            self.advance()
            definiens = self.expr(ARROW_PREC)
        tok = self.cont()
        if tok is not None and tok.kind == "keyword" and tok.text in ("infixl", "infixr", "prefix"):
            self.advance()
            num = self.expect("identifier")
            if not num.text.isdigit():
                raise ParseError("precedence must be a number", num.span)
            fixity = Fixity(tok.text, int(num.text))
            self.fix[name] = fixity
        if typ is None and definiens is None:
            raise ParseError(f"declaration {name} needs a type or a definiens", start.span, (":", "="))
        if self.cont() is not None and not self.at("binder-close", "}") and not self.at("symbol", ";"):
            self.fail("unexpected token after declaration", (";", "newline"))
        self.decl_col = 0
        return DeclAST(name, typ, definiens, fixity, self.span_from(start))

    def view(self) -> ViewDef:
        start = self.advance()
        name = self.name()
        self.expect("colon")
        dom = self.name()
        self.expect("infix-operator", "→")
        cod = self.name()
        self.expect("binder-open", "{")
        assignments: list[tuple[str, Term]] = []
        seen: set[str] = set()
        while not self.at("binder-close", "}"):
            if self.at("symbol", ";"):
                self.advance()
                continue
            tok = self.peek()
            if tok is None or not (tok.kind == "identifier" or tok.value in DECL_NAME_SYMBOLS):
                self.fail("expected an assignment", ("identifier", "}"))
            self.advance()
            if tok.value in seen:
                raise DuplicateName(f"{tok.value} assigned twice", tok.span)
            seen.add(tok.value)
            self.decl_col = tok.span.col
            self.expect("assign", ":=")
            assignments.append((tok.value, self.expr(ARROW_PREC)))
            self.decl_col = 0
        self.expect("binder-close", "}")
        return ViewDef(name, dom, cod, assignments, self.span_from(start))

    def pushout(self) -> PushoutDef:
        start = self.advance()
        name = self.name()
        self.expect("assign", "=")
        self.expect("keyword", "apply")
        base = self.name()
        self.expect("keyword", "along")
        view = self.name()
        renaming: list[tuple[str, str]] = []
        extra: list[DeclAST] = []
        if self.at("keyword", "renaming"):
            self.advance()
            self.expect("binder-open", "{")
            seen: set[str] = set()
            while not self.at("binder-close", "}"):
                if self.at("symbol", ";"):
                    self.advance()
                    continue
                old = self.name()
                if old in seen:
                    raise DuplicateName(f"{old} renamed twice", self.tokens[self.pos - 1].span)
                seen.add(old)
                self.expect("assign", ":=")
                renaming.append((old, self.name()))
            self.expect("binder-close", "}")
        if self.at("keyword", "with"):
            self.advance()
            self.expect("binder-open", "{")
            _, extra = self.body(allow_includes=False)
            self.expect("binder-close", "}")
        return PushoutDef(name, base, view, renaming, extra, self.span_from(start))

    def attack(self) -> AttackDef:
        start = self.advance()
        attacker = self.name()
        self.expect("infix-operator", "→")
        target = self.name()
        self.expect("keyword", "on")
        self.expect("symbol", "(")
        witness = self.expr(ARROW_PREC)
        self.expect("symbol", ")")
        return AttackDef(attacker, target, witness, self.span_from(start))

    # -- expressions --------------------------------------------------------

    def _operator(self, tok: Token | None) -> Fixity | None:
        if tok is None or tok.kind not in ("identifier", "symbol", "infix-operator"):
            return None
        fx = self.fix.get(tok.value)
        return fx if fx is not None and fx.kind != "prefix" else None

    def _prefix(self, tok: Token | None) -> Fixity | None:
        if tok is None or tok.kind not in ("identifier", "symbol"):
            return None
        fx = self.fix.get(tok.value)
        return fx if fx is not None and fx.kind == "prefix" else None

    def expr(self, min_prec: int) -> Term:
        lhs = self.unary()
        while True:
            tok = self.cont()
            if tok is None:
                break
            if tok.kind == "infix-operator" and tok.value == "→":
                if min_prec > ARROW_PREC:
                    break
                self.advance()
                lhs = Pi(ANON, lhs, self.expr(ARROW_PREC))
                continue
            fx = self._operator(tok)
            if fx is None or fx.prec < min_prec:
                break
            self.advance()
            rhs = self.expr(fx.prec + 1 if fx.kind == "infixl" else fx.prec)
            lhs = App(App(self.const(tok), lhs), rhs)
        return lhs

    def unary(self) -> Term:
        tok = self.peek()
        if tok is None:
            self.fail("expected an expression")
        fx = self._prefix(tok)
        if fx is not None:
            self.advance()
            return App(self.const(tok), self.expr(fx.prec))
        if tok.kind == "binder-open" or self._dependent_pi_ahead():
            return self.binder()
        head = self.atom()
        while True:
            nxt = self.cont()
            if nxt is None or not self._arg_start(nxt):
                break
            if nxt.kind == "binder-open":
                if nxt.value != "[":
                    break
                head = App(head, self.binder())
                break
            head = App(head, self.atom())
        return head

    def _dependent_pi_ahead(self) -> bool:
        a, b, c = self.peek(), self.peek(1), self.peek(2)
        return (
            a is not None and a.kind == "symbol" and a.value == "("
            and b is not None and b.kind == "identifier"
            and c is not None and c.kind in ("colon", "symbol") and c.value in (":", ",")
            and (c.kind == "colon" or self._comma_binder_list())
        )

    def _comma_binder_list(self) -> bool:
        i = 1
        while True:
            a, b = self.peek(i), self.peek(i + 1)
            if a is None or a.kind != "identifier" or b is None:
                return False
            if b.kind == "colon":
                return True
            if not (b.kind == "symbol" and b.value == ","):
                return False
            i += 2

    def _arg_start(self, tok: Token) -> bool:
        if tok.kind == "identifier":
            return tok.value not in self.fix
        if tok.kind == "keyword":
            return tok.text == "type"
        if tok.kind == "symbol":
            return tok.value in ("(", "@") or (tok.value == "∀" and "∀" not in self.fix)
        return tok.kind == "binder-open" and tok.value == "["

    def const(self, tok: Token, explicit: bool = False) -> Term:
        text = tok.value
        if "?" in text and tok.kind == "identifier":
            theory, _, name = text.partition("?")
            return Const(name, theory, explicit)
        if not explicit and text in self.scope:
            return Var(text)
        return Const(text, None, explicit)

    def atom(self) -> Term:
        tok = self.advance()
        if tok.kind == "identifier":
            return self.const(tok)
        if tok.kind == "keyword" and tok.text == "type":
            return TYPE
        if tok.kind == "symbol" and tok.value == "@":
            return self.const(self.expect("identifier"), explicit=True)
        if tok.kind == "symbol" and tok.value == "∀":
            return self.const(tok)
        if tok.kind == "symbol" and tok.value == "(":
            op = self.peek()
            closing = self.peek(1)
            if (
                op is not None and closing is not None
                and closing.kind == "symbol" and closing.value == ")"
                and op.kind in ("symbol", "infix-operator", "identifier")
                and op.value not in ("(", ")", "@", ",", ";")
            ):
                self.advance()
                self.advance()
                return self.const(op)
            saved = self.decl_col
            self.decl_col = 0  # layout is irrelevant inside parentheses
            inner = self.expr(ARROW_PREC)
            self.decl_col = saved
            self.expect("symbol", ")")
            return inner
        self.pos -= 1
        self.fail("expected an expression", ("identifier", "(", "type"))

    def binder(self) -> Term:
        tok = self.advance()
        if tok.value == "(":
            names = self.binder_list(require_type=True)
            self.expect("symbol", ")")
            self.expect("infix-operator", "→")
            return self._close(names, lambda n, a, b: Pi(n, a, b))
        if tok.value == "{":
            names = self.binder_list(require_type=True)
            self.expect("binder-close", "}")
            return self._close(names, lambda n, a, b: Pi(n, a, b, implicit=True))
        if tok.value == "[":
            names = self.binder_list(require_type=False)
            self.expect("binder-close", "]")
            return self._close(names, lambda n, a, b: Lam(n, a, b))
        self.pos -= 1
        self.fail("expected a binder", ("[", "{", "("))

    def binder_list(self, require_type: bool) -> list[tuple[str, Term | None]]:
        out: list[tuple[str, Term | None]] = []
        saved = self.decl_col
        self.decl_col = 0
        while True:
            name = self.name()
            ann = None
            if self.at("colon"):
                self.advance()
                # annotations see the earlier binders of the same group
                depth = len(self.scope)
                self.scope.extend(n for n, _ in out)
                ann = self.expr(ARROW_PREC)
                del self.scope[depth:]
            elif require_type:
                self.fail("binder needs a type", (":",))
            out.append((name, ann))
            if self.at("symbol", ","):
                self.advance()
                continue
            break
        self.decl_col = saved
        return out

    def _close(self, names, build) -> Term:
        for n, _ in names:
            self.scope.append(n)
        body = self.expr(ARROW_PREC)
        for _ in names:
            self.scope.pop()
        for n, a in reversed(names):
            body = build(n, a, body)
        return body
