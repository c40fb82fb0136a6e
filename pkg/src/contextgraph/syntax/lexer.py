"""Tokenizer for ``.cg`` sources.

Whitespace and ``//`` comments are skipped; every other character must belong
to some token. Operator glyphs have ASCII aliases; ``Token.text`` keeps the
source spelling and ``Token.value`` the canonical glyph.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import IllegalCharacter, Span

KEYWORDS = frozenset(
    {
        "theory", "view", "pushout", "apply", "along", "attack", "on", "include",
        "renaming", "with", "import", "infixl", "infixr", "prefix", "type",
    }
)

# Longest spellings first so that maximal munch picks them.
ALIASES: dict[str, str] = {
    "forall": "∀",
    "|-": "⊢",
    "|~": "⊦~",
    "⊦~": "⊦~",
    "/\\": "∧",
    "=>": "⇒",
    "->": "→",
    "~": "¬",
    "⊢": "⊢",
    "∧": "∧",
    "⇒": "⇒",
    "→": "→",
    "¬": "¬",
    "∀": "∀",
}
INFIX_GLYPHS = frozenset({"∧", "⇒", "→"})

PUNCT = {
    "(": "symbol",
    ")": "symbol",
    ",": "symbol",
    ";": "symbol",
    "@": "symbol",
    "[": "binder-open",
    "]": "binder-close",
    "{": "binder-open",
    "}": "binder-close",
    ":=": "assign",
    "=": "assign",
    ":": "colon",
}


@dataclass(frozen=True)
class Token:
    kind: str  # identifier | keyword | symbol | binder-open | binder-close | assign | colon | infix-operator
    text: str
    span: Span

    @property
    def value(self) -> str:
        if self.kind in ("symbol", "infix-operator"):
            return ALIASES.get(self.text, self.text)
        return self.text

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r}, {self.span.line}:{self.span.col})"


def _ident_start(c: str) -> bool:
    return c.isalnum() or c == "_"


def _ident_char(source: str, i: int) -> bool:
    c = source[i]
    if c.isalnum() or c in "_'":
        return True
    nxt = source[i + 1] if i + 1 < len(source) else ""
    if c in "-/":
        return nxt.isalnum() or nxt == "_"
    if c == "$":
        return nxt.isdigit()
    if c == "?":
        return _ident_start(nxt) if nxt else False
    return False


def tokenize(source: str, file: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def span(start: int, end: int, l: int, c: int) -> Span:
        return Span(start, end, l, c, file)

    while i < n:
        c = source[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            j = n if j < 0 else j
            col += j - i
            i = j
            continue

        start, scol = i, col
        # `∧` immediately followed by an identifier character starts a rule name such as ∧El.
        if c == "∧" and i + 1 < n and _ident_start(source[i + 1]):
            j = i + 1
            while j < n and _ident_char(source, j):
                j += 1
            tokens.append(Token("identifier", source[i:j], span(i, j, line, scol)))
            col += j - i
            i = j
            continue

        if _ident_start(c):
            j = i + 1
            while j < n and _ident_char(source, j):
                j += 1
            text = source[i:j]
            if text == "forall":
                kind = "symbol"
            elif text in KEYWORDS:
                kind = "keyword"
            else:
                kind = "identifier"
            tokens.append(Token(kind, text, span(i, j, line, scol)))
            col += j - i
            i = j
            continue

        for alias in ("⊦~", "|-", "|~", "/\\", "=>", "->", "~", "⊢", "∧", "⇒", "→", "¬", "∀"):
            if source.startswith(alias, i):
                kind = "infix-operator" if ALIASES[alias] in INFIX_GLYPHS else "symbol"
                j = i + len(alias)
                tokens.append(Token(kind, alias, span(i, j, line, scol)))
                col += j - i
                i = j
                break
        else:
            for p in (":=", "(", ")", ",", ";", "@", "[", "]", "{", "}", "=", ":"):
                if source.startswith(p, i):
                    j = i + len(p)
                    tokens.append(Token(PUNCT[p], p, span(i, j, line, scol)))
                    col += j - i
                    i = j
                    break
            else:
                raise IllegalCharacter(f"illegal character {c!r}", span(i, i + 1, line, col))
    return tokens
