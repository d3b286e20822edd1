"""Expression syntax for elements of the twisted algebra.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?            # nonnegative integer power
    atom   := NUM ("/" NUM)? | qpow | gen | "(" expr ")"
    qpow   := "q" ("^" (INT | "-" INT | "(" "-"? INT ("/" INT)? ")"))?
    gen    := ("I" | "J") "(" INT "," INT ")"

``I(k,l)`` is the + root element, ``J(k,l)`` the - one; a q-exponent a/b needs
b in {1, 2}.  Columns in error messages are 1-based.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Element
from .pbw import Gen, gen
from .scalars import LaurentDomain, LaurentScalar, format_laurent, lq

DOMAIN = LaurentDomain()


class ParseError(ValueError):
    def __init__(self, message: str, column: int, text: str = ""):
        self.message, self.column, self.text = message, column, text
        super().__init__(f"column {column}: {message}")


@dataclass
class Token:
    kind: str
    text: str
    col: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def tokenize(text: str) -> list[Token]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        num, name, sym = m.groups()
        if num is not None:
            toks.append(Token("num", num, start + 1))
        elif name is not None:
            toks.append(Token("name", name, start + 1))
        elif sym is not None:
            if sym not in "+-*/^(),":
                raise ParseError(f"unexpected character {sym!r}", start + 1, text)
            toks.append(Token(sym, sym, start + 1))
        pos = m.end()
    toks.append(Token("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.root_signs: list[tuple[int, int]] = []  # (sign, column) of non-simple letters

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"{msg}, found {found}", tok.col, self.text)

    def eat(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            self.error(f"expected {what or repr(kind)}")
        t = self.tok
        self.i += 1
        return t

    def parse(self) -> Element:
        if self.tok.kind == "end":
            self.error("expected an expression")
        x = self.expr()
        if self.tok.kind != "end":
            self.error("expected an operator")
        return x

    def expr(self) -> Element:
        x = self.term()
        while self.tok.kind in "+-" and self.tok.kind != "end":
            op = self.eat(self.tok.kind)
            y = self.term()
            x = x + y if op.kind == "+" else x - y
        return x

    def term(self) -> Element:
        x = self.unary()
        while self.tok.kind == "*":
            self.eat("*")
            x = x * self.unary()
        return x

    def unary(self) -> Element:
        if self.tok.kind == "-":
            self.eat("-")
            return -self.unary()
        return self.power()

    def power(self) -> Element:
        x = self.atom()
        if self.tok.kind == "^":
            self.eat("^")
            e = int(self.eat("num", "a nonnegative integer exponent").text)
            x = x ** e
        return x

    def atom(self) -> Element:
        t = self.tok
        if t.kind == "num":
            self.eat("num")
            val = Fraction(int(t.text))
            if self.tok.kind == "/":
                self.eat("/")
                d = self.eat("num", "a denominator")
                if int(d.text) == 0:
                    raise ParseError("division by zero", d.col, self.text)
                val /= int(d.text)
            return Element.scalar(DOMAIN, LaurentScalar.const(val))
        if t.kind == "(":
            self.eat("(")
            x = self.expr()
            self.eat(")", "')'")
            return x
        if t.kind == "name" and t.text == "q":
            self.eat("name")
            if self.tok.kind != "^":
                return Element.scalar(DOMAIN, lq(1))
            self.eat("^")
            return Element.scalar(DOMAIN, lq(self.q_exponent()))
        if t.kind == "name" and t.text in ("I", "J"):
            self.eat("name")
            self.eat("(", "'('")
            k = int(self.eat("num", "an index").text)
            self.eat(",", "','")
            lt = self.eat("num", "an index")
            l = int(lt.text)
            self.eat(")", "')'")
            if not k > l >= 1:
                raise ParseError(f"indices must satisfy k > l >= 1, got ({k},{l})", t.col, self.text)
            g = gen(k, l, 1 if t.text == "I" else -1)
            if not g.simple:
                self.root_signs.append((g.sign, t.col))
            return Element.word(DOMAIN, (g,))
        if t.kind == "name":
            raise ParseError(f"unknown name {t.text!r}", t.col, self.text)
        self.error("expected a number, q, I(k,l), J(k,l) or '('")

    def q_exponent(self) -> Fraction:
        t = self.tok
        if t.kind == "num":
            return Fraction(int(self.eat("num").text))
        if t.kind == "-":
            self.eat("-")
            return -Fraction(int(self.eat("num", "an integer exponent").text))
        self.eat("(", "an exponent")
        neg = False
        if self.tok.kind == "-":
            self.eat("-")
            neg = True
        a = int(self.eat("num", "an integer").text)
        b = 1
        if self.tok.kind == "/":
            self.eat("/")
            bt = self.eat("num", "a denominator")
            b = int(bt.text)
            if b not in (1, 2):
                raise ParseError(f"q-exponent denominator must be 1 or 2, got {b}", bt.col, self.text)
        self.eat(")", "')'")
        return Fraction(-a if neg else a, b)


def parse_expression(text: str) -> Element:
    """Parse text into an Element over the Laurent domain with pbw letters."""
    p = _Parser(text)
    x = p.parse()
    signs = {s for s, _ in p.root_signs}
    if len(signs) > 1:
        first = p.root_signs[0][0]
        col = next(c for s, c in p.root_signs if s != first)
        raise ParseError("expression mixes I (+) and J (-) root elements; use one family per expression",
                         col, text)
    return x


def format_word(word: tuple[Gen, ...]) -> str:
    return "*".join(str(g) for g in word)


def format_element(x: Element) -> str:
    """Deterministic text form that parses back to an equal element."""
    if x.is_zero():
        return "0"
    parts = []
    for w in sorted(x.terms, key=lambda w: (-len(w), [g.key for g in w])):
        c: LaurentScalar = x.terms[w]
        body = format_word(w)
        items = c.terms
        if not body:
            coeff = format_laurent(c)
            sign, text = ("-", coeff[1:]) if coeff.startswith("-") and len(items) == 1 else ("+", coeff)
            if len(items) > 1:
                text = f"({coeff})"
            parts.append((sign, text))
            continue
        if len(items) == 1:
            (e, a), = items.items()
            sign = "-" if a < 0 else "+"
            mag = format_laurent(LaurentScalar({e: abs(a)}))
            parts.append((sign, body if mag == "1" else f"{mag}*{body}"))
        else:
            parts.append(("+", f"({format_laurent(c)})*{body}"))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out
