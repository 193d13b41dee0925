"""Text grammar for polynomials, sections and forms.

    expr   := [+|-] term ((+|-) term)*
    term   := factor (* factor)*
    factor := atom [^ INT]
    atom   := INT [/ INT] | i | NAME | ( expr )

Names are ``z1..zN`` and ``zb1..zbN`` for polynomials; forms additionally
accept ``dz1..dzN``, ``dzb1..dzbN``, ``e1..eN`` and ``E1..EN``.  Whitespace is
insignificant.  A section is a bracketed, comma separated list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .polyring.gaussian import GaussianRational
from .polyring.ring import Polynomial, Ring


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column = line, col
        super().__init__(f"{message} at line {line}, column {col}")
        self.message = message

    @property
    def span(self) -> Tuple[int, int]:
        return (self.pos, self.pos + 1)


class ArityError(ValueError):
    """Section length differs from the variable count."""


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z]+\d*)|(?P<op>[-+*^/(),\[\]]))")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            p = pos
            while text[p].isspace():
                p += 1
            raise ParseError(f"unexpected character {text[p]!r}", text, p)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# AST nodes are tuples: ("num", GaussianRational) ("var", name, pos)
# ("add"|"sub"|"mul", a, b) ("neg", a) ("pow", a, k)


class _Parser:
    def __init__(self, text: str, names: Callable[[str], bool]):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.valid_name = names

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, value: str) -> Token:
        t = self.peek()
        if t.value != value or t.kind not in ("op",):
            raise ParseError(f"expected {value!r}", self.text, t.pos)
        return self.take()

    def error(self, t: Token, what: str = "unexpected token"):
        if t.kind == "end":
            raise ParseError("unexpected end of input", self.text, t.pos)
        raise ParseError(f"{what} {t.value!r}", self.text, t.pos)

    def expr(self):
        t = self.peek()
        node = None
        if t.kind == "op" and t.value in "+-":
            self.take()
            node = self.term()
            if t.value == "-":
                node = ("neg", node)
        else:
            node = self.term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in "+-":
                self.take()
                rhs = self.term()
                node = ("add" if t.value == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().value == "*":
            self.take()
            node = ("mul", node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        t = self.peek()
        if t.kind == "op" and t.value == "^":
            self.take()
            e = self.peek()
            if e.kind != "int":
                self.error(e, "expected integer exponent, got")
            self.take()
            node = ("pow", node, int(e.value))
        return node

    def atom(self):
        t = self.peek()
        if t.kind == "int":
            self.take()
            num = int(t.value)
            nxt = self.peek()
            if nxt.kind == "op" and nxt.value == "/":
                self.take()
                d = self.peek()
                if d.kind != "int":
                    self.error(d, "expected integer denominator, got")
                self.take()
                if int(d.value) == 0:
                    raise ParseError("zero denominator", self.text, d.pos)
                from fractions import Fraction

                return ("num", GaussianRational(Fraction(num, int(d.value))))
            return ("num", GaussianRational(num))
        if t.kind == "name":
            self.take()
            if t.value == "i":
                return ("num", GaussianRational(0, 1))
            if not self.valid_name(t.value):
                raise ParseError(f"unknown symbol {t.value!r}", self.text, t.pos)
            return ("var", t.value, t.pos)
        if t.kind == "op" and t.value == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.error(t)

    def finish(self):
        t = self.peek()
        if t.kind != "end":
            self.error(t)


def _index_validator(nvars: int, prefixes: Sequence[str]):
    pattern = re.compile(r"^(%s)(\d+)$" % "|".join(sorted(prefixes, key=len, reverse=True)))

    def ok(name: str) -> bool:
        m = pattern.match(name)
        return bool(m) and 1 <= int(m.group(2)) <= nvars

    return ok


def evaluate(node, lookup: Callable[[str], object], one):
    kind = node[0]
    if kind == "num":
        return one * node[1]
    if kind == "var":
        return lookup(node[1])
    if kind == "neg":
        return -evaluate(node[1], lookup, one)
    if kind == "pow":
        base = evaluate(node[1], lookup, one)
        result = one
        for _ in range(node[2]):
            result = result * base
        return result
    a = evaluate(node[1], lookup, one)
    b = evaluate(node[2], lookup, one)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    return a * b


def parse_ast(text: str, nvars: int, prefixes=("z", "zb"), valid=None):
    p = _Parser(text, valid or _index_validator(nvars, prefixes))
    if p.peek().kind == "end":
        raise ParseError("empty expression", text, 0)
    node = p.expr()
    p.finish()
    return node


def polynomial_ring(nvars: int, conjugates: bool = False) -> Ring:
    return Ring.standard(nvars, conjugates=True) if conjugates else Ring.standard(nvars)


def parse_polynomial(text: str, nvars: int, ring: Optional[Ring] = None) -> Polynomial:
    """Parse ``text`` into a polynomial in ``z1..zN`` (and ``zb1..zbN`` if used)."""
    valid = (lambda name: name in ring.names) if ring is not None else None
    node = parse_ast(text, nvars, valid=valid)
    if ring is None:
        ring = Ring.standard(nvars, conjugates=_uses_conjugates(node))
    return evaluate(node, lambda name: ring.gen(ring.index(name)), ring.one())


def _uses_conjugates(node) -> bool:
    if node[0] == "var":
        return node[1].startswith("zb")
    if node[0] == "num":
        return False
    return any(_uses_conjugates(c) for c in node[1:] if isinstance(c, tuple))


def split_list(text: str) -> List[Tuple[str, int]]:
    """Split ``[a, b, ...]`` into item texts with their start offsets."""
    stripped = text.strip()
    start = text.find(stripped[:1]) if stripped else 0
    if not stripped.startswith("["):
        raise ParseError("expected '['", text, start)
    end = text.rfind("]")
    if end < 0 or text[end + 1:].strip():
        raise ParseError("expected ']' at end of list", text, len(text.rstrip()))
    items = []
    depth = 0
    item_start = start + 1
    for k in range(start + 1, end):
        ch = text[k]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            items.append((text[item_start:k], item_start))
            item_start = k + 1
    last = text[item_start:end]
    if last.strip() or items:
        items.append((last, item_start))
    return items


def parse_section(text: str, nvars: int) -> List[Polynomial]:
    """Parse ``[f1, ..., fN]``; raises ArityError when the length is not ``nvars``."""
    items = split_list(text)
    ring = Ring.standard(nvars)
    polys = []
    for item, offset in items:
        try:
            polys.append(parse_polynomial(item, nvars, ring))
        except ParseError as err:
            raise ParseError(err.message, text, offset + err.pos) from None
    if len(polys) != nvars:
        raise ArityError(f"section has {len(polys)} components but --vars is {nvars}")
    return polys


def format_section(polys: Sequence[Polynomial]) -> str:
    return "[" + ", ".join(p.to_str() for p in polys) + "]"
