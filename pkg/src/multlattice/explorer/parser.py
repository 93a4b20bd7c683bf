"""Boolean predicate expressions over element classes.

Grammar (keywords and atom names are case-insensitive)::

    expr   := term ('or' term)*
    term   := factor ('and' factor)*
    factor := 'not' factor | '(' expr ')' | atom
    atom   := NAME | NAME '(' INT ')'

Binary connectives associate to the left; precedence is not > and > or.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .. import config

__all__ = [
    "And",
    "Atom",
    "Not",
    "Or",
    "PredicateSyntaxError",
    "ATOMS",
    "MAX_DEPTH",
    "parse_predicate",
]

MAX_DEPTH = 32

# atom name -> largest allowed degree, or None for atoms without a degree
ATOMS: dict[str, int | None] = {
    "prime": None,
    "weakly_prime": None,
    "maximal": None,
    "principal": None,
    "absorbing": config.ABSORBING_N_CAP,
    "weakly_absorbing": config.ABSORBING_N_CAP,
    "quasi": config.QUASI_N_CAP,
    "weakly_quasi": config.QUASI_N_CAP,
    "strongly_quasi": config.QUASI_N_CAP,
}
KEYWORDS = ("and", "or", "not")


@dataclass(frozen=True)
class Atom:
    name: str
    n: int | None = None

    def __str__(self) -> str:
        return self.name if self.n is None else f"{self.name}({self.n})"


@dataclass(frozen=True)
class Not:
    operand: "Expr"

    def __str__(self) -> str:
        return f"not({self.operand})"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        return f"and({self.left}, {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        return f"or({self.left}, {self.right})"


Expr = Union[Atom, Not, And, Or]


class PredicateSyntaxError(ValueError):
    def __init__(self, text: str, offset: int, expected: list[str], found: str) -> None:
        self.text = text
        self.offset = offset
        self.expected = sorted(set(expected))
        self.found = found
        super().__init__(f"syntax error at offset {offset}: expected {' | '.join(self.expected)}, found {found}")

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.offset}^"


_TOKEN = re.compile(r"\s*(?:(?P<word>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>[0-9]+)|(?P<punct>[(),])|(?P<bad>\S))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # word, int, '(', ')', ',', bad, end
    text: str
    offset: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        kind = m.lastgroup
        val = m.group(kind)
        start = m.start(kind)
        toks.append(_Tok(val if kind == "punct" else kind, val, start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def _describe(tok: _Tok) -> str:
    return "end of input" if tok.kind == "end" else repr(tok.text)


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _lex(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: list[str]):
        raise PredicateSyntaxError(self.text, self.tok.offset, expected, _describe(self.tok))

    def keyword(self, word: str) -> bool:
        t = self.tok
        if t.kind == "word" and t.text.lower() == word:
            self.i += 1
            return True
        return False

    def depth_check(self, level: int) -> None:
        if level > MAX_DEPTH:
            raise PredicateSyntaxError(
                self.text, self.tok.offset, [f"nesting depth <= {MAX_DEPTH}"], "deeper expression"
            )

    def parse(self) -> Expr:
        e = self.expr(1)
        if self.tok.kind != "end":
            self.fail(["'and'", "'or'", "end of input"])
        if depth(e) > MAX_DEPTH:
            raise PredicateSyntaxError(
                self.text, 0, [f"expression tree of depth <= {MAX_DEPTH}"], f"depth {depth(e)}"
            )
        return e

    def expr(self, level: int) -> Expr:
        left = self.term(level)
        while self.keyword("or"):
            left = Or(left, self.term(level))
        return left

    def term(self, level: int) -> Expr:
        left = self.factor(level)
        while self.keyword("and"):
            left = And(left, self.factor(level))
        return left

    def factor(self, level: int) -> Expr:
        self.depth_check(level)
        if self.keyword("not"):
            return Not(self.factor(level + 1))
        if self.tok.kind == "(":
            self.i += 1
            e = self.expr(level + 1)
            if self.tok.kind != ")":
                self.fail(["')'", "'and'", "'or'"])
            self.i += 1
            return e
        return self.atom()

    def atom(self) -> Atom:
        t = self.tok
        expected = ["'not'", "'('", "atom"]
        if t.kind != "word" or t.text.lower() in KEYWORDS:
            self.fail(expected)
        name = t.text.lower()
        if name not in ATOMS:
            raise PredicateSyntaxError(self.text, t.offset, sorted(ATOMS), repr(t.text))
        self.i += 1
        cap = ATOMS[name]
        if cap is None:
            if self.tok.kind == "(":
                raise PredicateSyntaxError(
                    self.text, self.tok.offset, ["'and'", "'or'", "')'", "end of input"], "'('"
                )
            return Atom(name)
        if self.tok.kind != "(":
            self.fail(["'('"])
        self.i += 1
        if self.tok.kind != "int":
            self.fail(["integer"])
        num = self.tok
        n = int(num.text)
        if not (1 <= n <= cap):
            raise PredicateSyntaxError(self.text, num.offset, [f"integer in 1..{cap}"], num.text)
        self.i += 1
        if self.tok.kind != ")":
            self.fail(["')'"])
        self.i += 1
        return Atom(name, n)


def parse_predicate(text: str) -> Expr:
    """Parse ``text`` into an expression tree; raises PredicateSyntaxError."""
    return _Parser(text).parse()


def depth(e: Expr) -> int:
    if isinstance(e, Atom):
        return 1
    if isinstance(e, Not):
        return 1 + depth(e.operand)
    return 1 + max(depth(e.left), depth(e.right))


def atoms(e: Expr) -> list[Atom]:
    """Distinct atoms in left-to-right order."""
    out: list[Atom] = []

    def walk(x: Expr) -> None:
        if isinstance(x, Atom):
            if x not in out:
                out.append(x)
        elif isinstance(x, Not):
            walk(x.operand)
        else:
            walk(x.left)
            walk(x.right)

    walk(e)
    return out
