"""Surface syntax for Fock states.

    expr  := ['+'|'-'] term (('+'|'-') term)*
    term  := [scalar '*'] atom* 'vac'
    atom  := ('h(' '-' int ')' | 'h[' '-' int ']') ['^' int]

Round atoms are Heisenberg creation modes, square atoms are bracket modes.
Within a term the operators act right to left on the vacuum. Whitespace is
ignored. ``0 * vac`` denotes the zero state.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .fock import FockState

DEFAULT_DEGREE_CAP = 30

_TOKEN = re.compile(r"\s*(?:(\d+)|(vac)|(h)|([()\[\]\-+*/^]))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} at position {pos}")


@dataclass(frozen=True)
class Atom:
    n: int
    bracket: bool
    power: int = 1


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    atoms: tuple

    @property
    def degree(self) -> int:
        return sum(a.n * a.power for a in self.atoms)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("int", m.group(1), start))
        elif m.group(2):
            toks.append(("vac", "vac", start))
        elif m.group(3):
            toks.append(("h", "h", start))
        else:
            toks.append((m.group(4), m.group(4), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, kind: str) -> str:
        k, val, pos = self.toks[self.i]
        if k != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if k == "end" else repr(val)
            raise ParseError(f"expected {want}, got {got}", pos)
        self.i += 1
        return val

    @property
    def pos(self) -> int:
        return self.toks[self.i][2]

    def expr(self) -> list[Term]:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.take(self.peek()) == "-" else 1
        terms = [self.term(sign)]
        while self.peek() in ("+", "-"):
            sign = -1 if self.take(self.peek()) == "-" else 1
            terms.append(self.term(sign))
        self.take("end")
        return terms

    def integer(self) -> int:
        return int(self.take("int"))

    def term(self, sign: int) -> Term:
        coeff = Fraction(sign)
        if self.peek() == "int":
            num = self.integer()
            den = 1
            if self.peek() == "/":
                self.take("/")
                pos = self.pos
                den = self.integer()
                if den == 0:
                    raise ParseError("zero denominator", pos)
            self.take("*")
            coeff *= Fraction(num, den)
        atoms = []
        while self.peek() == "h":
            atoms.append(self.atom())
        self.take("vac")
        return Term(coeff, tuple(atoms))

    def atom(self) -> Atom:
        self.take("h")
        bracket = self.peek() == "["
        self.take("[" if bracket else "(")
        self.take("-")
        pos = self.pos
        n = self.integer()
        if n <= 0:
            raise ParseError("mode index must be h(-n) with n >= 1", pos)
        self.take("]" if bracket else ")")
        power = 1
        if self.peek() == "^":
            self.take("^")
            pos = self.pos
            power = self.integer()
            if power < 1:
                raise ParseError("powers must be at least 1", pos)
        return Atom(n, bracket, power)


def parse_expr(text: str) -> list[Term]:
    return _Parser(text).expr()


def evaluate(terms: list[Term], degree_cap: int = DEFAULT_DEGREE_CAP) -> FockState:
    from .brackets import apply_h_bracket
    from .modes import apply_h

    total = FockState.zero()
    for term in terms:
        if term.degree > degree_cap:
            raise ValueError(f"term of degree {term.degree} exceeds the degree cap {degree_cap}")
        if term.coeff == 0:
            continue
        state = FockState.vacuum()
        for atom in reversed(term.atoms):
            for _ in range(atom.power):
                state = apply_h_bracket(-atom.n, state) if atom.bracket else apply_h(-atom.n, state)
        total = total + state * term.coeff
    return total


def parse_state(text: str, degree_cap: int = DEFAULT_DEGREE_CAP) -> FockState:
    return evaluate(parse_expr(text), degree_cap)


def _monomial_text(lam: tuple) -> str:
    atoms = []
    i = 0
    while i < len(lam):
        j = i
        while j < len(lam) and lam[j] == lam[i]:
            j += 1
        k = j - i
        atoms.append(f"h(-{lam[i]})" + (f"^{k}" if k > 1 else ""))
        i = j
    return " ".join(atoms + ["vac"])


def _coeff_text(c: Fraction) -> str:
    c = abs(c)
    if c == 1:
        return ""
    return f"{c.numerator}/{c.denominator} * " if c.denominator != 1 else f"{c.numerator} * "


def format_state(state: FockState) -> str:
    """Canonical text: terms by descending degree, reverse-lex within a degree."""
    items = state.items()
    if not items:
        return "0 * vac"
    parts = []
    for i, (lam, c) in enumerate(items):
        body = _coeff_text(c) + _monomial_text(lam)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
