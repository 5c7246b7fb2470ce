"""Concrete syntax and ASTs for Lukasiewicz formulas.

Grammar (whitespace insignificant)::

    term := '0' | '1' | 'x'INT | '!' term | '(' term OP term ')'
    OP   := '+'   (strong disjunction)
          | '.'   (strong conjunction)
          | '&'   (min)
          | '|'   (max)
          | '-'   (truncated difference)

Every binary application is parenthesized, so there are no precedence
rules to argue about; '!' binds to the immediately following factor.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .rationals import QONE, QZERO
from . import pwl

_OPS = {"+": "oplus", ".": "odot", "&": "min", "|": "max", "-": "ominus"}


@dataclass(frozen=True)
class Term:
    kind: str  # 'const' | 'var' | 'neg' | one of the binary op names
    value: int = 0  # constant value or variable index (1-based)
    left: "Term" = None
    right: "Term" = None

    def __str__(self):
        if self.kind == "const":
            return str(self.value)
        if self.kind == "var":
            return "x%d" % self.value
        if self.kind == "neg":
            return "!%s" % self.left
        sym = next(s for s, name in _OPS.items() if name == self.kind)
        return "(%s %s %s)" % (self.left, sym, self.right)


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__("%s at position %d" % (message, position))
        self.position = position


class _Parser:
    def __init__(self, src: str, n: int):
        self.src = src
        self.n = n
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def term(self) -> Term:
        ch = self.peek()
        if ch == "":
            raise ParseError("unexpected end of input", self.pos)
        if ch in "01":
            self.pos += 1
            return Term("const", int(ch))
        if ch == "x":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.src) and self.src[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                raise ParseError("expected variable index", start)
            idx = int(self.src[start:self.pos])
            if not 1 <= idx <= self.n:
                raise ParseError("variable index %d out of range 1..%d"
                                 % (idx, self.n), start)
            return Term("var", idx)
        if ch == "!":
            self.pos += 1
            return Term("neg", left=self.term())
        if ch == "(":
            self.pos += 1
            left = self.term()
            op = self.peek()
            if op not in _OPS:
                raise ParseError("expected operator, got %r" % op, self.pos)
            self.pos += 1
            right = self.term()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return Term(_OPS[op], left=left, right=right)
        raise ParseError("unexpected character %r" % ch, self.pos)


def parse_term(src: str, n: int) -> Term:
    parser = _Parser(src, n)
    out = parser.term()
    if parser.peek() != "":
        raise ParseError("trailing input", parser.pos)
    return out


def term_to_pwl(t: Term, n: int) -> pwl.PwlFunction:
    if t.kind == "const":
        return pwl.constant(n, t.value)
    if t.kind == "var":
        return pwl.generator(n, t.value)
    if t.kind == "neg":
        return pwl.connective("neg", term_to_pwl(t.left, n))
    return pwl.connective(t.kind, term_to_pwl(t.left, n), term_to_pwl(t.right, n))


def term_eval(t: Term, p) -> mpq:
    """Direct tree interpretation at a point; the oracle for term_to_pwl."""
    if t.kind == "const":
        return QONE if t.value else QZERO
    if t.kind == "var":
        return mpq(p[t.value - 1])
    if t.kind == "neg":
        return QONE - term_eval(t.left, p)
    a = term_eval(t.left, p)
    if t.kind != "neg":
        b = term_eval(t.right, p)
    if t.kind == "oplus":
        return min(QONE, a + b)
    if t.kind == "odot":
        return max(QZERO, a + b - 1)
    if t.kind == "ominus":
        return max(QZERO, a - b)
    if t.kind == "min":
        return min(a, b)
    if t.kind == "max":
        return max(a, b)
    raise ValueError("unknown term kind %r" % t.kind)


def term_eval_float(t: Term, grids):
    """Vectorized float interpretation on numpy coordinate grids."""
    import numpy as np

    if t.kind == "const":
        return np.full_like(grids[0], float(t.value))
    if t.kind == "var":
        return grids[t.value - 1].astype(float)
    if t.kind == "neg":
        return 1.0 - term_eval_float(t.left, grids)
    a = term_eval_float(t.left, grids)
    b = term_eval_float(t.right, grids)
    if t.kind == "oplus":
        return np.minimum(1.0, a + b)
    if t.kind == "odot":
        return np.maximum(0.0, a + b - 1.0)
    if t.kind == "ominus":
        return np.maximum(0.0, a - b)
    if t.kind == "min":
        return np.minimum(a, b)
    return np.maximum(a, b)


def random_term(n: int, depth: int, rng) -> Term:
    """Deterministic pseudorandom term of the given maximum depth."""
    if depth <= 0 or rng.random() < 0.15:
        r = rng.random()
        if r < 0.1:
            return Term("const", rng.randrange(2))
        return Term("var", rng.randrange(1, n + 1))
    if rng.random() < 0.25:
        return Term("neg", left=random_term(n, depth - 1, rng))
    op = rng.choice(("oplus", "odot", "min", "max", "ominus"))
    return Term(op, left=random_term(n, depth - 1, rng),
                right=random_term(n, depth - 1, rng))
