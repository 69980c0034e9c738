"""Tiny expression language with exact derivative jets up to order 3.

Grammar (no implicit multiplication, ``pow`` takes a constant exponent):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-'? atom
    atom   := NUMBER | IDENT | IDENT '(' expr (',' expr)? ')' | '(' expr ')'
    IDENT  := x | t | exp | log | sin | cos | abs | pow

``x`` and ``t`` are two spellings of the single free variable.  Numbers are
unsigned decimals with an optional exponent part; negative constants are
written with the unary minus.

Evaluation is numpy-vectorised: passing an ndarray evaluates elementwise
and returns arrays of the input shape.  Scalar inputs return plain floats.
Jets propagate the value and first three derivatives through every
operation, so no finite differencing is involved anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "KINK_TOL",
    "ParseError",
    "DomainError",
    "Jet3",
    "Expression",
    "parse",
    "evaluate",
    "eval_jet3",
]

# Jets of abs(u) refuse to evaluate when |u| is at or below this.
KINK_TOL = 1e-12


class ParseError(ValueError):
    """Rejected input, carrying the character offset of the offense."""

    def __init__(self, position: int, message: str):
        super().__init__(f"{message} (at offset {position})")
        self.position = position
        self.message = message


class DomainError(ValueError):
    """Evaluation left the smooth domain: log of a non-positive argument,
    division by zero, a fractional power of a non-positive base, or a
    derivative of abs within KINK_TOL of its kink."""


@dataclass(frozen=True, eq=False)
class Jet3:
    """Value and first three derivatives of a function at a point.

    Entries are floats for scalar evaluation points and ndarrays for
    vectorised ones.  Arithmetic follows the usual sum, Leibniz and
    quotient rules truncated at order three.
    """

    d0: object
    d1: object
    d2: object
    d3: object

    @staticmethod
    def constant(c):
        return Jet3(c, 0.0, 0.0, 0.0)

    @staticmethod
    def variable(x):
        return Jet3(x, 1.0, 0.0, 0.0)

    def __add__(self, other):
        o = _lift(other)
        return Jet3(self.d0 + o.d0, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        return Jet3(self.d0 - o.d0, self.d1 - o.d1, self.d2 - o.d2, self.d3 - o.d3)

    def __rsub__(self, other):
        return _lift(other).__sub__(self)

    def __neg__(self):
        return Jet3(-self.d0, -self.d1, -self.d2, -self.d3)

    def __mul__(self, other):
        f, g = self, _lift(other)
        return Jet3(
            f.d0 * g.d0,
            f.d1 * g.d0 + f.d0 * g.d1,
            f.d2 * g.d0 + 2.0 * f.d1 * g.d1 + f.d0 * g.d2,
            f.d3 * g.d0 + 3.0 * f.d2 * g.d1 + 3.0 * f.d1 * g.d2 + f.d0 * g.d3,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        f, g = self, _lift(other)
        if np.any(g.d0 == 0.0):
            raise DomainError("division by zero")
        # Solve f = q*g order by order.
        q0 = f.d0 / g.d0
        q1 = (f.d1 - q0 * g.d1) / g.d0
        q2 = (f.d2 - q0 * g.d2 - 2.0 * q1 * g.d1) / g.d0
        q3 = (f.d3 - q0 * g.d3 - 3.0 * q1 * g.d2 - 3.0 * q2 * g.d1) / g.d0
        return Jet3(q0, q1, q2, q3)

    def __rtruediv__(self, other):
        return _lift(other).__truediv__(self)


def _lift(v):
    return v if isinstance(v, Jet3) else Jet3.constant(v)


def _chain(u: Jet3, f0, f1, f2, f3) -> Jet3:
    """Compose outer derivatives f0..f3 (evaluated at u.d0) with the jet u."""
    return Jet3(
        f0,
        f1 * u.d1,
        f2 * u.d1 * u.d1 + f1 * u.d2,
        f3 * u.d1 * u.d1 * u.d1 + 3.0 * f2 * u.d1 * u.d2 + f1 * u.d3,
    )


def _jet_one_like(u: Jet3) -> Jet3:
    return Jet3(np.ones_like(np.asarray(u.d0, dtype=float)), 0.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# AST nodes.  Each node evaluates values and jets directly; the nodes are
# immutable, so an Expression can be shared freely across threads.


@dataclass(frozen=True)
class Const:
    value_: float

    def value(self, x):
        return self.value_

    def jet(self, x):
        return Jet3.constant(self.value_)


@dataclass(frozen=True)
class Var:
    def value(self, x):
        return x

    def jet(self, x):
        return Jet3.variable(x)


@dataclass(frozen=True)
class Neg:
    a: object

    def value(self, x):
        return -self.a.value(x)

    def jet(self, x):
        return -self.a.jet(x)


@dataclass(frozen=True)
class Add:
    a: object
    b: object

    def value(self, x):
        return self.a.value(x) + self.b.value(x)

    def jet(self, x):
        return self.a.jet(x) + self.b.jet(x)


@dataclass(frozen=True)
class Sub:
    a: object
    b: object

    def value(self, x):
        return self.a.value(x) - self.b.value(x)

    def jet(self, x):
        return self.a.jet(x) - self.b.jet(x)


@dataclass(frozen=True)
class Mul:
    a: object
    b: object

    def value(self, x):
        return self.a.value(x) * self.b.value(x)

    def jet(self, x):
        return self.a.jet(x) * self.b.jet(x)


@dataclass(frozen=True)
class Div:
    a: object
    b: object

    def value(self, x):
        den = self.b.value(x)
        if np.any(den == 0.0):
            raise DomainError("division by zero")
        return self.a.value(x) / den

    def jet(self, x):
        return self.a.jet(x) / self.b.jet(x)


@dataclass(frozen=True)
class Pow:
    """base ** exponent with the exponent folded to a constant at parse time.

    Integer exponents are evaluated by repeated squaring (valid for any
    base, including zero and negatives); fractional exponents require a
    strictly positive base.
    """

    base: object
    exponent: float

    def value(self, x):
        u = self.base.value(x)
        r = self.exponent
        if float(r).is_integer():
            n = int(r)
            if n < 0 and np.any(u == 0.0):
                raise DomainError("zero base with negative exponent")
            return u ** n
        if np.any(u <= 0.0):
            raise DomainError("fractional power of a non-positive base")
        return u ** r

    def jet(self, x):
        u = self.base.jet(x)
        r = self.exponent
        if float(r).is_integer():
            return _int_pow_jet(u, int(r))
        u0 = u.d0
        if np.any(u0 <= 0.0):
            raise DomainError("fractional power of a non-positive base")
        return _chain(
            u,
            u0 ** r,
            r * u0 ** (r - 1.0),
            r * (r - 1.0) * u0 ** (r - 2.0),
            r * (r - 1.0) * (r - 2.0) * u0 ** (r - 3.0),
        )


def _int_pow_jet(u: Jet3, n: int) -> Jet3:
    if n == 0:
        return _jet_one_like(u)
    if n < 0:
        return _jet_one_like(u) / _int_pow_jet(u, -n)
    result = None
    base = u
    e = n
    while e:
        if e & 1:
            result = base if result is None else result * base
        e >>= 1
        if e:
            base = base * base
    return result


@dataclass(frozen=True)
class Call:
    name: str
    arg: object

    def value(self, x):
        u = self.arg.value(x)
        if self.name == "exp":
            return np.exp(u)
        if self.name == "log":
            if np.any(u <= 0.0):
                raise DomainError("log of a non-positive argument")
            return np.log(u)
        if self.name == "sin":
            return np.sin(u)
        if self.name == "cos":
            return np.cos(u)
        # abs: values are fine everywhere, only derivatives mind the kink
        return np.abs(u)

    def jet(self, x):
        u = self.arg.jet(x)
        u0 = u.d0
        if self.name == "exp":
            e = np.exp(u0)
            return _chain(u, e, e, e, e)
        if self.name == "log":
            if np.any(u0 <= 0.0):
                raise DomainError("log of a non-positive argument")
            inv = 1.0 / u0
            return _chain(u, np.log(u0), inv, -inv * inv, 2.0 * inv * inv * inv)
        if self.name == "sin":
            s, c = np.sin(u0), np.cos(u0)
            return _chain(u, s, c, -s, -c)
        if self.name == "cos":
            s, c = np.sin(u0), np.cos(u0)
            return _chain(u, c, -s, -c, s)
        if np.any(np.abs(u0) <= KINK_TOL):
            raise DomainError("derivative of abs within 1e-12 of its kink")
        sgn = np.where(u0 > 0.0, 1.0, -1.0)
        return Jet3(np.abs(u0), sgn * u.d1, sgn * u.d2, sgn * u.d3)


def _contains_var(node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Const):
        return False
    if isinstance(node, Neg):
        return _contains_var(node.a)
    if isinstance(node, (Add, Sub, Mul, Div)):
        return _contains_var(node.a) or _contains_var(node.b)
    if isinstance(node, Pow):
        return _contains_var(node.base)
    return _contains_var(node.arg)


def _contains_abs(node) -> bool:
    if isinstance(node, Call) and node.name == "abs":
        return True
    if isinstance(node, (Const, Var)):
        return False
    if isinstance(node, Neg):
        return _contains_abs(node.a)
    if isinstance(node, (Add, Sub, Mul, Div)):
        return _contains_abs(node.a) or _contains_abs(node.b)
    if isinstance(node, Pow):
        return _contains_abs(node.base)
    return _contains_abs(node.arg)


# ---------------------------------------------------------------------------
# Tokenizer and recursive-descent parser.

_NUMBER_RE = re.compile(r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")

_FUNCTIONS = {"exp": 1, "log": 1, "sin": 1, "cos": 1, "abs": 1, "pow": 2}
_VARIABLES = ("x", "t")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            tokens.append(_Token("number", m.group(), i))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), i))
            i = m.end()
            continue
        if ch in "+-*/(),":
            tokens.append(_Token(ch, ch, i))
            i += 1
            continue
        raise ParseError(i, f"unexpected character {ch!r}")
    tokens.append(_Token("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "eof":
            if tok.kind in ("number", "ident", "("):
                raise ParseError(tok.pos, "implicit multiplication is not allowed")
            raise ParseError(tok.pos, f"unexpected {tok.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            rhs = self.term()
            node = Add(node, rhs) if op.kind == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance()
            rhs = self.factor()
            node = Mul(node, rhs) if op.kind == "*" else Div(node, rhs)
        return node

    def factor(self):
        if self.peek().kind == "-":
            self.advance()
            return Neg(self.atom())
        return self.atom()

    def atom(self):
        tok = self.advance()
        if tok.kind == "number":
            return Const(float(tok.text))
        if tok.kind == "(":
            node = self.expr()
            closing = self.advance()
            if closing.kind != ")":
                raise ParseError(closing.pos, "expected ')'")
            return node
        if tok.kind == "ident":
            return self._ident(tok)
        raise ParseError(tok.pos, "expected a number, a name, or '('")

    def _ident(self, tok: _Token):
        name = tok.text
        if name in _VARIABLES:
            if self.peek().kind == "(":
                raise ParseError(self.peek().pos, f"'{name}' is not a function")
            return Var()
        if name not in _FUNCTIONS:
            raise ParseError(tok.pos, f"unknown identifier '{name}'")
        opener = self.advance()
        if opener.kind != "(":
            raise ParseError(opener.pos, f"expected '(' after '{name}'")
        arg_positions = [self.peek().pos]
        args = [self.expr()]
        while self.peek().kind == ",":
            self.advance()
            arg_positions.append(self.peek().pos)
            args.append(self.expr())
        closing = self.advance()
        if closing.kind != ")":
            raise ParseError(closing.pos, "expected ')'")
        arity = _FUNCTIONS[name]
        if len(args) != arity:
            raise ParseError(
                tok.pos, f"{name} expects {arity} argument(s), got {len(args)}"
            )
        if name == "pow":
            if _contains_var(args[1]):
                raise ParseError(arg_positions[1], "pow exponent must be a constant")
            try:
                exponent = float(args[1].value(0.0))
            except (DomainError, OverflowError) as exc:
                raise ParseError(arg_positions[1], f"invalid pow exponent: {exc}")
            return Pow(args[0], exponent)
        return Call(name, args[0])


class Expression:
    """A parsed expression of one variable, evaluable for values and jets.

    ``has_abs`` flags the presence of abs, the one admitted non-smooth
    primitive: values are defined everywhere, but jets raise DomainError
    within KINK_TOL of a kink.
    """

    __slots__ = ("source", "_root", "has_abs")

    def __init__(self, root, source: str):
        self._root = root
        self.source = source
        self.has_abs = _contains_abs(root)

    def value(self, x):
        out = self._root.value(x)
        if isinstance(x, np.ndarray):
            return np.broadcast_to(np.asarray(out, dtype=float), x.shape)
        return float(out)

    __call__ = value

    def jet3(self, x) -> Jet3:
        j = self._root.jet(x)
        if isinstance(x, np.ndarray):
            parts = (
                np.broadcast_to(np.asarray(c, dtype=float), x.shape)
                for c in (j.d0, j.d1, j.d2, j.d3)
            )
            return Jet3(*parts)
        return Jet3(float(j.d0), float(j.d1), float(j.d2), float(j.d3))

    def __repr__(self):
        return f"Expression({self.source!r})"


def parse(text: str) -> Expression:
    """Parse ``text``; raises ParseError with the offending offset."""
    return Expression(_Parser(text).parse(), text)


def evaluate(f: Expression, x):
    return f.value(x)


def eval_jet3(f: Expression, x) -> Jet3:
    return f.jet3(x)
