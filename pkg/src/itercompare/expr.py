"""A small recursive-descent parser for real arithmetic expressions.

Grammar::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := base ("^" factor)?              right-associative
    base   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")" | "-" base

Identifiers are ``n``, ``x1``..``x9`` and the functions ``sqrt exp log sin
cos abs``. ``log`` is the natural logarithm.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EvaluationError, ExprSyntaxError

FUNCTIONS = {
    "sqrt": math.sqrt,
    "exp": math.exp,
    "log": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "abs": abs,
}
VARIABLES = ("n",) + tuple(f"x{i}" for i in range(1, 10))

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    offset: int


def _byte_offset(src: str, pos: int) -> int:
    return len(src[:pos].encode("utf-8"))


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}",
                                  _byte_offset(src, pos), src)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), _byte_offset(src, pos)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(src, len(src))))
    return tokens


# -- syntax tree --------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


class _Parser:
    def __init__(self, src: str, variables: frozenset[str]):
        self.src = src
        self.tokens = tokenize(src)
        self.pos = 0
        self.variables = variables

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ExprSyntaxError(message, tok.offset, self.src)

    def take(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind != "op":
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        return self.take()

    def parse(self):
        if self.tok.kind == "end":
            self.error("empty expression")
        node = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.take().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            node = BinOp("^", node, self.factor())
        return node

    def base(self):
        tok = self.tok
        if tok.kind == "num":
            self.take()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.take()
            return self.identifier(tok)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "op" and tok.text == "-":
            self.take()
            return Neg(self.base())
        if tok.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok.text!r}")

    def identifier(self, tok: Token):
        name = tok.text
        calling = self.tok.kind == "op" and self.tok.text == "("
        if name in FUNCTIONS:
            if not calling:
                self.error(f"function {name!r} takes exactly one argument", tok)
            self.take()
            arg = self.expr()
            if self.tok.kind == "op" and self.tok.text == ",":
                self.error(f"function {name!r} takes exactly one argument")
            self.expect(")")
            return Call(name, arg)
        if name in VARIABLES and name in self.variables:
            if calling:
                self.error(f"{name!r} is a variable, not a function", self.tok)
            return Var(name)
        self.error(f"unknown identifier {name!r}", tok)


class Expr:
    """A parsed expression; call it with variable bindings to evaluate."""

    def __init__(self, source: str, tree, variables: frozenset[str]):
        self.source = source
        self.tree = tree
        self.allowed = variables

    def __repr__(self):
        return f"Expr({self.source!r})"

    def __eq__(self, other):
        return isinstance(other, Expr) and self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)

    @property
    def free_variables(self) -> set[str]:
        found = set()

        def walk(node):
            if isinstance(node, Var):
                found.add(node.name)
            elif isinstance(node, (Neg, Call)):
                walk(node.arg)
            elif isinstance(node, BinOp):
                walk(node.left)
                walk(node.right)
        walk(self.tree)
        return found

    def __call__(self, env: Mapping[str, float] | None = None, **kwargs) -> float:
        env = dict(env or {}, **kwargs)
        try:
            value = _eval(self.tree, env)
        except KeyError as exc:
            raise EvaluationError(f"{self.source!r}: unbound variable {exc.args[0]}") from None
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise EvaluationError(f"{self.source!r}: {exc}") from None
        if not math.isfinite(value):
            raise EvaluationError(f"{self.source!r}: non-finite result {value}")
        return value


def _eval(node, env) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(env[node.name])
    if isinstance(node, Neg):
        return -_eval(node.arg, env)
    if isinstance(node, Call):
        return float(FUNCTIONS[node.func](_eval(node.arg, env)))
    a = _eval(node.left, env)
    b = _eval(node.right, env)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return math.pow(a, b)


def parse_expr(src: str, variables: Iterable[str] | None = None) -> Expr:
    """Parse ``src``; ``variables`` restricts which identifiers may appear."""
    allowed = frozenset(VARIABLES if variables is None else variables)
    tree = _Parser(src, allowed).parse()
    return Expr(src, tree, allowed)


def affine_coefficients(expr: Expr, var: str = "x1") -> tuple[float, float] | None:
    """(c, b) with expr == c*var + b, recognised syntactically, else None."""

    def walk(node):
        if isinstance(node, Num):
            return 0.0, node.value
        if isinstance(node, Var):
            return (1.0, 0.0) if node.name == var else None
        if isinstance(node, Neg):
            inner = walk(node.arg)
            return None if inner is None else (-inner[0], -inner[1])
        if isinstance(node, Call):
            inner = walk(node.arg)
            if inner is None or inner[0] != 0:
                return None
            try:
                return 0.0, float(FUNCTIONS[node.func](inner[1]))
            except (ValueError, OverflowError):
                return None
        left, right = walk(node.left), walk(node.right)
        if left is None or right is None:
            return None
        (c1, b1), (c2, b2) = left, right
        try:
            if node.op == "+":
                return c1 + c2, b1 + b2
            if node.op == "-":
                return c1 - c2, b1 - b2
            if node.op == "*":
                if c1 == 0:
                    return b1 * c2, b1 * b2
                if c2 == 0:
                    return c1 * b2, b1 * b2
                return None
            if node.op == "/":
                if c2 != 0 or b2 == 0:
                    return None
                return c1 / b2, b1 / b2
            if c1 == 0 and c2 == 0:
                return 0.0, math.pow(b1, b2)
        except (ValueError, OverflowError, ZeroDivisionError):
            return None
        return None

    return walk(expr.tree)
