"""Small expression language for right-hand sides f(x, u, v).

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := unary ("^" factor)?
    unary  := "-" unary | atom
    atom   := number | "x" | "u" | "v" | ident "(" expr ")" | "(" expr ")"

``^`` is right-associative and binds tighter than ``*`` but looser than
unary minus, so ``-u^2`` means ``(-u)^2``.  Small integer exponents are
evaluated by repeated multiplication, which keeps ``u^3`` bit-identical
to ``u*u*u``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

from .errors import ExprDomainError, ParseError

VARIABLES = ("x", "u", "v")


def _log(a):
    if a <= 0.0:
        raise ExprDomainError(f"log of non-positive value {a!r}")
    return math.log(a)


def _sqrt(a):
    if a < 0.0:
        raise ExprDomainError(f"sqrt of negative value {a!r}")
    return math.sqrt(a)


def _exp(a):
    try:
        return math.exp(a)
    except OverflowError:
        raise ExprDomainError(f"exp overflow for argument {a!r}") from None


FUNCTIONS: dict[str, Callable[[float], float]] = {
    "neg": lambda a: -a,
    "sin": math.sin,
    "cos": math.cos,
    "exp": _exp,
    "log": _log,
    "sqrt": _sqrt,
    "abs": abs,
    "tanh": math.tanh,
}

BINARY_OPS = ("+", "-", "*", "/", "^")

# integer exponents up to this magnitude use repeated multiplication
MAX_FAST_EXPONENT = 64


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if self.name not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}, got {self.name!r}")


@dataclass(frozen=True)
class Unary:
    func: str
    arg: "ExprAst"

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function {self.func!r}")


@dataclass(frozen=True)
class Binary:
    op: str
    left: "ExprAst"
    right: "ExprAst"

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown operator {self.op!r}")


ExprAst = Union[Const, Var, Unary, Binary]


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def _byte_offset(source: str, pos: int) -> int:
    return len(source[:pos].encode("utf-8"))


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", source, _byte_offset(source, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, self.source, _byte_offset(self.source, tok[2]))

    def expect(self, text):
        tok = self.peek()
        if tok[1] != text or tok[0] != "op":
            found = tok[1] or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> ExprAst:
        node = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        base = self.unary()
        if self.peek()[1] == "^":
            self.advance()
            return Binary("^", base, self.factor())
        return base

    def unary(self):
        if self.peek()[1] == "-":
            self.advance()
            return Unary("neg", self.unary())
        return self.atom()

    def atom(self):
        tok = self.peek()
        kind, text, _ = tok
        if kind == "number":
            self.advance()
            return Const(float(text))
        if kind == "ident":
            self.advance()
            has_call = self.peek()[1] == "("
            if text in VARIABLES:
                if has_call:
                    raise self.error(f"arity mismatch: variable {text!r} takes no arguments", tok)
                return Var(text)
            if text in FUNCTIONS:
                if not has_call:
                    raise self.error(f"arity mismatch: function {text!r} expects 1 argument", tok)
                self.advance()
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != 1:
                    raise self.error(
                        f"arity mismatch: function {text!r} expects 1 argument, got {len(args)}", tok
                    )
                return Unary(text, args[0])
            raise self.error(f"unknown identifier {text!r}", tok)
        if text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = text or "end of input"
        raise self.error(f"unexpected token {found!r}")


def parse_expr(source: str) -> ExprAst:
    """Parse ``source`` into an expression tree.

    Raises ParseError carrying the byte offset of the offending token.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# printing, inspection

def to_source(node: ExprAst) -> str:
    """Fully parenthesised source text; ``parse_expr(to_source(n))`` evaluates like ``n``."""
    if isinstance(node, Const):
        return f"({node.value!r})" if math.copysign(1.0, node.value) < 0 else repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        if node.func == "neg":
            return f"(-{to_source(node.arg)})"
        return f"{node.func}({to_source(node.arg)})"
    return f"({to_source(node.left)}{node.op}{to_source(node.right)})"


def variables_used(node: ExprAst) -> frozenset:
    if isinstance(node, Const):
        return frozenset()
    if isinstance(node, Var):
        return frozenset((node.name,))
    if isinstance(node, Unary):
        return variables_used(node.arg)
    return variables_used(node.left) | variables_used(node.right)


# ---------------------------------------------------------------------------
# evaluation

def _int_power(base: float, n: int) -> float:
    if n == 0:
        return 1.0
    r = base
    for _ in range(abs(n) - 1):
        r = r * base
    if n < 0:
        if r == 0.0:
            raise ExprDomainError("division by zero in negative power")
        r = 1.0 / r
    return r


def _power(base: float, e: float) -> float:
    if e == int(e) and abs(e) <= MAX_FAST_EXPONENT:
        return _int_power(base, int(e))
    if base < 0.0:
        raise ExprDomainError(f"negative base {base!r} with non-integer exponent {e!r}")
    if base == 0.0 and e < 0.0:
        raise ExprDomainError("zero raised to a negative power")
    try:
        return math.pow(base, e)
    except OverflowError:
        raise ExprDomainError(f"overflow in {base!r}^{e!r}") from None


def _divide(a: float, b: float) -> float:
    if b == 0.0:
        raise ExprDomainError("division by zero")
    return a / b


def compile_expr(node: ExprAst) -> Callable[[float, float, float], float]:
    """Turn a tree into a plain closure ``fn(x, u, v)``.

    Domain errors raise ExprDomainError without location; ``evaluate``
    adds the point.
    """
    if isinstance(node, Const):
        c = float(node.value)
        return lambda x, u, v: c
    if isinstance(node, Var):
        if node.name == "x":
            return lambda x, u, v: x
        if node.name == "u":
            return lambda x, u, v: u
        return lambda x, u, v: v
    if isinstance(node, Unary):
        fn = FUNCTIONS[node.func]
        arg = compile_expr(node.arg)
        if node.func == "neg":
            return lambda x, u, v: -arg(x, u, v)
        name = node.func

        def call(x, u, v):
            a = arg(x, u, v)
            try:
                return fn(a)
            except (ValueError, OverflowError):
                raise ExprDomainError(f"{name} undefined for argument {a!r}") from None
        return call
    left = compile_expr(node.left)
    op = node.op
    if op == "^" and isinstance(node.right, Const):
        e = node.right.value
        if e == int(e) and abs(e) <= MAX_FAST_EXPONENT:
            n = int(e)
            if n == 2:
                def sq(x, u, v):
                    b = left(x, u, v)
                    return b * b
                return sq
            if n == 3:
                def cube(x, u, v):
                    b = left(x, u, v)
                    return b * b * b
                return cube
            return lambda x, u, v: _int_power(left(x, u, v), n)
    right = compile_expr(node.right)
    if op == "+":
        return lambda x, u, v: left(x, u, v) + right(x, u, v)
    if op == "-":
        return lambda x, u, v: left(x, u, v) - right(x, u, v)
    if op == "*":
        return lambda x, u, v: left(x, u, v) * right(x, u, v)
    if op == "/":
        return lambda x, u, v: _divide(left(x, u, v), right(x, u, v))
    return lambda x, u, v: _power(left(x, u, v), right(x, u, v))


def evaluate(node: ExprAst, x: float, u: float, v: float) -> float:
    try:
        return compile_expr(node)(x, u, v)
    except ExprDomainError as exc:
        raise ExprDomainError(str(exc), (x, u, v)) from None
