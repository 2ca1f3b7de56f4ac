"""A small expression language evaluated over reals or Levi-Civita numbers.

Grammar, loosest binding first::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := primary ("^" exponent)?
    exponent:= ("-" | "+") exponent | power          # right-associative
    primary := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

So ``-t^2`` is ``-(t^2)`` and ``2^3^2`` is ``2^(3^2)``.  Exponents must fold
to a rational constant when parsed; that keeps LC evaluation inside the field.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

import numpy as np

from . import lc
from .lc import LCNumber, TruncationContext

__all__ = [
    "Expr",
    "Constant",
    "Variable",
    "Unary",
    "Binary",
    "ParseError",
    "DomainError",
    "FUNCTIONS",
    "CONSTANTS",
    "parse",
    "render",
    "variables",
    "eval_real",
    "eval_lc",
    "eval_array",
]

FUNCTIONS = frozenset({"sin", "cos", "tan", "exp", "log", "sqrt", "atan", "abs"})
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Constant:
    value: Union[float, Fraction]
    name: str | None = None


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or one of FUNCTIONS
    child: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


Expr = Union[Constant, Variable, Unary, Binary]


class ParseError(ValueError):
    def __init__(self, position: int, message: str, source: str = ""):
        self.position = position
        self.message = message
        self.source = source
        super().__init__(f"{message} at offset {position}")


class DomainError(ArithmeticError):
    """Real evaluation left the domain of an operation."""


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(source) and source[pos].isspace():
            pos += 1
        if pos >= len(source):
            break
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ParseError(pos, f"unexpected character {source[pos]!r}", source)
        kind = m.lastgroup
        assert kind is not None
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, allowed_vars: Iterable[str] | None):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0
        self.allowed = None if allowed_vars is None else set(allowed_vars)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, tok: tuple[str, str, int], message: str) -> ParseError:
        return ParseError(tok[2], message, self.source)

    def expect(self, text: str) -> None:
        tok = self.next()
        if tok[0] != "op" or tok[1] != text:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise self.error(tok, f"expected {text!r}, found {found}")

    def parse(self) -> Expr:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(tok, f"unexpected {tok[1]!r}")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.next()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.next()[1]
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.next()
            child = self.unary()
            return Unary("neg", child) if tok[1] == "-" else child
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.next()
            start = self.peek()
            exponent = self.exponent()
            q = _fold_rational(exponent)
            if q is None:
                raise self.error(start, "exponent must be a rational constant")
            return Binary("^", base, Constant(q))
        return base

    def exponent(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.next()
            child = self.exponent()
            return Unary("neg", child) if tok[1] == "-" else child
        return self.power()

    def primary(self) -> Expr:
        tok = self.next()
        kind, text, _ = tok
        if kind == "num":
            return Constant(float(text))
        if kind == "name":
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(text, arg)
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                raise self.error(tok, f"unknown function {text!r}")
            if text in CONSTANTS:
                return Constant(CONSTANTS[text], text)
            if self.allowed is not None and text not in self.allowed:
                raise self.error(tok, f"unknown identifier {text!r}")
            return Variable(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise self.error(tok, "unexpected end of input")
        raise self.error(tok, f"unexpected {text!r}")


def _fold_rational(node: Expr) -> Fraction | None:
    """Exact rational value of a constant subtree, or None."""
    if isinstance(node, Constant):
        if node.name is not None:
            return None
        if isinstance(node.value, Fraction):
            return node.value
        return Fraction(repr(node.value))
    if isinstance(node, Unary):
        if node.op != "neg":
            return None
        v = _fold_rational(node.child)
        return None if v is None else -v
    if isinstance(node, Binary):
        a = _fold_rational(node.left)
        b = _fold_rational(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b if b != 0 else None
        if node.op == "^":
            if b.denominator != 1 or (a == 0 and b < 0):
                return None
            return a ** int(b)
    return None


def parse(source: str, allowed_vars: Iterable[str] | None = None) -> Expr:
    """Parse ``source``; identifiers outside ``allowed_vars`` are errors.

    ``allowed_vars=None`` admits any identifier that is not a function or
    constant name.
    """
    return _Parser(source, allowed_vars).parse()


def variables(e: Expr) -> set[str]:
    if isinstance(e, Variable):
        return {e.name}
    if isinstance(e, Unary):
        return variables(e.child)
    if isinstance(e, Binary):
        return variables(e.left) | variables(e.right)
    return set()


def render(e: Expr) -> str:
    """Text that :func:`parse` maps back to an equal tree."""
    if isinstance(e, Constant):
        if e.name is not None:
            return e.name
        if isinstance(e.value, Fraction):
            q = e.value
            return str(q.numerator) if q.denominator == 1 and q >= 0 else f"({q})"
        return repr(e.value)
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"-({render(e.child)})"
        return f"{e.op}({render(e.child)})"
    return f"{_operand(e.left)} {e.op} {_operand(e.right)}"


def _operand(e: Expr) -> str:
    if isinstance(e, Binary) or (isinstance(e, Unary) and e.op == "neg"):
        return f"({render(e)})"
    return render(e)


# --- evaluation ---------------------------------------------------------------

def _real_pow(x: float, q: Fraction) -> float:
    if q.denominator == 1:
        return x ** int(q)
    if x < 0:
        if q.denominator % 2 == 0:
            raise DomainError(f"even root of negative number {x!r}")
        mag = (-x) ** float(q)
        return -mag if q.numerator % 2 else mag
    return x ** float(q)


def _real_log(x: float) -> float:
    if x <= 0:
        raise DomainError(f"log of nonpositive number {x!r}")
    return math.log(x)


def _real_sqrt(x: float) -> float:
    if x < 0:
        raise DomainError(f"sqrt of negative number {x!r}")
    return math.sqrt(x)


_REAL_UNARY: dict[str, Callable[[float], float]] = {
    "neg": lambda x: -x,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": _real_log,
    "sqrt": _real_sqrt,
    "atan": math.atan,
    "abs": abs,
}


def eval_real(e: Expr, bindings: Mapping[str, float] | None = None) -> float:
    bindings = bindings or {}
    try:
        value = _eval_real(e, bindings)
    except ZeroDivisionError as exc:
        raise DomainError("division by zero") from exc
    except OverflowError as exc:
        raise DomainError(str(exc)) from exc
    if not math.isfinite(value):
        raise DomainError(f"non-finite result {value!r}")
    return value


def _eval_real(e: Expr, env: Mapping[str, float]) -> float:
    if isinstance(e, Constant):
        return float(e.value)
    if isinstance(e, Variable):
        try:
            return float(env[e.name])
        except KeyError:
            raise KeyError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Unary):
        return _REAL_UNARY[e.op](_eval_real(e.child, env))
    a = _eval_real(e.left, env)
    if e.op == "^":
        assert isinstance(e.right, Constant)
        return _real_pow(a, Fraction(e.right.value))
    b = _eval_real(e.right, env)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    return a / b


def _lc_sqrt(a: LCNumber, ctx: TruncationContext) -> LCNumber:
    if lc.is_zero(a):
        return a
    if a.terms[0][1] < 0:
        raise lc.LCDomainError("sqrt of a negative number")
    return lc.lc_sqrt(a, ctx)


def eval_lc(e: Expr, bindings: Mapping[str, LCNumber | float],
            ctx: TruncationContext | None = None) -> LCNumber:
    """Evaluate with Levi-Civita arithmetic.  Real bindings are embedded."""
    ctx = ctx if ctx is not None else lc.getcontext()
    env = {k: v if isinstance(v, LCNumber) else lc.from_real(v) for k, v in bindings.items()}
    return _eval_lc(e, env, ctx)


def _eval_lc(e: Expr, env: Mapping[str, LCNumber], ctx: TruncationContext) -> LCNumber:
    if isinstance(e, Constant):
        return lc.from_real(float(e.value))
    if isinstance(e, Variable):
        try:
            return env[e.name]
        except KeyError:
            raise KeyError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Unary):
        x = _eval_lc(e.child, env, ctx)
        if e.op == "neg":
            return lc.neg(x)
        if e.op == "abs":
            return lc.lc_abs(x)
        if e.op == "sqrt":
            return _lc_sqrt(x, ctx)
        return lc.lift_analytic(e.op, x, ctx)
    a = _eval_lc(e.left, env, ctx)
    if e.op == "^":
        assert isinstance(e.right, Constant)
        return lc.lc_pow(a, Fraction(e.right.value), ctx)
    b = _eval_lc(e.right, env, ctx)
    if e.op == "+":
        return lc.add(a, b, ctx)
    if e.op == "-":
        return lc.sub(a, b, ctx)
    if e.op == "*":
        return lc.mul(a, b, ctx)
    return lc.div(a, b, ctx)


# --- vectorised real evaluation ---------------------------------------------

def _array_pow(x: np.ndarray, q: Fraction) -> np.ndarray:
    if q.denominator == 1:
        return x ** float(q) if q < 0 else x ** int(q)
    if q.denominator % 2 == 0:
        if np.any(x < 0):
            raise DomainError("even root of a negative number")
        return x ** float(q)
    mag = np.abs(x) ** float(q)
    return np.where(x < 0, -mag, mag) if q.numerator % 2 else mag


def _array_log(x: np.ndarray) -> np.ndarray:
    if np.any(x <= 0):
        raise DomainError("log of a nonpositive number")
    return np.log(x)


def _array_sqrt(x: np.ndarray) -> np.ndarray:
    if np.any(x < 0):
        raise DomainError("sqrt of a negative number")
    return np.sqrt(x)


_ARRAY_UNARY: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "neg": np.negative,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": _array_log,
    "sqrt": _array_sqrt,
    "atan": np.arctan,
    "abs": np.abs,
}


def eval_array(e: Expr, bindings: Mapping[str, np.ndarray | float]) -> np.ndarray:
    """Elementwise real evaluation over numpy arrays (broadcasting bindings)."""
    with np.errstate(all="ignore"):
        out = np.asarray(_eval_array(e, bindings), dtype=float)
    if not np.all(np.isfinite(out)):
        raise DomainError("non-finite value (division by zero or overflow)")
    return out


def _eval_array(e: Expr, env: Mapping[str, np.ndarray | float]) -> np.ndarray:
    if isinstance(e, Constant):
        return np.asarray(float(e.value))
    if isinstance(e, Variable):
        try:
            return np.asarray(env[e.name], dtype=float)
        except KeyError:
            raise KeyError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Unary):
        return _ARRAY_UNARY[e.op](_eval_array(e.child, env))
    a = _eval_array(e.left, env)
    if e.op == "^":
        assert isinstance(e.right, Constant)
        return _array_pow(a, Fraction(e.right.value))
    b = _eval_array(e.right, env)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    return a / b
