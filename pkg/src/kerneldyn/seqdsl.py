"""
Closed-form real sequences indexed by ``n = 0, 1, 2, ...``.

Sequences feed every kernel construction (diagonal weights, tridiagonal
generators).  They come in three flavours:

* ``ExprSequence``   -- an arithmetic expression in ``n``, e.g. ``"1/(n+1)"``
* ``ListSequence``   -- explicit leading values, optionally continued by an expression
* ``NamedSequence``  -- one of the built-in families, carrying exact limit metadata

Expression grammar (see docs/grammar.md)::

    expr    := term   (("+" | "-") term)*
    term    := unary  (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" power_rhs)?
    power_rhs := primary ("^" power_rhs)?        # no leading "-": write 2^(-n)
    primary := NUMBER | "n" | FUNC "(" expr ("," expr)* ")" | "(" expr ")"
    FUNC    := sqrt | exp | ln | pow

The parser is a small Pratt (top-down operator precedence) parser.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import SequenceEvalError, SequenceSyntaxError

__all__ = [
    "Num", "Var", "Neg", "BinOp", "Call", "SequenceExpr",
    "parse_sequence_expr", "format_expr",
    "Limit", "Limits", "ExprSequence", "ListSequence", "NamedSequence",
    "SequenceSpec", "eval_sequence", "sequence_from_json", "parse_sequence_arg",
    "NAMED_FAMILIES",
]


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "n"


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


Node = Union[Num, Var, Neg, BinOp, Call]

_FUNCS: dict[str, tuple[int, Callable]] = {
    "sqrt": (1, math.sqrt),
    "exp": (1, math.exp),
    "ln": (1, math.log),
    "pow": (2, math.pow),
}


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


@dataclass
class _Token:
    kind: str      # "num", "name", "op", "end"
    text: str
    offset: int    # byte offset into the source


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        start = len(text[:pos].encode())
        if m is None or m.end() == pos:
            raise SequenceSyntaxError(f"unexpected character {text[pos]!r}", start)
        kind = m.lastgroup
        tok_start = m.start(kind)
        tokens.append(_Token(kind, m.group(kind), len(text[:tok_start].encode())))
        pos = m.end()
    tokens.append(_Token("end", "", len(text.encode())))
    return tokens


# ---------------------------------------------------------------------------
# Pratt parser

_LBP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY_RBP = 30


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.tok
        if t.kind != "op" or t.text != text:
            found = t.text or "end of input"
            raise SequenceSyntaxError(f"expected {text!r}, found {found!r}", t.offset)
        return self.advance()

    def lbp(self, t):
        if t.kind == "op":
            return _LBP.get(t.text, 0)
        return 0

    def expression(self, rbp=0):
        left = self.nud(self.advance())
        while rbp < self.lbp(self.tok):
            left = self.led(self.advance(), left)
        return left

    def nud(self, t):
        if t.kind == "num":
            return Num(float(t.text))
        if t.kind == "name":
            if t.text == "n":
                if self.tok.kind == "op" and self.tok.text == "(":
                    raise SequenceSyntaxError("'n' is not a function", t.offset)
                return Var()
            if t.text not in _FUNCS:
                raise SequenceSyntaxError(f"unknown identifier {t.text!r}", t.offset)
            return self.call(t)
        if t.kind == "op" and t.text == "-":
            return Neg(self.expression(_UNARY_RBP))
        if t.kind == "op" and t.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        found = t.text or "end of input"
        raise SequenceSyntaxError(f"unexpected {found!r}", t.offset)

    def led(self, t, left):
        op = t.text
        if op == "^":
            nxt = self.tok
            if nxt.kind == "op" and nxt.text in "+-":
                raise SequenceSyntaxError(
                    "signed exponent must be parenthesized, e.g. 2^(-n)", nxt.offset)
            # right associative
            return BinOp("^", left, self.expression(_LBP["^"] - 1))
        return BinOp(op, left, self.expression(_LBP[op]))

    def call(self, t):
        arity, _ = _FUNCS[t.text]
        self.expect("(")
        args = [self.expression()]
        while self.tok.kind == "op" and self.tok.text == ",":
            self.advance()
            args.append(self.expression())
        self.expect(")")
        if len(args) != arity:
            raise SequenceSyntaxError(
                f"{t.text} takes {arity} argument(s), got {len(args)}", t.offset)
        return Call(t.text, tuple(args))

    def parse(self):
        if self.tok.kind == "end":
            raise SequenceSyntaxError("empty expression", 0)
        node = self.expression()
        if self.tok.kind != "end":
            raise SequenceSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node


# ---------------------------------------------------------------------------
# Printing and evaluation

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG_PREC = 3
_ATOM_PREC = 5


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _NEG_PREC
    return _ATOM_PREC


def _fmt_num(x):
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def format_expr(node) -> str:
    """Render an AST back to source text with minimal parentheses."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({', '.join(format_expr(a) for a in node.args)})"
    if isinstance(node, Neg):
        inner = format_expr(node.operand)
        if _prec(node.operand) < _NEG_PREC:
            inner = f"({inner})"
        return f"-{inner}"
    p = _PREC[node.op]
    left, right = format_expr(node.left), format_expr(node.right)
    if node.op == "^":
        if _prec(node.left) <= p:
            left = f"({left})"
        if _prec(node.right) < p:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(node.left) < p:
        left = f"({left})"
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left}{node.op}{right}"


def _eval(node, n):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(n)
    if isinstance(node, Neg):
        return -_eval(node.operand, n)
    if isinstance(node, Call):
        _, fn = _FUNCS[node.func]
        return fn(*(_eval(a, n) for a in node.args))
    a, b = _eval(node.left, n), _eval(node.right, n)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return math.pow(a, b)


@dataclass(frozen=True)
class SequenceExpr:
    ast: Node
    source_text: str

    def __call__(self, n: int) -> float:
        try:
            value = _eval(self.ast, n)
        except ZeroDivisionError:
            raise SequenceEvalError(f"division by zero in {self.source_text!r} at n={n}") from None
        except (ValueError, OverflowError) as exc:
            raise SequenceEvalError(
                f"domain error in {self.source_text!r} at n={n}: {exc}") from None
        if not math.isfinite(value):
            raise SequenceEvalError(f"non-finite value in {self.source_text!r} at n={n}")
        return value

    def __str__(self):
        return format_expr(self.ast)


def parse_sequence_expr(text: str) -> SequenceExpr:
    """Parse ``text`` into a :class:`SequenceExpr`.

    Raises :class:`SequenceSyntaxError` carrying the byte offset of the
    offending token.
    """
    if not text or not text.strip():
        raise SequenceSyntaxError("empty expression", 0)
    return SequenceExpr(_Parser(text).parse(), text)


# ---------------------------------------------------------------------------
# Sequence specs

class Limit(enum.Enum):
    ZERO = "0"
    POSITIVE = "finite-positive"
    INFINITE = "+inf"


@dataclass(frozen=True)
class Limits:
    """Exact asymptotics of a named family (``lim`` and ``liminf`` of beta_n)."""

    lim: Limit
    liminf: Limit
    square_summable: bool       # sum beta_n^2 < inf
    ratio_bounded: bool         # sup beta_n / beta_{n+1} < inf
    analytic_on_disc: bool      # limsup beta_{n+1} / beta_n <= 1

    def to_json(self):
        return {
            "lim": self.lim.value,
            "liminf": self.liminf.value,
            "square_summable": self.square_summable,
            "ratio_bounded": self.ratio_bounded,
            "analytic_on_disc": self.analytic_on_disc,
        }


class _SequenceBase:
    limits: Limits | None = None

    def value(self, n: int) -> float:
        raise NotImplementedError

    def square(self, n: int) -> float:
        v = self.value(n)
        return v * v

    def values(self, count: int) -> np.ndarray:
        return np.array([self.value(n) for n in range(count)], dtype=float)

    def squares(self, count: int) -> np.ndarray:
        return np.array([self.square(n) for n in range(count)], dtype=float)


@dataclass(frozen=True)
class ExprSequence(_SequenceBase):
    expr: SequenceExpr

    def value(self, n):
        return self.expr(n)

    def to_json(self):
        return {"expr": self.expr.source_text}

    def describe(self):
        return self.expr.source_text


@dataclass(frozen=True)
class ListSequence(_SequenceBase):
    items: tuple
    tail: SequenceExpr | None = None

    def value(self, n):
        if n < len(self.items):
            return float(self.items[n])
        if self.tail is None:
            raise SequenceEvalError(
                f"index {n} beyond list of length {len(self.items)} and no tail expression")
        return self.tail(n)

    def to_json(self):
        out = {"list": [float(x) for x in self.items]}
        if self.tail is not None:
            out["tail"] = self.tail.source_text
        return out

    def describe(self):
        return f"list[{len(self.items)}]" + (f"+{self.tail.source_text}" if self.tail else "")


def _limit_of_power(exponent):
    if exponent < 0:
        return Limit.ZERO
    return Limit.POSITIVE if exponent == 0 else Limit.INFINITE


@dataclass(frozen=True)
class NamedSequence(_SequenceBase):
    """Built-in family.  ``param`` is ``s`` for power, ``r`` for geometric."""

    name: str
    param: float | None = None
    limits: Limits = field(init=False, compare=False)

    def __post_init__(self):
        if self.name not in NAMED_FAMILIES:
            raise SequenceEvalError(f"unknown named family {self.name!r}")
        needs = NAMED_FAMILIES[self.name]
        if needs is None and self.param is not None:
            raise SequenceEvalError(f"family {self.name!r} takes no parameter")
        if needs is not None and self.param is None:
            raise SequenceEvalError(f"family {self.name!r} requires parameter {needs!r}")
        if self.name == "geometric" and not self.param > 0:
            raise SequenceEvalError("geometric family requires r > 0")
        object.__setattr__(self, "limits", self._limits())

    def _limits(self):
        name, p = self.name, self.param
        if name == "hardy":
            return Limits(Limit.POSITIVE, Limit.POSITIVE, False, True, True)
        if name == "bergman":
            return Limits(Limit.INFINITE, Limit.INFINITE, False, True, True)
        if name == "dirichlet":
            return Limits(Limit.ZERO, Limit.ZERO, False, True, True)
        if name == "power":
            lim = _limit_of_power(p)
            return Limits(lim, lim, 2 * p < -1, True, True)
        lim = _limit_of_power(math.log(p))
        return Limits(lim, lim, p < 1, True, p <= 1)

    def value(self, n):
        name, p = self.name, self.param
        if name == "hardy":
            return 1.0
        if name == "bergman":
            return math.sqrt(n + 1)
        if name == "dirichlet":
            return 1.0 / math.sqrt(n + 1)
        if name == "power":
            return math.pow(n + 1, p)
        return math.pow(p, n)

    def square(self, n):
        name, p = self.name, self.param
        if name == "hardy":
            return 1.0
        if name == "bergman":
            return float(n + 1)
        if name == "dirichlet":
            return 1.0 / (n + 1)
        if name == "power":
            return math.pow(n + 1, 2 * p)
        return math.pow(p, 2 * n)

    def to_json(self):
        out = {"named": self.name}
        if self.param is not None:
            out[NAMED_FAMILIES[self.name]] = self.param
        return out

    def describe(self):
        return self.name if self.param is None else f"{self.name}({_fmt_num(float(self.param))})"


# family name -> parameter key (None: no parameter)
NAMED_FAMILIES = {"hardy": None, "bergman": None, "dirichlet": None, "power": "s", "geometric": "r"}

SequenceSpec = Union[ExprSequence, ListSequence, NamedSequence]


def eval_sequence(s: SequenceSpec, n: int) -> float:
    if n < 0:
        raise SequenceEvalError(f"negative index {n}")
    return s.value(n)


def sequence_from_json(obj) -> SequenceSpec:
    """Build a sequence from its JSON form (``{"expr": ...}``, ``{"list": ...}``, ``{"named": ...}``)."""
    if isinstance(obj, str):
        return parse_sequence_arg(obj)
    if not isinstance(obj, dict):
        raise SequenceEvalError(f"sequence spec must be an object, got {type(obj).__name__}")
    if "expr" in obj:
        return ExprSequence(parse_sequence_expr(obj["expr"]))
    if "list" in obj:
        tail = obj.get("tail")
        return ListSequence(tuple(float(x) for x in obj["list"]),
                            parse_sequence_expr(tail) if tail is not None else None)
    if "named" in obj:
        name = obj["named"]
        key = NAMED_FAMILIES.get(name)
        param = obj.get(key) if key else None
        return NamedSequence(name, None if param is None else float(param))
    raise SequenceEvalError("sequence spec needs one of 'expr', 'list', 'named'")


_NAMED_ARG = re.compile(r"^\s*([a-z]+)\s*(?:\(\s*([^()]*)\s*\))?\s*$")


def parse_sequence_arg(text: str) -> SequenceSpec:
    """Command-line form: ``dirichlet``, ``geometric(0.5)``, ``power(-1)`` or an expression."""
    m = _NAMED_ARG.match(text)
    if m and m.group(1) in NAMED_FAMILIES:
        param = m.group(2)
        return NamedSequence(m.group(1), float(param) if param else None)
    return ExprSequence(parse_sequence_expr(text))
