"""
Class expressions and space strings for the command line.

The grammar is a small Pratt parser over a regex tokenizer:

    expr   := expr ('+' | '-') expr | expr '*' expr | expr '^' INT
            | '-' expr | NUMBER | NAME | 'j' '(' expr ')' | '(' expr ')'
    NUMBER := INT | INT '/' INT

'^' binds tighter than '*', which binds tighter than '+' and '-'; all
binary operators are left-associative. Generator names are checked
against the selected space when the expression is evaluated.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Union

from conecalc.blowup import (
    EXCEPTIONAL,
    BlowupPresentation,
    Family,
    MixedClass,
    make_space,
    power,
    product,
)
from conecalc.errors import ParseError
from conecalc.ring import FormalSum, mul
from conecalc.secant import GENERATORS as SECANT_GENERATORS
from conecalc.secant import SecantBundleRing, make_secant_ring

logger = logging.getLogger(__name__)

Space = Union[BlowupPresentation, SecantBundleRing]
Value = Union[MixedClass, FormalSum]

KNOWN_NAMES = ("H", "E", "h1", "h2", "h", "zeta")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Gen:
    name: str
    offset: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class J:
    arg: "Node"
    offset: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: "Node"


Node = Union[Num, Gen, J, Add, Sub, Mul, Pow, Neg]

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")

# left binding powers
_BINARY = {"+": 10, "-": 10, "*": 20, "^": 30}
_PREFIX_NEG = 25


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op" or "end"
    text: str
    offset: int

    @property
    def lbp(self) -> int:
        if self.kind == "op":
            return _BINARY.get(self.text, 0)
        return 0


def tokenize(text: str) -> Iterator[Token]:
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            break
        number, name, op = match.groups()
        start = match.start(match.lastindex or 0)
        pos = match.end()
        if number is not None:
            yield Token("num", number, start)
        elif name is not None:
            yield Token("name", name, start)
        elif op is not None:
            if op not in "+-*^()":
                raise ParseError(f"Unexpected character {op!r}", start)
            yield Token("op", op, start)
    yield Token("end", "", len(text))


class _Parser:
    def __init__(self, text: str):
        self.tokens: List[Token] = list(tokenize(text))
        self.pos = 0
        self.j_depth = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.advance()
        if tok.kind != "op" or tok.text != text:
            found = tok.text or "end of input"
            raise ParseError(f"Expected {text!r}, found {found!r}", tok.offset)
        return tok

    def expression(self, rbp: int = 0) -> Node:
        left = self.nud(self.advance())
        while rbp < self.token.lbp:
            left = self.led(self.advance(), left)
        return left

    def nud(self, tok: Token) -> Node:
        if tok.kind == "num":
            try:
                return Num(Fraction(tok.text))
            except ZeroDivisionError:
                raise ParseError(f"Zero denominator in {tok.text!r}", tok.offset) from None
        if tok.kind == "name":
            if tok.text == "j":
                return self.j_call(tok)
            if tok.text not in KNOWN_NAMES:
                raise ParseError(f"Unknown generator {tok.text!r}", tok.offset)
            return Gen(tok.text, tok.offset)
        if tok.kind == "op" and tok.text == "-":
            return Neg(self.expression(_PREFIX_NEG))
        if tok.kind == "op" and tok.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        found = tok.text or "end of input"
        raise ParseError(f"Unexpected {found!r}", tok.offset)

    def led(self, tok: Token, left: Node) -> Node:
        if tok.text == "^":
            exp = self.advance()
            if exp.kind != "num" or "/" in exp.text:
                raise ParseError("Exponent must be a nonnegative integer", exp.offset)
            return Pow(left, int(exp.text))
        right = self.expression(tok.lbp)
        if tok.text == "+":
            return Add(left, right)
        if tok.text == "-":
            return Sub(left, right)
        return Mul(left, right)

    def j_call(self, tok: Token) -> Node:
        if self.j_depth:
            raise ParseError("nested j", tok.offset)
        self.expect("(")
        self.j_depth += 1
        arg = self.expression()
        self.j_depth -= 1
        self.expect(")")
        return J(arg, tok.offset)

    def parse(self) -> Node:
        node = self.expression()
        if self.token.kind != "end":
            raise ParseError(f"Unexpected {self.token.text!r}", self.token.offset)
        return node


def parse_expr(text: str, space: Optional[Space] = None) -> Node:
    """Parse a class expression.

    Args:
        text: Expression such as "(3*H - 2*E)^2" or "j(h2^2*h1)"
        space: If given, generator names are also checked against it

    Returns:
        The syntax tree

    Raises:
        ParseError: On a syntax error, an unknown or misplaced generator, or nested j
    """
    node = _Parser(text).parse()
    if space is not None:
        validate(node, space)
    return node


def _walk(node: Node, inside_j: bool, visit: Callable[[Node, bool], None]) -> None:
    visit(node, inside_j)
    if isinstance(node, J):
        _walk(node.arg, True, visit)
    elif isinstance(node, (Add, Sub, Mul)):
        _walk(node.left, inside_j, visit)
        _walk(node.right, inside_j, visit)
    elif isinstance(node, Pow):
        _walk(node.base, inside_j, visit)
    elif isinstance(node, Neg):
        _walk(node.operand, inside_j, visit)


def validate(node: Node, space: Space) -> None:
    """Check every generator and j(...) against the symbol table of space.

    Raises:
        ParseError: If a name is unknown for the space or used outside its scope
    """
    label = space.spec
    if isinstance(space, SecantBundleRing):
        outside, inside = set(SECANT_GENERATORS), set()
    else:
        outside, inside = {"H", "E"}, set(EXCEPTIONAL)

    def visit(n: Node, inside_j: bool) -> None:
        if isinstance(n, J) and isinstance(space, SecantBundleRing):
            raise ParseError(f"j(...) is not defined on {label}", n.offset)
        if isinstance(n, Gen):
            allowed = inside if inside_j else outside
            if n.name not in allowed:
                where = "inside j(...)" if inside_j else "outside j(...)"
                raise ParseError(f"Generator {n.name!r} is not allowed {where} on {label}", n.offset)

    _walk(node, False, visit)


def _evaluate_exceptional(node: Node, S: BlowupPresentation) -> FormalSum:
    rules = S.exceptional_rules
    if isinstance(node, Num):
        return FormalSum.constant(EXCEPTIONAL, node.value)
    if isinstance(node, Gen):
        return FormalSum.monomial(EXCEPTIONAL, **{node.name: 1})
    if isinstance(node, Add):
        return _evaluate_exceptional(node.left, S) + _evaluate_exceptional(node.right, S)
    if isinstance(node, Sub):
        return _evaluate_exceptional(node.left, S) - _evaluate_exceptional(node.right, S)
    if isinstance(node, Neg):
        return -_evaluate_exceptional(node.operand, S)
    if isinstance(node, Mul):
        return mul(_evaluate_exceptional(node.left, S), _evaluate_exceptional(node.right, S), rules)
    if isinstance(node, Pow):
        result = FormalSum.constant(EXCEPTIONAL, 1)
        base = _evaluate_exceptional(node.base, S)
        for _ in range(node.exponent):
            result = mul(result, base, rules)
        return result
    raise ParseError("nested j", getattr(node, "offset", 0))


def _evaluate_blowup(node: Node, S: BlowupPresentation) -> MixedClass:
    if isinstance(node, Num):
        return MixedClass.constant(node.value)
    if isinstance(node, Gen):
        return S.H() if node.name == "H" else S.E()
    if isinstance(node, J):
        return S.j(_evaluate_exceptional(node.arg, S))
    if isinstance(node, Add):
        return _evaluate_blowup(node.left, S) + _evaluate_blowup(node.right, S)
    if isinstance(node, Sub):
        return _evaluate_blowup(node.left, S) - _evaluate_blowup(node.right, S)
    if isinstance(node, Neg):
        return -_evaluate_blowup(node.operand, S)
    if isinstance(node, Mul):
        return product(_evaluate_blowup(node.left, S), _evaluate_blowup(node.right, S), S)
    assert isinstance(node, Pow)
    return power(_evaluate_blowup(node.base, S), node.exponent, S)


def _evaluate_secant(node: Node, P: SecantBundleRing) -> FormalSum:
    if isinstance(node, Num):
        return FormalSum.constant(SECANT_GENERATORS, node.value)
    if isinstance(node, Gen):
        return P.reduce(FormalSum.monomial(SECANT_GENERATORS, **{node.name: 1}))
    if isinstance(node, Add):
        return _evaluate_secant(node.left, P) + _evaluate_secant(node.right, P)
    if isinstance(node, Sub):
        return _evaluate_secant(node.left, P) - _evaluate_secant(node.right, P)
    if isinstance(node, Neg):
        return -_evaluate_secant(node.operand, P)
    if isinstance(node, Mul):
        return P.mul(_evaluate_secant(node.left, P), _evaluate_secant(node.right, P))
    if isinstance(node, Pow):
        return P.power(_evaluate_secant(node.base, P), node.exponent)
    raise ParseError(f"j(...) is not defined on {P.spec}", getattr(node, "offset", 0))


def evaluate(node: Node, space: Space) -> Value:
    """Evaluate a syntax tree to a normal-form class on space.

    Raises:
        ParseError: If the tree uses names the space does not know
    """
    validate(node, space)
    if isinstance(space, SecantBundleRing):
        return _evaluate_secant(node, space)
    return _evaluate_blowup(node, space)


def parse_class(text: str, space: Space) -> Value:
    return evaluate(parse_expr(text), space)


_PRECEDENCE = {Add: 10, Sub: 10, Mul: 20, Neg: _PREFIX_NEG, Pow: 30}


def _precedence(node: Node) -> int:
    if isinstance(node, Num) and node.value < 0:
        return _PREFIX_NEG
    return _PRECEDENCE.get(type(node), 40)


def _wrap(node: Node, parenthesize: bool) -> str:
    text = to_text(node)
    return f"({text})" if parenthesize else text


def to_text(node: Node) -> str:
    """Render a syntax tree so that parse_expr(to_text(t)) == t."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Gen):
        return node.name
    if isinstance(node, J):
        return f"j({to_text(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _precedence(node.operand) < _PREFIX_NEG)
    if isinstance(node, Pow):
        return f"{_wrap(node.base, _precedence(node.base) < 30)}^{node.exponent}"
    symbol = {Add: " + ", Sub: " - ", Mul: "*"}[type(node)]
    own = _precedence(node)
    left = _wrap(node.left, _precedence(node.left) < own)
    right = _wrap(node.right, _precedence(node.right) <= own)
    return left + symbol + right


_SPACE = re.compile(r"^\s*(xr|w|y|p3|sec)\s*:\s*(\d+)\s*(?:,\s*(\d+)\s*)?$")

_SPACE_ARITY: Dict[str, int] = {"xr": 1, "w": 1, "y": 1, "p3": 2, "sec": 2}


def parse_space(text: str) -> Space:
    """Build the space named by "xr:<r>", "w:<r>", "y:<d>", "p3:<d>,<a>" or "sec:<n>,<k>".

    Raises:
        ParseError: If the string is malformed
        DomainError: If the parameters are out of range
    """
    match = _SPACE.match(text)
    if match is None:
        raise ParseError(f"Malformed space {text!r}", 0)
    kind, first, second = match.groups()
    arity = 1 if second is None else 2
    if arity != _SPACE_ARITY[kind]:
        raise ParseError(f"Space {kind!r} takes {_SPACE_ARITY[kind]} parameter(s)", match.start(2))
    a = int(first)
    if kind == "xr":
        return make_space(Family.RNC, r=a)
    if kind == "w":
        return make_space(Family.LINE, r=a)
    if kind == "y":
        return make_space(Family.QUADRIC_CURVE, d=a)
    if kind == "p3":
        return make_space(Family.P3_CURVE, d=a, twist=int(second))
    return make_secant_ring(a, int(second))
