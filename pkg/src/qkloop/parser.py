"""Text syntax for ring elements and loops.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := base ('^' ['-'] INT)?
    base   := INT | 'q' | GENERATOR | '(' expr ')' | FUNC '(' expr (',' expr)* ')'
    FUNC   := exp | psiK | psi '[' INT ']' | J | S | Sinv

Parsing produces an AST; :func:`elaborate` evaluates it in a given ring.
"""

from dataclasses import dataclass
import re

from .coeff_ring import RingError
from .loop_algebra import LoopError, RationalLoop, loop_exp
from .point_theory import TheoryParams, j_function, s_operators


class ExprError(ValueError):
    """Base for parse and elaboration errors; carries a 1-based line and column."""

    kind = "error"

    def __init__(self, message, line=1, col=1):
        super().__init__(f"{self.kind} at {line}:{col}: {message}")
        self.line, self.col = line, col


class ParseError(ExprError):
    kind = "syntax error"


class SemanticError(ExprError):
    kind = "semantic error"


# -- AST --------------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: tuple


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    pos: tuple


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    pos: tuple
    index: int = 0


# -- tokenizer ----------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),\[\]]))")
_FUNCS = {"exp", "J", "S", "Sinv", "psi"}
_PSI = re.compile(r"psi(\d+)$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: tuple


def _position(src, offset):
    line = src.count("\n", 0, offset) + 1
    col = offset - (src.rfind("\n", 0, offset) + 1) + 1
    return line, col


def tokenize(src):
    tokens = []
    i = 0
    while True:
        while i < len(src) and src[i].isspace():
            i += 1
        if i >= len(src):
            break
        m = _TOKEN.match(src, i)
        if m is None:
            raise ParseError(f"unexpected character {src[i]!r}", *_position(src, i))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), _position(src, start)))
        i = m.end()
    tokens.append(Token("end", "", _position(src, len(src))))
    return tokens


# -- parser -------------------------------------------------------------------------------


class _Parser:
    def __init__(self, src):
        self.tokens = tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        return None

    def expect(self, text):
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", *self.tok.pos)
        return t

    def parse(self):
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", *self.tok.pos)
        return e

    def expr(self):
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance()
            e = BinOp(op.text, e, self.term(), op.pos)
        return e

    def term(self):
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance()
            e = BinOp(op.text, e, self.unary(), op.pos)
        return e

    def unary(self):
        op = self.accept("-")
        if op is not None:
            return Neg(self.unary(), op.pos)
        return self.factor()

    def factor(self):
        base = self.base()
        op = self.accept("^")
        if op is None:
            return base
        sign = -1 if self.accept("-") else 1
        if self.tok.kind != "int":
            raise ParseError("exponent must be an integer", *self.tok.pos)
        return Pow(base, sign * int(self.advance().text), op.pos)

    def base(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Num(int(t.text), t.pos)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "name":
            self.advance()
            psi = _PSI.match(t.text)
            if psi or t.text in _FUNCS:
                return self.call(t, psi)
            return Var(t.text, t.pos)
        found = t.text or "end of input"
        raise ParseError(f"unexpected {found!r}", *t.pos)

    def call(self, head, psi):
        name, index = head.text, 0
        if psi:
            name, index = "psi", int(psi.group(1))
        elif name == "psi":
            self.expect("[")
            if self.tok.kind != "int":
                raise ParseError("psi index must be an integer", *self.tok.pos)
            index = int(self.advance().text)
            self.expect("]")
        self.expect("(")
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(")")
        arity = 2 if name in ("J", "S", "Sinv") else 1
        if len(args) != arity:
            raise ParseError(f"{name} takes {arity} argument(s), got {len(args)}", *head.pos)
        if name == "psi" and index < 1:
            raise ParseError("psi index must be positive", *head.pos)
        return Call(name, tuple(args), head.pos, index)


def parse_element(src):
    """Parse text into an AST (no ring needed yet)."""
    return _Parser(src).parse()


# -- elaboration -------------------------------------------------------------------------


def _constant_of(loop, pos, what):
    """The Lambda element of a q-independent loop."""
    if not loop.is_laurent() or (loop.num and (loop.val != 0 or loop.numerator_degree() > 0)):
        raise SemanticError(f"{what} must not depend on q", *pos)
    return loop.coefficient_at_zero(0)[0]


def elaborate(node, config):
    """Evaluate an AST to a rank-1 :class:`RationalLoop`."""
    try:
        return _elab(node, config)
    except SemanticError:
        raise
    except (LoopError, RingError, ZeroDivisionError) as exc:
        raise SemanticError(str(exc), *node.pos) from exc


def _elab(node, cfg):
    if isinstance(node, Num):
        return RationalLoop.constant(cfg, node.value)
    if isinstance(node, Var):
        if node.name == "q":
            return RationalLoop.q_power(cfg, 1)
        try:
            return RationalLoop.constant(cfg, cfg.gen(node.name))
        except (RingError, KeyError, ValueError):
            raise SemanticError(f"unknown name {node.name!r}", *node.pos) from None
    if isinstance(node, Neg):
        return -_elab(node.arg, cfg)
    if isinstance(node, BinOp):
        a = _elab(node.left, cfg)
        b = _elab(node.right, cfg)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if not b.scalar_part():
            raise SemanticError("division by a non-unit", *node.right.pos)
        return a / b
    if isinstance(node, Pow):
        base = _elab(node.base, cfg)
        if node.exponent < 0 and not base.scalar_part():
            raise SemanticError("negative power of a non-unit", *node.pos)
        return base ** node.exponent
    if isinstance(node, Call):
        return _elab_call(node, cfg)
    raise TypeError(f"not an expression node: {node!r}")


def _elab_call(node, cfg):
    args = [_elab(a, cfg) for a in node.args]
    if node.func == "exp":
        (x,) = args
        if x.lambda_filtration_degree() < 1:
            raise SemanticError("exp needs an argument of positive filtration degree", *node.pos)
        return loop_exp(x)
    if node.func == "psi":
        return args[0].adams(node.index)
    tau = _constant_of(args[0], node.args[0].pos, "tau")
    t = _constant_of(args[1], node.args[1].pos, "t")
    try:
        p = TheoryParams(tau, t)
    except RingError as exc:
        raise SemanticError(str(exc), *node.pos) from None
    if node.func == "J":
        return j_function(p)
    S, S_inv = s_operators(p)
    return S if node.func == "S" else S_inv


def parse_loop(src, config):
    """Parse and elaborate in one step."""
    return elaborate(parse_element(src), config)


def parse_lambda(src, config):
    """Parse text that must denote a q-independent ring element."""
    node = parse_element(src)
    return _constant_of(elaborate(node, config), node.pos, "value")


__all__ = [
    "BinOp",
    "Call",
    "ExprError",
    "Neg",
    "Num",
    "ParseError",
    "Pow",
    "SemanticError",
    "Var",
    "elaborate",
    "parse_element",
    "parse_lambda",
    "parse_loop",
    "tokenize",
]
