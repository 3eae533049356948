"""A tiny expression language for stating and checking sequence identities
exactly over the integers.

Grammar (whitespace insignificant)::

    identity := expr [ "==" expr ]
    expr     := term { ("+" | "-") term }
    term     := unary { ("*" | "/") unary }
    unary    := "-" unary | power
    power    := atom [ "^" unary ]
    atom     := INT | "n" | "J" "(" expr ")" | "j" "(" expr ")" | "(" expr ")"
    INT      := decimal digits

"^" is right-associative and binds tighter than unary minus, so -2^n means
-(2^n) and the base -2 must be written (-2)^n.  "/" is exact integer
division at evaluation time.  "==" may appear once, at the top level only.
J and j are the Jacobsthal and Jacobsthal-Lucas sequences; n is the free
index variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .sequences import jacobsthal, jacobsthal_lucas

# canonical identity strings used throughout the tests and docs
SQUARE_DIFFERENCE = "j(n)^2 - 9*J(n)^2 == 4*(-2)^n"
J_MINUS_ONE_ODD = "J(n)-1 == 2*J((n-1)/2)*j((n-1)/2)"
J_MINUS_ONE_EVEN = "J(n)-1 == 4*J(n-2)"
JL_MINUS_ONE_ODD = "j(n)-1 == 6*J((n-1)/2)*j((n-1)/2)"
JL_MINUS_ONE_EVEN = "j(n)-1 == 2^n"


class IdentityParseError(ValueError):
    """Any lexical or syntactic failure; carries a 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class IdentitySyntaxError(IdentityParseError):
    pass


class UnknownNameError(IdentityParseError):
    """An identifier other than J, j, n."""


class IdentityEvalError(ValueError):
    """Evaluation failure; carries the index n and the source position."""

    def __init__(self, message: str, n: int, span: tuple[int, int]):
        line, column = span
        super().__init__(f"{message} at n={n} (line {line}, column {column})")
        self.n = n
        self.span = span


class NonIntegerArgumentError(IdentityEvalError):
    pass


class NegativeSequenceIndexError(IdentityEvalError):
    pass


class NegativeExponentError(IdentityEvalError):
    pass


class InexactDivisionError(IdentityEvalError):
    pass


class NotAnIdentityError(ValueError):
    """verify_range needs an '==' at the root."""


Span = tuple[int, int]  # (line, column), 1-based


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class IndexVar:
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class SeqCall:
    name: str  # "J" or "j"
    arg: "Expr"
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: "Expr"
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Eq:
    left: "Expr"
    right: "Expr"
    span: Span = field(compare=False, repr=False)


Expr = IntLit | IndexVar | SeqCall | Neg | Add | Sub | Mul | Div | Pow
IdentityAst = Expr | Eq

_DIGITS = "0123456789"


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_SINGLE = {
    "+": "PLUS",
    "-": "MINUS",
    "*": "STAR",
    "/": "SLASH",
    "^": "CARET",
    "(": "LPAREN",
    ")": "RPAREN",
}


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, i = 1, 1, 0
    while i < len(source):
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _DIGITS:
            j = i
            while j < len(source) and source[j] in _DIGITS:
                j += 1
            tokens.append(_Token("INT", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(source) and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if source.startswith("==", i):
            tokens.append(_Token("EQEQ", "==", line, col))
            col += 2
            i += 2
            continue
        if ch in _SINGLE:
            tokens.append(_Token(_SINGLE[ch], ch, line, col))
            col += 1
            i += 1
            continue
        raise IdentitySyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "end of input", line, col))
    return tokens


# guards the recursive descent against pathological nesting; any readable
# identity is far shallower
_MAX_DEPTH = 100


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.depth = 0

    def _descend(self) -> None:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            tok = self.peek()
            raise IdentitySyntaxError("expression nesting too deep", tok.line, tok.column)

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise IdentitySyntaxError(
                f"expected {what}, found {tok.text!r}", tok.line, tok.column
            )
        return self.advance()

    def parse_identity(self) -> IdentityAst:
        node: IdentityAst = self.parse_expr()
        if self.peek().kind == "EQEQ":
            eq = self.advance()
            node = Eq(node, self.parse_expr(), (eq.line, eq.column))
        tok = self.peek()
        if tok.kind != "EOF":
            raise IdentitySyntaxError(f"unexpected {tok.text!r}", tok.line, tok.column)
        return node

    def parse_expr(self) -> Expr:
        self._descend()
        node = self.parse_term()
        while self.peek().kind in ("PLUS", "MINUS"):
            op = self.advance()
            right = self.parse_term()
            cls = Add if op.kind == "PLUS" else Sub
            node = cls(node, right, (op.line, op.column))
        self.depth -= 1
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek().kind in ("STAR", "SLASH"):
            op = self.advance()
            right = self.parse_unary()
            cls = Mul if op.kind == "STAR" else Div
            node = cls(node, right, (op.line, op.column))
        return node

    def parse_unary(self) -> Expr:
        if self.peek().kind == "MINUS":
            op = self.advance()
            self._descend()
            node = Neg(self.parse_unary(), (op.line, op.column))
            self.depth -= 1
            return node
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.peek().kind == "CARET":
            op = self.advance()
            return Pow(base, self.parse_unary(), (op.line, op.column))
        return base

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return IntLit(int(tok.text), (tok.line, tok.column))
        if tok.kind == "NAME":
            self.advance()
            if tok.text == "n":
                return IndexVar((tok.line, tok.column))
            if tok.text in ("J", "j"):
                self.expect("LPAREN", f"'(' after {tok.text}")
                arg = self.parse_expr()
                self.expect("RPAREN", "')'")
                return SeqCall(tok.text, arg, (tok.line, tok.column))
            raise UnknownNameError(
                f"unknown name {tok.text!r}; only J, j and n are defined",
                tok.line,
                tok.column,
            )
        if tok.kind == "LPAREN":
            self.advance()
            node = self.parse_expr()
            self.expect("RPAREN", "')'")
            return node
        raise IdentitySyntaxError(
            f"expected an expression, found {tok.text!r}", tok.line, tok.column
        )


def parse(source: str) -> IdentityAst:
    """Parse an identity or bare expression; positions are 1-based."""
    return _Parser(_tokenize(source)).parse_identity()


_PREC = {Eq: 1, Add: 2, Sub: 2, Mul: 3, Div: 3, Neg: 4, Pow: 5, IntLit: 6, IndexVar: 6, SeqCall: 6}


def _wrap(node: Expr, minimum: int) -> str:
    s = _fmt(node)
    return f"({s})" if _PREC[type(node)] < minimum else s


def _fmt(node: IdentityAst) -> str:
    match node:
        case IntLit(value=value):
            return str(value)
        case IndexVar():
            return "n"
        case SeqCall(name=name, arg=arg):
            return f"{name}({_fmt(arg)})"
        case Neg(operand=operand):
            return "-" + _wrap(operand, 4)
        case Pow(base=base, exponent=exponent):
            return _wrap(base, 6) + "^" + _wrap(exponent, 4)
        case Add(left=left, right=right):
            return _wrap(left, 2) + " + " + _wrap(right, 3)
        case Sub(left=left, right=right):
            return _wrap(left, 2) + " - " + _wrap(right, 3)
        case Mul(left=left, right=right):
            return _wrap(left, 3) + "*" + _wrap(right, 4)
        case Div(left=left, right=right):
            return _wrap(left, 3) + "/" + _wrap(right, 4)
        case Eq(left=left, right=right):
            return _fmt(left) + " == " + _fmt(right)
    raise TypeError(f"not an AST node: {node!r}")


def to_source(node: IdentityAst) -> str:
    """Render a tree back to text; reparsing yields an equal tree."""
    return _fmt(node)


def _eval(node: Expr, n: int) -> int:
    match node:
        case IntLit(value=value):
            return value
        case IndexVar():
            return n
        case Neg(operand=operand):
            return -_eval(operand, n)
        case Add(left=left, right=right):
            return _eval(left, n) + _eval(right, n)
        case Sub(left=left, right=right):
            return _eval(left, n) - _eval(right, n)
        case Mul(left=left, right=right):
            return _eval(left, n) * _eval(right, n)
        case Div(left=left, right=right):
            a, b = _eval(left, n), _eval(right, n)
            if b == 0:
                raise InexactDivisionError("division by zero", n, node.span)
            quot, rem = divmod(a, b)
            if rem:
                raise InexactDivisionError(f"{a}/{b} is not exact", n, node.span)
            return quot
        case Pow(base=base, exponent=exponent):
            b, e = _eval(base, n), _eval(exponent, n)
            if e < 0:
                raise NegativeExponentError(f"negative exponent {e}", n, node.span)
            return b**e
        case SeqCall(name=name, arg=arg):
            try:
                idx = _eval(arg, n)
            except InexactDivisionError as exc:
                raise NonIntegerArgumentError(
                    f"argument of {name}(...) is not an integer", n, node.span
                ) from exc
            if idx < 0:
                raise NegativeSequenceIndexError(
                    f"argument of {name}(...) is {idx}", n, node.span
                )
            return jacobsthal(idx) if name == "J" else jacobsthal_lucas(idx)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(ast: IdentityAst, n: int) -> int | bool:
    """Exact evaluation at index n; an Eq root yields a bool."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if isinstance(ast, Eq):
        return _eval(ast.left, n) == _eval(ast.right, n)
    return _eval(ast, n)


@dataclass(frozen=True)
class VerifyOutcome:
    """Result of checking an identity over a range.

    status is "AllHold", "Counterexample" (n, lhs, rhs filled in), or
    "EvalError" (n, error filled in); the reported n is always the
    smallest failing index.
    """

    lo: int
    hi: int
    step: int
    status: str
    n: int | None = None
    lhs: int | None = None
    rhs: int | None = None
    error: str | None = None


def verify_range(ast: IdentityAst, lo: int, hi: int, step: int = 1) -> VerifyOutcome:
    """Check an identity at n = lo, lo+step, ... <= hi."""
    if not isinstance(ast, Eq):
        raise NotAnIdentityError("the root of the expression is not '=='")
    if lo < 0:
        raise ValueError("lo must be nonnegative")
    if lo > hi:
        raise ValueError("lo must not exceed hi")
    if step < 1:
        raise ValueError("step must be at least 1")
    for n in range(lo, hi + 1, step):
        try:
            lhs = _eval(ast.left, n)
            rhs = _eval(ast.right, n)
        except IdentityEvalError as exc:
            return VerifyOutcome(lo, hi, step, "EvalError", n=n, error=str(exc))
        if lhs != rhs:
            return VerifyOutcome(lo, hi, step, "Counterexample", n=n, lhs=lhs, rhs=rhs)
    return VerifyOutcome(lo, hi, step, "AllHold")
