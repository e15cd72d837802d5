"""Scanner and recursive-descent parser for forms and expressions.

Grammar (whitespace insignificant)::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' INT)?
    atom    := NUMBER | IMAG | VAR | 'exp' '(' sum ')' | '(' sum ')'

``NUMBER`` is an integer literal, ``IMAG`` is ``i`` or an integer immediately
followed by ``i``; ``p/q`` is read as division by a constant. Forms use the
variables ``x0 .. xn``; expressions use ``z`` and ``exp``.
"""

import re
from dataclasses import dataclass
from typing import List, Optional, Union

from sympy import QQ_I

from ..exceptions import DegreeMismatchError, ParseError
from .expressions import AnalyticExpr
from .polynomials import HomogeneousPoly, form_ring, gaussian

_TOKEN_SPEC = [
    ("IMAG", r"\d+i\b|i\b"),
    ("NUMBER", r"\d+"),
    ("VAR", r"x\d+"),
    ("NAME", r"[A-Za-z_]\w*"),
    ("OP", r"[+\-*/^()]"),
    ("SPACE", r"\s+"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def scan(text: str) -> List[Token]:
    tokens = []
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        if kind == "SPACE":
            continue
        if kind == "MISMATCH":
            raise ParseError(f"unexpected character {match.group()!r}", text, match.start())
        tokens.append(Token(kind, match.group(), match.start()))
    tokens.append(Token("END", "", len(text)))
    return tokens


class Parser:
    """One parser instance per input string.

    ``kind`` is ``"form"`` (values are ring elements of ``x0..xn``) or
    ``"expr"`` (values are ``AnalyticExpr``).
    """

    def __init__(self, text: str, kind: str, nvars: Optional[int] = None):
        if kind not in ("form", "expr"):
            raise ValueError(f"unknown input kind {kind!r}")
        self.text = text
        self.kind = kind
        self.tokens = scan(text)
        self.index = 0
        if kind == "form":
            if nvars is None:
                indices = [int(t.text[1:]) for t in self.tokens if t.kind == "VAR"]
                nvars = max(indices, default=0) + 1
            self.ring = form_ring(nvars)
        self.nvars = nvars

    # --- token helpers ---
    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, token: Token = None) -> ParseError:
        token = token or self.current
        return ParseError(message, self.text, token.position)

    def accept(self, text: str) -> bool:
        if self.current.kind == "OP" and self.current.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.current.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    # --- value helpers ---
    def constant(self, re_part: int = 0, im_part: int = 0):
        c = gaussian(re_part, im_part)
        if self.kind == "form":
            return self.ring(c)
        return AnalyticExpr.constant(c)

    def is_constant(self, value) -> bool:
        if self.kind == "form":
            return value.is_ground
        return value.is_polynomial() and value.degree_bound <= 0

    def constant_value(self, value):
        if self.kind == "form":
            return value.LC if value else value.ring.domain.zero
        return value.as_poly().LC if not value.is_zero() else gaussian(0)

    # --- grammar ---
    def parse(self):
        value = self.sum()
        if self.current.kind != "END":
            raise self.error(f"unexpected {self.current.text!r}")
        return value

    def sum(self):
        value = self.product()
        while True:
            if self.accept("+"):
                value = value + self.product()
            elif self.accept("-"):
                value = value - self.product()
            else:
                return value

    def product(self):
        value = self.unary()
        while True:
            if self.accept("*"):
                value = value * self.unary()
            elif self.current.kind == "OP" and self.current.text == "/":
                token = self.current
                self.index += 1
                divisor = self.unary()
                if not self.is_constant(divisor):
                    raise self.error("division is only allowed by a constant", token)
                c = self.constant_value(divisor)
                if not c:
                    raise self.error("division by zero", token)
                value = value * (QQ_I.one / c)
            else:
                return value

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            token = self.current
            if token.kind != "NUMBER":
                raise self.error("exponent must be a nonnegative integer literal")
            self.index += 1
            return base ** int(token.text)
        return base

    def atom(self):
        token = self.current
        if token.kind == "NUMBER":
            self.index += 1
            return self.constant(int(token.text))
        if token.kind == "IMAG":
            self.index += 1
            digits = token.text[:-1]
            return self.constant(0, int(digits) if digits else 1)
        if token.kind == "VAR":
            self.index += 1
            if self.kind != "form":
                raise self.error(f"variable {token.text!r} is not allowed in an expression", token)
            k = int(token.text[1:])
            if k >= self.nvars:
                raise self.error(f"variable {token.text!r} exceeds x{self.nvars - 1}", token)
            return self.ring.gens[k]
        if token.kind == "NAME":
            self.index += 1
            if self.kind == "expr" and token.text == "z":
                return AnalyticExpr.variable()
            if self.kind == "expr" and token.text == "exp":
                self.expect("(")
                argument = self.sum()
                self.expect(")")
                try:
                    return AnalyticExpr.exp(argument)
                except DegreeMismatchError as exc:
                    raise self.error(str(exc), token) from exc
            raise self.error(f"unknown name {token.text!r}", token)
        if self.accept("("):
            value = self.sum()
            self.expect(")")
            return value
        found = token.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def parse_form(text: str, nvars: Optional[int] = None, degree: Optional[int] = None) -> HomogeneousPoly:
    parser = Parser(text, "form", nvars)
    element = parser.parse()
    degrees = {sum(m) for m in element.itermonoms()}
    if len(degrees) > 1:
        raise ParseError(f"form is inhomogeneous (degrees {sorted(degrees)})", text, 0)
    if degree is not None and degrees and degrees != {degree}:
        raise DegreeMismatchError(f"form {text!r} has degree {degrees.pop()}, declared {degree}")
    if not degrees and degree is None:
        raise ParseError("the zero form needs a declared degree", text, 0)
    return HomogeneousPoly.from_element(element, degree)


def parse_expr(text: str) -> AnalyticExpr:
    return Parser(text, "expr").parse()


def parse_inputs(
    text: str, kind: str, nvars: Optional[int] = None
) -> Union[HomogeneousPoly, AnalyticExpr]:
    """Parse ``kind="form"`` into a HomogeneousPoly or ``kind="expr"`` into an AnalyticExpr."""
    if kind == "form":
        return parse_form(text, nvars)
    if kind == "expr":
        return parse_expr(text)
    raise ValueError(f"unknown input kind {kind!r}")
