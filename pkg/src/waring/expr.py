"""Parser and printer for binary-form expressions such as "x^3 - 3*x*y^2".

Grammar (whitespace-insensitive):

    expr     := ["+"|"-"] term (("+" | "-") term)*
    term     := factor ("*"? factor)*
    factor   := rational | var ("^" nat)?
    var      := "x" | "y"
    rational := nat ("/" nat)?

The optional leading sign is an extension beyond the term separators: the
printer emits it for forms with a negative leading coefficient, and
parse(print(q)) must reproduce q exactly.  Every term must have the same
total degree; mixed degrees are rejected as non-homogeneous.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError, ParseError
from .forms import BinaryForm

__all__ = ["FormExpression", "parse_expression", "parse_form", "form_to_text"]


@dataclass(frozen=True)
class FormExpression:
    """A parsed expression: source text, the form, and its inferred degree."""

    source: str
    form: BinaryForm
    degree: int


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch


def _parse_nat(sc: _Scanner) -> int:
    sc.skip_ws()
    start = sc.pos
    digits = ""
    while sc.pos < len(sc.text) and sc.text[sc.pos].isdigit():
        digits += sc.text[sc.pos]
        sc.pos += 1
    if not digits:
        raise ParseError("expected a number", start)
    return int(digits)


def _parse_rational(sc: _Scanner) -> Fraction:
    num = _parse_nat(sc)
    if sc.peek() == "/":
        sc.take()
        pos = sc.pos
        den = _parse_nat(sc)
        if den == 0:
            raise ParseError("zero denominator", pos)
        return Fraction(num, den)
    return Fraction(num)


def _starts_factor(ch: str) -> bool:
    return bool(ch) and (ch.isdigit() or ch in "xy")


def _parse_term(sc: _Scanner) -> tuple[Fraction, int, int]:
    """One product of factors: returns (coefficient, x-exponent, y-exponent)."""
    coeff = Fraction(1)
    ex = ey = 0
    first = True
    while True:
        ch = sc.peek()
        if first and not _starts_factor(ch):
            raise ParseError(f"expected a factor, found {ch!r}" if ch else "unexpected end of input", sc.pos)
        if ch.isdigit():
            coeff *= _parse_rational(sc)
        elif ch and ch in "xy":
            sc.take()
            power = 1
            if sc.peek() == "^":
                sc.take()
                power = _parse_nat(sc)
            if ch == "x":
                ex += power
            else:
                ey += power
        else:
            break
        first = False
        if sc.peek() == "*":
            sc.take()
            first = True  # an explicit '*' must be followed by a factor
    return coeff, ex, ey


def parse_expression(text: str) -> FormExpression:
    """Parse an expression into a binary form, validating homogeneity."""
    if text is None or not text.strip():
        raise ParseError("empty expression")
    sc = _Scanner(text)
    terms: list[tuple[Fraction, int, int]] = []
    sign = Fraction(1)
    lead = sc.peek()
    if lead and lead in "+-":
        if sc.take() == "-":
            sign = -sign
    while True:
        coeff, ex, ey = _parse_term(sc)
        terms.append((sign * coeff, ex, ey))
        ch = sc.peek()
        if ch == "":
            break
        if ch not in "+-":
            raise ParseError(f"unexpected character {ch!r}", sc.pos)
        sign = Fraction(1) if sc.take() == "+" else Fraction(-1)
    degrees = {ex + ey for _, ex, ey in terms}
    if len(degrees) != 1:
        raise InvalidInputError(
            f"non-homogeneous expression: term degrees {sorted(degrees)}"
        )
    d = degrees.pop()
    coeffs = [Fraction(0)] * (d + 1)
    for coeff, _, ey in terms:
        coeffs[ey] += coeff
    form = BinaryForm(d, tuple(coeffs))
    return FormExpression(text, form, d)


def parse_form(text: str) -> BinaryForm:
    """Parse an expression, returning just the binary form."""
    return parse_expression(text).form


def _monomial_text(dx: int, dy: int) -> str:
    parts = []
    if dx == 1:
        parts.append("x")
    elif dx > 1:
        parts.append(f"x^{dx}")
    if dy == 1:
        parts.append("y")
    elif dy > 1:
        parts.append(f"y^{dy}")
    return "*".join(parts)


def form_to_text(q: BinaryForm) -> str:
    """Deterministic textual form; parse_form inverts it exactly."""
    d = q.degree
    if q.is_zero:
        return "0" if d == 0 else f"0*x^{d}"
    pieces = []
    for i, a in enumerate(q.coeffs):
        if a == 0:
            continue
        mono = _monomial_text(d - i, i)
        mag = abs(a)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        if not pieces:
            pieces.append(body if a > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if a > 0 else f"- {body}")
    return " ".join(pieces)
