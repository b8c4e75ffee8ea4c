"""
Polynomial expression parser.

Grammar (whitespace-insensitive)::

    expr     := [sign] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' natural)?
    atom     := rational | identifier | '(' expr ')'
    rational := natural ('/' natural)?

Implicit multiplication ("2u1", "u1 u2") is rejected. Parsing builds the
``MPoly`` directly from pyparsing parse actions.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

import pyparsing as pp

from exact_core import RATIONALS, ExactField
from exceptions import ParseError
from polynomials import MPoly

logger = logging.getLogger(__name__)

MAX_EXPONENT = 256


def _fail(message: str):
    def action(s: str, loc: int, toks: pp.ParseResults):
        raise pp.ParseFatalException(s, loc, message)
    return action


@lru_cache(maxsize=32)
def _grammar(variables: Tuple[str, ...], field: ExactField) -> pp.ParserElement:
    """Grammar whose parse actions yield polynomials in ``variables``."""
    index = set(variables)

    natural = pp.Word(pp.nums)
    identifier = pp.Word(pp.alphas + "_", pp.alphanums + "_")
    expr = pp.Forward()

    def on_rational(s: str, loc: int, toks: pp.ParseResults) -> MPoly:
        numerator = int(toks[0])
        denominator = int(toks[1]) if len(toks) > 1 else 1
        if denominator == 0:
            raise pp.ParseFatalException(s, loc, "Zero denominator")
        return MPoly.constant(Fraction(numerator, denominator), variables, field)

    def on_identifier(s: str, loc: int, toks: pp.ParseResults) -> MPoly:
        name = toks[0]
        if name not in index:
            raise pp.ParseFatalException(s, loc, f"Unknown identifier '{name}'")
        return MPoly.variable(name, variables, field)

    def on_factor(s: str, loc: int, toks: pp.ParseResults) -> MPoly:
        base = toks[0]
        if len(toks) == 1:
            return base
        power = int(toks[1])
        if power > MAX_EXPONENT:
            raise pp.ParseFatalException(s, loc, f"Exponent above {MAX_EXPONENT}")
        return base ** power

    def on_term(toks: pp.ParseResults) -> MPoly:
        result = toks[0]
        for factor in toks[1:]:
            result = result * factor
        return result

    def on_expr(toks: pp.ParseResults) -> MPoly:
        items = list(toks)
        sign = "+"
        if isinstance(items[0], str):
            sign = items.pop(0)
        result = -items[0] if sign == "-" else items[0]
        for op, term in zip(items[1::2], items[2::2]):
            result = result + term if op == "+" else result - term
        return result

    rational = (natural + pp.Optional(pp.Suppress("/") + natural)).set_parse_action(on_rational)
    # A '/' after anything but an integer literal is a syntax error.
    dangling = pp.Literal("/").set_parse_action(_fail("Division is only allowed inside rational literals"))
    atom = rational | identifier.copy().set_parse_action(on_identifier) | (pp.Suppress("(") + expr + pp.Suppress(")"))
    factor = (atom + pp.Optional(pp.Suppress("^") + natural)).set_parse_action(on_factor)
    term = (factor + pp.ZeroOrMore(pp.Suppress("*") + factor) + pp.Optional(dangling)).set_parse_action(on_term)
    sign = pp.one_of("+ -")
    expr <<= (pp.Optional(sign) + term + pp.ZeroOrMore(sign + term)).set_parse_action(on_expr)
    return expr


def parse_poly(source: str, variables: Sequence[str], field: ExactField = RATIONALS) -> MPoly:
    """
    Parse an expression into a polynomial in ``variables``.

    Args:
        source: Expression text
        variables: Variable names, in chart order
        field: Coefficient field

    Returns:
        The exact polynomial

    Raises:
        ParseError: On a syntax error or an unknown identifier, with the
            1-based line and column of the offending character
    """
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise ParseError("Duplicate variable names", 1, 1, details={"variables": list(variables)})
    try:
        result = _grammar(variables, field).parse_string(source, parse_all=True)
    except pp.ParseBaseException as exc:
        logger.debug("Parse failure in %r: %s", source, exc)
        raise ParseError(
            exc.msg if exc.msg else "Syntax error",
            exc.lineno,
            exc.col,
            details={"source": source},
            original_error=exc
        ) from exc
    return result[0]
