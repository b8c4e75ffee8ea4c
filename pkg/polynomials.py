"""
Sparse multivariate and dense univariate exact polynomials.

``MPoly`` stores a map from exponent tuples to nonzero raw coefficients of one
``ExactField``. It carries everything parameterizations need: arithmetic,
differentiation, evaluation, substitution and partial specialization.

``UPoly`` is a dense univariate polynomial over Q used by the Wronskian
computations. Greatest common divisors and root finding go through
``sympy.polys``: ``dup_gcd`` over ``QQ`` for rational gcds and the
``galoistools`` Berlekamp-style root extraction over F_p.
"""

from __future__ import annotations

import logging
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Dummy, Poly
from sympy.polys.densearith import dup_rem
from sympy.polys.domains import QQ, ZZ
from sympy.polys.euclidtools import dup_gcd
from sympy.polys.galoistools import (
    gf_edf_zassenhaus,
    gf_from_int_poly,
    gf_gcd,
    gf_monic,
    gf_pow_mod,
    gf_sub,
)

from exact_core import RATIONALS, ExactField, FieldScalar
from exceptions import FieldMismatchError, PolynomialError

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]


class PointAtInfinity(Enum):
    """The point t = ∞ of the projective parameter line."""

    INFINITY = "oo"

    def __str__(self) -> str:
        return "oo"


INFINITY = PointAtInfinity.INFINITY


class MPoly:
    """
    Sparse polynomial in named variables over an exact field.

    Instances are immutable; every operation returns a new polynomial. Zero
    coefficients are never stored.
    """

    __slots__ = ("variables", "field", "terms")

    def __init__(
        self,
        variables: Sequence[str],
        terms: Mapping[Exponents, Any],
        field: ExactField = RATIONALS,
        *,
        convert: bool = True
    ) -> None:
        self.variables: Tuple[str, ...] = tuple(variables)
        self.field = field
        arity = len(self.variables)
        clean: Dict[Exponents, Any] = {}
        for exponents, coeff in terms.items():
            exponents = tuple(exponents)
            if len(exponents) != arity:
                raise PolynomialError(
                    "Exponent vector does not match the variable count",
                    details={"exponents": exponents, "variables": arity}
                )
            value = field.convert(coeff) if convert else coeff
            if value:
                clean[exponents] = value
        self.terms: Dict[Exponents, Any] = clean

    # -- construction ---------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str], field: ExactField = RATIONALS) -> "MPoly":
        return cls(variables, {}, field)

    @classmethod
    def constant(cls, value: Any, variables: Sequence[str], field: ExactField = RATIONALS) -> "MPoly":
        return cls(variables, {(0,) * len(variables): value}, field)

    @classmethod
    def variable(cls, name: str, variables: Sequence[str], field: ExactField = RATIONALS) -> "MPoly":
        variables = tuple(variables)
        if name not in variables:
            raise PolynomialError(f"Unknown variable '{name}'", details={"variables": variables})
        exponents = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exponents: 1}, field)

    @classmethod
    def monomial(
        cls,
        exponents: Sequence[int],
        variables: Sequence[str],
        coeff: Any = 1,
        field: ExactField = RATIONALS
    ) -> "MPoly":
        return cls(variables, {tuple(exponents): coeff}, field)

    def _new(self, terms: Dict[Exponents, Any], variables: Optional[Tuple[str, ...]] = None) -> "MPoly":
        return MPoly(self.variables if variables is None else variables, terms, self.field, convert=False)

    # -- inspection -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        index = self._index(name)
        return max((e[index] for e in self.terms), default=-1)

    def constant_term(self) -> Any:
        return self.terms.get((0,) * len(self.variables), self.field.zero)

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise PolynomialError(
                f"Unknown variable '{name}'",
                details={"variables": self.variables}
            ) from None

    def _compatible(self, other: "MPoly") -> None:
        if other.field != self.field:
            raise FieldMismatchError(
                "Polynomials live over different fields",
                details={"left": self.field.tag, "right": other.field.tag}
            )
        if other.variables != self.variables:
            raise PolynomialError(
                "Polynomials use different variable lists",
                details={"left": self.variables, "right": other.variables}
            )

    def _lift(self, other: Any) -> "MPoly":
        if isinstance(other, MPoly):
            self._compatible(other)
            return other
        return MPoly.constant(other, self.variables, self.field)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: Any) -> "MPoly":
        other = self._lift(other)
        f = self.field
        terms = dict(self.terms)
        for exponents, coeff in other.terms.items():
            value = f.add(terms.get(exponents, f.zero), coeff)
            if value:
                terms[exponents] = value
            else:
                terms.pop(exponents, None)
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        f = self.field
        return self._new({e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: Any) -> "MPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> "MPoly":
        return self._lift(other) - self

    def __mul__(self, other: Any) -> "MPoly":
        other = self._lift(other)
        f = self.field
        terms: Dict[Exponents, Any] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exponents = tuple(a + b for a, b in zip(e1, e2))
                terms[exponents] = f.add(terms.get(exponents, f.zero), f.mul(c1, c2))
        return self._new({e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "MPoly":
        if power < 0:
            raise PolynomialError("Negative powers are not polynomials", details={"power": power})
        result = MPoly.constant(1, self.variables, self.field)
        base = self
        while power:
            if power & 1:
                result = result * base
            power >>= 1
            if power:
                base = base * base
        return result

    def scale(self, factor: Any) -> "MPoly":
        f = self.field
        value = f.convert(factor)
        return self._new({e: f.mul(c, value) for e, c in self.terms.items() if f.mul(c, value)})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self.variables == other.variables and self.field == other.field
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.variables, self.field, frozenset(self.terms.items())))

    # -- calculus and evaluation ----------------------------------------

    def diff(self, name: str) -> "MPoly":
        return diff(self, name)

    def evaluate(self, point: Sequence[Any]) -> Any:
        """Value at ``point`` as a raw field value (see ``evaluate``)."""
        return evaluate_raw(self, [self.field.convert(x) for x in point])

    def specialize(self, values: Mapping[str, Any]) -> "MPoly":
        """
        Fix some variables to field values; the result keeps only the others.

        Raises:
            PolynomialError: If a name is not a variable of the polynomial
        """
        f = self.field
        fixed = {self._index(name): f.convert(value) for name, value in values.items()}
        keep = [i for i in range(len(self.variables)) if i not in fixed]
        terms: Dict[Exponents, Any] = {}
        for exponents, coeff in self.terms.items():
            value = coeff
            for index, point in fixed.items():
                if exponents[index]:
                    value = f.mul(value, _power(f, point, exponents[index]))
            if not value:
                continue
            reduced = tuple(exponents[i] for i in keep)
            terms[reduced] = f.add(terms.get(reduced, f.zero), value)
        return self._new({e: c for e, c in terms.items() if c}, tuple(self.variables[i] for i in keep))

    def with_variables(self, variables: Sequence[str]) -> "MPoly":
        """Re-express the polynomial over a variable list containing all current names."""
        variables = tuple(variables)
        try:
            positions = [variables.index(v) for v in self.variables]
        except ValueError:
            raise PolynomialError(
                "Target variable list misses a variable",
                details={"current": self.variables, "target": variables}
            ) from None
        terms = {}
        for exponents, coeff in self.terms.items():
            widened = [0] * len(variables)
            for position, power in zip(positions, exponents):
                widened[position] = power
            terms[tuple(widened)] = coeff
        return self._new(terms, variables)

    def rename(self, mapping: Mapping[str, str]) -> "MPoly":
        variables = tuple(mapping.get(v, v) for v in self.variables)
        if len(set(variables)) != len(variables):
            raise PolynomialError("Renaming collapses two variables", details={"mapping": dict(mapping)})
        return self._new(dict(self.terms), variables)

    def reduce_to(self, field: ExactField) -> "MPoly":
        """
        Map a rational polynomial into ``field`` (identity when already there).

        Raises:
            FieldMismatchError: If the polynomial is not rational or a
                denominator vanishes modulo the target prime
        """
        if field == self.field:
            return self
        if not self.field.is_rational:
            raise FieldMismatchError(
                "Only rational polynomials can be reduced to another field",
                details={"source": self.field.tag, "target": field.tag}
            )
        return MPoly(self.variables, self.terms, field)

    def univariate_coefficients(self) -> List[Any]:
        """Ascending coefficient list of a polynomial in a single variable."""
        if len(self.variables) != 1:
            raise PolynomialError(
                "Polynomial is not univariate",
                details={"variables": self.variables}
            )
        degree = self.degree()
        coeffs = [self.field.zero] * (degree + 1)
        for (power,), coeff in self.terms.items():
            coeffs[power] = coeff
        return coeffs

    # -- output ---------------------------------------------------------

    def to_expression(self) -> str:
        """
        Canonical text accepted by the expression parser.

        Terms are ordered by descending total degree, then descending
        exponent vector. Only rational polynomials have a text form.
        """
        if not self.field.is_rational:
            raise PolynomialError(
                "Only rational polynomials can be written as expressions",
                details={"field": self.field.tag}
            )
        if not self.terms:
            return "0"
        ordered = sorted(self.terms.items(), key=lambda item: (-sum(item[0]), tuple(-x for x in item[0])))
        pieces = []
        for position, (exponents, coeff) in enumerate(ordered):
            negative = coeff < 0
            magnitude = -coeff if negative else coeff
            factors = [
                name if power == 1 else f"{name}^{power}"
                for name, power in zip(self.variables, exponents) if power
            ]
            if magnitude != 1 or not factors:
                factors.insert(0, str(magnitude))
            body = "*".join(factors)
            if position == 0:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        if self.field.is_rational:
            return f"MPoly({self.to_expression()!r}, {self.variables})"
        return f"MPoly({len(self.terms)} terms, {self.variables}, {self.field.tag})"


def _power(field: ExactField, base: Any, exponent: int) -> Any:
    if field.is_rational:
        return field._check(base ** exponent)
    return pow(base, exponent, field.modulus)


def diff(p: MPoly, name: str) -> MPoly:
    """
    Formal partial derivative of ``p`` with respect to ``name``.

    Raises:
        PolynomialError: If ``name`` is not a variable of ``p``
    """
    index = p._index(name)
    f = p.field
    terms: Dict[Exponents, Any] = {}
    for exponents, coeff in p.terms.items():
        power = exponents[index]
        if not power:
            continue
        value = f.mul(coeff, f.convert(power))
        if not value:
            continue
        lowered = exponents[:index] + (power - 1,) + exponents[index + 1:]
        terms[lowered] = value
    return p._new(terms)


def evaluate_raw(p: MPoly, point: Sequence[Any]) -> Any:
    """Evaluate at a point of raw values already in ``p.field``."""
    if len(point) != len(p.variables):
        raise PolynomialError(
            "Point length does not match the variable count",
            details={"point": len(point), "variables": len(p.variables)}
        )
    f = p.field
    cache: Dict[Tuple[int, int], Any] = {}
    total = f.zero
    for exponents, coeff in p.terms.items():
        value = coeff
        for index, power in enumerate(exponents):
            if not power:
                continue
            key = (index, power)
            if key not in cache:
                cache[key] = _power(f, point[index], power)
            value = f.mul(value, cache[key])
        total = f.add(total, value)
    return total


def evaluate(p: MPoly, point: Sequence[Union[FieldScalar, int, Fraction]]) -> FieldScalar:
    """
    Exact value of ``p`` at ``point``.

    Raises:
        FieldMismatchError: If a FieldScalar from another field is supplied
        PolynomialError: If the point has the wrong length
    """
    return FieldScalar(p.evaluate(point), p.field)


def substitute(p: MPoly, assignment: Mapping[str, MPoly]) -> MPoly:
    """
    Compose ``p`` with polynomials for each of its variables.

    Every image must share one variable list and the field of ``p``.

    Raises:
        PolynomialError: If a variable is missing or images disagree on variables
    """
    missing = [v for v in p.variables if v not in assignment]
    if missing:
        raise PolynomialError("Assignment does not cover every variable", details={"missing": missing})
    images = [assignment[v] for v in p.variables]
    if not images:
        return p
    target = images[0]
    for image in images[1:]:
        target._compatible(image)
    if target.field != p.field:
        raise FieldMismatchError(
            "Substituted polynomials live over a different field",
            details={"polynomial": p.field.tag, "images": target.field.tag}
        )
    powers: Dict[Tuple[int, int], MPoly] = {}
    result = MPoly.zero(target.variables, p.field)
    for exponents, coeff in p.terms.items():
        term = MPoly.constant(coeff, target.variables, p.field)
        for index, power in enumerate(exponents):
            if not power:
                continue
            key = (index, power)
            if key not in powers:
                powers[key] = images[index] ** power
            term = term * powers[key]
        result = result + term
    return result


class UPoly:
    """
    Dense univariate polynomial over Q, coefficients in ascending degree.

    Trailing zero coefficients are stripped, so the zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Any] = ()) -> None:
        values = [Fraction(c) for c in coeffs]
        while values and not values[-1]:
            values.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(values)

    @classmethod
    def from_dup(cls, dup: Sequence[Any]) -> "UPoly":
        """Build from a sympy dense list (descending) over QQ."""
        return cls(Fraction(int(c.numerator), int(c.denominator)) for c in reversed(dup))

    def to_dup(self) -> List[Any]:
        return [QQ(c.numerator, c.denominator) for c in reversed(self.coeffs)]

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __add__(self, other: "UPoly") -> "UPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (size - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (size - len(other.coeffs))
        return UPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UPoly":
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UPoly") -> "UPoly":
        return self + (-other)

    def __mul__(self, other: Union["UPoly", int, Fraction]) -> "UPoly":
        if not isinstance(other, UPoly):
            return UPoly(c * other for c in self.coeffs)
        if self.is_zero or other.is_zero:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def derivative(self) -> "UPoly":
        return UPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def evaluate(self, t0: Any) -> Fraction:
        value = Fraction(0)
        for coeff in reversed(self.coeffs):
            value = value * t0 + coeff
        return value

    def monic(self) -> "UPoly":
        if self.is_zero:
            return self
        lead = self.leading()
        return UPoly(c / lead for c in self.coeffs)

    def reversed(self, degree: int) -> "UPoly":
        """
        Reciprocal chart image: t^degree * p(1/t).

        Raises:
            PolynomialError: If ``degree`` is below the polynomial's degree
        """
        if self.degree() > degree:
            raise PolynomialError(
                "Reference degree is below the polynomial degree",
                details={"degree": self.degree(), "reference": degree}
            )
        padded = self.coeffs + (Fraction(0),) * (degree + 1 - len(self.coeffs))
        return UPoly(reversed(padded))

    def divides(self, other: "UPoly") -> bool:
        """True when ``self`` divides ``other`` exactly over Q."""
        if self.is_zero:
            return other.is_zero
        return not dup_rem(other.to_dup(), self.to_dup(), QQ)

    def __repr__(self) -> str:
        return f"UPoly({[str(c) for c in self.coeffs]})"


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd over Q; gcd(0, 0) is 0."""
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    return UPoly.from_dup(dup_gcd(a.to_dup(), b.to_dup(), QQ)).monic()


def content_and_orders(ps: Sequence[UPoly]) -> Tuple[UPoly, int, int]:
    """
    Common content of a list of univariate polynomials.

    Returns the monic gcd, its degree, and the vanishing order of the list at
    the infinite chart point: the smallest gap between the list's maximal
    degree and the degree of a nonzero member.

    Raises:
        PolynomialError: If every member is zero
    """
    nonzero = [p for p in ps if not p.is_zero]
    if not nonzero:
        raise PolynomialError("Cannot take the content of zero polynomials only")
    common = UPoly()
    for p in nonzero:
        common = upoly_gcd(common, p)
        if common.degree() == 0:
            break
    top = max(p.degree() for p in nonzero)
    at_infinity = min(top - p.degree() for p in nonzero)
    return common, common.degree(), at_infinity


def order_at(p: UPoly, t0: Any, reference_degree: Optional[int] = None) -> int:
    """
    Vanishing order of ``p`` at a rational ``t0`` or at ``INFINITY``.

    At infinity the order is ``reference_degree - degree(p)``, where the
    reference degree is the degree of the homogenization the caller uses.

    Raises:
        PolynomialError: If ``p`` is zero or no reference degree is given at infinity
    """
    if p.is_zero:
        raise PolynomialError("The zero polynomial has no vanishing order")
    if t0 is INFINITY:
        if reference_degree is None:
            raise PolynomialError("A reference degree is required at infinity")
        if reference_degree < p.degree():
            raise PolynomialError(
                "Reference degree is below the polynomial degree",
                details={"degree": p.degree(), "reference": reference_degree}
            )
        return reference_degree - p.degree()
    point = Fraction(t0)
    coeffs = list(p.coeffs)
    order = 0
    while True:
        # synthetic division by (t - point)
        quotient = [Fraction(0)] * (len(coeffs) - 1)
        carry = Fraction(0)
        for i in range(len(coeffs) - 1, 0, -1):
            carry = carry * point + coeffs[i]
            quotient[i - 1] = carry
        remainder = carry * point + coeffs[0]
        if remainder:
            return order
        order += 1
        coeffs = quotient


def roots_mod_p(coeffs: Sequence[int], prime: int) -> List[int]:
    """
    Distinct roots in F_p of the polynomial with ascending ``coeffs``.

    The split part gcd(f, x^p - x) is extracted and then factored into
    linear factors by equal-degree splitting. The zero polynomial returns an
    empty list; callers decide what that means.
    """
    dense = gf_from_int_poly([int(c) for c in reversed(list(coeffs))], prime)
    if len(dense) <= 1:
        return []
    _, monic = gf_monic(dense, prime, ZZ)
    x_to_p = gf_pow_mod([1, 0], prime, monic, prime, ZZ)
    split = gf_gcd(monic, gf_sub(x_to_p, [1, 0], prime, ZZ), prime, ZZ)
    if len(split) <= 1:
        return []
    if len(split) == 2:
        return [(-split[1]) % prime]
    factors = gf_edf_zassenhaus(split, 1, prime, ZZ)
    return sorted({(-int(factor[1])) % prime for factor in factors})


def rational_roots(coeffs: Sequence[Any]) -> List[Fraction]:
    """Distinct rational roots of the polynomial with ascending rational ``coeffs``."""
    values = [Fraction(c) for c in coeffs]
    while values and not values[-1]:
        values.pop()
    if len(values) <= 1:
        return []
    t = Dummy("t")
    poly = Poly([QQ(c.numerator, c.denominator) for c in reversed(values)], t, domain=QQ)
    roots = poly.ground_roots()
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)
