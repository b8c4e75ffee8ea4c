"""
Ranks of rational curves in P^4 from Wronskian-minor contents.

For a curve given by five forms of degree d in the affine parameter t, the
total stationary index T_k is the degree of the gcd of the (k+1)-minors of
the derivative matrix [f; f'; ...; f^(k)], plus the same order at the point
at infinity read in the reciprocal chart. Second differences of the totals
are the branch sums of (alpha_k - 1), and from those come the ranks n1, n2, n3
(degrees of the tangent developable, the osculating-plane threefold and the
dual curve).

All computation is over Q.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Sequence, Tuple, Union

from sympy.combinatorics import Permutation

from checks import Check, failed_checks
from exact_core import RATIONALS, ExactMatrix, RandomSource
from exceptions import CurveRankError, IdentityCheckError, PolynomialError
from polynomials import INFINITY, PointAtInfinity, UPoly, content_and_orders, order_at, upoly_gcd

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEGREE = 40
FORM_COUNT = 5

BranchPoint = Union[Fraction, PointAtInfinity]


@dataclass(frozen=True)
class RationalCurveP4:
    """
    Five forms of degree ``degree`` in the t-chart of P^1.

    The degree-d homogenization is implicit; a form of lower degree vanishes
    at infinity to the order of the gap.
    """

    degree: int
    forms: Tuple[UPoly, ...]

    @classmethod
    def from_coefficients(cls, degree: int, coefficients: Sequence[Sequence[Any]]) -> "RationalCurveP4":
        """Build from ascending coefficient lists, one per form."""
        return cls(degree, tuple(UPoly(c) for c in coefficients))

    def validate(self, max_degree: int = DEFAULT_MAX_DEGREE) -> None:
        """
        Raises:
            CurveRankError: If there are not five forms, the degree is out of range,
                the forms are dependent, or they share a common zero
        """
        if len(self.forms) != FORM_COUNT:
            raise CurveRankError(
                "A curve in P^4 needs exactly five forms",
                details={"forms": len(self.forms)}
            )
        if not 4 <= self.degree <= max_degree:
            raise CurveRankError(
                f"Curve degree must lie in [4, {max_degree}]",
                details={"degree": self.degree, "max_degree": max_degree}
            )
        top = max(p.degree() for p in self.forms)
        if top > self.degree:
            raise CurveRankError(
                "A form exceeds the declared degree",
                details={"degree": self.degree, "form_degree": top}
            )
        rows = [list(p.coeffs) + [0] * (self.degree + 1 - len(p.coeffs)) for p in self.forms]
        if ExactMatrix.from_rows(RATIONALS, rows, self.degree + 1).rank() != FORM_COUNT:
            raise CurveRankError("The five forms are linearly dependent", details={"degree": self.degree})
        _, common, _ = content_and_orders(self.forms)
        at_infinity = self.degree - top
        if common or at_infinity:
            raise CurveRankError(
                "The forms share a common zero",
                details={"finite_common_degree": common, "order_at_infinity": at_infinity}
            )

    def reciprocal(self) -> Tuple[UPoly, ...]:
        """Forms in the chart s = 1/t around the point at infinity."""
        return tuple(p.reversed(self.degree) for p in self.forms)

    def describe(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "forms": [[str(c) for c in p.coeffs] for p in self.forms],
        }


@dataclass(frozen=True)
class BranchRanks:
    """Order and rank sequences of the branch at one parameter value."""

    point: BranchPoint
    orders: Tuple[int, ...]

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.orders, self.orders[1:]))

    @property
    def is_generic(self) -> bool:
        return self.ranks == (1, 1, 1, 1)

    def to_dict(self) -> Dict[str, Any]:
        return {"point": str(self.point), "orders": list(self.orders), "ranks": list(self.ranks)}


@dataclass
class CurveRankReport:
    """Totals, branch sums, ranks and identity checks of one curve."""

    degree: int
    totals: Tuple[int, ...]
    sums: Tuple[int, ...]
    n1: int
    n2: int
    n3: int
    branches: List[BranchRanks] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)

    @property
    def ranks(self) -> Tuple[int, int, int]:
        return self.n1, self.n2, self.n3

    @property
    def passed(self) -> bool:
        return not failed_checks(self.checks)

    def invariants(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "totals": list(self.totals),
            "sums": list(self.sums),
            "n1": self.n1,
            "n2": self.n2,
            "n3": self.n3,
        }

    def to_dict(self) -> Dict[str, Any]:
        data = self.invariants()
        data["branches"] = [b.to_dict() for b in self.branches]
        return data


def _determinant(matrix: Sequence[Sequence[UPoly]]) -> UPoly:
    """Leibniz expansion; the matrices here are at most 5x5."""
    size = len(matrix)
    total = UPoly()
    for perm in itertools.permutations(range(size)):
        term = UPoly([Permutation(list(perm)).signature()])
        for row, column in enumerate(perm):
            entry = matrix[row][column]
            if entry.is_zero:
                term = UPoly()
                break
            term = term * entry
        if not term.is_zero:
            total = total + term
    return total


def _derivative_rows(forms: Sequence[UPoly], count: int) -> List[Tuple[UPoly, ...]]:
    rows = [tuple(forms)]
    while len(rows) < count:
        rows.append(tuple(p.derivative() for p in rows[-1]))
    return rows


def _minor_gcd(forms: Sequence[UPoly], k: int) -> UPoly:
    """
    Monic gcd of all (k+1)-minors of the derivative matrix up to order k.

    Raises:
        CurveRankError: If every minor vanishes identically
    """
    rows = _derivative_rows(forms, k + 1)
    common = UPoly()
    for columns in itertools.combinations(range(FORM_COUNT), k + 1):
        minor = _determinant([[row[c] for c in columns] for row in rows])
        if minor.is_zero:
            continue
        common = upoly_gcd(common, minor)
        if common.degree() == 0:
            break
    if common.is_zero:
        raise CurveRankError("Every minor vanishes; the curve is degenerate", details={"order": k})
    return common


@lru_cache(maxsize=64)
def _minor_gcds(forms: Tuple[UPoly, ...]) -> Tuple[UPoly, ...]:
    return tuple(_minor_gcd(forms, k) for k in range(FORM_COUNT))


def stationary_totals(curve: RationalCurveP4, max_degree: int = DEFAULT_MAX_DEGREE) -> Tuple[int, ...]:
    """
    Totals T_0..T_4 over all branches, the point at infinity included.

    Raises:
        CurveRankError: If the curve is invalid or degenerate
    """
    curve.validate(max_degree)
    finite = _minor_gcds(curve.forms)
    infinite = _minor_gcds(curve.reciprocal())
    totals = tuple(
        g.degree() + order_at(h, Fraction(0))
        for g, h in zip(finite, infinite)
    )
    logger.debug("Stationary totals for degree %d curve: %s", curve.degree, totals)
    return totals


def branch_rank_sequence(curve: RationalCurveP4, point: Union[BranchPoint, int, str]) -> BranchRanks:
    """
    Order sequence a_0 < ... < a_4 of the branch at ``point``.

    The vanishing order c_k of the k-th minor gcd at the point equals
    the sum over i <= k of (a_i - i), so a_k = k + c_k - c_(k-1).
    Points at infinity are read at s = 0 in the reciprocal chart.
    """
    point = parse_branch_point(point)
    if point is INFINITY:
        gcds, at = _minor_gcds(curve.reciprocal()), Fraction(0)
    else:
        gcds, at = _minor_gcds(curve.forms), point
    cumulative = [order_at(g, at) for g in gcds]
    orders = []
    previous = 0
    for k, c in enumerate(cumulative):
        orders.append(k + c - previous)
        previous = c
    return BranchRanks(point, tuple(orders))


def parse_branch_point(point: Union[BranchPoint, int, str]) -> BranchPoint:
    """Accept a rational, an int, ``INFINITY`` or the strings "oo"/"inf"."""
    if point is INFINITY:
        return INFINITY
    if isinstance(point, str):
        text = point.strip().lower()
        if text in ("oo", "inf", "infinity"):
            return INFINITY
        try:
            return Fraction(text)
        except ValueError:
            raise CurveRankError(f"Invalid branch point '{point}'", details={"point": point}) from None
    return Fraction(point)


def _identity_checks(degree: int, sums: Sequence[int], n1: int, n2: int, n3: int) -> List[Check]:
    s1, s2, s3, s4 = sums
    d = degree
    return [
        Check.of("form2-first", s1 + n1 == 2 * d - 2, f"{s1}+{n1} vs {2 * d - 2}"),
        Check.of("form2-second", s2 + d + n2 == 2 * n1 - 2, f"{s2}+{d}+{n2} vs {2 * n1 - 2}"),
        Check.of("form2-third", s3 + n1 + n3 == 2 * n2 - 2, f"{s3}+{n1}+{n3} vs {2 * n2 - 2}"),
        Check.of("form2-fourth", s4 + n2 == 2 * n3 - 2, f"{s4}+{n2} vs {2 * n3 - 2}"),
        Check.of("plot", 4 * s1 + 3 * s2 + 2 * s3 + s4 == 5 * d - 20,
                 f"{4 * s1 + 3 * s2 + 2 * s3 + s4} vs {5 * d - 20}"),
        Check.of("nonnegative-ranks", min(n1, n2, n3) >= 0 and min(sums) >= 0,
                 f"ranks={(n1, n2, n3)} sums={tuple(sums)}"),
    ]


def ranks(
    curve: RationalCurveP4,
    at: Sequence[Union[BranchPoint, int, str]] = (),
    *,
    max_degree: int = DEFAULT_MAX_DEGREE,
    strict: bool = False
) -> CurveRankReport:
    """
    Ranks n1, n2, n3 with every identity re-verified.

    Args:
        curve: Input curve
        at: Parameter values whose branch ranks are reported as well
        max_degree: Degree cap
        strict: Raise instead of recording a FAIL check

    Raises:
        CurveRankError: If the curve is invalid
        IdentityCheckError: If an identity fails and ``strict`` is set
    """
    totals = stationary_totals(curve, max_degree)
    t0, t1, t2, t3, t4 = totals
    sums = (t1 - 2 * t0, t2 - 2 * t1 + t0, t3 - 2 * t2 + t1, t4 - 2 * t3 + t2)
    s1, s2, s3, _ = sums
    d = curve.degree
    n1 = 2 * (d - 1) - s1
    n2 = 3 * (d - 2) - (2 * s1 + s2)
    n3 = 4 * (d - 3) - (3 * s1 + 2 * s2 + s3)

    checks = [Check.of("coprime", t0 == 0, f"T0={t0}")]
    checks.extend(_identity_checks(d, sums, n1, n2, n3))

    branches = [branch_rank_sequence(curve, p) for p in at]
    if branches:
        local = [sum(b.ranks[i] - 1 for b in branches) for i in range(4)]
        distinct = len({b.point for b in branches}) == len(branches)
        checks.append(Check.of(
            "branch-sums-bounded",
            all(x <= y for x, y in zip(local, sums)) if distinct else None,
            f"local={tuple(local)} totals={sums}"
        ))

    report = CurveRankReport(d, totals, sums, n1, n2, n3, branches, checks)
    failed = failed_checks(checks)
    if failed:
        logger.error("Curve identity failures: %s", ", ".join(c.name for c in failed))
        if strict:
            raise IdentityCheckError(
                "Rank identities failed",
                details={"checks": [c.name for c in failed], "totals": list(totals)}
            )
    logger.info("Curve of degree %d has ranks (%d, %d, %d)", d, n1, n2, n3)
    return report


# -- constructions ----------------------------------------------------------

def monomial_curve(exponents: Sequence[int]) -> RationalCurveP4:
    """The curve (t^e0, ..., t^e4); its degree is the largest exponent."""
    if len(exponents) != FORM_COUNT:
        raise CurveRankError("A monomial curve needs five exponents", details={"exponents": list(exponents)})
    degree = max(exponents)
    forms = tuple(UPoly([0] * e + [1]) for e in exponents)
    return RationalCurveP4(degree, forms)


def rational_normal_quartic() -> RationalCurveP4:
    return monomial_curve((0, 1, 2, 3, 4))


def _binomial_power(a: Fraction, b: Fraction, power: int) -> UPoly:
    result = UPoly([1])
    base = UPoly([b, a])
    for _ in range(power):
        result = result * base
    return result


def reparameterize(curve: RationalCurveP4, a: Any, b: Any, c: Any, e: Any) -> RationalCurveP4:
    """
    Substitute t -> (a*t + b) / (c*t + e) in the degree-d homogenization.

    Raises:
        CurveRankError: If a*e - b*c = 0
    """
    a, b, c, e = (Fraction(x) for x in (a, b, c, e))
    if a * e - b * c == 0:
        raise CurveRankError("Substitution is not invertible", details={"a": str(a), "b": str(b), "c": str(c), "e": str(e)})
    d = curve.degree
    numerators = [_binomial_power(a, b, i) for i in range(d + 1)]
    denominators = [_binomial_power(c, e, i) for i in range(d + 1)]
    forms = []
    for p in curve.forms:
        image = UPoly()
        for i, coeff in enumerate(p.coeffs):
            if coeff:
                image = image + numerators[i] * denominators[d - i] * coeff
        forms.append(image)
    return RationalCurveP4(d, tuple(forms))


def transform(curve: RationalCurveP4, matrix: Sequence[Sequence[Any]]) -> RationalCurveP4:
    """
    Replace the forms by the invertible linear combination ``matrix`` of them.

    Raises:
        CurveRankError: If the matrix is not an invertible 5x5 matrix
    """
    grid = ExactMatrix.from_rows(RATIONALS, matrix, FORM_COUNT)
    if grid.rows != FORM_COUNT or grid.rank() != FORM_COUNT:
        raise CurveRankError("Transform must be an invertible 5x5 matrix", details={"rows": grid.rows})
    forms = []
    for row in grid.entries:
        combo = UPoly()
        for weight, p in zip(row, curve.forms):
            if weight:
                combo = combo + p * weight
        forms.append(combo)
    return RationalCurveP4(curve.degree, tuple(forms))


def random_curve(rng: RandomSource, degree: int, attempts: int = 32) -> RationalCurveP4:
    """
    Curve with random integer coefficients of the given degree.

    Raises:
        CurveRankError: If no valid curve is drawn within ``attempts``
    """
    for _ in range(attempts):
        rows = [[rng.integer(-9, 10) for _ in range(degree + 1)] for _ in range(FORM_COUNT)]
        candidate = RationalCurveP4.from_coefficients(degree, rows)
        try:
            candidate.validate(max(degree, DEFAULT_MAX_DEGREE))
        except (CurveRankError, PolynomialError):
            continue
        return candidate
    raise CurveRankError("No valid random curve drawn", details={"degree": degree, "attempts": attempts})


def curve_from_forms(degree: int, forms: Sequence[UPoly], max_degree: int = DEFAULT_MAX_DEGREE) -> RationalCurveP4:
    """Build and validate a curve."""
    curve = RationalCurveP4(degree, tuple(forms))
    curve.validate(max_degree)
    return curve

