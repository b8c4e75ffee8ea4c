"""
Parameterized projective varieties and the catalog of named constructions.

A ``ParamVariety`` is a polynomial map from an affine parameter chart to the
affine cone over P^r. Tangent spaces are recovered from the Jacobian together
with the point vector itself, so charts with a constant coordinate and charts
without one are handled the same way.

Constructors cover Veronese and Segre embeddings, cones, linear projections,
joins, quadric hypersurfaces and the three defective scroll constructions.
Builtin names such as ``"veronese:4:2"`` resolve through ``build_builtin``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from math import comb
from typing import Any, Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from exact_core import RATIONALS, ExactField, ExactMatrix, RandomSource, kernel_basis
from exceptions import CatalogError, FieldMismatchError, SamplingError
from polynomials import MPoly, diff, evaluate_raw, rational_roots, roots_mod_p

logger = logging.getLogger(__name__)

SMOOTH = "smooth-claimed"
CONE = "cone"
SCROLL = "scroll"

DEFAULT_SAMPLE_RETRIES = 16
DEFAULT_HYPERPLANE_RETRIES = 32


@dataclass(frozen=True, eq=False)
class ParamVariety:
    """
    Polynomial chart of a projective variety X ⊂ P^r.

    Attributes:
        name: Catalog or manifest name
        params: Parameter names; their count is the chart dimension n
        coords: r+1 coordinate polynomials in ``params``
        tags: Structural labels such as "cone", "scroll", "smooth-claimed"
        expected: Regression values for invariants, keyed by report field
        case: Pinned fourfold classification case, if any
        vertex_dim: Projective dimension of a known cone vertex, -1 if none
        immersive: False for charts whose image is expected to be smaller than
            the chart (joins and tangential projections)
    """

    name: str
    params: Tuple[str, ...]
    coords: Tuple[MPoly, ...]
    tags: FrozenSet[str] = frozenset()
    expected: Mapping[str, int] = field(default_factory=dict)
    case: Optional[str] = None
    vertex_dim: int = -1
    immersive: bool = True
    _cache: Dict[Any, Any] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self.coords:
            raise CatalogError("A variety needs at least one coordinate", details={"name": self.name})
        if all(c.is_zero for c in self.coords):
            raise CatalogError("All coordinates vanish identically", details={"name": self.name})
        fields = {c.field for c in self.coords}
        if len(fields) != 1:
            raise FieldMismatchError("Coordinates live over different fields", details={"name": self.name})
        for c in self.coords:
            if c.variables != self.params:
                raise CatalogError(
                    "Coordinate variables do not match the parameters",
                    details={"name": self.name, "params": self.params, "variables": c.variables}
                )

    @property
    def n(self) -> int:
        return len(self.params)

    @property
    def r(self) -> int:
        return len(self.coords) - 1

    @property
    def field(self) -> ExactField:
        return self.coords[0].field

    def has_tag(self, tag: str) -> bool:
        return tag in self.tags

    def over(self, target: ExactField) -> "ParamVariety":
        """The same chart with coefficients in ``target`` (cached per field)."""
        if target == self.field:
            return self
        key = ("over", target)
        if key not in self._cache:
            self._cache[key] = replace(
                self,
                coords=tuple(c.reduce_to(target) for c in self.coords),
                _cache={}
            )
        return self._cache[key]

    def jacobian(self) -> Tuple[Tuple[MPoly, ...], ...]:
        """Partial derivatives indexed [parameter][coordinate]."""
        if "jacobian" not in self._cache:
            self._cache["jacobian"] = tuple(
                tuple(diff(c, v) for c in self.coords) for v in self.params
            )
        return self._cache["jacobian"]

    def hessian(self) -> Dict[Tuple[int, int], Tuple[MPoly, ...]]:
        """Second partials indexed by (i, j) with i <= j, then by coordinate."""
        if "hessian" not in self._cache:
            jac = self.jacobian()
            self._cache["hessian"] = {
                (i, j): tuple(diff(p, self.params[j]) for p in jac[i])
                for i in range(self.n) for j in range(i, self.n)
            }
        return self._cache["hessian"]

    def point_vector(self, point: Sequence[Any]) -> Tuple[Any, ...]:
        return tuple(evaluate_raw(c, point) for c in self.coords)

    def frame_rows(self, point: Sequence[Any]) -> List[Tuple[Any, ...]]:
        """The point vector followed by the n Jacobian rows at ``point``."""
        rows = [self.point_vector(point)]
        rows.extend(tuple(evaluate_raw(p, point) for p in column) for column in self.jacobian())
        return rows

    def hessians_at(self, point: Sequence[Any]) -> List[List[List[Any]]]:
        """One symmetric n×n matrix of raw values per coordinate."""
        f = self.field
        mats = [[[f.zero] * self.n for _ in range(self.n)] for _ in self.coords]
        for (i, j), polys in self.hessian().items():
            for k, p in enumerate(polys):
                value = evaluate_raw(p, point)
                mats[k][i][j] = value
                mats[k][j][i] = value
        return mats

    def is_nondegenerate(self) -> bool:
        """True when the coordinates are linearly independent polynomials."""
        monomials = sorted({e for c in self.coords for e in c.terms})
        rows = [[c.terms.get(m, self.field.zero) for m in monomials] for c in self.coords]
        return ExactMatrix.from_rows(self.field, rows, len(monomials), convert=False).rank() == len(self.coords)

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "n": self.n,
            "r": self.r,
            "tags": sorted(self.tags),
            "case": self.case,
        }


@dataclass(frozen=True)
class LinearCenter:
    """Row space of ``matrix`` is the center of a linear projection."""

    matrix: ExactMatrix

    def __post_init__(self) -> None:
        if self.matrix.rank() != self.matrix.rows:
            raise CatalogError(
                "Projection center is rank deficient",
                details={"rows": self.matrix.rows, "rank": self.matrix.rank()}
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], columns: int, field: ExactField = RATIONALS) -> "LinearCenter":
        return cls(ExactMatrix.from_rows(field, rows, columns))

    @property
    def dim(self) -> int:
        """Projective dimension of the center; -1 when empty."""
        return self.matrix.rows - 1


def _names(prefix: str, count: int, taken: Sequence[str] = ()) -> Tuple[str, ...]:
    taken_set = set(taken)
    base = prefix
    while any(f"{base}{i}" in taken_set for i in range(1, count + 1)):
        base += prefix
    return tuple(f"{base}{i}" for i in range(1, count + 1))


def _monomials(variables: Sequence[str], degree: int) -> List[Tuple[int, ...]]:
    """Exponent vectors of total degree <= ``degree``, by degree then descending lex."""
    out: List[Tuple[int, ...]] = []
    for total in range(degree + 1):
        layer = [
            e for e in itertools.product(range(total + 1), repeat=len(variables))
            if sum(e) == total
        ]
        out.extend(sorted(layer, reverse=True))
    return out


def veronese(n: int, d: int) -> ParamVariety:
    """
    Affine chart of the d-th Veronese embedding of P^n.

    Raises:
        CatalogError: If n or d is below 1
    """
    if n < 1 or d < 1:
        raise CatalogError("Veronese needs n >= 1 and d >= 1", details={"n": n, "d": d})
    params = _names("u", n)
    coords = tuple(MPoly.monomial(e, params) for e in _monomials(params, d))
    tags = {SMOOTH}
    expected: Dict[str, int] = {"n": n, "r": comb(n + d, d) - 1}
    case = None
    if d == 2 and n in (2, 3, 4):
        expected.update({"s": 2 * n, "delta": 1, "f": 1, "gamma": 1, "t": 0, "theta_formula": 2})
        expected["species"] = n - 1
        if n == 4:
            case = "viii"
    elif n == 1:
        s = min(3, d)
        expected.update({"s": s, "delta": 0, "f": 3 - s, "t": 0 if d >= 2 else 1})
    logger.debug("Built veronese(%d, %d) with %d coordinates", n, d, len(coords))
    return ParamVariety(f"veronese:{n}:{d}", params, coords, frozenset(tags), expected, case)


def rational_normal_curve(d: int) -> ParamVariety:
    curve = veronese(1, d)
    return replace(curve, name=f"rational-normal-curve:{d}", _cache={})


def segre(a: int, b: int) -> ParamVariety:
    """
    Affine chart of the Segre embedding of P^a × P^b.

    Raises:
        CatalogError: If a or b is below 1
    """
    if a < 1 or b < 1:
        raise CatalogError("Segre needs a >= 1 and b >= 1", details={"a": a, "b": b})
    xs = _names("x", a)
    ys = _names("y", b)
    params = xs + ys
    one = MPoly.constant(1, params)
    x = [one] + [MPoly.variable(v, params) for v in xs]
    y = [one] + [MPoly.variable(v, params) for v in ys]
    coords = tuple(xi * yj for xi in x for yj in y)
    n, r = a + b, a * b + a + b
    expected: Dict[str, int] = {"n": n, "r": r}
    case = None
    if (a, b) == (2, 2):
        expected.update({"s": 7, "delta": 1, "f": 2, "gamma": 2, "epsilon": 2,
                         "theta_formula": 3, "species": 2, "t": 0})
        case = "iv"
    elif (a, b) == (2, 3):
        expected.update({"s": 9, "delta": 2, "f": 2, "gamma": 2, "theta_formula": 3})
    elif (a, b) == (1, 2):
        expected.update({"s": 5, "delta": 0, "f": 2, "t": 0, "d": 1})
    elif (a, b) == (1, 1):
        expected.update({"s": 3, "delta": 0})
    return ParamVariety(f"segre:{a}:{b}", params, coords, frozenset({SMOOTH}), expected, case)


def linear(n: int) -> ParamVariety:
    """The affine chart (1, u1, ..., un) of P^n, a linear variety."""
    if n < 1:
        raise CatalogError("Linear space needs n >= 1", details={"n": n})
    params = _names("u", n)
    coords = (MPoly.constant(1, params),) + tuple(MPoly.variable(v, params) for v in params)
    expected = {"n": n, "r": n, "s": n, "delta": 0, "t": n, "d": n}
    return ParamVariety(f"linear:{n}", params, coords, frozenset({SMOOTH}), expected)


def point_variety(vector: Sequence[Any], field: ExactField = RATIONALS) -> ParamVariety:
    """A single point of P^r as a zero-dimensional chart."""
    coords = tuple(MPoly.constant(x, (), field) for x in vector)
    return ParamVariety("point", (), coords)


def quadric(n: int, rank: int) -> ParamVariety:
    """
    Chart u -> (1, u, q(u)) of a quadric hypersurface in P^(n+1).

    ``rank`` is the rank of the quadratic form in homogeneous coordinates:
    x0*x_last minus (rank - 2) squares. Rank n+2 is the smooth quadric.

    Raises:
        CatalogError: If the rank is outside [3, n+2]
    """
    if n < 1 or not 3 <= rank <= n + 2:
        raise CatalogError("Quadric rank must lie in [3, n+2]", details={"n": n, "rank": rank})
    params = _names("u", n)
    u = [MPoly.variable(v, params) for v in params]
    q = MPoly.zero(params)
    for var in u[:rank - 2]:
        q = q + var * var
    coords = (MPoly.constant(1, params),) + tuple(u) + (q,)
    tags = {SMOOTH} if rank == n + 2 else {CONE}
    kernel = n + 2 - rank
    expected = {"n": n, "r": n + 1, "s": n + 1, "delta": 0, "t": kernel, "d": kernel}
    return ParamVariety(
        f"quadric:{n}:{rank}", params, coords, frozenset(tags), expected,
        vertex_dim=kernel - 1
    )


def cone_over(base: ParamVariety, k: int) -> ParamVariety:
    """
    Cone over ``base`` with a (k-1)-dimensional vertex spanned by k new axes.

    Raises:
        CatalogError: If k < 1
    """
    if k < 1:
        raise CatalogError("Cone needs at least one vertex axis", details={"k": k})
    extra = _names("v", k, base.params)
    params = base.params + extra
    coords = tuple(c.with_variables(params) for c in base.coords)
    coords += tuple(MPoly.variable(v, params, base.field) for v in extra)
    tags = (set(base.tags) - {SMOOTH, SCROLL}) | {CONE}
    vertex = k - 1 if base.vertex_dim < 0 else base.vertex_dim + k
    return ParamVariety(
        f"cone:{k}:{base.name}", params, coords, frozenset(tags),
        {"n": base.n + k, "r": base.r + k, "vertex_dim": vertex},
        vertex_dim=vertex,
        immersive=base.immersive
    )


def project(base: ParamVariety, center: LinearCenter, name: Optional[str] = None) -> ParamVariety:
    """
    Linear projection of ``base`` from ``center``.

    New coordinates are a basis of the linear forms vanishing on the center,
    applied to the old coordinates. The center may meet the variety.

    Raises:
        CatalogError: If the center has the wrong width or is too large
    """
    matrix = center.matrix
    if matrix.cols != base.r + 1:
        raise CatalogError(
            "Center width does not match the ambient space",
            details={"columns": matrix.cols, "ambient": base.r + 1}
        )
    if matrix.rows == 0:
        return base
    if matrix.rows > base.r - 1:
        raise CatalogError(
            "Projection center leaves less than a line",
            details={"center_rows": matrix.rows, "r": base.r}
        )
    source = base.over(matrix.field)
    f = matrix.field
    forms = kernel_basis(matrix)
    coords = []
    for form in forms:
        poly = MPoly.zero(source.params, f)
        for weight, coord in zip(form, source.coords):
            if weight:
                poly = poly + coord.scale(weight)
        coords.append(poly)
    tags = set(base.tags) - {SMOOTH}
    label = name or f"project({base.name},{matrix.rows})"
    return ParamVariety(label, source.params, tuple(coords), frozenset(tags), {}, immersive=base.immersive)


def join(first: ParamVariety, second: ParamVariety) -> ParamVariety:
    """
    Chart (u, v, lam) -> X(u) + lam * Y(v) of the join of two varieties.

    The chart has dimension n_X + n_Y + 1; its image is smaller exactly when
    the join is defective.

    Raises:
        CatalogError: If the ambient spaces differ
    """
    if first.r != second.r:
        raise CatalogError("Join needs a common ambient space", details={"left": first.r, "right": second.r})
    if first.field != second.field:
        raise FieldMismatchError("Join of charts over different fields")
    left = {p: f"p_{p}" for p in first.params}
    right = {p: f"q_{p}" for p in second.params}
    params = tuple(left.values()) + tuple(right.values()) + ("lam",)
    lam = MPoly.variable("lam", params, first.field)
    coords = tuple(
        a.rename(left).with_variables(params) + lam * b.rename(right).with_variables(params)
        for a, b in zip(first.coords, second.coords)
    )
    return ParamVariety(f"join({first.name},{second.name})", params, coords, frozenset(), {}, immersive=False)


def random_point(
    variety: ParamVariety,
    rng: RandomSource,
    retries: int = DEFAULT_SAMPLE_RETRIES
) -> Tuple[Tuple[Any, ...], Tuple[Any, ...]]:
    """
    Random parameter point with a nonzero image vector.

    Returns:
        (parameter point, ambient vector) as raw values of ``rng.field``

    Raises:
        SamplingError: If every draw maps to the zero vector
    """
    chart = variety.over(rng.field)
    for _ in range(retries):
        point = tuple(rng.scalar_value() for _ in chart.params)
        ambient = chart.point_vector(point)
        if any(ambient):
            return point, ambient
    raise SamplingError(
        "Every sampled point maps to the zero vector",
        details={"variety": variety.name, "retries": retries}
    )


def hyperplane_point(
    variety: ParamVariety,
    hyperplane: Sequence[Any],
    rng: RandomSource,
    retries: int = DEFAULT_HYPERPLANE_RETRIES
) -> Tuple[Any, ...]:
    """
    Parameter point u with h(X(u)) = 0.

    All parameters but one are fixed at random; the remaining univariate
    equation is solved exactly (roots in F_p, or rational roots over Q).

    Raises:
        CatalogError: If the hyperplane contains the whole variety
        SamplingError: If no root turns up within the retry budget
    """
    chart = variety.over(rng.field)
    f = rng.field
    h = [f.convert(x) for x in hyperplane]
    if len(h) != chart.r + 1:
        raise CatalogError("Hyperplane has the wrong length", details={"length": len(h), "ambient": chart.r + 1})
    restricted = MPoly.zero(chart.params, f)
    for weight, coord in zip(h, chart.coords):
        if weight:
            restricted = restricted + coord.scale(weight)
    if restricted.is_zero:
        raise CatalogError("Hyperplane vanishes identically on the variety", details={"variety": variety.name})
    if restricted.is_constant:
        raise SamplingError("Hyperplane misses the chart", details={"variety": variety.name})
    free = [v for v in chart.params if restricted.degree_in(v) > 0]
    for attempt in range(retries):
        target = rng.choice(free)
        fixed = {v: rng.scalar_value() for v in chart.params if v != target}
        line = restricted.specialize(fixed)
        coeffs = line.univariate_coefficients()
        if len(coeffs) < 2:
            continue
        roots = roots_mod_p(coeffs, f.modulus) if not f.is_rational else rational_roots(coeffs)
        if not roots:
            continue
        root = rng.choice(roots)
        logger.debug("Hyperplane point found on attempt %d", attempt + 1)
        return tuple(root if v == target else fixed[v] for v in chart.params)
    raise SamplingError(
        "No point on the hyperplane section within the retry budget",
        details={"variety": variety.name, "retries": retries, "field": f.tag}
    )


# -- defective scrolls in 3-spaces ------------------------------------------

def scroll_ex1() -> ParamVariety:
    """
    Scroll joining the lines of a conic in the dual of a plane to the lines
    of a rational normal scroll surface in a disjoint P^6.

    The plane is span(e0, e1, e2) with line L_c = {x0 + c*x1 + c^2*x2 = 0};
    the surface scroll has rulings joining (1, c, c^2) in span(e3, e4, e5)
    and (1, c, c^2, c^3) in span(e6..e9).
    """
    params = ("c", "u1", "u2", "u3")
    c, u1, u2, u3 = (MPoly.variable(v, params) for v in params)
    one = MPoly.constant(1, params)
    coords = (
        -(c * u1) - c * c * u2, u1, u2,
        one, c, c * c,
        u3, u3 * c, u3 * c * c, u3 * c * c * c,
    )
    return _scroll("scroll-ex1", params, coords, "v")


def scroll_ex2() -> ParamVariety:
    """
    Scroll joining a rational normal curve of degree 9 to a pencil-like
    family of planes inside P^5 that pairwise meet at a point.

    The plane P_c is the image of m -> (m0, m1 + c*m0, m2 + c^2*m0, c*m1,
    c*m2 + c^2*m1, c^2*m2); the curve point is (c^9, c^8, ..., 1).
    """
    params = ("c", "m0", "m1", "m2")
    c, m0, m1, m2 = (MPoly.variable(v, params) for v in params)
    plane = _scroll_ex2_plane(c, m0, m1, m2)
    zero = MPoly.zero(params)
    plane += [zero] * 4
    coords = tuple(c ** (9 - i) + plane[i] for i in range(10))
    return _scroll("scroll-ex2", params, coords, "vi")


def _scroll_ex2_plane(c: MPoly, m0: MPoly, m1: MPoly, m2: MPoly) -> List[MPoly]:
    return [m0, m1 + c * m0, m2 + c * c * m0, c * m1, c * m2 + c * c * m1, c * c * m2]


def scroll_ex3() -> ParamVariety:
    """
    Union of the tangent spaces to the Veronese threefold of quadrics of P^3
    at the double planes 2H, H running along the twisted cubic (1, t, t^2, t^3).

    The tangent space at 2H is {H + H'}; coordinates are the coefficients of
    the quadric H * H' in the monomial basis x_i x_j, i <= j.
    """
    params = ("t", "a", "b", "c")
    t, a, b, c = (MPoly.variable(v, params) for v in params)
    one = MPoly.constant(1, params)
    curve = [one, t, t * t, t * t * t]
    moving = [one, a, b, c]
    coords = []
    for i in range(4):
        for j in range(i, 4):
            if i == j:
                coords.append(curve[i] * moving[i])
            else:
                coords.append(curve[i] * moving[j] + curve[j] * moving[i])
    return _scroll("scroll-ex3", params, tuple(coords), "vii")


def _scroll(name: str, params: Tuple[str, ...], coords: Tuple[MPoly, ...], case: str) -> ParamVariety:
    # A hyperplane tangent at two general points is tangent along a plane in
    # each of their ruling 3-spaces, so the contact locus is two surfaces.
    expected = {"n": 4, "r": 9, "s": 8, "delta": 1, "f": 1, "t": 1, "d": 2, "gamma": 2, "epsilon": 2,
                "theta_formula": 4, "theta_direct": 4, "species": 2, "vertex_dim": -1}
    return ParamVariety(name, params, coords, frozenset({SCROLL}), expected, case)


def scroll_ex2_plane_span(rng: RandomSource, samples: int = 8) -> int:
    """
    Projective dimension of the span of ``samples`` planes of the family
    used by ``scroll_ex2``.
    """
    f = rng.field
    rows = []
    for _ in range(samples):
        c = rng.scalar_value()
        for basis in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            m0, m1, m2 = (f.convert(x) for x in basis)
            cc = f.mul(c, c)
            rows.append((
                m0, f.add(m1, f.mul(c, m0)), f.add(m2, f.mul(cc, m0)),
                f.mul(c, m1), f.add(f.mul(c, m2), f.mul(cc, m1)), f.mul(cc, m2),
            ))
    return ExactMatrix.from_rows(f, rows, 6, convert=False).rank() - 1


# -- pinned fourfolds of the classification ---------------------------------

def _v42_projection(name: str, center_rows: List[Dict[Tuple[int, int], int]], case: str, r: int) -> ParamVariety:
    base = veronese(4, 2)
    index = _quadric_index(4)
    rows = []
    for entries in center_rows:
        row = [0] * (base.r + 1)
        for key, value in entries.items():
            row[index[key]] = value
        rows.append(row)
    projected = project(base, LinearCenter.from_rows(rows, base.r + 1), name)
    expected = {"n": 4, "r": r, "s": 8, "delta": 1, "f": 1, "gamma": 1, "species": 3,
                "theta_formula": 2, "vertex_dim": -1, "t": 0}
    return replace(projected, tags=frozenset({SMOOTH}), expected=expected, case=case, _cache={})


def _quadric_index(n: int) -> Dict[Tuple[int, int], int]:
    """Map (i, j), i <= j, of homogeneous coordinates x0..xn to veronese(n, 2) slots."""
    params = _names("u", n)
    index = {}
    for slot, exponents in enumerate(_monomials(params, 2)):
        support = [i + 1 for i, e in enumerate(exponents) for _ in range(e)]
        support = ([0] * (2 - len(support))) + support
        index[(support[0], support[1])] = slot
    return index


def v42_point_projection() -> ParamVariety:
    """Internal projection of the Veronese fourfold from the point x0^2."""
    return _v42_projection("v42-point-projection", [{(0, 0): 1}], "viii", 13)


def v42_conic_projection() -> ParamVariety:
    """Projection from the plane of the conic image of the line x2 = x3 = x4 = 0."""
    rows = [{(0, 0): 1}, {(0, 1): 1}, {(1, 1): 1}]
    return _v42_projection("v42-conic-projection", rows, "ix", 11)


def v42_quartic_projection() -> ParamVariety:
    """Projection from the span of the quartic image of the conic x0*x2 = x1^2."""
    rows = [{(0, 0): 1}, {(0, 1): 1}, {(0, 2): 1, (1, 1): 1}, {(1, 2): 1}, {(2, 2): 1}]
    return _v42_projection("v42-quartic-projection", rows, "x", 9)


def seg23_hyperplane_section() -> ParamVariety:
    """
    Hyperplane section x0*y0 + x1*y1 + x2*y2 = 0 of the Segre variety of P^2 × P^3.

    Chart x = (1, a, b), y = (-a - b*c, 1, c, d); the x0*y0 coordinate is a
    linear combination of the others on the hyperplane and is dropped.
    """
    params = ("a", "b", "c", "d")
    a, b, c, d = (MPoly.variable(v, params) for v in params)
    one = MPoly.constant(1, params)
    x = [one, a, b]
    y = [-a - b * c, one, c, d]
    coords = tuple(xi * yj for i, xi in enumerate(x) for j, yj in enumerate(y) if (i, j) != (0, 0))
    expected = {"n": 4, "r": 10, "s": 8, "delta": 1, "f": 1, "gamma": 1, "species": 3,
                "theta_formula": 2, "vertex_dim": -1, "t": 0}
    return ParamVariety("seg23-hyperplane-section", params, coords, frozenset({SMOOTH}), expected, "xi")


def quartic_cone() -> ParamVariety:
    """Cone with vertex a plane over the rational normal quartic curve."""
    cone = cone_over(rational_normal_curve(4), 3)
    expected = {"n": 4, "r": 7, "s": 6, "delta": 1, "f": 3, "gamma": 3, "t": 3, "vertex_dim": 2}
    return replace(cone, name="quartic-cone", expected=expected, case="i", _cache={})


# -- builtin registry -------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    """A builtin family: name pattern, argument count and builder."""

    pattern: str
    description: str
    arity: int
    builder: Callable[..., ParamVariety]
    example: str


def _cone_builtin(k: str, *rest: str) -> ParamVariety:
    if not rest:
        raise CatalogError("Cone builtin needs a base variety, e.g. cone:1:veronese:2:2")
    base = build_builtin(":".join(rest))
    cone = cone_over(base, _integer(k, "k"))
    if base.name == "veronese:2:2" and cone.n == 3:
        expected = dict(cone.expected)
        expected.update({"s": 5, "delta": 1, "f": 2, "gamma": 2, "epsilon": 2, "t": 1,
                         "theta_formula": 3, "vertex_dim": 0})
        return replace(cone, expected=expected, _cache={})
    return cone


def _integer(text: str, label: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise CatalogError(f"Argument '{label}' must be an integer", details={label: text}) from None
    return value


CATALOG: Tuple[CatalogEntry, ...] = (
    CatalogEntry("veronese:N:D", "d-th Veronese embedding of P^N", 2,
                 lambda n, d: veronese(_integer(n, "N"), _integer(d, "D")), "veronese:4:2"),
    CatalogEntry("segre:A:B", "Segre embedding of P^A x P^B", 2,
                 lambda a, b: segre(_integer(a, "A"), _integer(b, "B")), "segre:2:2"),
    CatalogEntry("linear:N", "linear space P^N", 1,
                 lambda n: linear(_integer(n, "N")), "linear:3"),
    CatalogEntry("rational-normal-curve:D", "rational normal curve of degree D", 1,
                 lambda d: rational_normal_curve(_integer(d, "D")), "rational-normal-curve:4"),
    CatalogEntry("quadric:N:RANK", "quadric N-fold of the given rank", 2,
                 lambda n, rank: quadric(_integer(n, "N"), _integer(rank, "RANK")), "quadric:3:5"),
    CatalogEntry("cone:K:<builtin>", "cone with a (K-1)-dimensional vertex over a builtin", -1,
                 _cone_builtin, "cone:1:veronese:2:2"),
    CatalogEntry("scroll-ex1", "scroll in 3-spaces over a conic of lines in a plane", 0,
                 scroll_ex1, "scroll-ex1"),
    CatalogEntry("scroll-ex2", "scroll in 3-spaces over a family of planes in a P^5", 0,
                 scroll_ex2, "scroll-ex2"),
    CatalogEntry("scroll-ex3", "tangent spaces of V(3,2) along a twisted cubic", 0,
                 scroll_ex3, "scroll-ex3"),
    CatalogEntry("v42-point-projection", "internal projection of V(4,2) from a point", 0,
                 v42_point_projection, "v42-point-projection"),
    CatalogEntry("v42-conic-projection", "projection of V(4,2) from the plane of a conic", 0,
                 v42_conic_projection, "v42-conic-projection"),
    CatalogEntry("v42-quartic-projection", "projection of V(4,2) from the span of a quartic curve", 0,
                 v42_quartic_projection, "v42-quartic-projection"),
    CatalogEntry("seg23-hyperplane-section", "hyperplane section of Seg(2,3)", 0,
                 seg23_hyperplane_section, "seg23-hyperplane-section"),
    CatalogEntry("quartic-cone", "cone with vertex a plane over the rational normal quartic", 0,
                 quartic_cone, "quartic-cone"),
)


def build_builtin(name: str) -> ParamVariety:
    """
    Resolve a builtin name like ``"segre:2:2"`` or ``"cone:1:veronese:2:2"``.

    Raises:
        CatalogError: If the family is unknown or the arguments do not fit
    """
    head, *args = name.strip().split(":")
    for entry in CATALOG:
        if entry.pattern.split(":")[0] != head:
            continue
        if entry.arity >= 0 and len(args) != entry.arity:
            raise CatalogError(
                f"Builtin '{head}' takes {entry.arity} argument(s)",
                details={"name": name, "pattern": entry.pattern}
            )
        return entry.builder(*args)
    raise CatalogError(f"Unknown builtin '{name}'", details={"known": [e.pattern for e in CATALOG]})


def pinned_fourfolds() -> List[ParamVariety]:
    """Every builtin fourfold with a pinned classification case."""
    names = [
        "segre:2:2", "veronese:4:2", "quartic-cone", "scroll-ex1", "scroll-ex2", "scroll-ex3",
        "v42-point-projection", "v42-conic-projection", "v42-quartic-projection",
        "seg23-hyperplane-section",
    ]
    return [build_builtin(name) for name in names]
