"""
Secant-defect invariants of parameterized varieties.

``DefectEngine`` computes, from random tangent frames over an exact field:

* the secant dimension s (Terracini: span of two tangent spaces) and its
  join-chart oracle, the fibre defect f and the affine meet of two frames;
* the second fundamental form at a point, and from it the tangential defect t,
  the dual defect d and the image dimension of the quadric map;
* the tangential projection X1 and the contact invariants gamma = t(X1) + f,
  epsilon = d(X1) + f, theta = 2*gamma + 1 - f (checked against t of the join);
* the projective dimension of a common cone vertex;
* hyperplane-section recursions for f and t.

Span ranks are maximized over trials and kernel dimensions minimized, since
special points only lower the first and raise the second. ``consensus_report``
reruns ``full_report`` over several random primes and accepts only unanimous
invariants.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

from checks import SKIP, Check, failed_checks, merge_checks
from config_manager import EngineSettings
from exact_core import (
    ExactField,
    ExactMatrix,
    RandomSource,
    kernel_basis,
    random_primes,
    row_space_meet,
)
from exceptions import (
    CatalogError,
    ConsensusError,
    DegenerateFrameError,
    InconsistencyError,
    NonDefectiveError,
    SamplingError,
)
from performance_utils import timed
from variety_catalog import SMOOTH, LinearCenter, ParamVariety, hyperplane_point, join, project, random_point

logger = logging.getLogger(__name__)

GAMMA_PROVENANCE = "via reduction: t(X1) + f"
EPSILON_PROVENANCE = "via reduction: d(X1) + f"


@dataclass(frozen=True)
class TangentFrame:
    """Point vector and Jacobian rows at a parameter point; spans the cone over T_{X,x}."""

    point: Tuple[Any, ...]
    ambient: Tuple[Any, ...]
    matrix: ExactMatrix

    @property
    def rank(self) -> int:
        return self.matrix.rank()


@dataclass(frozen=True)
class QuadricSystem:
    """
    Second fundamental form at a point: a basis of symmetric matrices on
    the chart directions, one per independent conormal functional.
    """

    field: ExactField
    chart_dim: int
    quadrics: Tuple[ExactMatrix, ...]
    conormal_dim: int

    @classmethod
    def from_hessians(
        cls,
        field: ExactField,
        chart_dim: int,
        hessians: Sequence[Sequence[Sequence[Any]]],
        conormal: Sequence[Sequence[Any]]
    ) -> "QuadricSystem":
        """Apply each conormal functional across the coordinate Hessians and extract a basis."""
        pairs = [(i, j) for i in range(chart_dim) for j in range(i, chart_dim)]
        rows = []
        for functional in conormal:
            row = []
            for i, j in pairs:
                acc = field.zero
                for weight, hess in zip(functional, hessians):
                    entry = hess[i][j]
                    if weight and entry:
                        acc = field.add(acc, field.mul(weight, entry))
                row.append(acc)
            rows.append(row)
        return cls(field, chart_dim, cls._basis(field, chart_dim, pairs, rows), len(conormal))

    @staticmethod
    def _basis(field: ExactField, chart_dim: int, pairs: List[Tuple[int, int]], rows: List[List[Any]]) -> Tuple[ExactMatrix, ...]:
        if not rows or not pairs:
            return ()
        basis = ExactMatrix.from_rows(field, rows, len(pairs), convert=False).row_basis()
        quadrics = []
        for row in basis.entries:
            grid = [[field.zero] * chart_dim for _ in range(chart_dim)]
            for (i, j), value in zip(pairs, row):
                grid[i][j] = value
                grid[j][i] = value
            quadrics.append(ExactMatrix.from_rows(field, grid, chart_dim, convert=False))
        return tuple(quadrics)

    @property
    def dim(self) -> int:
        """Projective dimension of the linear system; -1 when empty."""
        return len(self.quadrics) - 1

    def common_kernel_dim(self) -> int:
        if not self.quadrics:
            return self.chart_dim
        stacked = self.quadrics[0]
        for q in self.quadrics[1:]:
            stacked = stacked.stack(q)
        return self.chart_dim - stacked.rank()

    def combination(self, weights: Sequence[Any]) -> ExactMatrix:
        f = self.field
        grid = [[f.zero] * self.chart_dim for _ in range(self.chart_dim)]
        for weight, q in zip(weights, self.quadrics):
            if not weight:
                continue
            for i in range(self.chart_dim):
                for j in range(self.chart_dim):
                    if q.entries[i][j]:
                        grid[i][j] = f.add(grid[i][j], f.mul(weight, q.entries[i][j]))
        return ExactMatrix.from_rows(f, grid, self.chart_dim, convert=False)

    def image_rank(self, direction: Sequence[Any]) -> int:
        """Rank of the differential of v -> (v^T Q v) at ``direction``."""
        if not self.quadrics:
            return 0
        rows = [q.apply(direction) for q in self.quadrics]
        return ExactMatrix.from_rows(self.field, rows, self.chart_dim, convert=False).rank()

    def restrict(self, directions: Sequence[Sequence[Any]]) -> "QuadricSystem":
        """The system W^T Q W on the span of ``directions``."""
        f = self.field
        size = len(directions)
        basis = ExactMatrix.from_rows(f, directions, self.chart_dim, convert=False)
        pairs = [(i, j) for i in range(size) for j in range(i, size)]
        rows = []
        for q in self.quadrics:
            images = [q.apply(w) for w in basis.entries]
            row = []
            for i, j in pairs:
                acc = f.zero
                for a, b in zip(basis.entries[i], images[j]):
                    if a and b:
                        acc = f.add(acc, f.mul(a, b))
                row.append(acc)
            rows.append(row)
        return QuadricSystem(f, size, self._basis(f, size, pairs, rows), self.conormal_dim)


@dataclass
class InvariantReport:
    """
    Secant-defect invariants of one variety with their provenance.

    Contact invariants (gamma, epsilon, theta, species) are None for
    non-defective input.
    """

    name: str
    field: str
    n: int
    chart_dim: int
    r: int
    s: int
    s_join: int
    sigma: int
    delta: int
    f: int
    t: int
    d: int
    dual_dim: int
    is_cone: bool
    vertex_dim: int
    sff_dim: int
    sff_image_dim: Optional[int] = None
    tangential_image_dim: Optional[int] = None
    gamma: Optional[int] = None
    epsilon: Optional[int] = None
    theta_formula: Optional[int] = None
    theta_direct: Optional[int] = None
    species: Optional[int] = None
    tags: Tuple[str, ...] = ()
    trials: int = 0
    primes: List[int] = field(default_factory=list)
    seeds: List[int] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)
    provenance: Dict[str, str] = field(default_factory=dict)

    INVARIANT_KEYS = (
        "n", "chart_dim", "r", "s", "s_join", "sigma", "delta", "f", "t", "d", "dual_dim",
        "is_cone", "vertex_dim", "sff_dim", "sff_image_dim", "tangential_image_dim",
        "gamma", "epsilon", "theta_formula", "theta_direct", "species",
    )

    @property
    def is_defective(self) -> bool:
        return self.delta > 0

    @property
    def passed(self) -> bool:
        return not failed_checks(self.checks)

    def invariants(self) -> Dict[str, Any]:
        return {key: getattr(self, key) for key in self.INVARIANT_KEYS}

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def mismatches(self, expected: Dict[str, int]) -> Dict[str, Tuple[Any, int]]:
        """Expected values the report disagrees with, as {key: (actual, expected)}."""
        actual = self.invariants()
        return {k: (actual.get(k), v) for k, v in expected.items() if actual.get(k) != v}


@dataclass
class SectionReport:
    """Hyperplane-section recursion results for one variety."""

    name: str
    f: int
    t: int
    section_f: List[int] = field(default_factory=list)
    section_t: List[int] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)

    @property
    def expected_f(self) -> int:
        return max(0, self.f - 1)

    @property
    def expected_t(self) -> int:
        return max(0, self.t - 1)

    @property
    def passed(self) -> bool:
        return not failed_checks(self.checks)


class DefectEngine:
    """
    Compute secant-defect invariants by sampling tangent frames.

    Every public operation takes the ``RandomSource`` that fixes both the
    working field and the random stream, so a call is reproducible from
    (seed, field).
    """

    def __init__(self, settings: Optional[EngineSettings] = None) -> None:
        self.settings = settings or EngineSettings()
        self.settings.validate()
        logger.info(
            "Defect engine initialized (field=%s, primes=%d, trials=%d)",
            self.settings.field, self.settings.primes, self.settings.trials
        )

    # -- random sources ---------------------------------------------------

    def rational_field(self) -> ExactField:
        return ExactField.rational(self.settings.rational_height_bits)

    def source(self, seed: int, field: Optional[ExactField] = None) -> RandomSource:
        return RandomSource(seed, field, self.settings.rational_window)

    def field_sources(self, seed: int) -> List[RandomSource]:
        """
        One random source per working field for a consensus run.

        In rational mode this is a single source over Q seeded with ``seed``.
        In prime mode the root stream draws the primes and spawns one child
        seed per prime.
        """
        if self.settings.field == "rational":
            return [self.source(seed, self.rational_field())]
        root = self.source(seed)
        primes = random_primes(root, self.settings.primes, self.settings.prime_bits)
        seeds = root.spawn_seeds(len(primes))
        return [self.source(child, ExactField.modular(p)) for p, child in zip(primes, seeds)]

    # -- frames -----------------------------------------------------------

    def tangent_frame(self, variety: ParamVariety, point: Sequence[Any], field: ExactField) -> TangentFrame:
        """
        Frame of the point vector and the n Jacobian rows at ``point``.

        Raises:
            SamplingError: If all coordinates vanish at ``point``
        """
        chart = variety.over(field)
        rows = chart.frame_rows(point)
        if not any(rows[0]):
            raise SamplingError("Point maps to the zero vector", details={"variety": variety.name})
        matrix = ExactMatrix.from_rows(field, rows, chart.r + 1, convert=False)
        return TangentFrame(tuple(point), rows[0], matrix)

    def image_dim(self, variety: ParamVariety, rng: RandomSource) -> int:
        """Projective dimension of the image: max frame rank over trials, minus one."""
        best = 0
        for _ in range(self.settings.trials):
            point, _ = random_point(variety, rng, self.settings.sample_retries)
            best = max(best, self.tangent_frame(variety, point, rng.field).rank)
        return best - 1

    def generic_frame(self, variety: ParamVariety, rng: RandomSource, rank: int) -> TangentFrame:
        """
        Random frame of the given generic rank, resampling special points.

        Raises:
            DegenerateFrameError: If the retry budget is exhausted
        """
        retries = self.settings.sample_retries
        for attempt in range(retries):
            point, _ = random_point(variety, rng, retries)
            frame = self.tangent_frame(variety, point, rng.field)
            if frame.rank == rank:
                return frame
            logger.warning(
                "Resampling %s: frame rank %d instead of %d (attempt %d)",
                variety.name, frame.rank, rank, attempt + 1
            )
        raise DegenerateFrameError(
            "Tangent frame stays rank deficient",
            details={"variety": variety.name, "rank": rank, "retries": retries}
        )

    # -- Terracini ----------------------------------------------------------

    def _terracini(self, variety: ParamVariety, rng: RandomSource, image_dim: int) -> Tuple[int, int]:
        """Max over trials of the span rank of two frames, and the meet rank at that pair."""
        best_span, best_meet = -1, None
        for trial in range(self.settings.trials):
            a = self.generic_frame(variety, rng, image_dim + 1)
            b = self.generic_frame(variety, rng, image_dim + 1)
            span = a.matrix.stack(b.matrix).rank()
            logger.debug("%s trial %d: span rank %d", variety.name, trial + 1, span)
            if span > best_span:
                best_span = span
                best_meet = row_space_meet(a.matrix, b.matrix).rank()
        return best_span - 1, best_meet

    def secant_dim(self, variety: ParamVariety, rng: RandomSource) -> int:
        """
        Dimension s of the secant variety via Terracini's lemma.

        Raises:
            CatalogError: If the chart is zero-dimensional
        """
        self._require_positive_dim(variety)
        image = self.image_dim(variety, rng)
        s, _ = self._terracini(variety, rng, image)
        return s

    def secant_dim_join_oracle(self, variety: ParamVariety, rng: RandomSource) -> int:
        """Image dimension of the join chart of X with itself."""
        self._require_positive_dim(variety)
        chart = join(variety.over(rng.field), variety.over(rng.field))
        return self.image_dim(chart, rng)

    def fibre_defect(self, variety: ParamVariety, rng: RandomSource) -> int:
        """
        f = 2n + 1 - s, cross-checked against the rank of the meet of two frames.

        Raises:
            InconsistencyError: If the meet rank disagrees with f
        """
        self._require_positive_dim(variety)
        image = self.image_dim(variety, rng)
        s, meet = self._terracini(variety, rng, image)
        f = 2 * image + 1 - s
        if meet != f:
            raise InconsistencyError(
                "Tangent-space meet disagrees with the fibre defect",
                details={"variety": variety.name, "f": f, "meet_rank": meet}
            )
        return f

    # -- second fundamental form -------------------------------------------

    def second_fundamental_form(
        self,
        variety: ParamVariety,
        point: Sequence[Any],
        field: ExactField,
        expected_rank: Optional[int] = None
    ) -> QuadricSystem:
        """
        Quadric system of normal components of second derivatives at ``point``.

        Raises:
            DegenerateFrameError: If the frame rank differs from ``expected_rank``
                (n + 1 for immersive charts when not given)
        """
        chart = variety.over(field)
        frame = self.tangent_frame(chart, point, field)
        if expected_rank is None and chart.immersive:
            expected_rank = chart.n + 1
        if expected_rank is not None and frame.rank != expected_rank:
            raise DegenerateFrameError(
                "Second fundamental form needs a generic frame",
                details={"variety": variety.name, "rank": frame.rank, "expected": expected_rank}
            )
        conormal = kernel_basis(frame.matrix)
        return QuadricSystem.from_hessians(field, chart.n, chart.hessians_at(point), conormal)

    def _systems(self, variety: ParamVariety, rng: RandomSource, image: int):
        for _ in range(self.settings.trials):
            frame = self.generic_frame(variety, rng, image + 1)
            yield frame, self.second_fundamental_form(variety, frame.point, rng.field, image + 1)

    def tangential_defect(self, variety: ParamVariety, rng: RandomSource) -> int:
        """Dimension of the general Gauss fibre: common kernel of II minus chart-fibre directions."""
        self._require_positive_dim(variety)
        image = self.image_dim(variety, rng)
        fibre = variety.n - image
        best = min(system.common_kernel_dim() for _, system in self._systems(variety, rng, image))
        return best - fibre

    def dual_defect(self, variety: ParamVariety, rng: RandomSource) -> int:
        """Kernel dimension of a random member of II, minus chart-fibre directions."""
        self._require_positive_dim(variety)
        image = self.image_dim(variety, rng)
        fibre = variety.n - image
        best = None
        for _, system in self._systems(variety, rng, image):
            weights = [rng.scalar_value() for _ in system.quadrics]
            kernel = variety.n - system.combination(weights).rank()
            best = kernel if best is None else min(best, kernel)
        return best - fibre

    def sff_dim(self, variety: ParamVariety, rng: RandomSource) -> int:
        """Projective dimension of II at a general point (max over trials)."""
        self._require_positive_dim(variety)
        image = self.image_dim(variety, rng)
        return max(system.dim for _, system in self._systems(variety, rng, image))

    def sff_image_dim(self, variety: ParamVariety, rng: RandomSource) -> int:
        """Dimension of the image of the tangent directions under the II quadrics."""
        self._require_positive_dim(variety)
        image = self.image_dim(variety, rng)
        best = -1
        for _, system in self._systems(variety, rng, image):
            direction = [rng.scalar_value() for _ in range(variety.n)]
            best = max(best, system.image_rank(direction) - 1)
        return best

    # -- tangential projection and contact invariants ---------------------

    def tangential_projection(self, variety: ParamVariety, point: Sequence[Any], field: ExactField) -> ParamVariety:
        """
        Projection X1 of X from its tangent space at ``point``.

        The chart keeps the parameters of X.

        Raises:
            CatalogError: If the tangent space leaves no room to project
        """
        frame = self.tangent_frame(variety, point, field)
        center = LinearCenter(frame.matrix.row_basis())
        projected = project(variety.over(field), center, name=f"tangential({variety.name})")
        return replace(projected, immersive=False, tags=frozenset(), expected={}, case=None, _cache={})

    def _defect_data(self, variety: ParamVariety, rng: RandomSource) -> Tuple[int, int, int, int]:
        """(image dim, s, f, delta) from one Terracini pass."""
        image = self.image_dim(variety, rng)
        s, _ = self._terracini(variety, rng, image)
        sigma = min(variety.r, 2 * image + 1)
        return image, s, 2 * image + 1 - s, sigma - s

    def _projection_of(self, variety: ParamVariety, rng: RandomSource, image: int) -> ParamVariety:
        frame = self.generic_frame(variety, rng, image + 1)
        return self.tangential_projection(variety, frame.point, rng.field)

    def _require_defective(self, variety: ParamVariety, delta: int, what: str) -> None:
        if delta <= 0:
            raise NonDefectiveError(
                f"{what} is only defined for defective varieties",
                details={"variety": variety.name, "delta": delta}
            )

    def gamma(self, variety: ParamVariety, rng: RandomSource) -> int:
        """
        Contact defect gamma = t(X1) + f.

        Raises:
            NonDefectiveError: If X is not secant defective
        """
        image, _, f, delta = self._defect_data(variety, rng)
        self._require_defective(variety, delta, "gamma")
        return self.tangential_defect(self._projection_of(variety, rng, image), rng) + f

    def epsilon(self, variety: ParamVariety, rng: RandomSource) -> int:
        """
        Bitangent contact defect epsilon = d(X1) + f.

        Raises:
            NonDefectiveError: If X is not secant defective
        """
        image, _, f, delta = self._defect_data(variety, rng)
        self._require_defective(variety, delta, "epsilon")
        return self.dual_defect(self._projection_of(variety, rng, image), rng) + f

    def theta_oracle(self, variety: ParamVariety, rng: RandomSource) -> Tuple[int, Optional[int]]:
        """
        (2*gamma + 1 - f, t of the join chart); the second entry is None when S(X) fills P^r.

        Raises:
            NonDefectiveError: If X is not secant defective
        """
        image, s, f, delta = self._defect_data(variety, rng)
        self._require_defective(variety, delta, "theta")
        gamma = self.tangential_defect(self._projection_of(variety, rng, image), rng) + f
        formula = 2 * gamma + 1 - f
        direct = None
        if s < variety.r:
            direct = self.tangential_defect(join(variety.over(rng.field), variety.over(rng.field)), rng)
        return formula, direct

    # -- cones ----------------------------------------------------------------

    def cone_vertex(self, variety: ParamVariety, rng: RandomSource) -> int:
        """
        Projective dimension of the common intersection of general tangent spaces.

        Frames are added until two consecutive frames leave the meet rank
        unchanged, the meet becomes zero, or ``vertex_max_frames`` is reached.
        Returns -1 when the tangent spaces have no common point.
        """
        self._require_positive_dim(variety)
        image = self.image_dim(variety, rng)
        meet = self.generic_frame(variety, rng, image + 1).matrix.row_basis()
        unchanged = 0
        for added in range(1, self.settings.vertex_max_frames):
            frame = self.generic_frame(variety, rng, image + 1)
            reduced = row_space_meet(meet, frame.matrix)
            if reduced.rows == meet.rows:
                unchanged += 1
            else:
                unchanged = 0
            meet = reduced
            logger.debug("%s vertex search: %d frames, meet rank %d", variety.name, added + 1, meet.rows)
            if meet.rows == 0 or unchanged >= 2:
                break
        return meet.rows - 1

    # -- reports --------------------------------------------------------------

    def full_report(self, variety: ParamVariety, rng: RandomSource) -> InvariantReport:
        """
        All invariants over the field of ``rng`` with their consistency checks.

        Oracle disagreements are recorded as FAIL checks, not raised.
        """
        self._require_positive_dim(variety)
        with timed("full_report", variety=variety.name, field=rng.field.tag):
            return self._full_report(variety, rng)

    def _full_report(self, variety: ParamVariety, rng: RandomSource) -> InvariantReport:
        chart_dim, r = variety.n, variety.r
        n = self.image_dim(variety, rng)
        s, meet = self._terracini(variety, rng, n)
        s_join = self.secant_dim_join_oracle(variety, rng)
        sigma = min(r, 2 * n + 1)
        delta = sigma - s
        f = 2 * n + 1 - s
        fibre = chart_dim - n

        kernels, dual_kernels, dims, image_ranks = [], [], [], []
        for _, system in self._systems(variety, rng, n):
            kernels.append(system.common_kernel_dim())
            weights = [rng.scalar_value() for _ in system.quadrics]
            dual_kernels.append(chart_dim - system.combination(weights).rank())
            dims.append(system.dim)
            direction = [rng.scalar_value() for _ in range(chart_dim)]
            image_ranks.append(system.image_rank(direction) - 1)
        t = min(kernels) - fibre
        d = min(dual_kernels) - fibre
        vertex_dim = self.cone_vertex(variety, rng)

        report = InvariantReport(
            name=variety.name,
            field="rational" if rng.field.is_rational else "modp",
            n=n, chart_dim=chart_dim, r=r, s=s, s_join=s_join, sigma=sigma, delta=delta, f=f,
            t=t, d=d, dual_dim=r - 1 - d, is_cone=vertex_dim >= 0, vertex_dim=vertex_dim,
            sff_dim=max(dims), sff_image_dim=max(image_ranks),
            tags=tuple(sorted(variety.tags)),
            trials=self.settings.trials,
            primes=[] if rng.field.is_rational else [rng.field.modulus],
            seeds=[rng.seed],
            provenance={
                "s": "max over trials of the span rank of two tangent frames",
                "s_join": "image dimension of the join chart",
                "t": "min over trials of the common kernel of II",
                "d": "min over trials of the kernel of a random II member",
            },
        )

        if delta > 0:
            self._contact_invariants(variety, rng, report)
        report.checks = self._checks(variety, report, meet)
        failed = [c.name for c in failed_checks(report.checks)]
        if failed:
            logger.warning("%s over %s failed checks: %s", variety.name, rng.field.tag, ", ".join(failed))
        return report

    def _contact_invariants(self, variety: ParamVariety, rng: RandomSource, report: InvariantReport) -> None:
        try:
            projected = self._projection_of(variety, rng, report.n)
            report.tangential_image_dim = self.image_dim(projected, rng)
            report.gamma = self.tangential_defect(projected, rng) + report.f
            report.epsilon = self.dual_defect(projected, rng) + report.f
        except (SamplingError, CatalogError) as exc:
            logger.warning("Contact invariants of %s unavailable: %s", variety.name, exc)
            report.provenance["gamma"] = f"unavailable: {exc}"
            return
        report.theta_formula = 2 * report.gamma + 1 - report.f
        report.species = report.n - report.gamma
        report.provenance["gamma"] = GAMMA_PROVENANCE
        report.provenance["epsilon"] = EPSILON_PROVENANCE
        report.provenance["theta_formula"] = "2*gamma + 1 - f"
        if report.s < report.r:
            secant = join(variety.over(rng.field), variety.over(rng.field))
            report.theta_direct = self.tangential_defect(secant, rng)
            report.provenance["theta_direct"] = "t of the join chart"

    def _checks(self, variety: ParamVariety, rep: InvariantReport, meet: Optional[int]) -> List[Check]:
        n, r, f = rep.n, rep.r, rep.f
        defective = rep.is_defective
        smooth = defective and variety.has_tag(SMOOTH)
        gamma_known = rep.gamma is not None
        checks = [
            Check.of("terracini-join-oracle", rep.s == rep.s_join, f"s={rep.s} join={rep.s_join}"),
            Check.of("fibre-meet", meet == f, f"f={f} meet_rank={meet}"),
            Check.of("defect-partition", f == rep.delta + max(0, 2 * n + 1 - r),
                     f"f={f} delta={rep.delta} 2n+1-r={2 * n + 1 - r}"),
            Check.of("dual-vs-gauss", rep.d >= rep.t, f"d={rep.d} t={rep.t}"),
        ]
        if not defective:
            skipped = ("tangential-projection-dim", "contact-chain", "epsilon-gamma-lemma", "theta-formula",
                       "difetti-bounds", "cone-at-top-fibre-defect", "sff-dimension", "sff-image", "secant-bound")
            checks.extend(Check(name, SKIP, "not defective") for name in skipped)
            return checks
        checks.append(Check.of(
            "tangential-projection-dim",
            rep.tangential_image_dim == n - f if rep.tangential_image_dim is not None else None,
            f"dim X1={rep.tangential_image_dim} n-f={n - f}"
        ))
        checks.append(Check.of(
            "contact-chain",
            (rep.epsilon >= rep.gamma >= f) if gamma_known else None,
            f"epsilon={rep.epsilon} gamma={rep.gamma} f={f}"
        ))
        checks.append(Check.of(
            "epsilon-gamma-lemma",
            ((rep.epsilon == n - 1) == (rep.gamma == n - 1)) if gamma_known else None,
            f"epsilon={rep.epsilon} gamma={rep.gamma} n-1={n - 1}"
        ))
        checks.append(Check.of(
            "theta-formula",
            (rep.theta_direct == rep.theta_formula) if rep.theta_direct is not None else None,
            f"formula={rep.theta_formula} direct={rep.theta_direct}"
        ))
        checks.append(Check.of("difetti-bounds", r >= n + 3 and f <= n - 1, f"r={r} n={n} f={f}"))
        checks.append(Check.of(
            "cone-at-top-fibre-defect",
            (rep.is_cone or n == 2) if f == n - 1 else None,
            f"f={f} is_cone={rep.is_cone}"
        ))
        checks.append(Check.of(
            "sff-dimension", rep.sff_dim == r - n - 1 if smooth else None,
            f"dim II={rep.sff_dim} r-n-1={r - n - 1}"
        ))
        checks.append(Check.of(
            "sff-image", rep.sff_image_dim == n - f if smooth else None,
            f"image={rep.sff_image_dim} n-f={n - f}"
        ))
        checks.append(Check.of(
            "secant-bound", 2 * r <= n * (n + 3) if smooth else None,
            f"r={r} bound={n * (n + 3) // 2}"
        ))
        return checks

    def consensus_report(self, variety: ParamVariety, seed: int) -> InvariantReport:
        """
        ``full_report`` over every working field of a consensus run.

        Raises:
            ConsensusError: If two fields disagree on any invariant
        """
        reports = [self.full_report(variety, rng) for rng in self.field_sources(seed)]
        first = reports[0]
        for other in reports[1:]:
            for key, value in first.invariants().items():
                if other.invariants()[key] != value:
                    logger.error(
                        "Consensus failure on %s for %s: %s vs %s",
                        key, variety.name, value, other.invariants()[key]
                    )
                    raise ConsensusError(
                        "Primes disagree on an invariant",
                        details={
                            "variety": variety.name,
                            "invariant": key,
                            "values": [rep.invariants()[key] for rep in reports],
                            "primes": [p for rep in reports for p in rep.primes],
                        }
                    )
        merged = replace(
            first,
            primes=[p for rep in reports for p in rep.primes],
            seeds=[s for rep in reports for s in rep.seeds],
            checks=merge_checks([rep.checks for rep in reports]),
            provenance=dict(first.provenance),
        )
        merged.provenance["consensus"] = f"{len(reports)} field(s), unanimous"
        logger.info("Consensus report for %s over %d field(s)", variety.name, len(reports))
        return merged

    # -- hyperplane sections ----------------------------------------------

    def _section_frame(
        self,
        variety: ParamVariety,
        hyperplane: Sequence[Any],
        rng: RandomSource
    ) -> Optional[Tuple[TangentFrame, ExactMatrix, List[Tuple[Any, ...]]]]:
        """Frame at a section point, the section frame and the section directions."""
        f = rng.field
        point = hyperplane_point(variety, hyperplane, rng, self.settings.hyperplane_retries)
        frame = self.tangent_frame(variety, point, f)
        if frame.rank != variety.n + 1:
            return None
        values = frame.matrix.apply(hyperplane)
        if not any(values[1:]):
            return None
        weights = kernel_basis(ExactMatrix.from_rows(f, [values], len(values), convert=False))
        rows = ExactMatrix.from_rows(f, weights, len(values), convert=False) @ frame.matrix
        directions = kernel_basis(ExactMatrix.from_rows(f, [values[1:]], variety.n, convert=False))
        return frame, rows, directions

    def _section_sample(self, variety: ParamVariety, hyperplane: Sequence[Any], rng: RandomSource):
        for _ in range(self.settings.sample_retries):
            sample = self._section_frame(variety, hyperplane, rng)
            if sample is not None:
                return sample
            logger.warning("Resampling a section point of %s", variety.name)
        raise DegenerateFrameError("No generic section point found", details={"variety": variety.name})

    def section_invariants(self, variety: ParamVariety, hyperplane: Sequence[Any], rng: RandomSource) -> Tuple[int, int]:
        """
        (f, t) of the section X ∩ {h = 0}, from restricted frames and restricted II.

        Raises:
            CatalogError: If the chart is not immersive
            SamplingError: If no section point is found
        """
        if not variety.immersive:
            raise CatalogError("Section recursion needs an immersive chart", details={"variety": variety.name})
        f_best, t_best = None, None
        for _ in range(self.settings.trials):
            frame0, rows0, dirs0 = self._section_sample(variety, hyperplane, rng)
            _, rows1, _ = self._section_sample(variety, hyperplane, rng)
            meet = rows0.rank() + rows1.rank() - rows0.stack(rows1).rank()
            system = self.second_fundamental_form(variety, frame0.point, rng.field, variety.n + 1)
            kernel = system.restrict(dirs0).common_kernel_dim()
            f_best = meet if f_best is None else min(f_best, meet)
            t_best = kernel if t_best is None else min(t_best, kernel)
        return f_best, t_best

    def section_report(self, variety: ParamVariety, rng: RandomSource, hyperplanes: Optional[int] = None) -> SectionReport:
        """
        Compare f and t of random hyperplane sections with max(0, f-1) and max(0, t-1).

        Raises:
            CatalogError: If n < 2 or the chart is not immersive
        """
        if variety.n < 2:
            raise CatalogError("Section recursion needs n >= 2", details={"variety": variety.name})
        count = hyperplanes or self.settings.section_hyperplanes
        _, _, f, _ = self._defect_data(variety, rng)
        t = self.tangential_defect(variety, rng)
        report = SectionReport(variety.name, f, t)
        for index in range(count):
            h = [rng.scalar_value() for _ in range(variety.r + 1)]
            f_y, t_y = self.section_invariants(variety, h, rng)
            report.section_f.append(f_y)
            report.section_t.append(t_y)
            logger.debug("%s section %d: f=%d t=%d", variety.name, index + 1, f_y, t_y)
        report.checks = [
            Check.of("section-fibre-defect", all(v == report.expected_f for v in report.section_f),
                     f"sections={report.section_f} expected={report.expected_f}"),
            Check.of("section-tangential-defect", all(v == report.expected_t for v in report.section_t),
                     f"sections={report.section_t} expected={report.expected_t}"),
        ]
        return report

    @staticmethod
    def _require_positive_dim(variety: ParamVariety) -> None:
        if variety.n < 1:
            raise CatalogError("Defect invariants need a chart of dimension >= 1", details={"variety": variety.name})
