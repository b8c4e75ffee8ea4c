"""
Tests for the defect engine: frames, Terracini ranks, second fundamental
forms, contact invariants, cone vertices, reports and section recursion.

Catalog regressions run over one fixed prime through the session-cached
``catalog_report`` fixture; consensus and determinism tests use two primes.
"""

from dataclasses import replace
from unittest.mock import patch

import pytest

from checks import FAIL, PASS, SKIP
from config_manager import EngineSettings
from defect_engine import GAMMA_PROVENANCE, DefectEngine, QuadricSystem
from exact_core import RATIONALS, RandomSource
from exceptions import (
    CatalogError,
    ConsensusError,
    DegenerateFrameError,
    InconsistencyError,
    NonDefectiveError,
    SamplingError,
)
from polynomials import MPoly
from variety_catalog import (
    ParamVariety,
    build_builtin,
    join,
    point_variety,
    quadric,
    rational_normal_curve,
    segre,
    veronese,
)

REGRESSION = [
    "veronese:2:2",
    "veronese:3:2",
    "veronese:4:2",
    "segre:2:2",
    "segre:2:3",
    "segre:1:2",
    "rational-normal-curve:4",
    "quadric:3:5",
    "quadric:3:4",
    "linear:3",
    "cone:1:veronese:2:2",
    "quartic-cone",
    "scroll-ex1",
    "scroll-ex2",
    "scroll-ex3",
    "v42-point-projection",
    "v42-conic-projection",
    "v42-quartic-projection",
    "seg23-hyperplane-section",
]


def _cusp():
    """The cuspidal cubic (1, u^2, u^3): its chart is singular at u = 0."""
    u = MPoly.variable("u", ("u",))
    return ParamVariety("cusp", ("u",), (MPoly.constant(1, ("u",)), u ** 2, u ** 3))


class TestQuadricSystem:
    """Test the linear algebra of quadric systems."""

    def _diagonal_pair(self):
        hessians = [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
        hessians = [[[RATIONALS.convert(x) for x in row] for row in h] for h in hessians]
        conormal = [[RATIONALS.one, RATIONALS.zero], [RATIONALS.zero, RATIONALS.one]]
        return QuadricSystem.from_hessians(RATIONALS, 2, hessians, conormal)

    def test_dimension_and_kernel(self):
        system = self._diagonal_pair()
        assert system.dim == 1
        assert system.common_kernel_dim() == 0

    def test_combination_rank(self):
        system = self._diagonal_pair()
        assert system.combination([1, 0]).rank() == 1
        assert system.combination([1, 1]).rank() == 2

    def test_image_rank(self):
        system = self._diagonal_pair()
        assert system.image_rank([RATIONALS.one, RATIONALS.one]) == 2
        assert system.image_rank([RATIONALS.one, RATIONALS.zero]) == 1

    def test_restrict(self):
        """On the first axis the second quadric vanishes."""
        restricted = self._diagonal_pair().restrict([(RATIONALS.one, RATIONALS.zero)])
        assert restricted.chart_dim == 1
        assert restricted.dim == 0
        assert restricted.common_kernel_dim() == 0

    def test_empty_system(self):
        system = QuadricSystem.from_hessians(RATIONALS, 3, [], [])
        assert system.dim == -1
        assert system.common_kernel_dim() == 3
        assert system.image_rank([1, 2, 3]) == 0


class TestFrames:
    """Test tangent frames and image dimensions."""

    def test_frame_rank(self, engine, modp_rng):
        variety = veronese(2, 2)
        frame = engine.generic_frame(variety, modp_rng, 3)
        assert frame.rank == 3
        assert frame.matrix.cols == 6

    def test_zero_vector_point(self, engine, modp_field):
        u = MPoly.variable("u", ("u",))
        chart = ParamVariety("origin", ("u",), (u, u ** 2))
        with pytest.raises(SamplingError):
            engine.tangent_frame(chart, (0,), modp_field)

    def test_singular_point_rejected_for_sff(self, engine, modp_field):
        with pytest.raises(DegenerateFrameError):
            engine.second_fundamental_form(_cusp(), (0,), modp_field)

    def test_image_dim_of_join(self, engine, modp_rng):
        """The join chart of V(2,2) is 5-dimensional but its image is the secant cubic."""
        chart = join(veronese(2, 2), veronese(2, 2))
        assert engine.image_dim(chart, modp_rng) == 4

    def test_generic_frame_budget(self, modp_rng):
        engine = DefectEngine(EngineSettings(sample_retries=2, trials=1))
        with pytest.raises(DegenerateFrameError):
            engine.generic_frame(veronese(2, 2), modp_rng, 4)


class TestSecantDimension:
    """Test secant dimensions and fibre defects."""

    @pytest.mark.parametrize("name,s", [
        ("veronese:2:2", 4),
        ("segre:2:2", 7),
        ("rational-normal-curve:4", 3),
        ("segre:1:1", 3),
    ])
    def test_secant_dim(self, engine, modp_rng, name, s):
        variety = build_builtin(name)
        assert engine.secant_dim(variety, modp_rng) == s
        assert engine.secant_dim_join_oracle(variety, modp_rng) == s

    def test_fibre_defect(self, engine, modp_rng):
        assert engine.fibre_defect(segre(2, 2), modp_rng) == 2
        assert engine.fibre_defect(veronese(3, 2), modp_rng) == 1

    def test_fibre_defect_meet_disagreement(self, engine, modp_rng):
        with patch.object(engine, "_terracini", return_value=(7, 1)):
            with pytest.raises(InconsistencyError):
                engine.fibre_defect(segre(2, 2), modp_rng)

    def test_zero_dimensional_chart(self, engine, modp_rng):
        with pytest.raises(CatalogError):
            engine.secant_dim(point_variety([1, 2, 3]), modp_rng)


class TestSecondFundamentalForm:
    """Test t, d and the dimensions of the second fundamental form."""

    def test_tangential_defect(self, engine, modp_rng):
        assert engine.tangential_defect(veronese(2, 2), modp_rng) == 0
        assert engine.tangential_defect(quadric(3, 4), modp_rng) == 1
        assert engine.tangential_defect(build_builtin("linear:2"), modp_rng) == 2

    def test_dual_defect(self, engine, modp_rng):
        """P^1 x P^2 has a dual of codimension 2 while its Gauss map is finite."""
        variety = segre(1, 2)
        assert engine.dual_defect(variety, modp_rng) == 1
        assert engine.tangential_defect(variety, modp_rng) == 0

    def test_sff_of_segre(self, engine, modp_rng):
        """For Seg(2,2), II spans the full normal space and its image is a quadric surface."""
        variety = segre(2, 2)
        assert engine.sff_dim(variety, modp_rng) == 3
        assert engine.sff_image_dim(variety, modp_rng) == 2

    def test_tangential_defect_of_cone_over_curve(self, engine, modp_rng):
        assert engine.tangential_defect(build_builtin("quartic-cone"), modp_rng) == 3


class TestContactInvariants:
    """Test gamma, epsilon and theta."""

    def test_segre_contact_defects(self, engine, modp_rng):
        variety = segre(2, 2)
        assert engine.gamma(variety, modp_rng) == 2
        assert engine.epsilon(variety, modp_rng) == 2

    def test_veronese_contact_defect(self, engine, modp_rng):
        assert engine.gamma(veronese(3, 2), modp_rng) == 1

    def test_theta_oracle(self, engine, modp_rng):
        formula, direct = engine.theta_oracle(veronese(2, 2), modp_rng)
        assert formula == 2
        assert direct == formula

    def test_non_defective_rejected(self, engine, modp_rng):
        with pytest.raises(NonDefectiveError):
            engine.gamma(rational_normal_curve(4), modp_rng)
        with pytest.raises(NonDefectiveError):
            engine.theta_oracle(segre(1, 2), modp_rng)

    def test_tangential_projection_dimension(self, engine, modp_rng):
        """Projecting V(3,2) from a tangent space leaves a threefold minus f."""
        variety = veronese(3, 2)
        frame = engine.generic_frame(variety, modp_rng, 4)
        projected = engine.tangential_projection(variety, frame.point, modp_rng.field)
        assert projected.r == variety.r - 4
        assert not projected.immersive
        assert engine.image_dim(projected, modp_rng) == 2


class TestConeVertex:
    """Test vertex detection."""

    @pytest.mark.parametrize("name,vertex", [
        ("quartic-cone", 2),
        ("veronese:2:2", -1),
        ("quadric:3:4", 0),
        ("cone:2:segre:1:1", 1),
    ])
    def test_cone_vertex(self, engine, modp_rng, name, vertex):
        assert engine.cone_vertex(build_builtin(name), modp_rng) == vertex


class TestFullReport:
    """Catalog regression and oracle agreement on single-prime reports."""

    @pytest.mark.parametrize("name", REGRESSION)
    def test_catalog_regression(self, catalog_report, name):
        """Every pinned expected value matches and no check fails."""
        variety, report = catalog_report(name)
        assert report.mismatches(dict(variety.expected)) == {}
        assert report.passed, [c for c in report.checks if c.status == FAIL]

    @pytest.mark.parametrize("name", REGRESSION)
    def test_join_oracle_agrees(self, catalog_report, name):
        _, report = catalog_report(name)
        assert report.s == report.s_join
        assert report.check("terracini-join-oracle").status == PASS

    def test_segre_values(self, catalog_report):
        _, report = catalog_report("segre:2:2")
        values = (report.s, report.delta, report.f, report.gamma, report.epsilon, report.theta_formula)
        assert values == (7, 1, 2, 2, 2, 3)
        assert report.theta_direct == 3
        assert report.species == 2
        assert report.provenance["gamma"] == GAMMA_PROVENANCE

    @pytest.mark.parametrize("name", ["scroll-ex1", "scroll-ex2", "scroll-ex3"])
    def test_scroll_contact_values(self, catalog_report, name):
        """Scrolls in 3-spaces have surface contact loci: gamma 2, second species."""
        _, report = catalog_report(name)
        values = (report.s, report.delta, report.f, report.t, report.d)
        assert values == (8, 1, 1, 1, 2)
        assert (report.gamma, report.epsilon, report.species) == (2, 2, 2)
        assert report.theta_formula == report.theta_direct == 4

    def test_segre_smooth_checks(self, catalog_report):
        _, report = catalog_report("segre:2:2")
        for name in ("sff-dimension", "sff-image", "secant-bound", "theta-formula"):
            assert report.check(name).status == PASS

    def test_veronese_fourfold(self, catalog_report):
        _, report = catalog_report("veronese:4:2")
        assert (report.s, report.f, report.gamma, report.species) == (8, 1, 1, 3)

    def test_segre_23(self, catalog_report):
        _, report = catalog_report("segre:2:3")
        assert (report.s, report.f) == (9, 2)

    def test_top_fibre_defect_is_a_cone(self, catalog_report):
        _, report = catalog_report("quartic-cone")
        assert report.f == report.n - 1
        assert report.is_cone
        assert report.check("cone-at-top-fibre-defect").status == PASS

    def test_non_defective_skips_contact_checks(self, catalog_report):
        _, report = catalog_report("rational-normal-curve:4")
        assert not report.is_defective
        assert report.gamma is None
        assert report.check("contact-chain").status == SKIP
        assert report.check("theta-formula").status == SKIP

    def test_inequalities_on_defective_members(self, catalog_report):
        for name in REGRESSION:
            _, report = catalog_report(name)
            if not report.is_defective:
                continue
            assert report.r >= report.n + 3
            assert report.epsilon >= report.gamma >= report.f
            assert (report.epsilon == report.n - 1) == (report.gamma == report.n - 1)

    def test_report_over_q(self):
        engine = DefectEngine(EngineSettings(field="rational", trials=2))
        variety = veronese(2, 2)
        report = engine.consensus_report(variety, 3)
        assert report.field == "rational"
        assert report.primes == []
        assert report.mismatches(dict(variety.expected)) == {}


class TestConsensus:
    """Test multi-prime consensus and determinism."""

    def test_consensus_records_primes_and_seeds(self, engine):
        report = engine.consensus_report(veronese(2, 2), 7)
        assert len(report.primes) == 2
        assert len(report.seeds) == 2
        assert report.provenance["consensus"].startswith("2 field(s)")

    def test_identical_seeds_identical_reports(self, engine):
        first = engine.consensus_report(veronese(2, 2), 5)
        second = engine.consensus_report(veronese(2, 2), 5)
        assert first.invariants() == second.invariants()
        assert first.primes == second.primes
        assert first.seeds == second.seeds
        assert first.checks == second.checks

    def test_disagreement_raises(self, engine, modp_field):
        variety = veronese(2, 2)
        report = engine.full_report(variety, RandomSource(1, modp_field))
        other = replace(report, s=report.s + 1)
        with patch.object(DefectEngine, "full_report", side_effect=[report, other]):
            with patch("defect_engine.logger") as mock_logger:
                with pytest.raises(ConsensusError):
                    engine.consensus_report(variety, 0)
                mock_logger.error.assert_called()


class TestSections:
    """Test the hyperplane-section recursion."""

    @pytest.mark.parametrize("name,f_y,t_y", [("veronese:3:2", 0, 0), ("segre:2:2", 1, 0)])
    def test_section_recursion(self, engine, modp_rng, name, f_y, t_y):
        report = engine.section_report(build_builtin(name), modp_rng, hyperplanes=2)
        assert report.section_f == [f_y, f_y]
        assert report.section_t == [t_y, t_y]
        assert report.passed

    def test_section_of_quadric_cone(self, engine, modp_rng):
        """t drops by one on a hyperplane section of a cone over a quadric surface."""
        report = engine.section_report(quadric(3, 4), modp_rng, hyperplanes=2)
        assert report.expected_t == 0
        assert report.section_t == [0, 0]

    def test_curves_have_no_sections(self, engine, modp_rng):
        with pytest.raises(CatalogError):
            engine.section_report(rational_normal_curve(4), modp_rng)

    def test_non_immersive_chart_rejected(self, engine, modp_rng):
        chart = join(veronese(2, 2), veronese(2, 2))
        with pytest.raises(CatalogError):
            engine.section_invariants(chart, [1] * 6, modp_rng)
