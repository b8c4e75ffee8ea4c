"""
Tests for named consistency checks and their per-prime merging.
"""

import inspect

import curve_ranks
import defect_engine
from checks import FAIL, PASS, SKIP, Check, failed_checks, merge_checks


class TestCheck:
    """Test check construction."""

    def test_of(self):
        assert Check.of("a", True).status == PASS
        assert Check.of("a", False).status == FAIL
        assert Check.of("a", None).status == SKIP

    def test_to_dict(self):
        assert Check("plot", PASS, "0 vs 0").to_dict() == {"name": "plot", "status": PASS, "detail": "0 vs 0"}

    def test_failed_checks(self):
        checks = [Check("a", PASS), Check("b", FAIL, "x"), Check("c", SKIP)]
        assert failed_checks(checks) == [Check("b", FAIL, "x")]
        assert failed_checks([]) == []


class TestMergeChecks:
    """Test combining the checks of several primes."""

    def test_merge_fail_wins(self):
        merged = merge_checks([
            [Check("x", PASS), Check("y", SKIP)],
            [Check("x", FAIL, "bad prime"), Check("y", PASS)],
        ])
        by_name = {c.name: c for c in merged}
        assert by_name["x"].status == FAIL
        assert by_name["x"].detail == "bad prime"
        assert by_name["y"].status == PASS

    def test_merge_all_skipped(self):
        merged = merge_checks([[Check("z", SKIP)], [Check("z", SKIP)]])
        assert merged == [Check("z", SKIP)]


class TestSharedUse:
    """Both report producers use the same Check type."""

    def test_curve_module_does_not_depend_on_engine(self):
        assert "defect_engine" not in inspect.getsource(curve_ranks)
        assert Check.__module__ == "checks"
        assert curve_ranks.Check is Check
        assert defect_engine.Check is Check
