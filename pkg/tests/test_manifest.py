"""
Tests for reading, building and emitting manifests.
"""

import json

import pytest

from curve_ranks import monomial_curve, ranks
from exceptions import CatalogError, ManifestError, ParseError
from manifest import (
    build_curve,
    build_variety,
    curve_branches,
    dumps_manifest,
    emit_curve,
    emit_variety,
    is_curve_manifest,
    load_manifest,
    loads_manifest,
)
from variety_catalog import CONE, build_builtin, segre


class TestReading:
    """Test manifest files and JSON text."""

    def test_load_manifest(self, tmp_path):
        path = tmp_path / "segre.json"
        path.write_text(json.dumps({"builtin": "segre:2:2"}), encoding="utf-8")
        assert load_manifest(path) == {"builtin": "segre:2:2"}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ManifestError) as exc_info:
            load_manifest(tmp_path / "absent.json")
        assert isinstance(exc_info.value.original_error, OSError)

    def test_invalid_json_reports_position(self):
        with pytest.raises(ManifestError) as exc_info:
            loads_manifest('{\n  "builtin": }')
        assert exc_info.value.details["line"] == 2

    def test_top_level_must_be_object(self):
        with pytest.raises(ManifestError):
            loads_manifest("[1, 2]")

    def test_curve_detection(self):
        assert is_curve_manifest({"op": "curve", "monomial": [0, 1, 2, 3, 4]})
        assert is_curve_manifest({"degree": 4, "forms": []})
        assert not is_curve_manifest({"builtin": "segre:2:2"})


class TestBuildVariety:
    """Test variety construction from manifest nodes."""

    def test_builtin(self):
        variety = build_variety({"builtin": "veronese:2:2"})
        assert (variety.n, variety.r) == (2, 5)

    def test_explicit_chart(self):
        node = {
            "name": "twisted-cubic",
            "params": ["t"],
            "coords": ["1", "t", "t^2", "t^3"],
            "tags": ["smooth"],
        }
        variety = build_variety(node)
        assert variety.name == "twisted-cubic"
        assert (variety.n, variety.r) == (1, 3)
        assert variety.tags == frozenset({"smooth"})

    def test_cone_operation(self):
        variety = build_variety({"op": "cone", "of": {"builtin": "veronese:2:2"}, "k": 2})
        assert variety.has_tag(CONE)
        assert variety.r == 7

    def test_project_operation(self):
        node = {
            "op": "project",
            "of": {"builtin": "veronese:2:2"},
            "center": [[1, 0, 0, 0, 0, "1/2"]],
            "name": "projected",
        }
        variety = build_variety(node)
        assert variety.r == 4
        assert variety.name == "projected"

    def test_join_operation(self):
        node = {"op": "join", "of": [{"builtin": "linear:1"}, {"builtin": "linear:1"}]}
        assert build_variety(node).r == 1

    def test_join_needs_two_parts(self):
        with pytest.raises(ManifestError):
            build_variety({"op": "join", "of": [{"builtin": "linear:1"}]})

    def test_unknown_operation(self):
        with pytest.raises(ManifestError):
            build_variety({"op": "blowup", "of": {"builtin": "linear:2"}})

    def test_curve_is_not_a_variety(self):
        with pytest.raises(ManifestError):
            build_variety({"op": "curve", "monomial": [0, 1, 2, 3, 4]})

    def test_missing_coords(self):
        with pytest.raises(ManifestError) as exc_info:
            build_variety({"params": ["u"]})
        assert "coords" in exc_info.value.message

    def test_wrong_field_type(self):
        with pytest.raises(ManifestError):
            build_variety({"params": "u", "coords": ["u"]})

    def test_bad_coordinate_expression(self):
        """The failing coordinate is named in the error details."""
        with pytest.raises(ParseError) as exc_info:
            build_variety({"params": ["u"], "coords": ["1", "u*v"]})
        assert exc_info.value.details["at"] == "coords[1]"

    def test_unknown_builtin(self):
        with pytest.raises(CatalogError):
            build_variety({"builtin": "hilbert-scheme"})

    def test_center_width_mismatch(self):
        node = {"op": "project", "of": {"builtin": "linear:2"}, "center": [[1, 0]]}
        with pytest.raises(ManifestError):
            build_variety(node)

    def test_boolean_cone_index(self):
        with pytest.raises(ManifestError):
            build_variety({"op": "cone", "of": {"builtin": "linear:2"}, "k": True})


class TestBuildCurve:
    """Test curve construction."""

    def test_forms(self):
        node = {"degree": 5, "forms": ["1", "t^2", "t^3", "t^4", "t^5"], "branches": ["0", "oo"]}
        curve = build_curve(node)
        assert curve == monomial_curve((0, 2, 3, 4, 5))
        assert curve_branches(node) == ["0", "oo"]

    def test_monomial(self):
        curve = build_curve({"op": "curve", "monomial": [0, 1, 2, 3, 4]})
        assert ranks(curve).ranks == (6, 6, 4)

    def test_negative_exponent(self):
        with pytest.raises(ManifestError):
            build_curve({"op": "curve", "monomial": [0, 1, 2, 3, -4]})

    def test_numeric_branches_become_strings(self):
        assert curve_branches({"branches": [0, 1]}) == ["0", "1"]

    def test_branches_must_be_list(self):
        with pytest.raises(ManifestError):
            curve_branches({"branches": "oo"})

    def test_form_in_wrong_variable(self):
        with pytest.raises(ParseError):
            build_curve({"degree": 4, "forms": ["1", "s", "t^2", "t^3", "t^4"]})


class TestEmit:
    """Emitted manifests rebuild the same polynomials."""

    def test_emit_variety_rebuilds(self):
        original = segre(1, 2)
        rebuilt = build_variety(emit_variety(original))
        assert rebuilt.params == original.params
        assert rebuilt.coords == original.coords
        assert rebuilt.tags == original.tags

    def test_emit_builtin_scroll(self):
        original = build_builtin("scroll-ex3")
        rebuilt = build_variety(loads_manifest(dumps_manifest(emit_variety(original))))
        assert rebuilt.coords == original.coords

    def test_emit_curve(self):
        data = emit_curve(monomial_curve((0, 2, 3, 4, 5)))
        assert data == {"degree": 5, "forms": ["1", "t^2", "t^3", "t^4", "t^5"]}

    def test_dumps_is_stable(self):
        node = {"b": 1, "a": [1, 2]}
        assert dumps_manifest(node) == dumps_manifest(dict(reversed(list(node.items()))))
        assert dumps_manifest(node).startswith('{\n  "a"')
