"""
Variety and curve manifests.

A manifest is JSON text describing one input:

* ``{"name": ..., "params": [...], "coords": [...], "tags": [...]}``: an explicit chart
* ``{"builtin": "segre:2:2"}``: a catalog member
* ``{"op": "cone", "of": <manifest>, "k": 1}``
* ``{"op": "project", "of": <manifest>, "center": [[...], ...]}``
* ``{"op": "join", "of": [<manifest>, <manifest>]}``
* ``{"degree": 5, "forms": ["1", "t^2", ...], "branches": ["0", "oo"]}``: a rational
  curve in P^4, optionally wrapped as ``{"op": "curve", ...}`` or given by
  ``{"op": "curve", "monomial": [0, 2, 3, 4, 5]}``
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

from curve_ranks import RationalCurveP4, monomial_curve
from exceptions import ManifestError, ParseError
from expression_parser import parse_poly
from polynomials import MPoly, UPoly
from variety_catalog import LinearCenter, ParamVariety, build_builtin, cone_over, join, project

logger = logging.getLogger(__name__)

CURVE_VARIABLE = "t"
OPS = ("cone", "project", "join", "curve")


def load_manifest(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a manifest file.

    Raises:
        ManifestError: If the file is missing or not a JSON object
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(
            f"Unable to read manifest: {path}",
            details={"path": str(path)},
            original_error=exc
        ) from exc
    return loads_manifest(text, str(path))


def loads_manifest(text: str, label: str = "<string>") -> Dict[str, Any]:
    try:
        node = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(
            f"Invalid JSON in manifest: {label}",
            details={"line": exc.lineno, "column": exc.colno, "error": exc.msg},
            original_error=exc
        ) from exc
    if not isinstance(node, dict):
        raise ManifestError("Manifest must be a JSON object", details={"type": type(node).__name__})
    return node


def is_curve_manifest(node: Mapping[str, Any]) -> bool:
    return node.get("op") == "curve" or ("forms" in node and "degree" in node)


def _require(node: Mapping[str, Any], key: str, kind: type) -> Any:
    if key not in node:
        raise ManifestError(f"Manifest is missing '{key}'", details={"keys": sorted(node)})
    value = node[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ManifestError(
            f"Manifest field '{key}' has the wrong type",
            details={"key": key, "expected": kind.__name__, "type": type(value).__name__}
        )
    return value


def _parse(source: Any, variables: List[str], where: str) -> MPoly:
    if not isinstance(source, str):
        raise ManifestError(f"{where} must be an expression string", details={"value": repr(source)})
    try:
        return parse_poly(source, variables)
    except ParseError as exc:
        exc.details["at"] = where
        raise


def build_variety(node: Mapping[str, Any]) -> ParamVariety:
    """
    Build the variety a manifest node describes.

    Raises:
        ManifestError: If the node is malformed
        ParseError: If a coordinate expression does not parse
        CatalogError: If a builtin or a construction is invalid
    """
    if not isinstance(node, Mapping):
        raise ManifestError("Manifest node must be an object", details={"type": type(node).__name__})
    if "builtin" in node:
        return build_builtin(_require(node, "builtin", str))
    op = node.get("op")
    if op is None:
        return _explicit_chart(node)
    if op not in OPS or op == "curve":
        raise ManifestError(f"Unknown variety operation '{op}'", details={"allowed": list(OPS[:3])})
    if op == "cone":
        k = node.get("k", 1)
        if not isinstance(k, int) or isinstance(k, bool):
            raise ManifestError("Cone 'k' must be an integer", details={"k": k})
        return cone_over(build_variety(_require(node, "of", dict)), k)
    if op == "project":
        base = build_variety(_require(node, "of", dict))
        rows = _require(node, "center", list)
        try:
            center = LinearCenter.from_rows([_rational_row(row) for row in rows], base.r + 1)
        except ValueError as exc:
            raise ManifestError("Projection center rows must match the ambient space",
                                details={"ambient": base.r + 1}, original_error=exc) from exc
        return project(base, center, node.get("name"))
    parts = _require(node, "of", list)
    if len(parts) != 2:
        raise ManifestError("Join takes exactly two manifests", details={"count": len(parts)})
    return join(build_variety(parts[0]), build_variety(parts[1]))


def _rational_row(row: Any) -> List[Any]:
    if not isinstance(row, list):
        raise ManifestError("Center rows must be lists", details={"row": repr(row)})
    values = []
    for entry in row:
        if isinstance(entry, bool) or not isinstance(entry, (int, str)):
            raise ManifestError("Center entries must be integers or rational strings", details={"entry": repr(entry)})
        values.append(parse_poly(entry, []).constant_term() if isinstance(entry, str) else entry)
    return values


def _explicit_chart(node: Mapping[str, Any]) -> ParamVariety:
    name = node.get("name", "manifest")
    params = _require(node, "params", list)
    if not all(isinstance(p, str) for p in params):
        raise ManifestError("Parameter names must be strings", details={"params": params})
    coords_src = _require(node, "coords", list)
    coords = tuple(_parse(src, params, f"coords[{i}]") for i, src in enumerate(coords_src))
    tags = node.get("tags", [])
    if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
        raise ManifestError("Tags must be a list of strings", details={"tags": tags})
    variety = ParamVariety(str(name), tuple(params), coords, frozenset(tags))
    logger.debug("Built manifest variety %s (n=%d, r=%d)", variety.name, variety.n, variety.r)
    return variety


def build_curve(node: Mapping[str, Any]) -> RationalCurveP4:
    """
    Build the rational curve a manifest node describes. The curve is not validated here.

    Raises:
        ManifestError: If the node is malformed
        ParseError: If a form does not parse
    """
    if "monomial" in node:
        exponents = _require(node, "monomial", list)
        if not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exponents):
            raise ManifestError("Monomial exponents must be natural numbers", details={"exponents": exponents})
        return monomial_curve(exponents)
    degree = _require(node, "degree", int)
    forms_src = _require(node, "forms", list)
    forms = []
    for i, src in enumerate(forms_src):
        poly = _parse(src, [CURVE_VARIABLE], f"forms[{i}]")
        forms.append(UPoly(poly.univariate_coefficients()))
    return RationalCurveP4(degree, tuple(forms))


def curve_branches(node: Mapping[str, Any]) -> List[str]:
    """Branch points requested by a curve manifest, as strings."""
    points = node.get("branches", [])
    if not isinstance(points, list):
        raise ManifestError("'branches' must be a list", details={"branches": points})
    return [str(p) for p in points]


def emit_variety(variety: ParamVariety) -> Dict[str, Any]:
    """Explicit-chart manifest of ``variety``; parsing it gives back the same polynomials."""
    return {
        "name": variety.name,
        "params": list(variety.params),
        "coords": [c.to_expression() for c in variety.coords],
        "tags": sorted(variety.tags),
    }


def emit_curve(curve: RationalCurveP4) -> Dict[str, Any]:
    forms = []
    for form in curve.forms:
        terms = {(power,): coeff for power, coeff in enumerate(form.coeffs) if coeff}
        forms.append(MPoly((CURVE_VARIABLE,), terms).to_expression())
    return {"degree": curve.degree, "forms": forms}


def dumps_manifest(node: Mapping[str, Any]) -> str:
    return json.dumps(node, indent=2, sort_keys=True)
