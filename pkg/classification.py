"""
Fourfold classification module for matching defect invariants to known cases.

This module maps the invariants of a secant defective fourfold to the cases
of the classification of such fourfolds that are consistent with them. The
decision table is plain data (``CASE_RULES``); structural conditions that
cannot be computed from invariants ("sits in a cone over a surface") are
never decided, so a match may hold several candidate cases.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from defect_engine import InvariantReport
from exceptions import ClassificationError, InconsistencyError
from variety_catalog import SCROLL, SMOOTH

logger = logging.getLogger(__name__)

DETERMINED = "determined"
CANDIDATES = "candidate set"

NO_KNOWN_EXAMPLE = "no known example"


@dataclass(frozen=True)
class CaseRule:
    """
    One row of the decision table.

    Attributes:
        label: Case label, "i" to "xviii"
        description: Geometric description of the case
        f: Admissible fibre defects
        gamma: Admissible contact defects; None leaves gamma unconstrained
        r_min / r_max: Admissible ambient dimensions
        cone: True when the case requires X to be a cone
        scroll: True for the scroll-in-3-spaces constructions
        smooth_possible: True when smooth fourfolds occur in this case
        note: Annotation added whenever the case is a candidate
    """

    label: str
    description: str
    f: FrozenSet[int]
    gamma: Optional[FrozenSet[int]] = None
    r_min: int = 0
    r_max: Optional[int] = None
    cone: Optional[bool] = None
    scroll: bool = False
    smooth_possible: bool = False
    note: Optional[str] = None

    def exclusion(self, report: InvariantReport) -> Optional[str]:
        """Reason this case is inconsistent with ``report``, or None."""
        if report.f not in self.f:
            return f"f={report.f} not in {sorted(self.f)}"
        if self.gamma is not None and report.gamma is not None and report.gamma not in self.gamma:
            return f"gamma={report.gamma} not in {sorted(self.gamma)}"
        if report.r < self.r_min:
            return f"r={report.r} below {self.r_min}"
        if self.r_max is not None and report.r > self.r_max:
            return f"r={report.r} above {self.r_max}"
        if self.cone is True and not report.is_cone:
            return "X is not a cone"
        if self.cone is False and report.is_cone:
            return "X is a cone"
        return None


def _rule(label: str, description: str, f: Sequence[int], gamma: Optional[Sequence[int]] = None, **kwargs: Any) -> CaseRule:
    return CaseRule(
        label, description, frozenset(f),
        frozenset(gamma) if gamma is not None else None,
        **kwargs
    )


CASE_RULES: Tuple[CaseRule, ...] = (
    _rule("i", "X is a cone", (1, 2, 3), cone=True),
    _rule("ii", "X sits in a 5- or 6-dimensional cone over a curve", (1, 2), (3,)),
    _rule("iii", "X sits in a 5-dimensional cone over a surface", (1, 2), (2, 3)),
    _rule("iv", "X is the Segre variety Seg(2,2) in P^8", (2,), (2,),
          r_min=8, r_max=8, cone=False, smooth_possible=True),
    _rule("v", "scroll in 3-spaces over a conic of lines joined to a surface scroll", (1,), (2,),
          r_min=9, cone=False, scroll=True),
    _rule("vi", "scroll in 3-spaces over planes pairwise meeting at a point", (1,), (2,),
          r_min=9, cone=False, scroll=True),
    _rule("vii", "scroll in 3-spaces of tangent spaces to V(3,2) along a curve", (1,), (2,),
          r_min=9, r_max=9, cone=False, scroll=True),
    _rule("viii", "internal projection of the Veronese fourfold V(4,2) from finitely many points", (1,), (1,),
          r_min=9, r_max=14, smooth_possible=True),
    _rule("ix", "projection of V(4,2) from the plane of a conic on it", (1,), (1,),
          r_min=11, r_max=11, smooth_possible=True),
    _rule("x", "projection of V(4,2) from the 4-space of a rational normal quartic on it", (1,), (1,),
          r_min=9, r_max=9, smooth_possible=True),
    _rule("xi", "hyperplane section of the Segre variety Seg(2,3)", (1,), (1,),
          r_min=10, r_max=10, smooth_possible=True),
    _rule("xii", "sits in a cone with vertex a line over a hyperplane section of Seg(2,2), "
          "or in a cone with vertex a point over Seg(2,2)", (1,), (2,),
          r_min=9, r_max=9, smooth_possible=True),
    _rule("xiii", "sits in a cone with vertex a line over a projection of V(3,2)", (1,), (2,),
          r_min=9, r_max=11),
    _rule("xiv", "sits in a 6-dimensional cone over the Veronese surface V(2,2)", (1,), (3,),
          r_min=9, r_max=9),
    _rule("xv", "sits in a cone with vertex a line over a defective threefold in a cone over V(2,2)", (1,), (2,),
          r_min=9, r_max=9),
    _rule("xvi", "swept out by a 3-dimensional family of lines, singular along a linear space", (1,), (2,),
          r_max=13),
    _rule("xvii", "swept out by a 4-dimensional family of surfaces spanning 4-spaces", (1,), (2,),
          smooth_possible=True, note=NO_KNOWN_EXAMPLE),
    _rule("xviii", "general projection to P^9 sits in a 6-dimensional cone over V(2,2)", (1,), (3,)),
)

RULES_BY_LABEL: Dict[str, CaseRule] = {rule.label: rule for rule in CASE_RULES}


@dataclass
class CaseMatch:
    """Cases consistent with a report, with the reason for every decision."""

    labels: Tuple[str, ...]
    rationale: Dict[str, str] = field(default_factory=dict)
    excluded: Dict[str, str] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def confidence(self) -> str:
        return DETERMINED if len(self.labels) == 1 else CANDIDATES

    @property
    def is_determined(self) -> bool:
        return len(self.labels) == 1

    def summary(self) -> str:
        cases = ", ".join(f"({label})" for label in self.labels)
        prefix = "case" if self.is_determined else "candidate cases"
        return f"{prefix} {cases}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cases": list(self.labels),
            "confidence": self.confidence,
            "rationale": dict(self.rationale),
            "excluded": dict(self.excluded),
            "notes": list(self.notes),
        }


def classify_fourfold(report: InvariantReport, tags: Optional[Sequence[str]] = None) -> CaseMatch:
    """
    Match a defective fourfold's invariants against the case table.

    Structural tags ("scroll", "smooth-claimed") taken from ``tags`` or the
    report only ever shrink the candidate set. When the tags would exclude
    every candidate they are ignored and a note says so.

    Args:
        report: Invariants of the fourfold
        tags: Structural tags; the report's own tags when omitted

    Returns:
        CaseMatch with the consistent case labels

    Raises:
        ClassificationError: If the report is not of a defective fourfold
        InconsistencyError: If the invariants fit no case at all
    """
    if report.n != 4:
        raise ClassificationError(
            "Only fourfolds can be classified",
            details={"variety": report.name, "n": report.n}
        )
    if report.delta <= 0:
        raise ClassificationError(
            "Only secant defective fourfolds can be classified",
            details={"variety": report.name, "delta": report.delta}
        )

    tag_set = set(report.tags if tags is None else tags)
    match = CaseMatch(labels=())
    candidates: List[str] = []
    for rule in CASE_RULES:
        reason = rule.exclusion(report)
        if reason is None and report.epsilon == 3 and report.gamma is not None and report.gamma < 3:
            reason = "epsilon=3 forces gamma=3"
        if reason is None:
            candidates.append(rule.label)
            match.rationale[rule.label] = _rationale(rule, report)
        else:
            match.excluded[rule.label] = reason

    if not candidates:
        logger.error("No case fits %s (f=%s, gamma=%s, r=%s)", report.name, report.f, report.gamma, report.r)
        raise InconsistencyError(
            "Invariants fit no case of the classification",
            details={"variety": report.name, "f": report.f, "gamma": report.gamma, "r": report.r}
        )

    pruned = list(candidates)
    if SCROLL in tag_set:
        pruned = _prune(pruned, lambda r: r.scroll or r.label == "i", "scroll", match)
    if SMOOTH in tag_set:
        pruned = _prune(pruned, lambda r: r.smooth_possible, "smooth-claimed", match)
        match.notes.append(
            "smooth fourfolds only occur in cases (iv), (viii), (ix), (x), (xi), (xii) and possibly (xvii)"
        )
    if not pruned:
        match.notes.append("structural tags exclude every candidate; showing the invariant-only candidates")
        logger.warning("Tags %s exclude every candidate for %s", sorted(tag_set), report.name)
        pruned = candidates

    match.labels = tuple(pruned)
    for label in pruned:
        note = RULES_BY_LABEL[label].note
        if note:
            match.notes.append(f"case ({label}): {note}")
    logger.info("Classified %s as %s", report.name, match.summary())
    return match


def _prune(labels: List[str], keep, tag: str, match: CaseMatch) -> List[str]:
    kept = []
    for label in labels:
        if keep(RULES_BY_LABEL[label]):
            kept.append(label)
        else:
            match.excluded[label] = f"excluded by tag '{tag}'"
            match.rationale.pop(label, None)
    logger.debug("Tag %s kept %s", tag, kept)
    return kept


def _rationale(rule: CaseRule, report: InvariantReport) -> str:
    parts = [f"f={report.f}"]
    if rule.gamma is not None:
        parts.append(f"gamma={report.gamma}" if report.gamma is not None else "gamma unknown")
    if rule.r_min or rule.r_max is not None:
        parts.append(f"r={report.r}")
    if rule.cone is not None:
        parts.append("cone" if report.is_cone else "not a cone")
    return f"{rule.description}: " + ", ".join(parts)


def case_table() -> List[Dict[str, Any]]:
    """The decision table as rows for display."""
    rows = []
    for rule in CASE_RULES:
        r_range = f"{rule.r_min or '-'}..{rule.r_max if rule.r_max is not None else '-'}"
        rows.append({
            "case": rule.label,
            "f": ",".join(str(v) for v in sorted(rule.f)),
            "gamma": ",".join(str(v) for v in sorted(rule.gamma)) if rule.gamma else "any",
            "r": r_range,
            "cone": {True: "yes", False: "no", None: "any"}[rule.cone],
            "smooth": "yes" if rule.smooth_possible else "no",
            "description": rule.description,
        })
    return rows
