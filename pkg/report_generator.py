"""
Report generator module for formatting engine results.

This module turns invariant reports, curve rank reports and classifications
into text tables (pandas + tabulate) and into the versioned JSON payload
printed by ``--json``.
"""

import json
import logging
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from tabulate import tabulate

from classification import CaseMatch
from curve_ranks import CurveRankReport
from checks import PASS, Check
from defect_engine import InvariantReport, SectionReport
from exceptions import ReportError
from variety_catalog import CatalogEntry

logger = logging.getLogger(__name__)

REPORT_VERSION = "1.0"

INVARIANT_LABELS = {
    "n": "dimension n",
    "chart_dim": "chart dimension",
    "r": "ambient r",
    "s": "secant dimension s",
    "s_join": "s (join oracle)",
    "sigma": "expected dimension sigma",
    "delta": "secant defect delta",
    "f": "fibre defect f",
    "t": "tangential defect t",
    "d": "dual defect d",
    "dual_dim": "dual variety dimension",
    "is_cone": "is a cone",
    "vertex_dim": "vertex dimension",
    "sff_dim": "dim II",
    "sff_image_dim": "dim image of II",
    "tangential_image_dim": "dim X1",
    "gamma": "contact defect gamma",
    "epsilon": "epsilon",
    "theta_formula": "theta (2*gamma+1-f)",
    "theta_direct": "theta (join chart)",
    "species": "species",
}


class ReportGenerator:
    """
    Format engine results as text or JSON.

    Text output goes through pandas DataFrames rendered with tabulate;
    JSON output is sorted and versioned so identical runs give identical bytes.
    """

    def __init__(self, table_format: str = "simple", json_indent: Optional[int] = 2):
        self.table_format = table_format
        self.json_indent = json_indent
        logger.info("Report generator initialized")

    def _table(self, df: pd.DataFrame) -> str:
        if df.empty:
            return "(none)"
        return tabulate(df.values.tolist(), headers=df.columns.tolist(), tablefmt=self.table_format)

    def invariant_frame(self, report: InvariantReport) -> pd.DataFrame:
        rows = []
        for key, value in report.invariants().items():
            rows.append({
                "Invariant": INVARIANT_LABELS.get(key, key),
                "Value": "-" if value is None else value,
                "Source": report.provenance.get(key, ""),
            })
        return pd.DataFrame(rows, columns=["Invariant", "Value", "Source"])

    def checks_frame(self, checks: Sequence[Check]) -> pd.DataFrame:
        return pd.DataFrame(
            [{"Check": c.name, "Status": c.status, "Detail": c.detail} for c in checks],
            columns=["Check", "Status", "Detail"]
        )

    def generate_invariant_report(self, report: InvariantReport, match: Optional[CaseMatch] = None) -> str:
        """
        Text report of one variety's invariants and checks.

        Args:
            report: Invariant report
            match: Optional classification to append

        Returns:
            Formatted text report
        """
        field = "Q" if report.field == "rational" else f"F_p, p in {report.primes}"
        lines = [
            "=" * 80,
            f"SECANT DEFECT INVARIANTS: {report.name}",
            "=" * 80,
            f"Field: {field}    Trials: {report.trials}    Seeds: {report.seeds}",
            f"Tags: {', '.join(report.tags) or '-'}",
            "",
            self._table(self.invariant_frame(report)),
            "",
            "CHECKS",
            "-" * 80,
            self._table(self.checks_frame(report.checks)),
        ]
        if match is not None:
            lines.extend(["", self.generate_classification_report(match)])
        lines.append("=" * 80)
        return "\n".join(lines)

    def generate_classification_report(self, match: CaseMatch) -> str:
        lines = [
            "CLASSIFICATION",
            "-" * 80,
            f"Result: {match.summary()} [{match.confidence}]",
        ]
        for label in match.labels:
            lines.append(f"  ({label}) {match.rationale.get(label, '')}")
        for note in match.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)

    def generate_section_report(self, report: SectionReport) -> str:
        df = pd.DataFrame({
            "Hyperplane": list(range(1, len(report.section_f) + 1)),
            "f(Y)": report.section_f,
            "t(Y)": report.section_t,
        })
        lines = [
            f"HYPERPLANE SECTIONS: {report.name} (f={report.f}, t={report.t})",
            "-" * 80,
            self._table(df),
            f"Expected f(Y)={report.expected_f}, t(Y)={report.expected_t}",
            self._table(self.checks_frame(report.checks)),
        ]
        return "\n".join(lines)

    def generate_curve_report(self, report: CurveRankReport) -> str:
        """Text report of curve totals, ranks, branches and identity checks."""
        totals = pd.DataFrame([{f"T{k}": v for k, v in enumerate(report.totals)}])
        sums = pd.DataFrame([{
            "sum(alpha-1)": report.sums[0],
            "sum(alpha1-1)": report.sums[1],
            "sum(alpha2-1)": report.sums[2],
            "sum(alpha3-1)": report.sums[3],
        }])
        lines = [
            "=" * 80,
            f"RATIONAL CURVE IN P^4 OF DEGREE {report.degree}",
            "=" * 80,
            self._table(totals),
            "",
            self._table(sums),
            "",
            f"Ranks: n1={report.n1}  n2={report.n2}  n3={report.n3}",
        ]
        if report.branches:
            branches = pd.DataFrame([
                {"Point": str(b.point), "Orders": b.orders, "Ranks": b.ranks} for b in report.branches
            ])
            lines.extend(["", "BRANCHES", self._table(branches)])
        lines.extend(["", "CHECKS", "-" * 80, self._table(self.checks_frame(report.checks)), "=" * 80])
        return "\n".join(lines)

    def generate_catalog_report(self, entries: Sequence[CatalogEntry]) -> str:
        df = pd.DataFrame(
            [{"Builtin": e.pattern, "Example": e.example, "Description": e.description} for e in entries],
            columns=["Builtin", "Example", "Description"]
        )
        return self._table(df)

    def generate_case_table_report(self, rows: List[Dict[str, Any]]) -> str:
        columns = ["case", "f", "gamma", "r", "cone", "smooth", "description"]
        return self._table(pd.DataFrame(rows, columns=columns))

    def generate_selftest_report(self, rows: List[Dict[str, Any]]) -> str:
        df = pd.DataFrame(rows, columns=["Case", "Status", "Detail"])
        passed = int((df["Status"] == PASS).sum()) if not df.empty else 0
        return "\n".join([
            "SELFTEST",
            "-" * 80,
            self._table(df),
            f"{passed}/{len(df)} passed",
        ])

    # -- machine output ------------------------------------------------------

    def build_payload(
        self,
        input_label: str,
        field: str,
        invariants: Dict[str, Any],
        checks: Sequence[Check],
        seeds: Sequence[int] = (),
        primes: Sequence[int] = (),
        classification: Optional[CaseMatch] = None,
        extra: Optional[Dict[str, Any]] = None
    ) -> Dict[str, Any]:
        """Versioned JSON payload shared by every subcommand."""
        payload: Dict[str, Any] = {
            "version": REPORT_VERSION,
            "input": input_label,
            "field": field,
            "seeds": list(seeds),
            "primes": list(primes),
            "invariants": dict(invariants),
            "checks": [c.to_dict() for c in checks],
        }
        if classification is not None:
            payload["classification"] = classification.to_dict()
        if extra:
            payload.update(extra)
        return payload

    def invariant_payload(self, input_label: str, report: InvariantReport,
                          match: Optional[CaseMatch] = None) -> Dict[str, Any]:
        return self.build_payload(
            input_label, report.field, report.invariants(), report.checks,
            report.seeds, report.primes, match,
            extra={"provenance": dict(report.provenance), "tags": list(report.tags)}
        )

    def curve_payload(self, input_label: str, report: CurveRankReport) -> Dict[str, Any]:
        return self.build_payload(input_label, "rational", report.to_dict(), report.checks)

    def to_json(self, payload: Dict[str, Any]) -> str:
        """
        Serialize with sorted keys.

        Raises:
            ReportError: If the payload holds a value JSON cannot represent
        """
        try:
            return json.dumps(payload, sort_keys=True, indent=self.json_indent)
        except (TypeError, ValueError) as exc:
            raise ReportError(
                "Report payload is not JSON serializable",
                details={"error": str(exc)},
                original_error=exc
            ) from exc
