"""
Main module for the secant-defect engine command line.

Subcommands:
1. invariants   - secant-defect invariants of a variety
2. curve-ranks  - ranks of a rational curve in P^4
3. classify     - fourfold classification from computed invariants
4. catalog      - list builtins, show the case table or emit a builtin as a manifest
5. selftest     - regression run over the catalog and the curve examples
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from checks import FAIL, PASS, failed_checks
from classification import case_table, classify_fourfold
from config_manager import default_config_path, get_engine_settings, load_config, merge_config
from curve_ranks import monomial_curve, rational_normal_quartic, ranks
from defect_engine import DefectEngine, InvariantReport
from exceptions import (
    CatalogError,
    ClassificationError,
    ConfigError,
    CurveRankError,
    InconsistencyError,
    ManifestError,
    ParseError,
    SecantDefectError,
)
from manifest import build_curve, build_variety, curve_branches, dumps_manifest, emit_variety, is_curve_manifest, load_manifest
from report_generator import ReportGenerator
from utils import resolve_input_path, resolve_log_path
from variety_catalog import CATALOG, ParamVariety, build_builtin, pinned_fourfolds

# Configure module-level logger
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3
EXIT_INTERRUPTED = 130

USAGE_ERRORS = (ParseError, ManifestError, CatalogError, CurveRankError, ClassificationError, ConfigError)

SELFTEST_VARIETIES = (
    "veronese:2:2", "veronese:3:2", "segre:2:2", "segre:1:2", "rational-normal-curve:3",
    "cone:1:veronese:2:2", "quartic-cone", "quadric:3:5", "quadric:3:4", "linear:3",
)
SELFTEST_SECTIONS = ("veronese:3:2", "segre:2:2")


class UsageError(Exception):
    """Raised by the argument parser instead of exiting."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def setup_logging(config: dict) -> None:
    """
    Configure logging based on config settings.

    Log records go to stderr so stdout carries only reports. A log file is
    added when ``logging.file`` is set; failing to open it is not fatal.

    Args:
        config: Configuration dictionary with logging settings
    """
    log_config = config.get("logging", {}) or {}

    log_level_str = str(log_config.get("level", "WARNING")).upper()
    log_level = getattr(logging, log_level_str, None)
    if not isinstance(log_level, int):
        logger.warning("Invalid log level '%s', defaulting to INFO", log_level_str)
        log_level = logging.INFO
        log_level_str = "INFO"

    log_format = log_config.get("format") or "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    if "%(asctime)s" not in log_format:
        log_format = "%(asctime)s - " + log_format

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]

    log_file = log_config.get("file")
    if log_file:
        try:
            log_path = resolve_log_path(log_file)
            handlers.append(logging.FileHandler(log_path, encoding="utf-8"))
        except (OSError, ValueError) as exc:
            logger.warning(
                "Unable to create log file '%s': %s. Continuing without file logging.", log_file, exc
            )

    logging.basicConfig(level=log_level, format=log_format, handlers=handlers, force=True)
    logger.info("Logging configured: level=%s, file=%s", log_level_str, "enabled" if log_file else "disabled")


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed '{text}'") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", "-c", type=str, default=argparse.SUPPRESS,
                        help="Path to configuration file (default: config.yaml)")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="Print the versioned JSON report")

    source = _Parser(add_help=False)
    group = source.add_mutually_exclusive_group(required=True)
    group.add_argument("--file", type=str, help="Manifest file (JSON)")
    group.add_argument("--builtin", type=str, help="Builtin name, e.g. segre:2:2")

    engine = _Parser(add_help=False)
    engine.add_argument("--seed", type=_seed, default=0, help="Root seed (default: 0)")
    engine.add_argument("--primes", type=int, default=None, help="Number of random primes (default: 3)")
    engine.add_argument("--trials", type=int, default=None, help="Trials per estimate (default: 3)")
    engine.add_argument("--field", choices=("modp", "rational"), default=None,
                        help="Working field (default: modp)")

    parser = _Parser(
        description="Secant defects of parameterized projective varieties",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common]
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    inv = subparsers.add_parser("invariants", parents=[common, source, engine],
                                help="Compute secant-defect invariants")
    inv.add_argument("--sections", action="store_true",
                     help="Also run the hyperplane-section suite (modp only)")

    curve = subparsers.add_parser("curve-ranks", parents=[common, source],
                                  help="Ranks of a rational curve in P^4")
    curve.add_argument("--at", action="append", default=[],
                       help="Parameter value (or 'oo') whose branch ranks to report; repeatable")
    curve.add_argument("--strict", action="store_true", help="Fail on the first identity violation")

    subparsers.add_parser("classify", parents=[common, source, engine],
                          help="Classify a secant defective fourfold")

    catalog = subparsers.add_parser("catalog", parents=[common], help="Builtin catalog")
    catalog_sub = catalog.add_subparsers(dest="catalog_command")
    catalog_sub.add_parser("list", parents=[common], help="List builtin families")
    catalog_sub.add_parser("cases", parents=[common], help="Show the fourfold case table")
    emit = catalog_sub.add_parser("emit", parents=[common], help="Print a builtin as a manifest")
    emit.add_argument("name", help="Builtin name, e.g. veronese:2:2")

    subparsers.add_parser("selftest", parents=[common, engine], help="Run the regression suite")
    return parser


def _load_settings(args: argparse.Namespace) -> Tuple[Dict[str, Any], Any]:
    if getattr(args, "config", None):
        config = load_config(Path(args.config))
    elif default_config_path().exists():
        config = load_config()
    else:
        config = merge_config({})
    settings = get_engine_settings(config).with_overrides(
        primes=getattr(args, "primes", None),
        trials=getattr(args, "trials", None),
        field=getattr(args, "field", None),
    )
    return config, settings


def _read_input(args: argparse.Namespace) -> Tuple[str, Dict[str, Any]]:
    if args.builtin:
        return args.builtin, {"builtin": args.builtin}
    path = resolve_input_path(args.file)
    return str(args.file), load_manifest(path)


def _builtin_curve(name: str) -> Dict[str, Any]:
    head, *rest = name.split(":")
    if head == "rational-normal-quartic" and not rest:
        return {"op": "curve", "monomial": [0, 1, 2, 3, 4]}
    if head == "monomial" and len(rest) == 5:
        try:
            return {"op": "curve", "monomial": [int(e) for e in rest]}
        except ValueError:
            pass
    raise CurveRankError(
        f"Unknown builtin curve '{name}'",
        details={"known": ["rational-normal-quartic", "monomial:E0:E1:E2:E3:E4"]}
    )


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")


def handle_invariants_command(args: argparse.Namespace, config: Dict[str, Any], settings) -> int:
    label, node = _read_input(args)
    variety = build_variety(node)
    engine = DefectEngine(settings)
    report = engine.consensus_report(variety, args.seed)
    generator = ReportGenerator(config["output"]["table_format"], config["output"]["json_indent"])

    sections = None
    if args.sections:
        if settings.field != "modp":
            raise ConfigError("The section suite runs over F_p only", details={"field": settings.field})
        rng = engine.field_sources(args.seed)[0]
        sections = engine.section_report(variety, rng)

    failed = not report.passed or (sections is not None and not sections.passed)
    if getattr(args, "json", False):
        payload = generator.invariant_payload(label, report)
        if sections is not None:
            payload["sections"] = {
                "f": sections.section_f,
                "t": sections.section_t,
                "checks": [c.to_dict() for c in sections.checks],
            }
        _emit(generator.to_json(payload))
    else:
        _emit(generator.generate_invariant_report(report))
        if sections is not None:
            _emit(generator.generate_section_report(sections))
    return EXIT_INCONSISTENT if failed else EXIT_OK


def handle_curve_command(args: argparse.Namespace, config: Dict[str, Any], settings) -> int:
    if args.builtin:
        label, node = args.builtin, _builtin_curve(args.builtin)
    else:
        label, node = _read_input(args)
    if not is_curve_manifest(node):
        raise ManifestError("Manifest does not describe a curve", details={"input": label})
    curve = build_curve(node)
    points = curve_branches(node) + list(args.at)
    report = ranks(curve, points, max_degree=settings.max_curve_degree,
                   strict=args.strict or settings.strict_curves)
    generator = ReportGenerator(config["output"]["table_format"], config["output"]["json_indent"])
    if getattr(args, "json", False):
        _emit(generator.to_json(generator.curve_payload(label, report)))
    else:
        _emit(generator.generate_curve_report(report))
    return EXIT_OK if report.passed else EXIT_INCONSISTENT


def handle_classify_command(args: argparse.Namespace, config: Dict[str, Any], settings) -> int:
    label, node = _read_input(args)
    variety = build_variety(node)
    report = DefectEngine(settings).consensus_report(variety, args.seed)
    match = classify_fourfold(report)
    generator = ReportGenerator(config["output"]["table_format"], config["output"]["json_indent"])
    if getattr(args, "json", False):
        _emit(generator.to_json(generator.invariant_payload(label, report, match)))
    else:
        _emit(generator.generate_invariant_report(report, match))
    return EXIT_OK if report.passed else EXIT_INCONSISTENT


def handle_catalog_command(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    generator = ReportGenerator(config["output"]["table_format"], config["output"]["json_indent"])
    if args.catalog_command == "emit":
        _emit(dumps_manifest(emit_variety(build_builtin(args.name))))
        return EXIT_OK
    if args.catalog_command == "list":
        if getattr(args, "json", False):
            rows = [{"pattern": e.pattern, "example": e.example, "description": e.description} for e in CATALOG]
            _emit(generator.to_json({"version": "1.0", "catalog": rows}))
        else:
            _emit(generator.generate_catalog_report(CATALOG))
        return EXIT_OK
    if args.catalog_command == "cases":
        if getattr(args, "json", False):
            _emit(generator.to_json({"version": "1.0", "cases": case_table()}))
        else:
            _emit(generator.generate_case_table_report(case_table()))
        return EXIT_OK
    raise UsageError("catalog needs a subcommand: list, cases or emit")


def _compare_expected(variety: ParamVariety, report: InvariantReport) -> Tuple[str, str]:
    mismatches = report.mismatches(dict(variety.expected))
    failed = [c.name for c in failed_checks(report.checks)]
    if mismatches or failed:
        detail = "; ".join(f"{k}={a} expected {e}" for k, (a, e) in sorted(mismatches.items()))
        if failed:
            detail = "; ".join(filter(None, [detail, "failed checks: " + ", ".join(failed)]))
        return FAIL, detail
    return PASS, f"{len(variety.expected)} expected values"


def run_selftest(settings, seed: int) -> List[Dict[str, str]]:
    """Run the regression suite and return one row per case."""
    engine = DefectEngine(settings)
    rows: List[Dict[str, str]] = []

    def record(case: str, action) -> None:
        try:
            status, detail = action()
        except SecantDefectError as exc:
            status, detail = FAIL, str(exc)
        rows.append({"Case": case, "Status": status, "Detail": detail})

    for name in SELFTEST_VARIETIES:
        variety = build_builtin(name)
        record(name, lambda v=variety: _compare_expected(v, engine.consensus_report(v, seed)))

    if settings.field == "modp":
        for name in SELFTEST_SECTIONS:
            variety = build_builtin(name)

            def sections(v=variety):
                report = engine.section_report(v, engine.field_sources(seed)[0])
                return (PASS if report.passed else FAIL,
                        f"f(Y)={report.section_f} t(Y)={report.section_t}")
            record(f"sections {name}", sections)

    for variety in pinned_fourfolds():
        def pinned(v=variety):
            report = engine.consensus_report(v, seed)
            match = classify_fourfold(report, sorted(v.tags))
            status, detail = _compare_expected(v, report)
            if v.case not in match.labels:
                return FAIL, f"case ({v.case}) not in {match.summary()}"
            return status, f"{match.summary()}; {detail}"
        record(f"classify {variety.name}", pinned)

    for label, curve, expected in (
        ("curve rational-normal-quartic", rational_normal_quartic(), (6, 6, 4)),
        ("curve monomial:0:2:3:4:5", monomial_curve((0, 2, 3, 4, 5)), (7, 7, 5)),
    ):
        def curve_case(c=curve, want=expected):
            report = ranks(c, max_degree=settings.max_curve_degree)
            ok = report.ranks == want and report.passed
            return (PASS if ok else FAIL, f"ranks={report.ranks} totals={report.totals}")
        record(label, curve_case)
    return rows


def handle_selftest_command(args: argparse.Namespace, config: Dict[str, Any], settings) -> int:
    rows = run_selftest(settings, args.seed)
    generator = ReportGenerator(config["output"]["table_format"], config["output"]["json_indent"])
    if getattr(args, "json", False):
        _emit(generator.to_json({"version": "1.0", "selftest": rows}))
    else:
        _emit(generator.generate_selftest_report(rows))
    return EXIT_OK if all(row["Status"] == PASS for row in rows) else EXIT_INCONSISTENT


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse ``argv`` and run one subcommand.

    Returns:
        0 on success, 2 for usage errors, 3 for inconsistencies or failed
        checks, 1 for internal errors, 130 when interrupted
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except UsageError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    try:
        config, settings = _load_settings(args)
    except ConfigError as exc:
        print(f"Configuration error: {exc.message}", file=sys.stderr)
        for key, value in exc.details.items():
            print(f"  {key}: {value}", file=sys.stderr)
        return EXIT_USAGE

    try:
        setup_logging(config)
    except Exception as exc:  # logging must never stop a run
        logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
        logger.warning("Failed to setup logging: %s. Using basic logging.", exc)

    handlers = {
        "invariants": lambda: handle_invariants_command(args, config, settings),
        "curve-ranks": lambda: handle_curve_command(args, config, settings),
        "classify": lambda: handle_classify_command(args, config, settings),
        "catalog": lambda: handle_catalog_command(args, config),
        "selftest": lambda: handle_selftest_command(args, config, settings),
    }
    try:
        return handlers[args.command]()
    except UsageError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except USAGE_ERRORS as exc:
        logger.error("Usage error: %s", exc)
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InconsistencyError as exc:
        logger.error("Inconsistency: %s", exc)
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except KeyboardInterrupt:
        logger.info("Command interrupted by user")
        print("\nCommand interrupted by user.", file=sys.stderr)
        return EXIT_INTERRUPTED
    except Exception as exc:
        logger.exception("Unexpected error: %s", exc)
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    """Main entry point for the application."""
    sys.exit(run_command())


if __name__ == "__main__":
    main()
