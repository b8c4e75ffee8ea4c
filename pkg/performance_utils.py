"""
Performance utilities for timing engine computations.

Wall-clock timings are logged at DEBUG, or at INFO when profiling is enabled
through the SECANT_PROFILE environment variable.
"""

import logging
import os
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator

logger = logging.getLogger(__name__)


def is_profiling_enabled() -> bool:
    """
    Check if profiling is enabled via environment variable.

    Returns:
        True if SECANT_PROFILE is set to 'true', '1', 'yes' or 'on'
    """
    profiling_env = os.getenv("SECANT_PROFILE", "false").lower()
    return profiling_env in ("true", "1", "yes", "on")


def log_computation_performance(label: str, elapsed: float, **details: Any) -> None:
    """
    Log one timing in a structured format.

    Args:
        label: Name of the timed computation
        elapsed: Wall time in seconds
        **details: Extra key/value context (variety name, prime, ...)
    """
    level = logging.INFO if is_profiling_enabled() else logging.DEBUG
    context = ", ".join(f"{k}={v}" for k, v in sorted(details.items()))
    suffix = f" ({context})" if context else ""
    logger.log(level, "%s took %.2f ms%s", label, elapsed * 1000.0, suffix)


@contextmanager
def timed(label: str, **details: Any) -> Iterator[Dict[str, Any]]:
    """
    Time the enclosed block and log it through ``log_computation_performance``.

    Yields a dictionary whose ``elapsed`` key is filled in on exit.

    Example:
        >>> with timed("secant_dim", variety="segre:2:2") as timing:
        ...     engine.secant_dim(X, rng)
        >>> timing["elapsed"]
    """
    record: Dict[str, Any] = {"label": label, "elapsed": None}
    start = time.perf_counter()
    try:
        yield record
    finally:
        record["elapsed"] = time.perf_counter() - start
        log_computation_performance(label, record["elapsed"], **details)
