"""
Shared fixtures for the engine tests.

All randomness is seeded. Expensive catalog reports are computed once per
session over one fixed 62-bit prime.
"""

import pytest
from sympy import prevprime

from config_manager import EngineSettings
from defect_engine import DefectEngine
from exact_core import RATIONALS, ExactField, RandomSource
from variety_catalog import build_builtin

# Largest prime below 2^62; fixed so failures can be replayed.
TEST_PRIME = int(prevprime(1 << 62))


@pytest.fixture(scope="session")
def modp_field():
    return ExactField.modular(TEST_PRIME)


@pytest.fixture
def rng_factory(modp_field):
    """Build a seeded RandomSource over F_p (default) or Q."""
    def make(seed=0, field=None):
        return RandomSource(seed, modp_field if field is None else field)
    return make


@pytest.fixture
def modp_rng(rng_factory):
    return rng_factory(11)


@pytest.fixture
def rational_rng(rng_factory):
    return rng_factory(11, RATIONALS)


@pytest.fixture(scope="session")
def test_settings():
    return EngineSettings(primes=2, trials=2)


@pytest.fixture(scope="session")
def engine(test_settings):
    return DefectEngine(test_settings)


@pytest.fixture(scope="session")
def catalog_report(engine, modp_field):
    """Cached single-prime full report of a builtin variety."""
    cache = {}

    def get(name, seed=0):
        key = (name, seed)
        if key not in cache:
            variety = build_builtin(name)
            cache[key] = (variety, engine.full_report(variety, RandomSource(seed, modp_field)))
        return cache[key]
    return get
