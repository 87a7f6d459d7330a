"""
Test Configuration and Fixtures

This module provides shared fixtures for the AC census tests: temporary
directories, small census configurations, fast genetic-search settings and
the named presentations.
"""

import random
import shutil
import tempfile
from pathlib import Path

import pytest

from src.ac_census.census import StageConfig
from src.ac_census.fixtures import AK2, AK3, ORDER_120
from src.ac_census.gasearch import GAConfig
from src.ac_census.presentation import parse_presentation, standard_presentation


@pytest.fixture
def temp_dir():
    """Create a temporary directory for testing."""
    temp_path = tempfile.mkdtemp()
    yield Path(temp_path)
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def rng():
    """Seeded random generator for property-style tests."""
    return random.Random(20240601)


@pytest.fixture
def standard():
    return standard_presentation(2)


@pytest.fixture
def ak3():
    return AK3


@pytest.fixture
def ak2():
    return AK2


@pytest.fixture
def order_120():
    return ORDER_120


@pytest.fixture
def swapped_basis():
    """(y, x): the standard tuple in the wrong order."""
    return parse_presentation("y x")


@pytest.fixture
def small_stage_config(temp_dir):
    """Census configuration small enough for unit and integration tests."""
    return StageConfig(max_total_length=4, output_path=temp_dir / "census")


@pytest.fixture
def fast_ga():
    """Generation-bounded search settings (no wall clock), reproducible."""
    return GAConfig(
        population_size=40,
        max_generations=400,
        elitism=2,
        stagnation_restart_after=60,
        wall_clock_budget=None,
        rng_seed=7,
        spot_check_rate=0.5,
    )


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "unit: mark test as a unit test")
    config.addinivalue_line("markers", "integration: mark test as an integration test")
    config.addinivalue_line("markers", "e2e: mark test as an end-to-end test")
    config.addinivalue_line("markers", "performance: mark test as a performance test")
    config.addinivalue_line("markers", "slow: mark test as slow running")


def pytest_collection_modifyitems(config, items):
    """Add markers based on test file names."""
    for item in items:
        if "test_unit" in item.nodeid:
            item.add_marker(pytest.mark.unit)
        elif "test_integration" in item.nodeid:
            item.add_marker(pytest.mark.integration)
        elif "test_e2e" in item.nodeid:
            item.add_marker(pytest.mark.e2e)
        elif "test_performance" in item.nodeid:
            item.add_marker(pytest.mark.performance)
