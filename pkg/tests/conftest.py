"""
Pytest configuration and fixtures for the series-parallel coloring tests.
"""
import logging
import os
import random
import shutil
import tempfile

import pytest

from controllers.expression_controller import ExpressionEvaluator
from controllers.oracle_controller import OracleSolver
from controllers.structure_controller import StructureAnalyzer
from controllers.validation_controller import ColoringValidator
from models.digraph import OrientedDigraph
from models.solver_config import SolverConfig
from services.expression_parser import ExpressionParser
from services.fixture_service import ExpressionGenerator, FixtureService


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    path = tempfile.mkdtemp()
    yield path
    shutil.rmtree(path, ignore_errors=True)


@pytest.fixture
def solver_config():
    return SolverConfig()


@pytest.fixture
def parser():
    return ExpressionParser()


@pytest.fixture
def evaluator(solver_config):
    return ExpressionEvaluator(solver_config)


@pytest.fixture
def generator():
    return ExpressionGenerator()


@pytest.fixture
def fixtures():
    """Bundled X1..X6 expressions."""
    return FixtureService()


@pytest.fixture
def validator():
    return ColoringValidator()


@pytest.fixture
def analyzer(solver_config):
    return StructureAnalyzer(solver_config)


@pytest.fixture
def oracle(solver_config, analyzer):
    return OracleSolver(solver_config, analyzer)


@pytest.fixture
def single_arc():
    return OrientedDigraph(("u", "v"), (("u", "v"),))


@pytest.fixture
def path3():
    """Directed path v1 -> v2 -> v3."""
    return OrientedDigraph(("v1", "v2", "v3"), (("v1", "v2"), ("v2", "v3")))


@pytest.fixture
def transitive_triangle():
    return OrientedDigraph(("a", "b", "c"), (("a", "b"), ("b", "c"), ("a", "c")))


@pytest.fixture
def directed_triangle():
    return OrientedDigraph(("a", "b", "c"), (("a", "b"), ("b", "c"), ("c", "a")))


@pytest.fixture
def rng():
    """Seeded random source; every randomized test starts from seed 0."""
    return random.Random(0)


@pytest.fixture(autouse=True)
def setup_test_environment():
    """Set up test environment before each test."""
    os.environ.setdefault('LOG_LEVEL', 'WARNING')
    os.environ.setdefault('VERBOSE', 'false')

    yield

    # applications under test may reconfigure the root logger
    for handler in list(logging.getLogger().handlers):
        if isinstance(handler, logging.FileHandler):
            handler.close()
            logging.getLogger().removeHandler(handler)


# Pytest configuration
def pytest_configure(config):
    """Configure pytest."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )
    config.addinivalue_line(
        "markers", "unit: marks tests as unit tests"
    )


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers."""
    for item in items:
        # Add unit marker to all tests by default
        item.add_marker(pytest.mark.unit)

        # Exhaustive suites and the large fixtures take longer
        if "exhaustive" in item.name or "random_samples" in item.name or "x6" in item.name.lower():
            item.add_marker(pytest.mark.slow)

        # Tests that drive the whole command line application
        if "test_main" in item.nodeid or "test_cli" in item.name:
            item.add_marker(pytest.mark.integration)
