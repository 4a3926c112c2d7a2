"""/c3rf/tests/conftest.py
PyTest configuration and shared fixtures.
"""

import pytest

from c3rf.core.graph import gen_grid


@pytest.fixture(scope="session")
def test_data_dir(tmp_path_factory):
    """Create a temporary directory for test data that persists across the test session."""
    temp_dir = tmp_path_factory.mktemp("test_data")
    return temp_dir


@pytest.fixture
def temp_file(test_data_dir):
    """Provide a temporary file path for each test that needs it."""
    temp_file = test_data_dir / "test.json"
    yield temp_file
    # Cleanup
    if temp_file.exists():
        temp_file.unlink()


@pytest.fixture
def grid3():
    """Seeded 3x3 binary grid: small enough to enumerate, loopy enough to matter."""
    return gen_grid(3, seed=7)


@pytest.fixture
def grid2():
    return gen_grid(2, seed=3)


@pytest.fixture
def chain_model():
    from data.generators import DataGenerator
    return DataGenerator.two_node_chain()


@pytest.fixture
def small_corpus():
    from data.generators import DataGenerator
    return DataGenerator.grid_corpus(4, N=2, seed=11)


def pytest_configure(config):
    """Add custom markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )
