"""/c3rf/tests/utils.py
Shared test utilities and base classes.
"""

import os
import shutil
import tempfile
import unittest
from typing import Sequence

import numpy as np

from c3rf.core.types import Marginals


class BaseC3RFTest(unittest.TestCase):
    """Base class for file-producing tests with common utilities."""

    def setUp(self):
        """Set up temporary directory for test files."""
        self.test_dir = tempfile.mkdtemp()
        self.test_file = os.path.join(self.test_dir, 'test.json')

    def tearDown(self):
        """Clean up temporary files."""
        shutil.rmtree(self.test_dir, ignore_errors=True)

    def path(self, name: str) -> str:
        return os.path.join(self.test_dir, name)

    def assertMarginalsClose(self, a: Marginals, b: Marginals, atol: float = 1e-9):
        """Assert that two sets of node marginals agree entrywise."""
        assert_node_marginals_close(a.node, b.node, atol)


def assert_node_marginals_close(a: Sequence[np.ndarray], b: Sequence[np.ndarray], atol: float = 1e-9):
    assert len(a) == len(b)
    for va, vb in zip(a, b):
        np.testing.assert_allclose(np.asarray(va), np.asarray(vb), rtol=0, atol=atol)
