import hashlib

import numpy as np
import pytest


@pytest.fixture
def rng(request):
    """Deterministic per-test generator, independent of execution order."""
    seed = int.from_bytes(
        hashlib.sha256(request.node.nodeid.encode()).digest()[:4], "big")
    return np.random.default_rng(seed)
