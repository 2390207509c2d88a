"""Shared fixtures"""
import random

import pytest

from models.distribution import CodeParams, Composition, Distribution

REFERENCE_PROBS = (0.0722, 0.1654, 0.3209, 0.4415)


@pytest.fixture
def reference_dist() -> Distribution:
    return Distribution(probs=REFERENCE_PROBS)


@pytest.fixture
def uniform_binary() -> Distribution:
    return Distribution(probs=(0.5, 0.5))


@pytest.fixture
def worked_params() -> CodeParams:
    """Composition (2,2): |T| = 6, m = 2"""
    return CodeParams.from_composition(Composition(counts=(2, 2)))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(2016)


@pytest.fixture
def reference_file(tmp_path):
    path = tmp_path / "reference.txt"
    path.write_text("\n".join(str(p) for p in REFERENCE_PROBS) + "\n")
    return str(path)


@pytest.fixture
def binary_file(tmp_path):
    path = tmp_path / "binary.json"
    path.write_text("[0.5, 0.5]\n")
    return str(path)
