# Shared fixtures for the Bickley test suite

import pytest

from bickley.config import EvalConfig, get_grid
from bickley.harness import KiEvaluator

# Reference values of the modified Bessel functions
K0_1 = 0.42102443824070834
K1_1 = 0.6019072301972346
K0_2 = 0.11389387274953344


@pytest.fixture
def cfg():
    return EvalConfig()


@pytest.fixture(scope="module")
def ev():
    """Evaluator with a cache shared across one test module."""
    return KiEvaluator(EvalConfig())


@pytest.fixture
def tiny_grid():
    return get_grid("tiny")
