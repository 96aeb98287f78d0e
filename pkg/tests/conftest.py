import numpy as np
import pytest
from hypothesis import settings

from lacuna import (
    ClassifyOptions,
    LacunaryPattern,
    parse_poly,
)

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


# The four worked examples; everything about them is pinned by oracles in the
# individual test modules, the fixtures only centralize the inputs.

EXAMPLES = {
    "pair_and_gap": ("(z - 1/2)(2 - z)(1 + z^4)", LacunaryPattern(6, [3])),
    "clean_gap": ("(z - 1/2)(8 - z^3)", LacunaryPattern(4, [2])),
    "double_circle": ("(1 - z^2)^2", LacunaryPattern(4, [1, 3])),
    "single_double_zero": ("2 - 3z + z^3", LacunaryPattern(3, [2])),
}


@pytest.fixture(scope="session")
def examples():
    return {
        name: (parse_poly(expr), pat) for name, (expr, pat) in EXAMPLES.items()
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


@pytest.fixture
def quiet_options():
    return ClassifyOptions(generate_witnesses=False)
