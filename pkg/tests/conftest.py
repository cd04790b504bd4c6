import numpy as np
import pytest

import hideseek as hs

import reference as ref


@pytest.fixture(scope="session")
def demo3():
    return hs.make_instance(ref.THREE_SITES["origin"], ref.THREE_SITES["locations"])


@pytest.fixture(scope="session")
def demo6():
    return hs.make_instance(ref.SIX_SITES["origin"], ref.SIX_SITES["locations"])


@pytest.fixture(scope="session")
def collinear3():
    return hs.make_instance(ref.COLLINEAR_3["origin"], ref.COLLINEAR_3["locations"])


@pytest.fixture(scope="session")
def rs3():
    return hs.enumerate_routes(3)


@pytest.fixture(scope="session")
def rs6():
    return hs.enumerate_routes(6)


@pytest.fixture(scope="session")
def base3(demo3, rs3):
    return hs.base_matrix(demo3, rs3)


def random_instance(rng: np.random.Generator, n: int) -> hs.Instance:
    """Uniform coordinates in [0, 5]^2, the regime the property suites use."""
    coords = rng.uniform(0.0, 5.0, size=(n + 1, 2))
    return hs.make_instance(coords[0], coords[1:])
