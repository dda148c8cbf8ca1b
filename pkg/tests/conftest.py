import math

import pytest

from rbm_halfplane import ModelParams, validate_and_normalize

SQRT2 = math.sqrt(2.0)


@pytest.fixture(scope="session")
def p0():
    """Reference instance: mu = (-1, -1), r = 0, identity covariance, x = 0."""
    return validate_and_normalize(ModelParams(mu=(-1.0, -1.0), r=0.0))


@pytest.fixture(scope="session")
def p0_shifted():
    """Reference drift/reflection with a nonzero starting point."""
    return validate_and_normalize(
        ModelParams(mu=(-1.0, -1.0), r=0.0, x=(0.5, 0.75))
    )


def random_transient_params(rng, mu2_sign="negative"):
    """A random valid (transient) parameter set, identity covariance."""
    while True:
        if mu2_sign == "negative":
            mu2 = rng.uniform(-3.0, -0.05)
        elif mu2_sign == "positive":
            mu2 = rng.uniform(0.05, 3.0)
        else:
            mu2 = 0.0
        mu1 = rng.uniform(-3.0, 1.0)
        r = rng.uniform(-3.0, 3.0)
        if mu1 + r * max(-mu2, 0.0) < -1e-6:
            return ModelParams(mu=(mu1, mu2), r=r)
