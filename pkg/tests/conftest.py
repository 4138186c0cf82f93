import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", max_examples=100, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

CASES = ("StdZero", "DualZero", "Dependent", "Independent")


def random_pair(rng, case=None, log_scale=(-2.0, 2.0)):
    """One random (std, dual) input pair, optionally forced into a case
    class, with per-part magnitudes drawn log-uniformly."""
    ss = 10.0 ** rng.uniform(*log_scale)
    sd = 10.0 ** rng.uniform(*log_scale)
    std = rng.standard_normal(4) * ss
    dual = rng.standard_normal(4) * sd
    if case is None:
        case = CASES[rng.integers(0, 4)]
    if case == "StdZero":
        std = np.zeros(4)
    elif case == "DualZero":
        dual = np.zeros(4)
    elif case == "Dependent":
        std = rng.uniform(-2.0, 2.0) * dual
    return std, dual


def random_unit_pair(rng):
    """A random exactly-feasible (unit) pair: unit std, orthogonal dual."""
    qs = rng.standard_normal(4)
    qs /= np.linalg.norm(qs)
    qd = rng.standard_normal(4) * 10.0 ** rng.uniform(-1.0, 1.0)
    qd -= (qd @ qs) * qs
    return qs, qd


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
