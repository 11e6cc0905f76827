"""Shared fixtures for poisson-lebesgue tests."""

import numpy as np
import pytest

from poisson_lebesgue.params import ClassParams
from poisson_lebesgue.trig import TrigPoly


def random_poly(rng, degree, *, zero_mean=True, decay=1.0):
    """Random polynomial with N(0,1)/k^decay coefficients."""
    k = np.arange(1, degree + 1, dtype=float)
    a = rng.standard_normal(degree) / k ** decay
    b = rng.standard_normal(degree) / k ** decay
    a0 = 0.0 if zero_mean else float(rng.standard_normal())
    return TrigPoly(a0, a, b)


@pytest.fixture
def rng():
    """Fixed-seed generator so every run sees the same polynomials."""
    return np.random.default_rng(20240611)


@pytest.fixture
def make_poly(rng):
    """Factory for random polynomials drawn from the shared ``rng``."""

    def _make(degree, **kwargs):
        return random_poly(rng, degree, **kwargs)

    return _make


@pytest.fixture
def classic_params():
    """α = 1, r = 1/2, β = 0, p = 1: threshold n₀ = 1225."""
    return ClassParams(alpha=1.0, r=0.5, beta=0.0, p=1.0)


@pytest.fixture
def l2_params():
    return ClassParams(alpha=1.0, r=0.5, beta=0.0, p=2.0)
