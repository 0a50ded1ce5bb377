"""Shared helpers for the test suite."""

import numpy as np
import pytest

import wishfit as wf


def null_sample(alpha: float, m: int, n: int, seed: int, stream: int = 5) -> np.ndarray:
    """Draw n independent matrices from the null model with identity scale."""
    model = wf.WishartModel(alpha=alpha, sigma=np.eye(m))
    return wf.wishart_sample(model, n, rng=wf.RngStream(seed, stream))


def random_spd(m: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((m, m + 2))
    return scale * (a @ a.T) / (m + 2) + 1e-3 * np.eye(m)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
