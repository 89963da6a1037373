"""Shared construction helpers and independent oracles for the tests."""

import numpy as np

from nrigid import InertiaSpec, hat
from nrigid.matcore import spectral_norm


def rodrigues(axis, angle):
    """Rotation about a unit axis, written out independently of the package."""
    x, y, z = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
    k = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def random_phase(n, rng, min_sv=0.1):
    """Random full-rank 2n x n phase point with entries in [-1, 1]."""
    while True:
        z = rng.uniform(-1.0, 1.0, (2 * n, n))
        if np.linalg.svd(z, compute_uv=False)[-1] > min_sv:
            return z


def scaled_skew(n, rng, norm):
    """Random skew matrix rescaled to the requested spectral norm."""
    x = rng.uniform(-1.0, 1.0, (n, n))
    a = 0.5 * (x - x.T)
    return a * (norm / spectral_norm(a))


def standard_spec():
    return InertiaSpec([1.0, 2.0, 3.0])


def standard_pi0():
    return hat([0.5, 0.6, 0.7])
