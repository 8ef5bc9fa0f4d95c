"""Shared helpers for the test suite: seeded random matrices and parameters."""

from __future__ import annotations

import numpy as np

from dipcoh.model import ModelParams


def random_hermitian(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    return scale * (a + a.conj().T)


def random_density(rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_params(
    rng: np.random.Generator,
    *,
    j_range=(-2.0, 2.0),
    d_range=(0.0, 3.0),
    r_range=(0.2, 3.0),
    bz_range=(-3.0, 3.0),
) -> ModelParams:
    return ModelParams(
        J=rng.uniform(*j_range),
        D=rng.uniform(*d_range),
        r=rng.uniform(*r_range),
        B_z=rng.uniform(*bz_range),
    )
