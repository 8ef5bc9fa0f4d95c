"""Coherence as Jensen-Shannon distance from the dephased state.

D(rho, sigma) = sqrt(S((rho+sigma)/2) - S(rho)/2 - S(sigma)/2) with base-2
entropies is a metric bounded by 1; coherence is the distance between a
state and its diagonal part in the computational product basis.
"""

from __future__ import annotations

import math

import numpy as np

from dipcoh import qops
from dipcoh.errors import NumericalConsistencyError

#: The JSD radicand may dip this far below zero from rounding before the
#: inputs are declared inconsistent; [-clamp, 0) is clamped to 0.
RADICAND_CLAMP = 1e-12


def dephase(rho) -> np.ndarray:
    """Zero every off-diagonal element in the computational basis.

    Diagonal entries are passed through bit-identical.
    """
    rho = qops.validate_density_matrix(rho)
    return np.diag(np.diag(rho))


def _radicand(rho, sigma) -> float:
    s_rho = qops.entropy_of_spectrum(qops.density_spectrum(rho))
    s_sigma = qops.entropy_of_spectrum(qops.density_spectrum(sigma))
    mix = (np.asarray(rho, dtype=np.complex128) + np.asarray(sigma, dtype=np.complex128)) * 0.5
    s_mix = qops.entropy_of_spectrum(qops.density_spectrum(mix))
    # Symmetric evaluation order, so jsd(rho, sigma) == jsd(sigma, rho) exactly.
    radicand = s_mix - 0.5 * (s_rho + s_sigma)
    if radicand < -RADICAND_CLAMP:
        raise NumericalConsistencyError("JSD radicand", radicand, -RADICAND_CLAMP)
    return max(radicand, 0.0)


def jsd_distance(rho, sigma) -> float:
    """Jensen-Shannon divergence distance between two density matrices."""
    return math.sqrt(_radicand(rho, sigma))


def coherence_squared(rho) -> float:
    """Squared JSD distance between rho and dephase(rho)."""
    return _radicand(rho, dephase(rho))


def coherence(rho) -> float:
    """JSD distance between rho and dephase(rho); 0 iff rho is diagonal."""
    return math.sqrt(coherence_squared(rho))
