"""Two-qubit Heisenberg XXX chain with dipole coupling in a longitudinal field.

In the product basis (|uu>, |ud>, |du>, |dd>), with hbar = 1, the
Hamiltonian is the real symmetric matrix

    diag(-Bz - J/2 + D/(2 r^3),  J/2 - D/(2 r^3),
          J/2 - D/(2 r^3),       Bz - J/2 + D/(2 r^3))

with inner couplings (1,2) = (2,1) = -J - D/(2 r^3) and corner couplings
(0,3) = (3,0) = -3D/(2 r^3). It decomposes into the singlet/triplet pair
spanned by |ud>, |du> and a 2x2 block on |uu>, |dd>, so the eigensystem is
available in closed form; the numeric Jacobi route in `qops` serves as an
independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dipcoh import qops
from dipcoh.errors import ValidationError
from dipcoh.qops import EigenSystem

#: Below D = threshold * max(1, |Bz| r^3) the outer-block mixing is treated
#: as zero and the limit eigenvectors |uu>, |dd> are returned directly.
DIPOLE_BRANCH_FACTOR = 1e-13


@dataclass(frozen=True)
class ModelParams:
    """Exchange J, dipole strength D >= 0, spin distance r > 0, field B_z."""

    J: float
    D: float
    r: float
    B_z: float

    def __post_init__(self):
        for name in ("J", "D", "r", "B_z"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"{name} must be a real number") from exc
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.r <= 0.0:
            raise ValidationError(f"r must be > 0, got {self.r}")
        if self.D < 0.0:
            raise ValidationError(f"D must be >= 0, got {self.D}")


@dataclass(frozen=True)
class DerivedQuantities:
    """Convenience combinations of the couplings.

    tau = sqrt(9 D^2 + 4 Bz^2 r^6) is the outer-block splitting times 2 r^3;
    d_eff = 3D / (2 r^3) and m_eff = sqrt(Bz^2 + d_eff^2) = tau / (2 r^3) are
    the effective coupling and half-gap of that block. delta and epsilon are
    the |uu> amplitudes of its eigenvectors relative to |dd>; they satisfy
    delta * epsilon = -1 and are signed infinities (flagged) when D = 0.
    """

    tau: float
    d_eff: float
    m_eff: float
    delta: float
    epsilon: float
    singular: bool


def derived_quantities(params: ModelParams) -> DerivedQuantities:
    """Compute tau, d_eff, m_eff, delta, epsilon for one parameter point."""
    r3 = params.r ** 3
    d_eff = 1.5 * params.D / r3
    tau = math.hypot(3.0 * params.D, 2.0 * params.B_z * r3)
    m_eff = math.hypot(params.B_z, d_eff)
    if params.D == 0.0:
        sign = 1.0 if params.B_z >= 0.0 else -1.0
        return DerivedQuantities(
            tau=tau, d_eff=d_eff, m_eff=m_eff,
            delta=sign * math.inf, epsilon=-sign * math.inf, singular=True,
        )
    # Evaluate the larger-magnitude root from its formula (no cancellation)
    # and the other via delta * epsilon = -1 exactly.
    if params.B_z >= 0.0:
        delta = (2.0 * params.B_z * r3 + tau) / (3.0 * params.D)
        epsilon = -1.0 / delta
    else:
        epsilon = (2.0 * params.B_z * r3 - tau) / (3.0 * params.D)
        delta = -1.0 / epsilon
    return DerivedQuantities(
        tau=tau, d_eff=d_eff, m_eff=m_eff,
        delta=delta, epsilon=epsilon, singular=False,
    )


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """Assemble the 4x4 Hamiltonian matrix (real symmetric, complex dtype)."""
    r3 = params.r ** 3
    half_d = params.D / (2.0 * r3)
    h = np.zeros((4, 4), dtype=np.complex128)
    h[0, 0] = -params.B_z - params.J / 2.0 + half_d
    h[1, 1] = params.J / 2.0 - half_d
    h[2, 2] = params.J / 2.0 - half_d
    h[3, 3] = params.B_z - params.J / 2.0 + half_d
    h[1, 2] = h[2, 1] = -params.J - half_d
    h[0, 3] = h[3, 0] = -3.0 * half_d
    return h


def eigensystem_closed_form(params: ModelParams) -> EigenSystem:
    """Analytic eigensystem, canonically sorted and phase-gauged.

    The inner block always yields the singlet at 3J/2 and the symmetric
    combination at (-2D - J r^3)/(2 r^3); the outer block yields
    (D - J r^3 -/+ tau)/(2 r^3) with eigenvectors proportional to
    (delta, 0, 0, 1) and (epsilon, 0, 0, 1). Below the dipole branch
    threshold the outer eigenvectors degenerate to |uu> and |dd>,
    ordered by the sign of B_z.
    """
    r3 = params.r ** 3
    tau = math.hypot(3.0 * params.D, 2.0 * params.B_z * r3)
    values = np.array(
        [
            1.5 * params.J,
            (-2.0 * params.D - params.J * r3) / (2.0 * r3),
            (params.D - params.J * r3 - tau) / (2.0 * r3),
            (params.D - params.J * r3 + tau) / (2.0 * r3),
        ]
    )
    isq = 1.0 / math.sqrt(2.0)
    vectors = np.zeros((4, 4), dtype=np.complex128)
    vectors[1, 0] = -isq
    vectors[2, 0] = isq
    vectors[1, 1] = isq
    vectors[2, 1] = isq
    if params.D <= DIPOLE_BRANCH_FACTOR * max(1.0, abs(params.B_z) * r3):
        # Dipole-off limit: field eigenstates, lower energy first.
        lo, hi = (0, 3) if params.B_z >= 0.0 else (3, 0)
        vectors[lo, 2] = 1.0
        vectors[hi, 3] = 1.0
    else:
        dq = derived_quantities(params)
        n_lo = math.hypot(dq.delta, 1.0)
        n_hi = math.hypot(dq.epsilon, 1.0)
        vectors[0, 2] = dq.delta / n_lo
        vectors[3, 2] = 1.0 / n_lo
        vectors[0, 3] = dq.epsilon / n_hi
        vectors[3, 3] = 1.0 / n_hi
    return qops.canonical_eigensystem(values, vectors)
