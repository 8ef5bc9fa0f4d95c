"""State preparation and time evolution under intrinsic decoherence.

The master equation is drho/dt = -i[H, rho] - (gamma/2)[H, [H, rho]]. Its
exact solution in the H eigenbasis multiplies each matrix element by
exp(-(gamma t / 2) (E_m - E_n)^2 - i (E_m - E_n) t): phases rotate at the
level splitting while coherences between non-degenerate levels decay.
Three independent routes are kept deliberately separate:

* `evolve_spectral` applies the exact propagator through an eigensystem;
* `closed_form_elements` evaluates the hand-reduced element formulas for
  the two-block initial state `initial_state(alpha)`;
* `evolve_stepped_oracle` integrates the master equation directly with a
  fixed-step RK4 kernel and step halving, touching no eigendecomposition.
"""

from __future__ import annotations

import math

import numpy as np

from dipcoh import _kernels, qops
from dipcoh.errors import ResourceLimitError, ValidationError
from dipcoh.model import (
    ModelParams,
    build_hamiltonian,
    derived_quantities,
    eigensystem_closed_form,
)
from dipcoh.qops import EigenSystem

#: Eigenvalue gaps at or below this are treated as degenerate by the
#: steady-state projector.
GAP_ATOL = 1e-12
#: Hard cap on RK4 steps per call; exceeding it raises ResourceLimitError.
STEP_CAP = 10_000_000


def _check_scalar(name: str, value, minimum=None) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be a real number") from exc
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_alpha(alpha) -> float:
    """Validate the mixing angle alpha in [0, pi]."""
    alpha = _check_scalar("alpha", alpha, minimum=0.0)
    if alpha > math.pi:
        raise ValidationError(f"alpha must be in [0, pi], got {alpha}")
    return alpha


def initial_state(alpha) -> np.ndarray:
    """Two-block mixture cos^2(a) |outer+><outer+| + sin^2(a) |inner+><inner+|.

    |outer+> = (|uu> + |dd>)/sqrt(2) populates the corner block,
    |inner+> = (|ud> + |du>)/sqrt(2) the inner block; alpha in [0, pi].
    """
    alpha = check_alpha(alpha)
    outer = math.cos(alpha) ** 2 / 2.0
    inner = math.sin(alpha) ** 2 / 2.0
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = rho[3, 3] = rho[0, 3] = rho[3, 0] = outer
    rho[1, 1] = rho[2, 2] = rho[1, 2] = rho[2, 1] = inner
    return rho


def evolve_spectral(
    params: ModelParams, gamma, rho0, t, *, eigensystem: EigenSystem | None = None
) -> np.ndarray:
    """Propagate rho0 to time t with the exact spectral solution.

    Uses the closed-form eigensystem unless one is supplied (pass
    `qops.hermitian_eigensystem(build_hamiltonian(params))` to force the
    numeric route).
    """
    return evolve_spectral_grid(
        params, gamma, rho0, [t], eigensystem=eigensystem
    )[0]


def evolve_spectral_grid(
    params: ModelParams, gamma, rho0, times, *, eigensystem: EigenSystem | None = None
) -> np.ndarray:
    """Propagate rho0 to every time in `times`; returns shape (len, 4, 4)."""
    gamma = _check_scalar("gamma", gamma, minimum=0.0)
    rho0 = qops.validate_density_matrix(rho0)
    times = np.asarray(times, dtype=np.float64)
    if times.ndim != 1:
        raise ValidationError("times must be a one-dimensional sequence")
    if times.size and (not np.all(np.isfinite(times)) or times.min() < 0.0):
        raise ValidationError("times must be finite and >= 0")
    if eigensystem is None:
        eigensystem = eigensystem_closed_form(params)
    v = eigensystem.vectors
    a = v.conj().T @ rho0 @ v
    de = eigensystem.values[:, None] - eigensystem.values[None, :]
    tcol = times[:, None, None]
    kernel = np.exp(-(0.5 * gamma) * tcol * de * de - 1j * de * tcol)
    return np.einsum("im,tmn,nj->tij", v, kernel * a, v.conj().T, optimize=True)


def steady_state(
    params: ModelParams, alpha, *, eigensystem: EigenSystem | None = None
) -> np.ndarray:
    """Infinite-time limit: project initial_state(alpha) onto the commutant.

    Spectral coefficients survive only where |E_m - E_n| <= 1e-12, which
    keeps exact degeneracies and kills every damped term. Independent of
    gamma (and, for this model, of J).
    """
    if eigensystem is None:
        eigensystem = eigensystem_closed_form(params)
    rho0 = initial_state(alpha)
    v = eigensystem.vectors
    a = v.conj().T @ rho0 @ v
    de = eigensystem.values[:, None] - eigensystem.values[None, :]
    a[np.abs(de) > GAP_ATOL] = 0.0
    return v @ a @ v.conj().T


def closed_form_elements(params: ModelParams, gamma, alpha, t) -> np.ndarray:
    """Evaluate the reduced element formulas for the two-block initial state.

    With m = m_eff and d = d_eff, the inner block stays frozen at
    sin^2(alpha)/2 while the outer block relaxes:

        rho11 = cos^2(a) (m^2 + Bz d - Bz d e^{-2 m^2 g t} cos 2mt) / (2 m^2)
        rho44 = cos^2(a) (m^2 - Bz d + Bz d e^{-2 m^2 g t} cos 2mt) / (2 m^2)
        rho41 = cos^2(a) (d^2 + Bz e^{-2 m^2 g t} (Bz cos 2mt - i m sin 2mt))
                / (2 m^2)

    and rho14 = conj(rho41). When m = 0 (both Bz and D zero) the outer
    block is frozen too.
    """
    gamma = _check_scalar("gamma", gamma, minimum=0.0)
    alpha = check_alpha(alpha)
    t = _check_scalar("t", t, minimum=0.0)
    dq = derived_quantities(params)
    m = dq.m_eff
    d = dq.d_eff
    bz = params.B_z
    ca2 = math.cos(alpha) ** 2
    rho = np.zeros((4, 4), dtype=np.complex128)
    inner = math.sin(alpha) ** 2 / 2.0
    rho[1, 1] = rho[2, 2] = rho[1, 2] = rho[2, 1] = inner
    if m == 0.0:
        rho[0, 0] = rho[3, 3] = rho[0, 3] = rho[3, 0] = ca2 / 2.0
        return rho
    m2 = m * m
    damp = math.exp(-2.0 * m2 * gamma * t)
    cosw = math.cos(2.0 * m * t)
    sinw = math.sin(2.0 * m * t)
    bzd = bz * d
    rho[0, 0] = ca2 * (m2 + bzd - bzd * damp * cosw) / (2.0 * m2)
    rho[3, 3] = ca2 * (m2 - bzd + bzd * damp * cosw) / (2.0 * m2)
    corner = ca2 * (d * d + bz * damp * complex(bz * cosw, -m * sinw)) / (2.0 * m2)
    rho[3, 0] = corner
    rho[0, 3] = corner.conjugate()
    return rho


def evolve_stepped_oracle(
    params: ModelParams, gamma, rho0, t, tol: float = 1e-9
) -> np.ndarray:
    """Integrate the master equation directly with fixed-step RK4.

    Step counts double until the final matrix changes by less than `tol`
    (max-abs entry) between successive refinements; the accepted result is
    the finer one. No eigendecomposition, no trace renormalization, so this
    is an independent cross-check of the spectral route. Raises
    ResourceLimitError instead of exceeding 1e7 steps.
    """
    gamma = _check_scalar("gamma", gamma, minimum=0.0)
    t = _check_scalar("t", t, minimum=0.0)
    if tol <= 0.0:
        raise ValidationError(f"tol must be > 0, got {tol}")
    h = build_hamiltonian(params)
    rho0 = qops.validate_density_matrix(rho0)
    if t == 0.0:
        return rho0.copy()
    h_real = np.ascontiguousarray(h.real)
    hnorm = float(np.sqrt(np.sum(h_real * h_real)))
    # Spectral-radius bound of the generator: |dE| <= 2 ||H||_F, so
    # |lambda| <= 2 ||H||_F (1 + gamma ||H||_F).
    rate = 2.0 * hnorm * (1.0 + gamma * hnorm) + 1e-30
    # Fourth-order error model with a 4x margin picks the starting step;
    # halving from there supplies the actual acceptance test.
    dt_target = (30.0 * tol / (t * rate)) ** 0.25 / rate
    nsteps = max(8, math.ceil(t / dt_target), math.ceil(2.0 * t * rate))
    if nsteps > STEP_CAP:
        raise ResourceLimitError(nsteps, STEP_CAP)
    prev = _kernels.decoherence_rk4(h_real, rho0, gamma, t / nsteps, nsteps)
    while True:
        nsteps *= 2
        if nsteps > STEP_CAP:
            raise ResourceLimitError(nsteps, STEP_CAP)
        cur = _kernels.decoherence_rk4(h_real, rho0, gamma, t / nsteps, nsteps)
        if float(np.max(np.abs(cur - prev))) < tol:
            return cur
        prev = cur
