"""Pure-NumPy reference kernels.

Implements the same algorithms as the compiled extension, down to sweep
order and branch structure, so either backend can serve the rest of the
package interchangeably.
"""

from __future__ import annotations

import numpy as np

from dipcoh.errors import ConvergenceError

BACKEND = "python"

#: Converged when the off-diagonal Frobenius norm drops below this factor
#: times the Frobenius norm of the input.
JACOBI_TOL_FACTOR = 1e-14
JACOBI_MAX_SWEEPS = 100


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int, n: int) -> None:
    """Annihilate a[p, q] with a phased Jacobi rotation G = diag(e^{i phi}, 1) R."""
    apq = a[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    app = a[p, p].real
    aqq = a[q, q].real
    ph = apq / mag
    theta = (aqq - app) / (2.0 * mag)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    elif theta >= 0.0:
        t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    a[p, p] = app - t * mag
    a[q, q] = aqq + t * mag
    a[p, q] = 0.0
    a[q, p] = 0.0
    cph = np.conj(ph)
    for j in range(n):
        if j == p or j == q:
            continue
        apj = a[p, j]
        aqj = a[q, j]
        a[p, j] = cph * c * apj - s * aqj
        a[q, j] = cph * s * apj + c * aqj
        a[j, p] = np.conj(a[p, j])
        a[j, q] = np.conj(a[q, j])
    for j in range(n):
        vjp = v[j, p]
        vjq = v[j, q]
        v[j, p] = ph * c * vjp - s * vjq
        v[j, q] = ph * s * vjp + c * vjq


def jacobi_eigh(a) -> tuple[np.ndarray, np.ndarray, int]:
    """Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Returns ``(values, vectors, sweeps)``: the final diagonal (unsorted),
    the accumulated unitary whose column ``k`` pairs with ``values[k]``,
    and the number of full sweeps used. The pivot walks the upper triangle
    row by row; the caller is responsible for Hermiticity of the input.

    Raises ConvergenceError after 100 sweeps without convergence.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.sqrt(np.sum(np.abs(a) ** 2)))
    if scale == 0.0:
        return np.zeros(n), v, 0
    tol = JACOBI_TOL_FACTOR * scale
    if _offdiag_norm(a) <= tol:
        return np.diag(a).real.copy(), v, 0
    for sweep in range(1, JACOBI_MAX_SWEEPS + 1):
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q, n)
        if _offdiag_norm(a) <= tol:
            return np.diag(a).real.copy(), v, sweep
    raise ConvergenceError(_offdiag_norm(a), JACOBI_MAX_SWEEPS)


def _decoherence_rhs(h: np.ndarray, rho: np.ndarray, gamma: float) -> np.ndarray:
    comm = h @ rho - rho @ h
    return -1j * comm - (0.5 * gamma) * (h @ comm - comm @ h)


def decoherence_rk4(h, rho0, gamma: float, dt: float, nsteps: int) -> np.ndarray:
    """Integrate drho/dt = -i[H, rho] - (gamma/2)[H, [H, rho]] with fixed-step RK4.

    ``h`` is the real symmetric Hamiltonian, ``rho0`` the complex initial
    matrix; returns rho after ``nsteps`` steps of size ``dt``. No trace
    renormalization is performed.
    """
    h = np.asarray(h, dtype=np.float64)
    rho = np.array(rho0, dtype=np.complex128)
    half = 0.5 * dt
    sixth = dt / 6.0
    for _ in range(int(nsteps)):
        k1 = _decoherence_rhs(h, rho, gamma)
        k2 = _decoherence_rhs(h, rho + half * k1, gamma)
        k3 = _decoherence_rhs(h, rho + half * k2, gamma)
        k4 = _decoherence_rhs(h, rho + dt * k3, gamma)
        rho += sixth * (k1 + 2.0 * (k2 + k3) + k4)
    return rho
