# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: initializedcheck=False
# cython: cdivision=True
"""Compiled kernels: cyclic complex Jacobi eigensolver and a fixed-step RK4
integrator for the double-commutator master equation.

Mirrors dipcoh._kernels._pure algorithm for algorithm; that module is the
reference implementation and documents the shared conventions.
"""

import numpy as np

from libc.math cimport sqrt

from dipcoh.errors import ConvergenceError

BACKEND = "compiled"

cdef double JACOBI_TOL_FACTOR = 1e-14
cdef int JACOBI_MAX_SWEEPS = 100


cdef inline double _cabs(double complex z):
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef double _offdiag_norm(double complex[:, ::1] a, Py_ssize_t n):
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    cdef double complex z
    for i in range(n):
        for j in range(n):
            if i != j:
                z = a[i, j]
                acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)


cdef void _rotate(double complex[:, ::1] a, double complex[:, ::1] v,
                  Py_ssize_t p, Py_ssize_t q, Py_ssize_t n):
    # Annihilate a[p, q] with a phased rotation G = diag(e^{i phi}, 1) @ R.
    cdef double complex apq = a[p, q]
    cdef double mag = _cabs(apq)
    if mag == 0.0:
        return
    cdef double app = a[p, p].real
    cdef double aqq = a[q, q].real
    cdef double complex ph = apq / mag
    cdef double theta = (aqq - app) / (2.0 * mag)
    cdef double t
    if theta > 1e150 or theta < -1e150:
        t = 0.5 / theta
    elif theta >= 0.0:
        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
    cdef double c = 1.0 / sqrt(t * t + 1.0)
    cdef double s = t * c
    a[p, p] = app - t * mag
    a[q, q] = aqq + t * mag
    a[p, q] = 0.0
    a[q, p] = 0.0
    cdef double complex cph = ph.conjugate()
    cdef Py_ssize_t j
    cdef double complex apj, aqj, vjp, vjq
    for j in range(n):
        if j == p or j == q:
            continue
        apj = a[p, j]
        aqj = a[q, j]
        a[p, j] = cph * c * apj - s * aqj
        a[q, j] = cph * s * apj + c * aqj
        a[j, p] = a[p, j].conjugate()
        a[j, q] = a[q, j].conjugate()
    for j in range(n):
        vjp = v[j, p]
        vjq = v[j, q]
        v[j, p] = ph * c * vjp - s * vjq
        v[j, q] = ph * s * vjp + c * vjq


def jacobi_eigh(a_in):
    """Cyclic complex Jacobi; same contract as dipcoh._kernels._pure.jacobi_eigh."""
    a = np.array(a_in, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("jacobi_eigh expects a square matrix")
    cdef double complex[:, ::1] am = a
    cdef Py_ssize_t n = am.shape[0]
    v = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] vm = v
    cdef double scale = 0.0
    cdef Py_ssize_t i, j
    cdef double complex z
    for i in range(n):
        for j in range(n):
            z = am[i, j]
            scale += z.real * z.real + z.imag * z.imag
    scale = sqrt(scale)
    if scale == 0.0:
        return np.zeros(n), v, 0
    cdef double tol = JACOBI_TOL_FACTOR * scale
    if _offdiag_norm(am, n) <= tol:
        return np.diag(a).real.copy(), v, 0
    cdef int sweep
    cdef Py_ssize_t p, q
    for sweep in range(1, JACOBI_MAX_SWEEPS + 1):
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(am, vm, p, q, n)
        if _offdiag_norm(am, n) <= tol:
            return np.diag(a).real.copy(), v, sweep
    raise ConvergenceError(_offdiag_norm(am, n), JACOBI_MAX_SWEEPS)


# The Hamiltonian is real symmetric, so rho is carried as a real/imaginary
# pair and every matrix product below is a plain double loop the compiler
# can vectorize. Layout of the scratch block (12 contiguous 4x4 planes):
# rho, k1..k4, tmp (re/im interleaved per role), plus one commutator pair.


cdef void _comm_pair(double[:, ::1] h,
                     double[:, ::1] xre, double[:, ::1] xim,
                     double[:, ::1] ore, double[:, ::1] oim):
    # (ore, oim) = H @ X - X @ H for X = xre + i xim, H real.
    cdef Py_ssize_t i, j, k
    cdef double sre, sim
    for i in range(4):
        for j in range(4):
            sre = 0.0
            sim = 0.0
            for k in range(4):
                sre += h[i, k] * xre[k, j] - xre[i, k] * h[k, j]
                sim += h[i, k] * xim[k, j] - xim[i, k] * h[k, j]
            ore[i, j] = sre
            oim[i, j] = sim


cdef void _rhs4(double[:, ::1] h,
                double[:, ::1] xre, double[:, ::1] xim, double gamma,
                double[:, ::1] cre, double[:, ::1] cim,
                double[:, ::1] ore, double[:, ::1] oim):
    # out = -i*comm - (gamma/2) [H, comm]; -i*(a + ib) = b - ia.
    cdef Py_ssize_t i, j
    cdef double half_gamma = 0.5 * gamma
    _comm_pair(h, xre, xim, cre, cim)
    _comm_pair(h, cre, cim, ore, oim)
    for i in range(4):
        for j in range(4):
            ore[i, j] = cim[i, j] - half_gamma * ore[i, j]
            oim[i, j] = -cre[i, j] - half_gamma * oim[i, j]


def decoherence_rk4(h_in, rho_in, double gamma, double dt, long long nsteps):
    """Fixed-step RK4 for the double-commutator master equation; see _pure."""
    h = np.ascontiguousarray(np.asarray(h_in, dtype=np.float64))
    rho = np.array(rho_in, dtype=np.complex128, order="C")
    buf = np.empty((14, 4, 4), dtype=np.float64)
    cdef double[:, :, ::1] b = buf
    cdef double[:, ::1] hm = h
    cdef double[:, ::1] rre = b[0], rim = b[1]
    cdef double[:, ::1] k1re = b[2], k1im = b[3]
    cdef double[:, ::1] k2re = b[4], k2im = b[5]
    cdef double[:, ::1] k3re = b[6], k3im = b[7]
    cdef double[:, ::1] k4re = b[8], k4im = b[9]
    cdef double[:, ::1] tre = b[10], tim = b[11]
    cdef double[:, ::1] cre = b[12], cim = b[13]
    cdef double complex[:, ::1] rm = rho
    cdef Py_ssize_t i, j
    for i in range(4):
        for j in range(4):
            rre[i, j] = rm[i, j].real
            rim[i, j] = rm[i, j].imag
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef long long step
    for step in range(nsteps):
        _rhs4(hm, rre, rim, gamma, cre, cim, k1re, k1im)
        for i in range(4):
            for j in range(4):
                tre[i, j] = rre[i, j] + half * k1re[i, j]
                tim[i, j] = rim[i, j] + half * k1im[i, j]
        _rhs4(hm, tre, tim, gamma, cre, cim, k2re, k2im)
        for i in range(4):
            for j in range(4):
                tre[i, j] = rre[i, j] + half * k2re[i, j]
                tim[i, j] = rim[i, j] + half * k2im[i, j]
        _rhs4(hm, tre, tim, gamma, cre, cim, k3re, k3im)
        for i in range(4):
            for j in range(4):
                tre[i, j] = rre[i, j] + dt * k3re[i, j]
                tim[i, j] = rim[i, j] + dt * k3im[i, j]
        _rhs4(hm, tre, tim, gamma, cre, cim, k4re, k4im)
        for i in range(4):
            for j in range(4):
                rre[i, j] = rre[i, j] + sixth * (
                    k1re[i, j] + 2.0 * (k2re[i, j] + k3re[i, j]) + k4re[i, j]
                )
                rim[i, j] = rim[i, j] + sixth * (
                    k1im[i, j] + 2.0 * (k2im[i, j] + k3im[i, j]) + k4im[i, j]
                )
    for i in range(4):
        for j in range(4):
            rm[i, j] = rre[i, j] + 1j * rim[i, j]
    return rho
