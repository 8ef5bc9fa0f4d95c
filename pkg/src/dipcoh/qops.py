"""Dense complex linear algebra for 4x4 Hermitian matrices.

Density-matrix validation, a deterministic eigensolver wrapper around the
selected kernel backend, and base-2 von Neumann entropy. Everything here is
a pure function; violations raise instead of being repaired silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dipcoh import _kernels
from dipcoh.errors import (
    NegativeEigenvalueError,
    NotHermitianError,
    TraceDeviationError,
    ValidationError,
)

#: Hermiticity tolerance on max |M[i,j] - conj(M[j,i])|.
HERMITIAN_ATOL = 1e-12
#: Allowed deviation of a density-matrix trace from one.
TRACE_ATOL = 1e-10
#: Eigenvalues below this floor fail positivity; [floor, 0) counts as zero.
EIGENVALUE_FLOOR = -1e-10
#: Eigenvalues at or below this cutoff contribute nothing to the entropy.
ENTROPY_CUTOFF = 1e-12


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with orthonormal eigenvectors as columns.

    ``vectors[:, k]`` pairs with ``values[k]``. Each column is gauged so its
    largest-magnitude component (first such index on ties) is real positive.
    """

    values: np.ndarray
    vectors: np.ndarray


def as_matrix4(m) -> np.ndarray:
    """Coerce to a finite 4x4 complex128 array."""
    out = np.asarray(m, dtype=np.complex128)
    if out.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {out.shape}")
    finite = np.isfinite(out.real) & np.isfinite(out.imag)
    if not finite.all():
        i, j = np.argwhere(~finite)[0]
        raise ValidationError(f"non-finite entry {out[i, j]} at ({i}, {j})")
    return out


def _check_hermitian(m: np.ndarray) -> None:
    dev = np.abs(m - m.conj().T)
    i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
    if dev[i, j] > HERMITIAN_ATOL:
        raise NotHermitianError(int(i), int(j), float(dev[i, j]), HERMITIAN_ATOL)


def canonical_eigensystem(values, vectors) -> EigenSystem:
    """Sort ascending (stable) and fix each eigenvector's global phase.

    The phase gauge makes the largest-magnitude component of every column
    real positive, with the first index winning ties, so repeated runs and
    both kernel backends agree on the representation.
    """
    values = np.asarray(values, dtype=np.float64)
    vectors = np.asarray(vectors, dtype=np.complex128)
    order = np.argsort(values, kind="stable")
    values = np.ascontiguousarray(values[order])
    vectors = np.ascontiguousarray(vectors[:, order])
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        mag = abs(pivot)
        col = col * (np.conj(pivot) / mag)
        # the rotated pivot is real positive by construction; store its
        # modulus directly so no rounding residue survives in the gauge
        col[idx] = mag
        vectors[:, k] = col
    return EigenSystem(values=values, vectors=vectors)


def hermitian_eigensystem(h) -> EigenSystem:
    """Full eigendecomposition of a Hermitian matrix via cyclic Jacobi."""
    h = as_matrix4(h)
    _check_hermitian(h)
    values, vectors, _ = _kernels.jacobi_eigh(h)
    return canonical_eigensystem(values, vectors)


def _eigvalsh(m: np.ndarray) -> np.ndarray:
    values, _, _ = _kernels.jacobi_eigh(m)
    return np.sort(values)


def _validated_with_spectrum(m) -> tuple[np.ndarray, np.ndarray]:
    m = as_matrix4(m)
    _check_hermitian(m)
    trace = complex(np.trace(m))
    if abs(trace - 1.0) > TRACE_ATOL:
        raise TraceDeviationError(trace, TRACE_ATOL)
    spectrum = _eigvalsh(m)
    if spectrum[0] < EIGENVALUE_FLOOR:
        raise NegativeEigenvalueError(float(spectrum[0]), EIGENVALUE_FLOOR)
    return m, spectrum


def validate_density_matrix(m) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the matrix."""
    matrix, _ = _validated_with_spectrum(m)
    return matrix


def density_spectrum(m) -> np.ndarray:
    """Validate a density matrix and return its ascending eigenvalues."""
    _, spectrum = _validated_with_spectrum(m)
    return spectrum


def entropy_of_spectrum(spectrum) -> float:
    """Base-2 entropy of an eigenvalue list; values <= 1e-12 contribute 0."""
    s = 0.0
    for lam in np.asarray(spectrum, dtype=np.float64):
        if lam > ENTROPY_CUTOFF:
            s -= lam * math.log2(lam)
    return max(s, 0.0)


def von_neumann_entropy(rho) -> float:
    """-Tr(rho log2 rho) of a validated density matrix; result in [0, 2]."""
    _, spectrum = _validated_with_spectrum(rho)
    return entropy_of_spectrum(spectrum)
