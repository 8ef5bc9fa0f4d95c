"""Exception types shared across the package.

Every error carries the measured violation so callers (and the CLI) can
report exactly what went wrong instead of a bare assertion.
"""

from __future__ import annotations


class DipcohError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(DipcohError, ValueError):
    """An input failed a domain, shape or finiteness check."""


class NotHermitianError(ValidationError):
    """A matrix deviates from its conjugate transpose beyond tolerance."""

    def __init__(self, row: int, col: int, magnitude: float, tol: float):
        self.row = row
        self.col = col
        self.magnitude = magnitude
        self.tol = tol
        super().__init__(
            f"matrix is not Hermitian: |M[{row},{col}] - conj(M[{col},{row}])|"
            f" = {magnitude:.6e} exceeds {tol:.1e}"
        )


class TraceDeviationError(ValidationError):
    """A density matrix trace strays from one beyond tolerance."""

    def __init__(self, trace: complex, tol: float):
        self.trace = trace
        self.tol = tol
        super().__init__(
            f"density matrix trace {trace:.17g} deviates from 1 by"
            f" {abs(trace - 1.0):.6e} (tolerance {tol:.1e})"
        )


class NegativeEigenvalueError(ValidationError):
    """A density matrix has an eigenvalue below the negativity floor."""

    def __init__(self, eigenvalue: float, floor: float):
        self.eigenvalue = eigenvalue
        self.floor = floor
        super().__init__(
            f"density matrix eigenvalue {eigenvalue:.6e} is below the"
            f" floor {floor:.1e}"
        )


class ConvergenceError(DipcohError, RuntimeError):
    """An iterative routine exhausted its iteration budget."""

    def __init__(self, residual: float, limit: int):
        self.residual = residual
        self.limit = limit
        super().__init__(
            f"no convergence after {limit} sweeps"
            f" (off-diagonal residual {residual:.6e})"
        )


class ResourceLimitError(DipcohError, RuntimeError):
    """A computation would exceed its configured resource budget."""

    def __init__(self, requested: int, cap: int):
        self.requested = requested
        self.cap = cap
        super().__init__(
            f"step count {requested} exceeds the cap {cap};"
            " refusing to continue"
        )


class NumericalConsistencyError(DipcohError, ArithmeticError):
    """An internally computed quantity violates a mathematical bound."""

    def __init__(self, what: str, value: float, bound: float):
        self.what = what
        self.value = value
        self.bound = bound
        super().__init__(
            f"{what} = {value:.6e} violates the bound {bound:.1e};"
            " inputs are numerically inconsistent"
        )
