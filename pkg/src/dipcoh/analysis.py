"""Steady-state coherence maps, finite-difference monotonicity, dynamics.

Everything downstream of the solvers lives here: parameter sweeps over the
steady-state coherence, central-difference derivatives of C^2, time series
of C(t), and the settling/crossing diagnostics used to compare damping
rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from dipcoh.coherence import coherence_squared
from dipcoh.errors import DipcohError, ValidationError
from dipcoh.evolution import (
    check_alpha,
    evolve_spectral_grid,
    initial_state,
    steady_state,
)
from dipcoh.model import ModelParams

#: Parameters a sweep axis or derivative may target.
SWEEP_TARGETS = ("D", "r", "Bz", "alpha")

_TARGET_ALIASES = {"D": "D", "r": "r", "Bz": "Bz", "B_z": "Bz", "alpha": "alpha"}


def canonical_target(name: str) -> str:
    """Normalize a sweep/derivative target name ('B_z' folds into 'Bz')."""
    try:
        return _TARGET_ALIASES[name]
    except KeyError:
        raise ValidationError(
            f"unknown sweep target {name!r}; choose from {SWEEP_TARGETS}"
        ) from None


def _check_bound(target: str, value: float, side: str) -> None:
    if not math.isfinite(value):
        raise ValidationError(f"axis {target} {side} bound must be finite")
    if target == "D" and value < 0.0:
        raise ValidationError(f"axis D {side} bound must be >= 0, got {value}")
    if target == "r" and value <= 0.0:
        raise ValidationError(f"axis r {side} bound must be > 0, got {value}")
    if target == "alpha" and not 0.0 <= value <= math.pi:
        raise ValidationError(
            f"axis alpha {side} bound must be in [0, pi], got {value}"
        )


@dataclass(frozen=True)
class Axis:
    """One sweep axis: `count` evenly spaced values from `lo` to `hi`."""

    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "name", canonical_target(self.name))
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        _check_bound(self.name, self.lo, "lower")
        _check_bound(self.name, self.hi, "upper")
        if not isinstance(self.count, int) or self.count < 1:
            raise ValidationError(
                f"axis count must be an integer >= 1, got {self.count!r}"
            )

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """A steady-state sweep: base point, one or two axes, optional derivative.

    `fd_step` is the relative step of the central difference; the absolute
    step at target value x is fd_step * max(1, |x|).
    """

    base: ModelParams
    alpha: float
    gamma: float
    axis1: Axis
    axis2: Axis | None = None
    derivative: str | None = None
    fd_step: float = 1e-5

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        gamma = float(self.gamma)
        if not math.isfinite(gamma) or gamma < 0.0:
            raise ValidationError(f"gamma must be finite and >= 0, got {self.gamma}")
        object.__setattr__(self, "gamma", gamma)
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise ValidationError("axis1 and axis2 must target different parameters")
        if self.derivative is not None:
            object.__setattr__(self, "derivative", canonical_target(self.derivative))
        fd_step = float(self.fd_step)
        if not math.isfinite(fd_step) or fd_step <= 0.0:
            raise ValidationError(f"fd_step must be > 0, got {self.fd_step}")
        object.__setattr__(self, "fd_step", fd_step)


@dataclass(frozen=True)
class SweepRow:
    """One evaluated grid point; poisoned points carry `error` and NaNs."""

    J: float
    D: float
    r: float
    Bz: float
    alpha: float
    gamma: float
    C: float
    C2: float
    dC2: float | None
    error: str | None


def steady_coherence_squared(params: ModelParams, alpha) -> float:
    """C^2 of the steady state reached from initial_state(alpha)."""
    return coherence_squared(steady_state(params, alpha))


def steady_coherence(params: ModelParams, alpha) -> float:
    """C of the steady state reached from initial_state(alpha)."""
    return math.sqrt(steady_coherence_squared(params, alpha))


def _apply_target(params: ModelParams, alpha: float, target: str, value: float):
    if target == "alpha":
        return params, check_alpha(value)
    if target == "Bz":
        return replace(params, B_z=value), alpha
    return replace(params, **{target: value}), alpha


def fd_partial_c2(
    params: ModelParams, alpha, target: str, h: float | None = None,
    *, rel_step: float = 1e-5,
) -> float:
    """Central difference of steady-state C^2 along one parameter.

    `h` defaults to rel_step * max(1, |x|) at the current value x. Both
    stencil points must lie inside the target's validity domain; out-of-
    domain stencils raise rather than falling back to a one-sided formula.
    """
    target = canonical_target(target)
    alpha = check_alpha(alpha)
    x = alpha if target == "alpha" else getattr(
        params, "B_z" if target == "Bz" else target
    )
    if h is None:
        h = rel_step * max(1.0, abs(x))
    h = float(h)
    if not math.isfinite(h) or h <= 0.0:
        raise ValidationError(f"finite-difference step must be > 0, got {h}")
    hi = _apply_target(params, alpha, target, x + h)
    lo = _apply_target(params, alpha, target, x - h)
    c2_hi = steady_coherence_squared(*hi)
    c2_lo = steady_coherence_squared(*lo)
    return (c2_hi - c2_lo) / (2.0 * h)


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate a SweepSpec row-major (axis1 outer, axis2 inner).

    A failing grid point does not abort the sweep: its row records the
    requested coordinates, NaN values and the error text.
    """
    grid1 = spec.axis1.grid()
    grid2 = spec.axis2.grid() if spec.axis2 is not None else np.array([math.nan])
    rows: list[SweepRow] = []
    for x1 in grid1:
        for x2 in grid2:
            coords = {
                "J": spec.base.J, "D": spec.base.D, "r": spec.base.r,
                "Bz": spec.base.B_z, "alpha": spec.alpha,
            }
            coords[spec.axis1.name] = float(x1)
            if spec.axis2 is not None:
                coords[spec.axis2.name] = float(x2)
            try:
                params = ModelParams(
                    J=coords["J"], D=coords["D"], r=coords["r"], B_z=coords["Bz"]
                )
                alpha = check_alpha(coords["alpha"])
                c2 = steady_coherence_squared(params, alpha)
                dc2 = None
                if spec.derivative is not None:
                    dc2 = fd_partial_c2(
                        params, alpha, spec.derivative, rel_step=spec.fd_step
                    )
                rows.append(SweepRow(
                    coords["J"], coords["D"], coords["r"], coords["Bz"],
                    coords["alpha"], spec.gamma, math.sqrt(c2), c2, dc2, None,
                ))
            except DipcohError as exc:
                rows.append(SweepRow(
                    coords["J"], coords["D"], coords["r"], coords["Bz"],
                    coords["alpha"], spec.gamma, math.nan, math.nan, None,
                    str(exc),
                ))
    return rows


def monotonicity_verdict(derivatives, threshold: float = 1e-8) -> str:
    """'all-positive', 'all-negative' or 'mixed' over the supplied dC2 values.

    Values within `threshold` of zero (and None/NaN) are ignored; if nothing
    qualifies the verdict is 'mixed'.
    """
    pos = neg = 0
    for d in derivatives:
        if d is None or not math.isfinite(d) or abs(d) <= threshold:
            continue
        if d > 0.0:
            pos += 1
        else:
            neg += 1
    if pos and not neg:
        return "all-positive"
    if neg and not pos:
        return "all-negative"
    return "mixed"


def time_series(params: ModelParams, gamma, alpha, times) -> list[tuple[float, float, float]]:
    """(t, C, C^2) along a time grid, via the spectral propagator."""
    rho0 = initial_state(alpha)
    rhos = evolve_spectral_grid(params, gamma, rho0, times)
    out = []
    for t, rho in zip(np.asarray(times, dtype=np.float64), rhos):
        c2 = coherence_squared(rho)
        out.append((float(t), math.sqrt(c2), c2))
    return out


def settling_time(times, values, steady: float, rel_band: float = 0.01) -> float:
    """First grid time after the last excursion outside the 1% steady band.

    Returns times[0] if the series never leaves the band and inf if it is
    still outside at the last grid point.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if times.ndim != 1 or times.shape != values.shape or times.size == 0:
        raise ValidationError("times and values must be equal-length 1-d sequences")
    band = rel_band * abs(steady)
    outside = np.abs(values - steady) > band
    if not outside.any():
        return float(times[0])
    last = int(np.nonzero(outside)[0][-1])
    if last == times.size - 1:
        return math.inf
    return float(times[last + 1])


def count_steady_crossings(values, steady: float) -> int:
    """Sign changes of (values - steady), ignoring exact hits."""
    signs = np.sign(np.asarray(values, dtype=np.float64) - steady)
    signs = signs[signs != 0.0]
    if signs.size < 2:
        return 0
    return int(np.count_nonzero(np.diff(signs) != 0.0))
