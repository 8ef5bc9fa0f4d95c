"""Sweeps, finite-difference derivatives, time-series diagnostics."""

import math

import numpy as np
import pytest

from dipcoh.analysis import (
    Axis,
    SweepSpec,
    canonical_target,
    count_steady_crossings,
    fd_partial_c2,
    monotonicity_verdict,
    run_sweep,
    settling_time,
    steady_coherence,
    steady_coherence_squared,
    time_series,
)
from dipcoh.errors import ValidationError
from dipcoh.model import ModelParams

DEFAULT = ModelParams(J=1.0, D=0.5, r=0.5, B_z=1.0)
ALPHA = math.pi / 3
PLATEAU = 0.5579230452841439


def test_canonical_target_alias_and_rejection():
    assert canonical_target("B_z") == "Bz"
    assert canonical_target("alpha") == "alpha"
    with pytest.raises(ValidationError):
        canonical_target("J")
    with pytest.raises(ValidationError):
        canonical_target("bz")


def test_axis_grid_and_validation():
    ax = Axis("D", 0.0, 1.0, 3)
    assert np.array_equal(ax.grid(), [0.0, 0.5, 1.0])
    assert Axis("r", 2.0, 2.0, 1).grid().tolist() == [2.0]
    with pytest.raises(ValidationError):
        Axis("D", -0.1, 1.0, 3)
    with pytest.raises(ValidationError):
        Axis("r", 0.0, 1.0, 3)
    with pytest.raises(ValidationError):
        Axis("alpha", 0.0, 4.0, 3)
    with pytest.raises(ValidationError):
        Axis("D", 0.0, 1.0, 0)
    with pytest.raises(ValidationError):
        Axis("D", 0.0, 1.0, 2.0)


def test_sweep_spec_validation():
    ax = Axis("D", 0.1, 1.0, 2)
    with pytest.raises(ValidationError):
        SweepSpec(DEFAULT, ALPHA, 0.1, ax, axis2=Axis("D", 0.2, 0.4, 2))
    with pytest.raises(ValidationError):
        SweepSpec(DEFAULT, -0.1, 0.1, ax)
    with pytest.raises(ValidationError):
        SweepSpec(DEFAULT, ALPHA, -0.1, ax)
    with pytest.raises(ValidationError):
        SweepSpec(DEFAULT, ALPHA, 0.1, ax, derivative="J")
    with pytest.raises(ValidationError):
        SweepSpec(DEFAULT, ALPHA, 0.1, ax, fd_step=0.0)
    spec = SweepSpec(DEFAULT, ALPHA, 0.1, ax, derivative="B_z")
    assert spec.derivative == "Bz"


def test_steady_coherence_plateau_is_parameter_independent():
    for p in (DEFAULT, ModelParams(J=-1.3, D=2.0, r=1.7, B_z=-0.4)):
        assert steady_coherence(p, math.pi / 2) == pytest.approx(
            PLATEAU, abs=1e-12
        )


def test_steady_coherence_mirror_symmetry():
    for a in (0.4, 1.0, 1.4):
        assert steady_coherence(DEFAULT, a) == pytest.approx(
            steady_coherence(DEFAULT, math.pi - a), abs=1e-13
        )


def test_fd_signs_at_reference_point():
    assert fd_partial_c2(DEFAULT, ALPHA, "D") > 1e-3
    assert fd_partial_c2(DEFAULT, ALPHA, "r") < -1e-3
    assert fd_partial_c2(DEFAULT, ALPHA, "Bz") < -1e-3


def test_fd_alpha_symmetry():
    assert fd_partial_c2(DEFAULT, math.pi / 2, "alpha") == 0.0
    left = fd_partial_c2(DEFAULT, ALPHA, "alpha")
    right = fd_partial_c2(DEFAULT, math.pi - ALPHA, "alpha")
    assert left > 1e-3
    assert left == pytest.approx(-right, abs=1e-9)


def test_fd_second_order_convergence():
    ref = fd_partial_c2(DEFAULT, ALPHA, "D", h=1e-6)
    e1 = abs(fd_partial_c2(DEFAULT, ALPHA, "D", h=4e-3) - ref)
    e2 = abs(fd_partial_c2(DEFAULT, ALPHA, "D", h=2e-3) - ref)
    assert 3.5 < e1 / e2 < 4.5


def test_fd_stencil_domain_errors_propagate():
    at_zero = ModelParams(J=1.0, D=0.0, r=0.5, B_z=1.0)
    with pytest.raises(ValidationError):
        fd_partial_c2(at_zero, ALPHA, "D")
    with pytest.raises(ValidationError):
        fd_partial_c2(DEFAULT, 0.0, "alpha")
    with pytest.raises(ValidationError):
        fd_partial_c2(DEFAULT, ALPHA, "D", h=-1e-3)


def test_run_sweep_single_point_matches_direct_call():
    spec = SweepSpec(DEFAULT, ALPHA, 0.1, Axis("D", 0.5, 0.5, 1))
    rows = run_sweep(spec)
    assert len(rows) == 1
    row = rows[0]
    assert row.error is None and row.dC2 is None
    assert row.C2 == steady_coherence_squared(DEFAULT, ALPHA)
    assert row.C == math.sqrt(row.C2)
    assert (row.J, row.D, row.r, row.Bz) == (1.0, 0.5, 0.5, 1.0)


def test_run_sweep_row_major_order():
    spec = SweepSpec(
        DEFAULT, ALPHA, 0.1,
        Axis("D", 0.2, 0.4, 2), axis2=Axis("r", 1.0, 2.0, 3),
    )
    rows = run_sweep(spec)
    assert [(row.D, row.r) for row in rows] == [
        (0.2, 1.0), (0.2, 1.5), (0.2, 2.0),
        (0.4, 1.0), (0.4, 1.5), (0.4, 2.0),
    ]


def test_run_sweep_derivative_column_and_verdict():
    spec = SweepSpec(
        DEFAULT, ALPHA, 0.1, Axis("D", 0.1, 1.5, 5), derivative="D"
    )
    rows = run_sweep(spec)
    assert all(row.error is None for row in rows)
    dc2 = [row.dC2 for row in rows]
    assert monotonicity_verdict(dc2) == "all-positive"
    spec_r = SweepSpec(
        DEFAULT, ALPHA, 0.1, Axis("r", 0.3, 2.0, 5), derivative="r"
    )
    assert monotonicity_verdict(
        [row.dC2 for row in run_sweep(spec_r)]
    ) == "all-negative"


def test_run_sweep_poisons_failing_points_and_continues():
    # D = 0 sits on the domain edge, so the centered stencil must fail there
    spec = SweepSpec(
        DEFAULT, ALPHA, 0.1, Axis("D", 0.0, 1.0, 3), derivative="D"
    )
    rows = run_sweep(spec)
    assert len(rows) == 3
    assert rows[0].error is not None
    assert math.isnan(rows[0].C) and math.isnan(rows[0].C2)
    assert rows[1].error is None and rows[2].error is None
    assert rows[1].dC2 > 0.0


def test_monotonicity_verdict_semantics():
    assert monotonicity_verdict([0.1, 0.2]) == "all-positive"
    assert monotonicity_verdict([-0.1, -0.2]) == "all-negative"
    assert monotonicity_verdict([0.1, -0.2]) == "mixed"
    assert monotonicity_verdict([0.1, 1e-12]) == "all-positive"
    assert monotonicity_verdict([0.1, None, math.nan]) == "all-positive"
    assert monotonicity_verdict([]) == "mixed"
    assert monotonicity_verdict([1e-12]) == "mixed"
    assert monotonicity_verdict([0.1, -0.2], threshold=0.5) == "mixed"


def test_time_series_plateau_is_constant():
    series = time_series(DEFAULT, 0.1, math.pi / 2, np.linspace(0.0, 5.0, 11))
    values = [c for _, c, _ in series]
    assert max(values) - min(values) < 1e-12
    assert values[0] == pytest.approx(PLATEAU, abs=1e-12)


def test_time_series_relaxes_to_steady_value():
    times = np.linspace(0.0, 400.0, 5)
    series = time_series(DEFAULT, 0.1, ALPHA, times)
    target = steady_coherence(DEFAULT, ALPHA)
    assert abs(series[-1][1] - target) < 1e-9
    assert abs(series[0][1] - target) > 1e-3


def test_settling_time_on_synthetic_series():
    times = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    steady = 1.0
    assert settling_time(times, [1.2, 1.05, 1.002, 0.999, 1.0], steady) == 2.0
    assert settling_time(times, [1.001, 0.999, 1.0, 1.0, 1.0], steady) == 0.0
    assert settling_time(times, [1.2, 1.0, 1.0, 1.0, 1.05], steady) == math.inf
    # re-entry then a late excursion: only the last excursion counts
    assert settling_time(times, [1.2, 1.0, 1.0, 1.05, 1.0], steady) == 4.0
    with pytest.raises(ValidationError):
        settling_time(times, [1.0, 2.0], steady)


def test_count_steady_crossings_on_synthetic_series():
    assert count_steady_crossings([1.2, 0.8, 1.1, 0.9], 1.0) == 3
    assert count_steady_crossings([1.2, 1.1, 1.05], 1.0) == 0
    assert count_steady_crossings([1.2, 1.0, 0.8], 1.0) == 1
    assert count_steady_crossings([], 1.0) == 0


def test_settling_time_decreases_with_damping_rate():
    times = np.linspace(0.0, 8.0, 801)
    target = {g: steady_coherence(DEFAULT, ALPHA) for g in (0.05, 0.1, 0.15)}
    settled = {}
    for g in (0.05, 0.1, 0.15):
        series = time_series(DEFAULT, g, ALPHA, times)
        settled[g] = settling_time(times, [c for _, c, _ in series], target[g])
    assert settled[0.05] > settled[0.1] > settled[0.15]
