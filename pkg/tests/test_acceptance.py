"""Acceptance gate: eleven pinned behavior contracts, one reported line each.

Every test prints exactly one `[acceptance] criterion N: PASS/FAIL` line
(past pytest's capture) and then asserts, so a plain `pytest` run shows the
scoreboard while still failing loudly on regressions.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from dipcoh import qops
from dipcoh.analysis import (
    Axis,
    SweepSpec,
    count_steady_crossings,
    fd_partial_c2,
    monotonicity_verdict,
    run_sweep,
    settling_time,
    steady_coherence,
    steady_coherence_squared,
    time_series,
)
from dipcoh.coherence import coherence, dephase, jsd_distance
from dipcoh.evolution import (
    closed_form_elements,
    evolve_spectral,
    evolve_spectral_grid,
    evolve_stepped_oracle,
    initial_state,
    steady_state,
)
from dipcoh.model import ModelParams, build_hamiltonian, eigensystem_closed_form
from tests.test_cli import GOLDEN_CASES, GOLDEN_DIR, run_cli
from tests.testutil import random_density

DEFAULT = ModelParams(J=1.0, D=0.5, r=0.5, B_z=1.0)
ALPHA = math.pi / 3
PLATEAU = 0.5579230452841439


@pytest.fixture
def report(capsys):
    def _report(number, description, ok, detail):
        line = (
            f"[acceptance] criterion {number}: "
            f"{'PASS' if ok else 'FAIL'} - {description} ({detail})"
        )
        with capsys.disabled():
            print(line, flush=True)
        assert ok, line

    return _report


def _draw_params(rng):
    return ModelParams(
        J=rng.uniform(-1.5, 1.5),
        D=rng.uniform(0.0, 1.5),
        r=rng.uniform(0.5, 2.5),
        B_z=rng.uniform(-2.0, 2.0),
    )


def test_criterion_01_eigensystem_routes_agree(report):
    rng = np.random.default_rng(101)
    worst_value = 0.0
    worst_residual_excess = -math.inf
    for k in range(1000):
        p = _draw_params(rng)
        if k % 10 == 0:
            p = ModelParams(J=p.J, D=0.0, r=p.r, B_z=p.B_z)
        h = build_hamiltonian(p)
        closed = eigensystem_closed_form(p)
        numeric = qops.hermitian_eigensystem(h)
        worst_value = max(
            worst_value, float(np.max(np.abs(closed.values - numeric.values)))
        )
        bound = 1e-10 * (1.0 + float(np.linalg.norm(h)))
        for eig in (closed, numeric):
            res = float(
                np.max(np.abs(h @ eig.vectors - eig.vectors * eig.values))
            )
            worst_residual_excess = max(worst_residual_excess, res - bound)
    ok = worst_value <= 1e-10 and worst_residual_excess <= 0.0
    report(
        1,
        "closed-form and numeric eigensystems agree on 1000 random draws",
        ok,
        f"max |dE| = {worst_value:.3g} <= 1e-10, "
        f"max residual excess = {worst_residual_excess:.3g}",
    )


def test_criterion_02_stepped_integrator_matches_propagator(report):
    rng = np.random.default_rng(202)
    worst = 0.0
    worst_trace = 0.0
    worst_herm = 0.0
    min_eig = math.inf
    for _ in range(200):
        p = _draw_params(rng)
        gamma = rng.uniform(0.0, 0.5)
        alpha = rng.uniform(0.0, math.pi)
        t = rng.uniform(0.0, 12.0)
        rho0 = initial_state(alpha)
        spectral = evolve_spectral(p, gamma, rho0, t)
        stepped = evolve_stepped_oracle(p, gamma, rho0, t, tol=1e-10)
        worst = max(worst, float(np.max(np.abs(spectral - stepped))))
        for rho in (spectral, stepped):
            worst_trace = max(worst_trace, abs(float(np.trace(rho).real) - 1.0))
            worst_herm = max(worst_herm, float(np.max(np.abs(rho - rho.conj().T))))
            min_eig = min(min_eig, float(np.linalg.eigvalsh(rho).min()))
    ok = (
        worst <= 1e-6
        and worst_trace <= 1e-10
        and worst_herm <= 1e-10
        and min_eig >= -1e-10
    )
    report(
        2,
        "independently stepped integrator reproduces the spectral propagator "
        "on 200 random runs",
        ok,
        f"max |drho| = {worst:.3g} <= 1e-6, trace dev {worst_trace:.3g}, "
        f"min eigenvalue {min_eig:.3g}",
    )


def test_criterion_03_closed_form_elements_match_propagator(report):
    times = np.array([0.0, 0.5, 2.0, 5.0, 10.0])
    worst = 0.0
    inner_exact = True
    rho0 = initial_state(ALPHA)
    inner = math.sin(ALPHA) ** 2 / 2.0
    for d in np.linspace(0.05, 2.0, 5):
        for bz in np.linspace(-2.0, 2.0, 5):
            p = ModelParams(J=1.0, D=float(d), r=0.5, B_z=float(bz))
            grid = evolve_spectral_grid(p, 0.1, rho0, times)
            for t, spectral in zip(times, grid):
                cf = closed_form_elements(p, 0.1, ALPHA, float(t))
                worst = max(worst, float(np.max(np.abs(cf - spectral))))
                inner_exact = inner_exact and (
                    cf[1, 1] == inner and cf[2, 2] == inner
                    and cf[1, 2] == inner and cf[2, 1] == inner
                )
    ok = worst <= 1e-9 and inner_exact
    report(
        3,
        "closed-form matrix elements match the propagator on a 5x5x5 grid",
        ok,
        f"max |drho| = {worst:.3g} <= 1e-9, inner block frozen: {inner_exact}",
    )


def test_criterion_04_steady_state_is_the_long_time_limit(report):
    rng = np.random.default_rng(404)
    gamma = 0.1
    worst = 0.0
    for _ in range(50):
        p = ModelParams(
            J=rng.uniform(-1.5, 1.5),
            D=rng.uniform(0.05, 1.5),
            r=rng.uniform(0.5, 2.5),
            B_z=rng.uniform(-2.0, 2.0),
        )
        alpha = rng.uniform(0.0, math.pi)
        eig = eigensystem_closed_form(p)
        gaps = np.abs(eig.values[:, None] - eig.values[None, :])
        open_gaps = gaps[gaps > 1e-12]
        horizon = 2000.0 / (gamma * float(open_gaps.min()) ** 2)
        far = evolve_spectral(p, gamma, initial_state(alpha), horizon)
        steady = steady_state(p, alpha)
        worst = max(worst, float(np.max(np.abs(far - steady))))
    corners_zero = True
    for bz in (-1.5, 0.4, 2.0):
        s = steady_state(ModelParams(J=1.0, D=0.0, r=0.5, B_z=bz), ALPHA)
        corners_zero = corners_zero and s[0, 3] == 0.0 and s[3, 0] == 0.0
    ok = worst <= 1e-6 and corners_zero
    report(
        4,
        "gap-filtered steady state equals the long-time limit on 50 draws",
        ok,
        f"max |drho| = {worst:.3g} <= 1e-6, "
        f"corner weights vanish without coupling: {corners_zero}",
    )


def test_criterion_05_coherence_rises_with_coupling_strength(report):
    spec = SweepSpec(
        DEFAULT, ALPHA, 0.1,
        Axis("D", 0.05, 2.0, 25), axis2=Axis("r", 0.3, 2.0, 25),
        derivative="D",
    )
    rows = run_sweep(spec)
    derivs = [row.dC2 for row in rows]
    verdict = monotonicity_verdict(derivs, threshold=1e-8)
    clean = all(row.error is None for row in rows)
    ok = verdict == "all-positive" and clean
    report(
        5,
        "steady coherence rises with coupling strength across a 25x25 grid",
        ok,
        f"verdict {verdict}, min dC2/dD = {min(derivs):.3g}",
    )


def test_criterion_06_coherence_falls_with_separation(report):
    spec = SweepSpec(
        DEFAULT, ALPHA, 0.1,
        Axis("D", 0.05, 2.0, 25), axis2=Axis("r", 0.3, 2.0, 25),
        derivative="r",
    )
    rows = run_sweep(spec)
    derivs = [row.dC2 for row in rows]
    verdict = monotonicity_verdict(derivs, threshold=1e-8)
    clean = all(row.error is None for row in rows)
    ok = verdict == "all-negative" and clean
    report(
        6,
        "steady coherence falls with spin separation across a 25x25 grid",
        ok,
        f"verdict {verdict}, max dC2/dr = {max(derivs):.3g}",
    )


def test_criterion_07_coherence_falls_with_field(report):
    scans = (
        Axis("Bz", 0.1, 3.0, 100),
        Axis("D", 0.05, 2.0, 100),
        Axis("r", 0.3, 2.0, 100),
    )
    verdicts = []
    worst = -math.inf
    for axis in scans:
        rows = run_sweep(
            SweepSpec(DEFAULT, ALPHA, 0.1, axis, derivative="Bz")
        )
        derivs = [row.dC2 for row in rows]
        verdicts.append(monotonicity_verdict(derivs, threshold=1e-8))
        worst = max(worst, max(derivs))
    ok = all(v == "all-negative" for v in verdicts)
    report(
        7,
        "steady coherence falls with the field along three 100-point scans",
        ok,
        f"verdicts {verdicts}, max dC2/dBz = {worst:.3g}",
    )


def test_criterion_08_mixing_angle_response_symmetric(report):
    inset = np.linspace(0.02, math.pi / 2 - 0.02, 30)
    rising = [fd_partial_c2(DEFAULT, float(a), "alpha") for a in inset]
    falling = [
        fd_partial_c2(DEFAULT, math.pi - float(a), "alpha") for a in inset
    ]
    v_left = monotonicity_verdict(rising, threshold=1e-8)
    v_right = monotonicity_verdict(falling, threshold=1e-8)
    mirror = max(
        abs(
            steady_coherence_squared(DEFAULT, float(a))
            - steady_coherence_squared(DEFAULT, math.pi - float(a))
        )
        for a in np.linspace(0.0, math.pi / 2, 25)
    )
    ok = v_left == "all-positive" and v_right == "all-negative" and mirror <= 1e-12
    report(
        8,
        "coherence rises to the equal-mixture angle and mirrors past it",
        ok,
        f"verdicts ({v_left}, {v_right}), mirror defect {mirror:.3g} <= 1e-12",
    )


def test_criterion_09_stronger_damping_settles_sooner(report):
    p = ModelParams(J=1.0, D=0.15, r=0.5, B_z=1.0)
    times = np.linspace(0.0, 8.0, 801)
    target = steady_coherence(p, ALPHA)
    settled = {}
    crossings = {}
    for gamma in (0.05, 0.1, 0.15):
        values = [c for _, c, _ in time_series(p, gamma, ALPHA, times)]
        settled[gamma] = settling_time(times, values, target)
        crossings[gamma] = count_steady_crossings(values, target)
    plateau = [c for _, c, _ in time_series(p, 0.1, math.pi / 2, times)]
    spread = max(plateau) - min(plateau)
    ok = (
        settled[0.05] > settled[0.1] > settled[0.15]
        and crossings[0.05] >= 2
        and spread <= 1e-12
    )
    report(
        9,
        "stronger damping settles the oscillatory coherence sooner",
        ok,
        f"settle {settled[0.05]:.2f} > {settled[0.1]:.2f} > {settled[0.15]:.2f}, "
        f"{crossings[0.05]} crossings, equal-mixture spread {spread:.3g}",
    )


def test_criterion_10_measure_is_a_bounded_metric(report):
    rng = np.random.default_rng(1010)
    triangle_excess = -math.inf
    symmetric = True
    for _ in range(500):
        a = random_density(rng)
        b = random_density(rng)
        c = random_density(rng)
        dab, dba = jsd_distance(a, b), jsd_distance(b, a)
        symmetric = symmetric and dab == dba
        triangle_excess = max(
            triangle_excess, jsd_distance(a, c) - dab - jsd_distance(b, c)
        )
    zero_on_diagonal = all(
        coherence(dephase(random_density(rng))) == 0.0 for _ in range(100)
    )
    positive_off_diagonal = all(
        coherence(rho) > 1e-12
        for rho in (random_density(rng) for _ in range(100))
        if float(np.max(np.abs(rho - np.diag(np.diag(rho))))) > 1e-6
    )
    e0, e2 = np.zeros((4, 4), dtype=complex), np.zeros((4, 4), dtype=complex)
    e0[0, 0] = 1.0
    e2[2, 2] = 1.0
    orthogonal = abs(jsd_distance(e0, e2) - 1.0) <= 1e-12
    plateau_err = abs(coherence(initial_state(math.pi / 2)) - PLATEAU)
    ok = (
        symmetric
        and triangle_excess <= 1e-10
        and zero_on_diagonal
        and positive_off_diagonal
        and orthogonal
        and plateau_err <= 1e-6
    )
    report(
        10,
        "the coherence measure is a bounded metric with pinned landmarks",
        ok,
        f"triangle excess {triangle_excess:.3g} <= 1e-10, symmetric "
        f"{symmetric}, landmark error {plateau_err:.3g} <= 1e-6",
    )


def test_criterion_11_cli_deterministic_with_stable_exit_codes(report):
    golden_ok = True
    for name, argv in sorted(GOLDEN_CASES.items()):
        proc = run_cli(*argv, env_extra={"DIPCOH_BACKEND": "python"})
        expected = (GOLDEN_DIR / name).read_text(encoding="utf-8")
        golden_ok = golden_ok and proc.returncode == 0 and proc.stdout == expected
    twice = [run_cli("steady").stdout for _ in range(2)]
    deterministic = twice[0] == twice[1] and twice[0] != ""
    codes = (
        run_cli("eigen").returncode,
        run_cli("steady", "--r", "0").returncode,
        run_cli("sweep", "--axis1", "D:0:1:3", "--derivative", "D").returncode,
    )
    codes_ok = codes == (0, 2, 1)
    ok = golden_ok and deterministic and codes_ok
    report(
        11,
        "CLI output is byte-stable and exit codes separate failure classes",
        ok,
        f"goldens {golden_ok}, repeat-run identical {deterministic}, "
        f"exit codes {codes}",
    )


if __name__ == "__main__":
    sys.exit(subprocess.call([sys.executable, "-m", "pytest", "-v", __file__]))
