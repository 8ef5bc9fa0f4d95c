"""Command-line interface: eigen, evolve, steady, sweep and derivative.

Every subcommand writes one self-describing CSV (metadata comments echo the
resolved configuration). Exit codes: 0 success, 1 computational failure
(disagreeing routes, poisoned sweep rows), 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from dipcoh import _kernels, analysis, csvio, evolution, model, qops
from dipcoh.coherence import coherence_squared
from dipcoh.errors import DipcohError, ValidationError

CONFIG_ENV = "DIPCOH_CONFIG"

DEFAULTS = {
    "J": 1.0,
    "D": 0.5,
    "r": 0.5,
    "Bz": 1.0,
    "gamma": 0.1,
    "alpha": math.pi / 3.0,
    "t_max": 10.0,
    "t_steps": 200,
    "fd_step": 1e-5,
}

_FLOAT_KEYS = ("J", "D", "r", "Bz", "gamma", "alpha", "t_max", "fd_step")
_INT_KEYS = ("t_steps",)
_STR_KEYS = ("axis1", "axis2", "derivative", "observables")
_ALL_KEYS = frozenset(_FLOAT_KEYS) | frozenset(_INT_KEYS) | frozenset(_STR_KEYS)

_ANGLE_RE = re.compile(
    r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi(?:\s*/\s*([+-]?(?:\d+\.?\d*|\.\d+)))?$",
    re.IGNORECASE,
)


def parse_angle(text) -> float:
    """Parse a real number; 'pi', '2pi', 'pi/3', '0.5*pi' literals allowed."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip()
    m = _ANGLE_RE.match(s)
    if m:
        coef_text = m.group(1)
        if coef_text in ("", "+"):
            coef = 1.0
        elif coef_text == "-":
            coef = -1.0
        else:
            coef = float(coef_text)
        value = coef * math.pi
        if m.group(2):
            value /= float(m.group(2))
        return value
    try:
        return float(s)
    except ValueError:
        raise ValidationError(f"cannot parse {text!r} as a number") from None


def parse_axis(text) -> analysis.Axis:
    """Parse 'name:lo:hi:count'; bounds accept pi-literals."""
    parts = str(text).split(":")
    if len(parts) != 4:
        raise ValidationError(f"axis must look like 'name:lo:hi:count', got {text!r}")
    name, lo, hi, count = parts
    try:
        n = int(count)
    except ValueError:
        raise ValidationError(f"axis count must be an integer, got {count!r}") from None
    return analysis.Axis(name=name.strip(), lo=parse_angle(lo), hi=parse_angle(hi), count=n)


def load_config(path) -> dict[str, str]:
    """Read a flat `key = value` file; '#' comments and blank lines ignored."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(
                f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}"
            )
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
            value = value[1:-1]
        if key not in _ALL_KEYS:
            raise ValidationError(f"{path}:{lineno}: unknown config key {key!r}")
        entries[key] = value
    return entries


@dataclass
class RunConfig:
    """Resolved configuration: flags > config file > defaults."""

    J: float
    D: float
    r: float
    Bz: float
    gamma: float
    alpha: float
    t_max: float
    t_steps: int
    fd_step: float
    axis1: str | None
    axis2: str | None
    derivative: str | None
    observables: str | None

    @property
    def params(self) -> model.ModelParams:
        return model.ModelParams(J=self.J, D=self.D, r=self.r, B_z=self.Bz)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge command-line flags, the config file and defaults."""
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    file_entries = load_config(path) if path else {}

    def pick(key):
        flag = getattr(args, key, None)
        if flag is not None:
            return flag
        if key in file_entries:
            return file_entries[key]
        return DEFAULTS.get(key)

    values: dict[str, object] = {}
    for key in _FLOAT_KEYS:
        values[key] = parse_angle(pick(key))
    for key in _INT_KEYS:
        raw = pick(key)
        try:
            values[key] = int(raw)
        except (TypeError, ValueError):
            raise ValidationError(f"{key} must be an integer, got {raw!r}") from None
    for key in _STR_KEYS:
        raw = pick(key)
        values[key] = None if raw is None else str(raw)
    return RunConfig(**values)


def _fmt(value) -> str:
    if isinstance(value, float):
        return csvio.format_real(value)
    return str(value)


def _metadata(cfg: RunConfig, command: str, extra_keys=()) -> dict[str, str]:
    md = {"command": command, "backend": _kernels.BACKEND}
    for key in ("J", "D", "r", "Bz", "gamma", "alpha") + tuple(extra_keys):
        md[key] = _fmt(getattr(cfg, key))
    return md


def _rho_header() -> list[str]:
    names = []
    for i in range(1, 5):
        for j in range(1, 5):
            names.append(f"rho{i}{j}_re")
            names.append(f"rho{i}{j}_im")
    return names


def _rho_fields(rho: np.ndarray) -> list[str]:
    fields = []
    for i in range(4):
        for j in range(4):
            fields.append(csvio.format_real(float(rho[i, j].real)))
            fields.append(csvio.format_real(float(rho[i, j].imag)))
    return fields


_OBSERVABLES = {
    "purity": lambda rho: float(np.real(np.trace(rho @ rho))),
}


def _parse_observables(text) -> list[str]:
    if not text:
        return []
    names = [part.strip() for part in str(text).split(",") if part.strip()]
    for name in names:
        if name not in _OBSERVABLES:
            raise ValidationError(
                f"unknown observable {name!r}; choose from {sorted(_OBSERVABLES)}"
            )
    return names


def cmd_eigen(cfg: RunConfig, stream) -> int:
    params = cfg.params
    h = model.build_hamiltonian(params)
    closed = model.eigensystem_closed_form(params)
    numeric = qops.hermitian_eigensystem(h)
    diffs = np.abs(closed.values - numeric.values)
    residual_bound = 1e-10 * (1.0 + float(np.linalg.norm(h)))

    def residual(eig: qops.EigenSystem) -> float:
        r = h @ eig.vectors - eig.vectors * eig.values
        return float(np.max(np.linalg.norm(r, axis=0)))

    res_closed = residual(closed)
    res_numeric = residual(numeric)
    agree = (
        float(diffs.max()) <= 1e-10
        and res_closed <= residual_bound
        and res_numeric <= residual_bound
    )
    md = _metadata(cfg, "eigen")
    md["max_abs_eigenvalue_diff"] = csvio.format_real(float(diffs.max()))
    md["max_residual_closed"] = csvio.format_real(res_closed)
    md["max_residual_numeric"] = csvio.format_real(res_numeric)
    md["routes_agree"] = "true" if agree else "false"
    rows = [
        [
            str(k + 1),
            csvio.format_real(float(closed.values[k])),
            csvio.format_real(float(numeric.values[k])),
            csvio.format_real(float(diffs[k])),
        ]
        for k in range(4)
    ]
    csvio.write_table(stream, md, ["level", "E_closed", "E_numeric", "abs_diff"], rows)
    return 0 if agree else 1


def cmd_evolve(cfg: RunConfig, stream) -> int:
    if cfg.t_max <= 0.0 or not math.isfinite(cfg.t_max):
        raise ValidationError(f"t_max must be finite and > 0, got {cfg.t_max}")
    if cfg.t_steps < 1:
        raise ValidationError(f"t_steps must be >= 1, got {cfg.t_steps}")
    observables = _parse_observables(cfg.observables)
    params = cfg.params
    times = np.linspace(0.0, cfg.t_max, cfg.t_steps + 1)
    rho0 = evolution.initial_state(cfg.alpha)
    rhos = evolution.evolve_spectral_grid(params, cfg.gamma, rho0, times)
    rows = []
    for t, rho in zip(times, rhos):
        c2 = coherence_squared(rho)
        row = [
            csvio.format_real(float(t)),
            csvio.format_real(math.sqrt(c2)),
            csvio.format_real(c2),
        ]
        row.extend(_rho_fields(rho))
        for name in observables:
            row.append(csvio.format_real(_OBSERVABLES[name](rho)))
        rows.append(row)
    md = _metadata(cfg, "evolve", extra_keys=("t_max", "t_steps"))
    if observables:
        md["observables"] = ",".join(observables)
    header = ["t", "C", "C2"] + _rho_header() + observables
    csvio.write_table(stream, md, header, rows)
    return 0


def cmd_steady(cfg: RunConfig, stream) -> int:
    params = cfg.params
    rho = evolution.steady_state(params, cfg.alpha)
    c2 = coherence_squared(rho)
    row = [csvio.format_real(math.sqrt(c2)), csvio.format_real(c2)]
    row.extend(_rho_fields(rho))
    header = ["C", "C2"] + _rho_header()
    csvio.write_table(stream, _metadata(cfg, "steady"), header, [row])
    return 0


def cmd_sweep(cfg: RunConfig, stream) -> int:
    if cfg.axis1 is None:
        raise ValidationError("sweep requires --axis1 name:lo:hi:count")
    axis1 = parse_axis(cfg.axis1)
    axis2 = parse_axis(cfg.axis2) if cfg.axis2 else None
    spec = analysis.SweepSpec(
        base=cfg.params,
        alpha=cfg.alpha,
        gamma=cfg.gamma,
        axis1=axis1,
        axis2=axis2,
        derivative=cfg.derivative,
        fd_step=cfg.fd_step,
    )
    rows = analysis.run_sweep(spec)
    with_derivative = spec.derivative is not None
    header = ["J", "D", "r", "Bz", "alpha", "gamma", "C", "C2"]
    if with_derivative:
        header.append("dC2")
    header.append("error")
    out_rows = []
    poisoned = 0
    for row in rows:
        fields = [
            csvio.format_real(v)
            for v in (row.J, row.D, row.r, row.Bz, row.alpha, row.gamma, row.C, row.C2)
        ]
        if with_derivative:
            fields.append("" if row.dC2 is None else csvio.format_real(row.dC2))
        fields.append(row.error or "")
        if row.error is not None:
            poisoned += 1
        out_rows.append(fields)
    md = _metadata(cfg, "sweep")
    md["axis1"] = cfg.axis1
    if cfg.axis2:
        md["axis2"] = cfg.axis2
    if with_derivative:
        md["derivative"] = spec.derivative
        md["fd_step"] = csvio.format_real(spec.fd_step)
    comments = []
    if with_derivative:
        comments.append(
            "sign: " + analysis.monotonicity_verdict(row.dC2 for row in rows)
        )
    if poisoned:
        comments.append(f"poisoned_rows: {poisoned}")
    csvio.write_table(stream, md, header, out_rows, comments)
    return 1 if poisoned else 0


def cmd_derivative(cfg: RunConfig, stream) -> int:
    target = analysis.canonical_target(cfg.derivative or "D")
    params = cfg.params
    if target == "alpha":
        x = cfg.alpha
    else:
        x = getattr(params, "B_z" if target == "Bz" else target)
    h = cfg.fd_step * max(1.0, abs(x))
    dc2 = analysis.fd_partial_c2(params, cfg.alpha, target, h)
    c2 = analysis.steady_coherence_squared(params, cfg.alpha)
    md = _metadata(cfg, "derivative")
    md["fd_step"] = csvio.format_real(cfg.fd_step)
    header = ["target", "x", "h", "C", "C2", "dC2"]
    row = [
        target,
        csvio.format_real(x),
        csvio.format_real(h),
        csvio.format_real(math.sqrt(c2)),
        csvio.format_real(c2),
        csvio.format_real(dc2),
    ]
    csvio.write_table(stream, md, header, [row])
    return 0


COMMANDS = {
    "eigen": cmd_eigen,
    "evolve": cmd_evolve,
    "steady": cmd_steady,
    "sweep": cmd_sweep,
    "derivative": cmd_derivative,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dipcoh",
        description=(
            "Intrinsic-decoherence dynamics and Jensen-Shannon coherence of a"
            " dipole-coupled two-qubit Heisenberg chain."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--J", help="exchange coupling (default 1)")
        p.add_argument("--D", help="dipole strength, >= 0 (default 0.5)")
        p.add_argument("--r", help="spin separation, > 0 (default 0.5)")
        p.add_argument("--Bz", help="longitudinal field (default 1)")
        p.add_argument("--gamma", help="intrinsic decoherence rate, >= 0 (default 0.1)")
        p.add_argument("--alpha", help="mixing angle in [0, pi], e.g. pi/3 (default pi/3)")
        p.add_argument("--config", help=f"flat key=value config file (else ${CONFIG_ENV})")
        p.add_argument("--out", help="output file (default stdout)")

    p_eigen = sub.add_parser("eigen", help="closed-form vs numeric eigensystem")
    common(p_eigen)

    p_evolve = sub.add_parser("evolve", help="coherence time series and state entries")
    common(p_evolve)
    p_evolve.add_argument("--t-max", help="end of the time grid (default 10)")
    p_evolve.add_argument("--t-steps", help="number of grid intervals (default 200)")
    p_evolve.add_argument("--observables", help="extra columns, comma separated: purity")

    p_steady = sub.add_parser("steady", help="steady-state entries and coherence")
    common(p_steady)

    p_sweep = sub.add_parser("sweep", help="steady-state coherence over a grid")
    common(p_sweep)
    p_sweep.add_argument("--axis1", help="grid axis as name:lo:hi:count")
    p_sweep.add_argument("--axis2", help="optional second axis (inner loop)")
    p_sweep.add_argument("--derivative", help="also report dC2 along this target")
    p_sweep.add_argument("--fd-step", help="relative finite-difference step (default 1e-5)")

    p_deriv = sub.add_parser("derivative", help="dC2 at a single parameter point")
    common(p_deriv)
    p_deriv.add_argument("--derivative", help="target: D, r, Bz or alpha (default D)")
    p_deriv.add_argument("--fd-step", help="relative finite-difference step (default 1e-5)")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        command = COMMANDS[args.command]
        out_path = getattr(args, "out", None)
        if out_path:
            with open(out_path, "w", encoding="utf-8", newline="\n") as stream:
                return command(cfg, stream)
        return command(cfg, sys.stdout)
    except ValidationError as exc:
        print(f"dipcoh: error: {exc}", file=sys.stderr)
        return 2
    except DipcohError as exc:
        print(f"dipcoh: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
