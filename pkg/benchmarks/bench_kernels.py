"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--steps N] [--matrices N]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from dipcoh._kernels import _pure

try:
    from dipcoh._kernels import _core
except ImportError:
    _core = None

from dipcoh.evolution import initial_state
from dipcoh.model import ModelParams, build_hamiltonian


def _time(fn, repeats: int = 3) -> float:
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_jacobi(backend, matrices: list[np.ndarray]) -> float:
    def run():
        for m in matrices:
            backend.jacobi_eigh(m)
    return _time(run)


def bench_rk4(backend, h, rho0, steps: int) -> float:
    return _time(lambda: backend.decoherence_rk4(h, rho0, 0.1, 1e-4, steps))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=200_000,
                        help="RK4 steps per run (default 200000)")
    parser.add_argument("--matrices", type=int, default=2_000,
                        help="Hermitian matrices per Jacobi run (default 2000)")
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    matrices = []
    for _ in range(args.matrices):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        matrices.append(a + a.conj().T)

    params = ModelParams(J=1.0, D=0.5, r=0.5, B_z=1.0)
    h = np.ascontiguousarray(build_hamiltonian(params).real)
    rho0 = initial_state(math.pi / 3)

    backends = [("python", _pure)]
    if _core is not None:
        backends.append(("compiled", _core))
    else:
        print("compiled backend not built; timing the fallback only")

    results = {}
    for name, backend in backends:
        tj = bench_jacobi(backend, matrices)
        tr = bench_rk4(backend, h, rho0, args.steps)
        results[name] = (tj, tr)
        print(f"{name:>9}: jacobi {args.matrices} matrices in {tj:8.3f} s"
              f" ({tj / args.matrices * 1e6:8.2f} us each),"
              f" rk4 {args.steps} steps in {tr:8.3f} s"
              f" ({tr / args.steps * 1e9:8.1f} ns/step)")

    if len(results) == 2:
        tj_py, tr_py = results["python"]
        tj_c, tr_c = results["compiled"]
        print(f" speedups: jacobi {tj_py / tj_c:.1f}x, rk4 {tr_py / tr_c:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
