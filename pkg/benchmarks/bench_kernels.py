"""Time the numba kernels against their fallbacks (numpy, or plain Python for the two-level loop).

    python benchmarks/bench_kernels.py [--n 16] [--repeat 20]

The compiled kernels are warmed up once, so the first-call compile time is
reported separately. The last section times a whole adiabatic run with
``QSEARCH_DISABLE_JIT`` unset and set, in fresh interpreters.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from qsearch import kernels
from qsearch._jit import BACKEND

RUN_SNIPPET = """
import time
from qsearch.execution import execute_plan
from qsearch.plans import build_plan
from qsearch.statevector import OracleSpec
plan = build_plan("adiabatic", {n}, 0.3)
o = OracleSpec({n}, 1)
execute_plan(build_plan("adiabatic", 2, 0.5), "statevector", OracleSpec(2, 1))
t = time.perf_counter()
execute_plan(plan, "statevector", o, record=False)
print(time.perf_counter() - t)
"""


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_pair(name, nb, np_fn, make_args, repeat):
    t = time.perf_counter()
    nb(*make_args())
    compile_time = time.perf_counter() - t
    t_nb = best_of(lambda: nb(*make_args()), repeat)
    t_np = best_of(lambda: np_fn(*make_args()), repeat)
    print(f"{name:<18} numba {t_nb * 1e3:9.3f} ms   fallback {t_np * 1e3:9.3f} ms   "
          f"speedup {t_np / t_nb:6.2f}x   first call {compile_time:.2f} s")


def bench_run(n):
    times = {}
    for label, flag in (("numba", ""), ("numpy", "1")):
        env = dict(os.environ, QSEARCH_DISABLE_JIT=flag)
        out = subprocess.run(
            [sys.executable, "-c", RUN_SNIPPET.format(n=n)], env=env, capture_output=True, text=True, check=True
        )
        times[label] = float(out.stdout.strip())
    print(f"adiabatic run n={n} eps=0.3: numba {times['numba']:.3f} s   numpy {times['numpy']:.3f} s   "
          f"speedup {times['numpy'] / times['numba']:.2f}x")


def main():
    p = argparse.ArgumentParser(description="Time the numba kernels against their fallbacks.")
    p.add_argument("--n", type=int, default=16, help="qubits for the statevector kernels")
    p.add_argument("--repeat", type=int, default=20)
    p.add_argument("--run-n", type=int, default=12, help="qubits for the whole-run comparison")
    args = p.parse_args()

    rng = np.random.default_rng(0)
    dim = 1 << args.n
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    print(f"backend={BACKEND} n={args.n} dim={dim}")

    def vec():
        return (v.copy(),)

    bench_pair("hamiltonian_step", kernels.hamiltonian_step_nb, kernels.hamiltonian_step_np,
               lambda: (v.copy(), 3, 0.3, 0.7), args.repeat)
    bench_pair("grover_step", kernels.grover_step_nb, kernels.grover_step_np,
               lambda: (v.copy(), 3), args.repeat)
    bench_pair("fwht", kernels.fwht_nb, kernels.fwht_np, vec, args.repeat)
    bench_pair("uniform_overlap", kernels.uniform_overlap_nb, kernels.uniform_overlap_np, vec, args.repeat)

    R = 20000
    dts = np.full(R, 0.01)
    c0 = np.array([1 / np.sqrt(dim), np.sqrt(1 - 1 / dim)], dtype=np.complex128)
    a, b = float(c0[0].real), float(c0[1].real)
    bench_pair("two_level_traj", kernels.two_level_trajectory_nb, kernels.two_level_trajectory_py,
               lambda: (c0, a, b, dts, dts, kernels.STEP_HAMILTONIAN), max(1, args.repeat // 10))

    bench_run(args.run_n)


if __name__ == "__main__":
    main()
