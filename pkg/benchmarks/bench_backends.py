#!/usr/bin/env python3
"""Benchmark the compiled kernel against the numpy fallback.

Times the hull raster (the hot loop: one adaptive ODE integration per grid
node) and a backward-flow batch on both backends, and checks they agree.

    python benchmarks/bench_backends.py [--sizes 64,128,256] [--threads N]
"""

import argparse
import time

import numpy as np

from loewner._fallback import integrate_many as fallback_many
from loewner.drivers import Driver
from loewner.engine import SolverOptions

try:
    from loewner._kernel import integrate_many as compiled_many
except ImportError:
    compiled_many = None


def run(many, spec, seeds, T, opts, threads):
    t0 = time.perf_counter()
    status, t_out, g_out, steps = many(
        *spec, seeds, T, 1.0, opts.blow_up_eps, opts.rel_tol, opts.abs_tol,
        opts.max_step, opts.min_step, opts.singularity_safety, opts.max_steps,
        threads,
    )
    return time.perf_counter() - t0, status, t_out, int(steps.sum())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="64,128,256")
    ap.add_argument("--threads", type=int, default=0, help="0 = all cores")
    args = ap.parse_args()
    import os

    threads = args.threads or (os.cpu_count() or 1)
    opts = SolverOptions(rel_tol=1e-12, abs_tol=1e-12)
    drv = Driver.sqrt_forward(4.0 / np.sqrt(3.0))
    T = 1.0
    spec = drv.kernel_spec(T)

    print(f"hull raster of the a*sqrt(t) driver to T={T}; tolerances 1e-12")
    print(f"{'grid':>10} {'python [s]':>12} {'cython 1t [s]':>14} "
          f"{'cython {}t [s]'.format(threads):>14} {'speedup':>9}")
    for n in [int(s) for s in args.sizes.split(",")]:
        xs = np.linspace(-0.25, 2.75, n)
        seeds = (xs[None, :] + 1j * xs[:, None]).ravel()
        t_py, st_py, tt_py, _ = run(fallback_many, spec, seeds, T, opts, 1)
        line = f"{n}x{n:<6} {t_py:12.3f}"
        if compiled_many is not None:
            t_c1, st_c, tt_c, _ = run(compiled_many, spec, seeds, T, opts, 1)
            t_cn, _, _, _ = run(compiled_many, spec, seeds, T, opts, threads)
            # swallow times are defined up to the eps^2/4 threshold-crossing
            # resolution; the backends differ by single-ulp rounding well below it
            agree = np.array_equal(st_py, st_c) and np.allclose(
                tt_py, tt_c, rtol=0, atol=1e-8, equal_nan=True
            )
            line += f" {t_c1:14.3f} {t_cn:14.3f} {t_py / t_cn:8.1f}x"
            line += "" if agree else "  [MISMATCH]"
        else:
            line += "   (compiled kernel unavailable)"
        print(line)

    print("\nbackward flow batch (frontier-limit workload), 512 starts")
    rng = np.random.default_rng(1)
    lam_T = drv.eval(T)
    ws = lam_T + 1e-4 * np.exp(1j * rng.uniform(0, np.pi, 512))
    rev = drv.time_reversed(T).kernel_spec(T)

    def run_back(many, threads):
        t0 = time.perf_counter()
        many(*rev, ws, T, -1.0, 1e-5, opts.rel_tol, opts.abs_tol, opts.max_step,
             opts.min_step, opts.singularity_safety, opts.max_steps, threads)
        return time.perf_counter() - t0

    t_py = run_back(fallback_many, 1)
    msg = f"python: {t_py:.3f} s"
    if compiled_many is not None:
        t_c = run_back(compiled_many, threads)
        msg += f" | cython ({threads}t): {t_c:.3f} s | speedup {t_py / t_c:.1f}x"
    print(msg)


if __name__ == "__main__":
    main()
