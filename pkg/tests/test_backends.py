"""Kernel parity: the numpy fallback and the compiled extension must agree."""

import numpy as np
import pytest

import loewner._fallback as fallback
from loewner._backend import backend_name
from loewner.drivers import Driver
from loewner.engine import SolverOptions

compiled = pytest.importorskip("loewner._kernel", reason="compiled kernel not built")

OPTS = SolverOptions(rel_tol=1e-12, abs_tol=1e-12)


def _args(opts):
    return (opts.blow_up_eps, opts.rel_tol, opts.abs_tol, opts.max_step,
            opts.min_step, opts.singularity_safety, opts.max_steps)


@pytest.mark.parametrize(
    "driver,T",
    [
        (Driver.constant(0), 2.0),
        (Driver.sqrt_forward(4 / np.sqrt(3)), 1.0),
        (Driver.counterexample(), 2.0),
        (Driver.linear(1 + 1j), 1.5),
    ],
)
def test_integrate_many_parity(driver, T):
    spec = driver.kernel_spec(T)
    xs = np.linspace(-1.2, 2.4, 24)
    seeds = (xs[None, :] + 1j * xs[:, None]).ravel()
    s1, t1, g1, _ = fallback.integrate_many(*spec, seeds, T, 1.0, *_args(OPTS), 1)
    s2, t2, g2, _ = compiled.integrate_many(*spec, seeds, T, 1.0, *_args(OPTS), 2)
    assert np.array_equal(s1, s2)
    both = s1 == 1
    # swallow times agree to the threshold-crossing resolution eps^2/4
    assert np.allclose(t1[both], t2[both], rtol=0, atol=1e-8)
    alive = s1 == 0
    assert np.allclose(g1[alive], g2[alive], rtol=1e-9, atol=1e-9)


def test_integrate_path_parity():
    d = Driver.linear(1 + 1j)
    spec = d.kernel_spec(1.0)
    st1, ts1, gs1 = fallback.integrate_path(*spec, 2 + 2j, 1.0, 1.0, *_args(OPTS))
    st2, ts2, gs2 = compiled.integrate_path(*spec, 2 + 2j, 1.0, 1.0, *_args(OPTS))
    assert st1 == st2 == 0
    assert abs(gs1[-1] - gs2[-1]) < 1e-10


def test_backward_parity():
    d = Driver.sqrt_forward(1.0)
    rev = d.time_reversed(1.0).kernel_spec(1.0)
    w = d.eval(1.0) + 1e-3j
    s1, t1, g1, _ = fallback.integrate_many(*rev, np.array([w]), 1.0, -1.0,
                                            1e-5, *_args(OPTS)[1:], 1)
    s2, t2, g2, _ = compiled.integrate_many(*rev, np.array([w]), 1.0, -1.0,
                                            1e-5, *_args(OPTS)[1:], 1)
    assert s1[0] == s2[0] == 0
    assert abs(g1[0] - g2[0]) < 1e-9


def test_thread_count_bit_identical():
    d = Driver.counterexample()
    spec = d.kernel_spec(2.0)
    xs = np.linspace(-1.5, 1.5, 40)
    seeds = (xs[None, :] + 1j * xs[:, None]).ravel()
    runs = []
    for nt in (1, 2, 4):
        runs.append(compiled.integrate_many(*spec, seeds, 2.0, 1.0, *_args(OPTS), nt))
    for st, t, g, n in runs[1:]:
        assert np.array_equal(st, runs[0][0])
        assert np.array_equal(t, runs[0][1])
        assert np.array_equal(g, runs[0][2])


def test_backend_name_reports():
    assert backend_name() in ("cython", "python")


def test_forced_fallback_env(tmp_path):
    import subprocess, sys

    code = (
        "import loewner; print(loewner.backend_name()); "
        "from loewner import blow_up_time, Driver; "
        "print(abs(blow_up_time(Driver.constant(0), 2j, 2.0) - 1.0) < 1e-4)"
    )
    env = {"LOEWNER_BACKEND": "python", "PATH": "/usr/bin:/bin"}
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env)
    assert out.returncode == 0, out.stderr
    assert out.stdout.split() == ["python", "True"]


def test_fallback_passes_cheap_acceptance_criteria():
    # the pure-python backend must be feature complete, not just importable;
    # run the raster-free acceptance criteria against it
    import os
    import subprocess
    import sys

    env = dict(os.environ, LOEWNER_BACKEND="python")
    out = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "tests/test_acceptance.py",
         "-k", "criterion_1_ or criterion_5_ or criterion_9_ or criterion_10_"],
        capture_output=True, text=True, env=env,
    )
    assert out.returncode == 0, out.stdout + out.stderr
    assert "4 passed" in out.stdout
