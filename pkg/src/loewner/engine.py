"""Forward and backward integration of the Loewner equation.

The forward flow dg/dt = 2/(g - lambda(t)) is integrated with an embedded
adaptive RK4(5) whose step is additionally capped by the ODE's natural time
scale near the moving singularity (proportional to |g - lambda|^2).  A seed
is declared swallowed when |g - lambda| falls below blow_up_eps; the reported
time is the threshold crossing refined by one bisection pass over the last
step.  The backward flow runs the same scheme with the sign flipped and the
driver time-reversed; a collision there means the start point was effectively
inside or on the right hull.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernel
from .drivers import Driver
from .errors import ConditioningError, DomainError, ParameterError, StiffnessError

_STATUS_ALIVE = 0
_STATUS_COLLIDED = 1
_STATUS_UNDERFLOW = 2
_STATUS_EXHAUSTED = 3


@dataclass(frozen=True)
class SolverOptions:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-9
    blow_up_eps: float = 1e-4
    max_step: float = 0.1
    min_step: float = 1e-14
    singularity_safety: float = 0.2
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not (0.0 < self.min_step <= self.max_step):
            raise ParameterError("need 0 < min_step <= max_step")
        if self.blow_up_eps <= 0.0 or self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ParameterError("tolerances and blow_up_eps must be positive")
        if not (0.0 < self.singularity_safety < 1.0):
            raise ParameterError("singularity_safety must lie in (0, 1)")

    def replace(self, **kw) -> "SolverOptions":
        from dataclasses import replace

        return replace(self, **kw)


DEFAULT_OPTS = SolverOptions()


@dataclass(frozen=True)
class Trajectory:
    """Forward Loewner solution for one seed."""

    z0: complex
    times: np.ndarray
    values: np.ndarray
    status: str  # "alive" | "swallowed"
    t_swallow: float | None
    driver_fingerprint: str = ""

    @property
    def final(self) -> complex:
        return complex(self.values[-1])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def centered(self, driver: Driver) -> "CenteredChain":
        lam = driver.eval(self.times)
        return CenteredChain(
            z0=self.z0,
            times=self.times,
            values=self.values - lam,
            status=self.status,
            t_swallow=self.t_swallow,
            driver_fingerprint=self.driver_fingerprint,
        )


@dataclass(frozen=True)
class CenteredChain(Trajectory):
    """Trajectory of f_t(z) = g_t(z) - lambda(t)."""


@dataclass(frozen=True)
class ExpansionFit:
    """Least-squares coefficients of g_t(z) - z ~ a/z + b/z^2 at infinity."""

    t: float
    a_hat: complex
    b_hat: complex
    residual: float


def _kernel_args(driver: Driver, t_end: float):
    head, tab_t, tab_v, knots = driver.kernel_spec(t_end)
    return head, tab_t, tab_v, knots


def _raise_stiff(status, t, z, what):
    if status == _STATUS_UNDERFLOW:
        raise StiffnessError(
            f"{what}: step size underflow at t={t:.6g} (state {z:.6g})", t=t, state=z
        )
    raise StiffnessError(
        f"{what}: step budget exhausted at t={t:.6g} (state {z:.6g})", t=t, state=z
    )


def integrate_forward(
    driver: Driver, z: complex, t_end: float, opts: SolverOptions = DEFAULT_OPTS
) -> Trajectory:
    """Solve dg/dt = 2/(g - lambda(t)) from g_0 = z up to t_end or swallow."""
    t_end = float(t_end)
    if t_end < 0.0 or t_end > driver.t_max * (1 + 1e-12):
        raise DomainError(f"t_end={t_end} outside driver domain")
    z = complex(z)
    if z == driver.eval(0.0):
        return Trajectory(
            z0=z,
            times=np.array([0.0]),
            values=np.array([z], dtype=np.complex128),
            status="swallowed",
            t_swallow=0.0,
            driver_fingerprint=driver.fingerprint,
        )
    head, tab_t, tab_v, knots = _kernel_args(driver, t_end)
    status, ts, gs = kernel.integrate_path(
        head, tab_t, tab_v, knots, z, t_end, 1.0, opts.blow_up_eps,
        opts.rel_tol, opts.abs_tol, opts.max_step, opts.min_step,
        opts.singularity_safety, opts.max_steps,
    )
    if status == _STATUS_ALIVE:
        return Trajectory(z, ts, gs, "alive", None, driver.fingerprint)
    if status == _STATUS_COLLIDED:
        return Trajectory(z, ts, gs, "swallowed", float(ts[-1]), driver.fingerprint)
    _raise_stiff(status, float(ts[-1]), complex(gs[-1]), "forward integration")


def blow_up_time(
    driver: Driver, z: complex, t_max: float, opts: SolverOptions = DEFAULT_OPTS
) -> float | None:
    """Swallow time T_z if it is <= t_max, else None."""
    z = complex(z)
    if z == driver.eval(0.0):
        return 0.0
    head, tab_t, tab_v, knots = _kernel_args(driver, float(t_max))
    status, t_out, g_out, _ = kernel.integrate_many(
        head, tab_t, tab_v, knots, np.array([z]), float(t_max), 1.0,
        opts.blow_up_eps, opts.rel_tol, opts.abs_tol, opts.max_step,
        opts.min_step, opts.singularity_safety, opts.max_steps, 1,
    )
    if status[0] == _STATUS_ALIVE:
        return None
    if status[0] == _STATUS_COLLIDED:
        return float(t_out[0])
    _raise_stiff(int(status[0]), float(t_out[0]), complex(g_out[0]), "blow-up search")


def integrate_backward(
    driver: Driver, w: complex, T: float, opts: SolverOptions = DEFAULT_OPTS
) -> complex:
    """Solve dh/du = -2/(h - lambda(T-u)) from h_0 = w up to u = T."""
    T = float(T)
    if T < 0.0 or T > driver.t_max * (1 + 1e-12):
        raise DomainError(f"T={T} outside driver domain")
    w = complex(w)
    if T == 0.0:
        return w
    lam_T = driver.eval(T)
    start_dist = abs(w - lam_T)
    if start_dist == 0.0:
        raise ParameterError("backward start point coincides with lambda(T)")
    reversed_driver = driver.time_reversed(T)
    head, tab_t, tab_v, knots = reversed_driver.kernel_spec(T)
    collide = min(opts.blow_up_eps, 0.5 * start_dist)
    status, t_out, g_out, _ = kernel.integrate_many(
        head, tab_t, tab_v, knots, np.array([w]), T, -1.0, collide,
        opts.rel_tol, opts.abs_tol, opts.max_step, opts.min_step,
        opts.singularity_safety, opts.max_steps, 1,
    )
    if status[0] == _STATUS_ALIVE:
        return complex(g_out[0])
    if status[0] == _STATUS_COLLIDED:
        raise StiffnessError(
            f"backward flow collided with the driver at u={float(t_out[0]):.6g}; "
            "the start point is effectively inside or on the right hull",
            t=float(t_out[0]),
            state=complex(g_out[0]),
        )
    _raise_stiff(int(status[0]), float(t_out[0]), complex(g_out[0]), "backward integration")


def inverse_map(
    driver: Driver, t: float, w: complex, opts: SolverOptions = DEFAULT_OPTS
) -> complex:
    """g_t^{-1}(w) via the time-reversal identity."""
    return integrate_backward(driver, w, t, opts)


def expansion_fit(
    driver: Driver,
    t: float,
    probe_radius: float = 1e3,
    n_probes: int = 24,
    opts: SolverOptions = DEFAULT_OPTS,
) -> ExpansionFit:
    """Fit the expansion at infinity; a_hat ~ 2t, b_hat ~ 2*int_0^t lambda."""
    if n_probes < 4:
        raise ParameterError("need at least 4 probes")
    t = float(t)
    if t == 0.0:
        return ExpansionFit(t=0.0, a_hat=0.0 + 0.0j, b_hat=0.0 + 0.0j, residual=0.0)
    sample = np.abs(driver.eval(np.linspace(0.0, t, 64)))
    hull_scale = float(sample.max()) + 4.0 * np.sqrt(t)
    if probe_radius < 10.0 * (hull_scale + 1.0):
        raise ConditioningError(
            f"probe_radius={probe_radius:.3g} too small against hull scale "
            f"{hull_scale:.3g}; the truncated expansion would not converge"
        )
    # coefficient b enters at size |b|/R^2; resolving it needs much tighter
    # integration tolerances than the trajectory default
    tight = opts.replace(
        rel_tol=min(opts.rel_tol, 1e-12),
        abs_tol=min(opts.abs_tol, 1e-12),
        max_step=max(opts.max_step, t / 16.0),
    )
    zs = probe_radius * np.exp(2j * np.pi * np.arange(n_probes) / n_probes)
    head, tab_t, tab_v, knots = _kernel_args(driver, t)
    status, _, g_out, _ = kernel.integrate_many(
        head, tab_t, tab_v, knots, zs, t, 1.0, tight.blow_up_eps,
        tight.rel_tol, tight.abs_tol, tight.max_step, tight.min_step,
        tight.singularity_safety, tight.max_steps, 1,
    )
    if np.any(status != _STATUS_ALIVE):
        raise StiffnessError("an expansion probe failed; radius too small?")
    y = g_out - zs
    # include a 1/z^3 column so the O(z^-3) tail does not bias b_hat
    basis = np.stack([1.0 / zs, 1.0 / zs**2, 1.0 / zs**3], axis=1)
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    resid = float(np.max(np.abs(basis @ coef - y)))
    return ExpansionFit(t=t, a_hat=complex(coef[0]), b_hat=complex(coef[1]), residual=resid)
