"""Pure numpy integration kernels: the fallback backend.

Implements the same entry points as the compiled extension `_kernel`:
an adaptive Dormand-Prince 4(5) integrator for dg/dt = sign * 2/(g - lambda(t))
with a quadratic step cap near the moving singularity, batch (grid) and
path-recording variants.  Seeds are advanced independently with their own
step sequences, so results do not depend on batch composition.
"""

from __future__ import annotations

import math

import numpy as np

from .drivers import eval_packed

BACKEND = "python"

# Dormand-Prince 4(5) tableau
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_B = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0)
_E = (
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

# status codes shared with the compiled kernel
ALIVE = 0
COLLIDED = 1
UNDERFLOW = 2
EXHAUSTED = 3


def _rhs(head, tab_t, tab_v, sign, t, g):
    lam = eval_packed(head, tab_t, tab_v, t)
    return (2.0 * sign) / (g - lam), lam


def _rk_step(head, tab_t, tab_v, sign, t, g, h, k1):
    """One DP45 step for a batch; returns (g_new, err_abs, k7)."""
    ks = [k1]
    for i in range(1, 7):
        acc = _A[i][0] * ks[0]
        for j in range(1, i):
            acc = acc + _A[i][j] * ks[j]
        gi = g + h * acc
        ki, _ = _rhs(head, tab_t, tab_v, sign, t + _C[i] * h, gi)
        ks.append(ki)
    g_new = g + h * (
        _B[0] * ks[0] + _B[2] * ks[2] + _B[3] * ks[3] + _B[4] * ks[4] + _B[5] * ks[5]
    )
    # k7 is evaluated at (t+h, g_new): the FSAL stage, used only for the error
    k7, _ = _rhs(head, tab_t, tab_v, sign, t + h, g_new)
    ks[6] = k7
    err = h * (
        _E[0] * ks[0]
        + _E[2] * ks[2]
        + _E[3] * ks[3]
        + _E[4] * ks[4]
        + _E[5] * ks[5]
        + _E[6] * ks[6]
    )
    return g_new, np.abs(err), k7


def _next_knot_cap(knots, t):
    """Distance to the next breakpoint; inf when none ahead."""
    if knots.size == 0:
        return np.full(t.shape, np.inf)
    idx = np.searchsorted(knots, t * (1.0 + 1e-14) + 1e-300, side="right")
    cap = np.full(t.shape, np.inf)
    ahead = idx < knots.size
    cap[ahead] = knots[idx[ahead]] - t[ahead]
    # a knot within rounding distance counts as already passed
    cap[cap < 1e-13 * (1.0 + np.abs(t))] = np.inf
    return cap


def integrate_many(
    head,
    tab_t,
    tab_v,
    knots,
    z0,
    t_end,
    sign,
    collide_eps,
    rel_tol,
    abs_tol,
    max_step,
    min_step,
    safety,
    max_steps,
    n_threads=1,
):
    """Advance every seed to t_end, collision, or failure.

    Returns (status, t_out, g_out, nsteps).  For forward runs a collision is
    a swallow: t_out is the threshold-crossing time refined by one bisection
    pass over the last step and g_out the state there.
    """
    z = np.atleast_1d(np.asarray(z0, dtype=np.complex128)).copy()
    n = z.size
    status = np.full(n, -1, dtype=np.int32)
    t = np.zeros(n)
    h = np.full(n, max_step)
    t_out = np.full(n, float(t_end))
    g_out = z.copy()
    nsteps = np.zeros(n, dtype=np.int64)

    if t_end <= 0.0:
        lam0 = eval_packed(head, tab_t, tab_v, t)
        hit0 = np.abs(z - lam0) <= collide_eps
        status[:] = np.where(hit0, COLLIDED, ALIVE)
        t_out[:] = 0.0
        return status, t_out, g_out, nsteps

    while True:
        act = np.nonzero(status < 0)[0]
        if act.size == 0:
            break
        ta, ga, ha = t[act], z[act], h[act]
        k1, lam = _rhs(head, tab_t, tab_v, sign, ta, ga)
        d = np.abs(ga - lam)

        hit = d <= collide_eps
        if hit.any():
            ids = act[hit]
            status[ids] = COLLIDED
            t_out[ids] = t[ids]
            g_out[ids] = z[ids]
            act = act[~hit]
            if act.size == 0:
                continue
            ta, ga, ha, k1, d = ta[~hit], ga[~hit], ha[~hit], k1[~hit], d[~hit]

        over = nsteps[act] >= max_steps
        if over.any():
            ids = act[over]
            status[ids] = EXHAUSTED
            t_out[ids] = t[ids]
            g_out[ids] = z[ids]
            act = act[~over]
            if act.size == 0:
                continue
            ta, ga, ha, k1, d = ta[~over], ga[~over], ha[~over], k1[~over], d[~over]

        under = ha < min_step
        if under.any():
            ids = act[under]
            status[ids] = UNDERFLOW
            t_out[ids] = t[ids]
            g_out[ids] = z[ids]
            act = act[~under]
            if act.size == 0:
                continue
            ta, ga, ha, k1, d = ta[~under], ga[~under], ha[~under], k1[~under], d[~under]

        h_try = np.minimum(ha, max_step)
        h_try = np.minimum(h_try, 0.5 * safety * d * d)
        h_try = np.minimum(h_try, _next_knot_cap(knots, ta))
        h_try = np.minimum(h_try, t_end - ta)
        h_try = np.maximum(h_try, 1e-300)

        g_new, err, _ = _rk_step(head, tab_t, tab_v, sign, ta, ga, h_try, k1)
        tol = abs_tol + rel_tol * np.maximum(np.abs(ga), np.abs(g_new))
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = err / tol
        ratio = np.where(np.isfinite(g_new.real) & np.isfinite(g_new.imag), ratio, np.inf)
        accept = ratio <= 1.0

        # step-size controller, applied whether or not the step was accepted
        with np.errstate(divide="ignore"):
            factor = 0.9 * np.power(np.maximum(ratio, 1e-30), -0.2)
        factor = np.clip(factor, 0.2, 5.0)
        h[act] = h_try * factor
        nsteps[act] += 1

        if accept.any():
            ids = act[accept]
            t_new = ta[accept] + h_try[accept]
            gn = g_new[accept]
            lam_new = eval_packed(head, tab_t, tab_v, t_new)
            d_new = np.abs(gn - lam_new)

            crossed = d_new <= collide_eps
            if crossed.any():
                cid = ids[crossed]
                if sign > 0:
                    # one bisection pass over the last step
                    th, gh = ta[accept][crossed], ga[accept][crossed]
                    hh = 0.5 * h_try[accept][crossed]
                    k1h, _ = _rhs(head, tab_t, tab_v, sign, th, gh)
                    g_half, _, _ = _rk_step(head, tab_t, tab_v, sign, th, gh, hh, k1h)
                    lam_half = eval_packed(head, tab_t, tab_v, th + hh)
                    half_in = np.abs(g_half - lam_half) <= collide_eps
                    t_out[cid] = np.where(half_in, th + hh, t_new[crossed])
                    g_out[cid] = np.where(half_in, g_half, gn[crossed])
                else:
                    t_out[cid] = t_new[crossed]
                    g_out[cid] = gn[crossed]
                status[cid] = COLLIDED

            done = (t_new >= t_end * (1.0 - 1e-15) - 1e-300) & ~crossed
            if done.any():
                did = ids[done]
                status[did] = ALIVE
                t_out[did] = t_end
                g_out[did] = gn[done]

            t[ids] = t_new
            z[ids] = gn

    return status, t_out, g_out, nsteps


def integrate_path(
    head,
    tab_t,
    tab_v,
    knots,
    z0,
    t_end,
    sign,
    collide_eps,
    rel_tol,
    abs_tol,
    max_step,
    min_step,
    safety,
    max_steps,
):
    """Single-seed variant that records every accepted step.

    Returns (status, ts, gs); the final recorded sample is the terminal state
    (swallow point, failure point, or the state at t_end).
    """
    ts = [0.0]
    gs = [complex(z0)]
    z = np.array([z0], dtype=np.complex128)
    status = np.full(1, -1, dtype=np.int32)
    t = np.zeros(1)
    h = np.full(1, max_step)
    nsteps = 0

    if t_end <= 0.0:
        lam0 = eval_packed(head, tab_t, tab_v, t)
        st0 = COLLIDED if float(np.abs(z - lam0)[0]) <= collide_eps else ALIVE
        return st0, np.array(ts), np.array(gs, dtype=np.complex128)

    while status[0] < 0:
        k1, lam = _rhs(head, tab_t, tab_v, sign, t, z)
        d = float(np.abs(z - lam)[0])
        if d <= collide_eps:
            status[0] = COLLIDED
            break
        if nsteps >= max_steps:
            status[0] = EXHAUSTED
            break
        if h[0] < min_step:
            status[0] = UNDERFLOW
            break
        h_try = min(h[0], max_step, 0.5 * safety * d * d, float(_next_knot_cap(knots, t)[0]), t_end - t[0])
        h_try = np.array([max(h_try, 1e-300)])

        g_new, err, _ = _rk_step(head, tab_t, tab_v, sign, t, z, h_try, k1)
        tol = abs_tol + rel_tol * max(abs(z[0]), abs(g_new[0]))
        ratio = float(err[0] / tol)
        if not (math.isfinite(g_new[0].real) and math.isfinite(g_new[0].imag)):
            ratio = math.inf
        factor = min(5.0, max(0.2, 0.9 * max(ratio, 1e-30) ** -0.2))
        nsteps += 1

        if ratio <= 1.0:
            t_new = t + h_try
            lam_new = eval_packed(head, tab_t, tab_v, t_new)
            d_new = float(np.abs(g_new - lam_new)[0])
            if d_new <= collide_eps:
                if sign > 0:
                    hh = 0.5 * h_try
                    g_half, _, _ = _rk_step(head, tab_t, tab_v, sign, t, z, hh, k1)
                    lam_half = eval_packed(head, tab_t, tab_v, t + hh)
                    if float(np.abs(g_half - lam_half)[0]) <= collide_eps:
                        t_new, g_new = t + hh, g_half
                status[0] = COLLIDED
                t[0], z[0] = t_new[0], g_new[0]
                ts.append(float(t[0]))
                gs.append(complex(z[0]))
                h[0] = h_try[0] * factor
                break
            t[0], z[0] = t_new[0], g_new[0]
            ts.append(float(t[0]))
            gs.append(complex(z[0]))
            if t[0] >= t_end * (1.0 - 1e-15) - 1e-300:
                status[0] = ALIVE
                t[0] = t_end
                ts[-1] = t_end
        h[0] = h_try[0] * factor

    return int(status[0]), np.array(ts), np.array(gs, dtype=np.complex128)
