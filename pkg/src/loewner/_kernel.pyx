# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled integration kernels (Dormand-Prince 4(5) for the Loewner ODE).

Mirrors `_fallback` function for function; the hull-grid batch runs the
seeds in parallel with OpenMP, each cell fully independent, so results are
bit-identical for any thread count.
"""

import numpy as np

cimport cython
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport INFINITY, NAN, fabs, fmax, fmin, isfinite, pow, sqrt

cnp.import_array()

BACKEND = "cython"

cdef int _ALIVE = 0, _COLLIDED = 1, _UNDERFLOW = 2, _EXHAUSTED = 3

ALIVE = 0
COLLIDED = 1
UNDERFLOW = 2
EXHAUSTED = 3

cdef double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0
cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0

cdef double CE_COEFF = 4.0 / sqrt(3.0)


cdef struct DriverP:
    int kind
    double b_re
    double b_im
    double b_a
    double alpha
    double beta
    double p_re
    double p_im
    double q_re
    double q_im
    int conj
    double s_hi
    const double * tab_t
    const double complex * tab_v
    Py_ssize_t n_tab
    const double * knots
    Py_ssize_t n_knots


cdef inline double complex _eval(const DriverP * dp, double t) noexcept nogil:
    cdef double s = dp.alpha * t + dp.beta
    cdef double complex v
    cdef double re, im, w
    cdef Py_ssize_t lo, hi, mid
    if s < 0.0:
        s = 0.0
    elif s > dp.s_hi:
        s = dp.s_hi
    if dp.kind == 0:
        v = dp.b_re + 1j * dp.b_im
    elif dp.kind == 1:
        v = (dp.b_re + 1j * dp.b_im) * s
    elif dp.kind == 2:
        v = dp.b_a * sqrt(s)
    elif dp.kind == 3:
        if s <= 1.0:
            v = 1j * (CE_COEFF * sqrt(fmax(1.0 - s, 0.0)))
        else:
            v = CE_COEFF * sqrt(fmax(s - 1.0, 0.0))
    else:
        if s <= dp.tab_t[0]:
            v = dp.tab_v[0]
        elif s >= dp.tab_t[dp.n_tab - 1]:
            v = dp.tab_v[dp.n_tab - 1]
        else:
            lo = 0
            hi = dp.n_tab - 1
            while hi - lo > 1:
                mid = (lo + hi) >> 1
                if dp.tab_t[mid] <= s:
                    lo = mid
                else:
                    hi = mid
            w = (s - dp.tab_t[lo]) / (dp.tab_t[lo + 1] - dp.tab_t[lo])
            re = dp.tab_v[lo].real + w * (dp.tab_v[lo + 1].real - dp.tab_v[lo].real)
            im = dp.tab_v[lo].imag + w * (dp.tab_v[lo + 1].imag - dp.tab_v[lo].imag)
            v = re + 1j * im
    if dp.conj:
        v = v.real - 1j * v.imag
    return (dp.p_re + 1j * dp.p_im) * v + (dp.q_re + 1j * dp.q_im)


cdef inline double complex _f(const DriverP * dp, double sign, double t,
                              double complex g) noexcept nogil:
    # 2s/u written as 2s*conj(u)/|u|^2: one real division instead of the
    # branchy library complex division; |u| never leaves [~1e-5, ~1e7] here
    cdef double complex u = g - _eval(dp, t)
    cdef double k = (2.0 * sign) / (u.real * u.real + u.imag * u.imag)
    return (k * u.real) - 1j * (k * u.imag)


cdef inline double _cabs(double complex z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline double _knot_cap(const DriverP * dp, double t) noexcept nogil:
    cdef Py_ssize_t i
    cdef double gap
    for i in range(dp.n_knots):
        gap = dp.knots[i] - t
        if gap > 1e-13 * (1.0 + fabs(t)):
            return gap
    return INFINITY


cdef inline int _step(const DriverP * dp, double sign, double t,
                      double complex g, double h, double complex k1,
                      double complex * g_new, double * err) noexcept nogil:
    cdef double complex k2, k3, k4, k5, k6, k7, y, e
    k2 = _f(dp, sign, t + C2 * h, g + h * (A21 * k1))
    k3 = _f(dp, sign, t + C3 * h, g + h * (A31 * k1 + A32 * k2))
    k4 = _f(dp, sign, t + C4 * h, g + h * (A41 * k1 + A42 * k2 + A43 * k3))
    k5 = _f(dp, sign, t + C5 * h,
            g + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
    k6 = _f(dp, sign, t + h,
            g + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
    y = g + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
    k7 = _f(dp, sign, t + h, y)
    e = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
    g_new[0] = y
    err[0] = _cabs(e)
    if isfinite(y.real) and isfinite(y.imag):
        return 1
    return 0


cdef int _advance(const DriverP * dp, double sign, double complex z0,
                  double t_end, double collide_eps, double rel_tol,
                  double abs_tol, double max_step, double min_step,
                  double safety, long max_steps,
                  double * t_fin, double complex * g_fin,
                  long * steps_out) noexcept nogil:
    """Advance a single seed; the scalar core shared by every entry point."""
    cdef double t = 0.0, h = max_step
    cdef double complex g = z0, k1, g_new, g_half, lam, u
    cdef double d, h_try, err, tol, ratio, factor, t_new, hh, dummy, kr
    cdef long nsteps = 0
    cdef int ok

    if t_end <= 0.0:
        t_fin[0] = 0.0
        g_fin[0] = z0
        steps_out[0] = 0
        if _cabs(z0 - _eval(dp, 0.0)) <= collide_eps:
            return _COLLIDED
        return _ALIVE

    while True:
        lam = _eval(dp, t)
        d = _cabs(g - lam)
        if d <= collide_eps:
            t_fin[0] = t
            g_fin[0] = g
            steps_out[0] = nsteps
            return _COLLIDED
        if nsteps >= max_steps:
            t_fin[0] = t
            g_fin[0] = g
            steps_out[0] = nsteps
            return _EXHAUSTED
        if h < min_step:
            t_fin[0] = t
            g_fin[0] = g
            steps_out[0] = nsteps
            return _UNDERFLOW

        u = g - lam
        kr = (2.0 * sign) / (u.real * u.real + u.imag * u.imag)
        k1 = (kr * u.real) - 1j * (kr * u.imag)
        h_try = fmin(h, max_step)
        h_try = fmin(h_try, 0.5 * safety * d * d)
        h_try = fmin(h_try, _knot_cap(dp, t))
        h_try = fmin(h_try, t_end - t)
        h_try = fmax(h_try, 1e-300)

        ok = _step(dp, sign, t, g, h_try, k1, &g_new, &err)
        tol = abs_tol + rel_tol * fmax(_cabs(g), _cabs(g_new))
        if ok:
            ratio = err / tol
        else:
            ratio = INFINITY
        factor = 0.9 * pow(fmax(ratio, 1e-30), -0.2)
        if factor < 0.2:
            factor = 0.2
        elif factor > 5.0:
            factor = 5.0
        nsteps += 1

        if ratio <= 1.0:
            t_new = t + h_try
            lam = _eval(dp, t_new)
            if _cabs(g_new - lam) <= collide_eps:
                if sign > 0:
                    hh = 0.5 * h_try
                    _step(dp, sign, t, g, hh, k1, &g_half, &dummy)
                    lam = _eval(dp, t + hh)
                    if _cabs(g_half - lam) <= collide_eps:
                        t_new = t + hh
                        g_new = g_half
                t_fin[0] = t_new
                g_fin[0] = g_new
                steps_out[0] = nsteps
                return _COLLIDED
            t = t_new
            g = g_new
            if t >= t_end * (1.0 - 1e-15) - 1e-300:
                t_fin[0] = t_end
                g_fin[0] = g
                steps_out[0] = nsteps
                return _ALIVE
        h = h_try * factor


cdef DriverP _pack(double[:] head, double[:] tab_t, double complex[:] tab_v,
                   double[:] knots):
    cdef DriverP dp
    dp.kind = <int> head[0]
    dp.b_re = head[1]
    dp.b_im = head[2]
    dp.b_a = head[3]
    dp.alpha = head[4]
    dp.beta = head[5]
    dp.p_re = head[6]
    dp.p_im = head[7]
    dp.q_re = head[8]
    dp.q_im = head[9]
    dp.conj = <int> head[10]
    dp.s_hi = head[12]
    dp.n_tab = tab_t.shape[0]
    dp.tab_t = &tab_t[0] if dp.n_tab > 0 else NULL
    dp.tab_v = &tab_v[0] if dp.n_tab > 0 else NULL
    dp.n_knots = knots.shape[0]
    dp.knots = &knots[0] if dp.n_knots > 0 else NULL
    return dp


def integrate_many(double[:] head, double[:] tab_t, double complex[:] tab_v,
                   double[:] knots, z0, double t_end, double sign,
                   double collide_eps, double rel_tol, double abs_tol,
                   double max_step, double min_step, double safety,
                   long max_steps, int n_threads=1):
    z0_arr = np.ascontiguousarray(np.atleast_1d(z0), dtype=np.complex128)
    cdef double complex[:] zv = z0_arr
    cdef Py_ssize_t n = zv.shape[0]
    status_arr = np.zeros(n, dtype=np.int32)
    t_arr = np.zeros(n, dtype=np.float64)
    g_arr = np.zeros(n, dtype=np.complex128)
    steps_arr = np.zeros(n, dtype=np.int64)
    cdef int[:] status = status_arr
    cdef double[:] t_out = t_arr
    cdef double complex[:] g_out = g_arr
    cdef long[:] steps = steps_arr
    cdef DriverP dp = _pack(head, tab_t, tab_v, knots)
    cdef Py_ssize_t i
    cdef int nt = n_threads if n_threads > 0 else 1

    if nt == 1:
        for i in range(n):
            status[i] = _advance(&dp, sign, zv[i], t_end, collide_eps,
                                 rel_tol, abs_tol, max_step, min_step,
                                 safety, max_steps, &t_out[i], &g_out[i],
                                 &steps[i])
    else:
        for i in prange(n, nogil=True, schedule="dynamic", chunksize=64,
                        num_threads=nt):
            status[i] = _advance(&dp, sign, zv[i], t_end, collide_eps,
                                 rel_tol, abs_tol, max_step, min_step,
                                 safety, max_steps, &t_out[i], &g_out[i],
                                 &steps[i])
    return status_arr, t_arr, g_arr, steps_arr


def integrate_path(double[:] head, double[:] tab_t, double complex[:] tab_v,
                   double[:] knots, double complex z0, double t_end,
                   double sign, double collide_eps, double rel_tol,
                   double abs_tol, double max_step, double min_step,
                   double safety, long max_steps):
    """Single seed with per-step recording; mirrors _advance's control flow."""
    cdef DriverP dp = _pack(head, tab_t, tab_v, knots)
    cdef double t = 0.0, h = max_step
    cdef double complex g = z0, k1, g_new, g_half, lam, u
    cdef double d, h_try, err, tol, ratio, factor, t_new, hh, dummy, kr
    cdef long nsteps = 0
    cdef int ok, st = -1
    ts = [0.0]
    gs = [complex(z0)]

    if t_end <= 0.0:
        if _cabs(z0 - _eval(&dp, 0.0)) <= collide_eps:
            return COLLIDED, np.asarray(ts), np.asarray(gs, dtype=np.complex128)
        return ALIVE, np.asarray(ts), np.asarray(gs, dtype=np.complex128)

    while st < 0:
        lam = _eval(&dp, t)
        d = _cabs(g - lam)
        if d <= collide_eps:
            st = COLLIDED
            break
        if nsteps >= max_steps:
            st = EXHAUSTED
            break
        if h < min_step:
            st = UNDERFLOW
            break
        u = g - lam
        kr = (2.0 * sign) / (u.real * u.real + u.imag * u.imag)
        k1 = (kr * u.real) - 1j * (kr * u.imag)
        h_try = fmin(fmin(h, max_step), 0.5 * safety * d * d)
        h_try = fmin(h_try, _knot_cap(&dp, t))
        h_try = fmin(h_try, t_end - t)
        h_try = fmax(h_try, 1e-300)

        ok = _step(&dp, sign, t, g, h_try, k1, &g_new, &err)
        tol = abs_tol + rel_tol * fmax(_cabs(g), _cabs(g_new))
        ratio = err / tol if ok else INFINITY
        factor = 0.9 * pow(fmax(ratio, 1e-30), -0.2)
        factor = fmin(fmax(factor, 0.2), 5.0)
        nsteps += 1

        if ratio <= 1.0:
            t_new = t + h_try
            lam = _eval(&dp, t_new)
            if _cabs(g_new - lam) <= collide_eps:
                if sign > 0:
                    hh = 0.5 * h_try
                    _step(&dp, sign, t, g, hh, k1, &g_half, &dummy)
                    lam = _eval(&dp, t + hh)
                    if _cabs(g_half - lam) <= collide_eps:
                        t_new = t + hh
                        g_new = g_half
                st = COLLIDED
                t = t_new
                g = g_new
                ts.append(t)
                gs.append(complex(g))
                break
            t = t_new
            g = g_new
            ts.append(t)
            gs.append(complex(g))
            if t >= t_end * (1.0 - 1e-15) - 1e-300:
                st = ALIVE
                t = t_end
                ts[len(ts) - 1] = t_end
        h = h_try * factor

    return st, np.asarray(ts), np.asarray(gs, dtype=np.complex128)
