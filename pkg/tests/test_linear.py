"""Phase classification, pioneer continuation, exotic-phase events."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loewner.errors import PhaseError, SingularityError
from loewner.hulls import trace_two_sided_curve
from loewner.drivers import Driver
from loewner.linear import (
    PioneerState,
    asymptotic_rates,
    classify,
    holder_at_tstar,
    omega0_events,
    pioneer_residual,
    simplicity_scan,
    solve_pioneer,
    spiral_diagnostics,
    trace_pioneer_curve,
    _solve_at,
)

TWO_SQRT_PI = 2 * math.sqrt(math.pi)


# -- classification ----------------------------------------------------------


def test_classify_examples():
    rec = classify(2 + 1j)
    assert rec.region == "Omega+" and rec.rates == (2.0, 1.0)
    rec = classify(1 + 1j)
    assert rec.region == "Omega0"
    assert rec.t_cut == pytest.approx(math.pi, abs=0) and rec.t_star == pytest.approx(2 * math.pi, abs=0)
    assert rec.holder_at_tstar == pytest.approx(TWO_SQRT_PI, rel=1e-14)
    assert rec.t_cut == rec.t_star / 2
    rec = classify(-1 + 1j)
    assert rec.reflected_class == "C0" and rec.fq_representative == 1 + 1j
    assert rec.reflections == ("RI",)
    rec = classify(3.0)
    assert rec.region == "RealAxis" and rec.reflected_class == "boundary"
    rec = classify(2j)
    assert rec.region == "ImagAxis"
    assert classify(0).region == "Origin"
    rec = classify(1 + 2j)
    assert rec.region == "Omega-"
    assert rec.spiral_target == pytest.approx(0.4 - 0.8j)
    assert rec.spiral_rate == pytest.approx(4.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 4.0), st.floats(0.1, 4.0), st.sampled_from([1, -1, 1j, -1j]))
def test_classify_reflection_invariant(re, im, rot):
    c = complex(re, im)
    mirrored = [c.conjugate(), -c.conjugate(), -c]
    base = classify(c)
    for m in mirrored:
        rec = classify(m)
        assert rec.region == base.region
        assert rec.fq_representative == base.fq_representative


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 5.0), st.floats(0.05, 5.0))
def test_rate_identity(re, im):
    c = complex(re, im)
    if classify(c).region != "Omega+":
        return
    r, i = asymptotic_rates(c)
    assert complex(r, i) == pytest.approx(c, rel=1e-13)


def test_rates_phase_error():
    with pytest.raises(PhaseError):
        asymptotic_rates(1 + 2j)


def test_holder_at_tstar_c_independent():
    rng = np.random.default_rng(5)
    for r in rng.uniform(0.2, 5.0, 5):
        c = complex(r, r)  # exact Omega0: equal components
        assert abs(holder_at_tstar(c) - TWO_SQRT_PI) < 1e-12
    with pytest.raises(PhaseError):
        holder_at_tstar(2 + 1j)


# -- pioneer equation --------------------------------------------------------


def test_residual_at_origin_time_zero():
    st0 = PioneerState.from_z(1 + 1j, 0.0, +1, 0j, theta=0.0)
    assert abs(pioneer_residual(st0)) == 0.0


def test_residual_non_root_probe():
    # z = 1 at t = 0 does not solve the equation
    st1 = PioneerState.from_z(1 + 1j, 0.0, +1, 1.0 + 0j)
    assert abs(pioneer_residual(st1)) > 0.3


def test_residual_singularity():
    c = 1 + 1j
    with pytest.raises(SingularityError):
        PioneerState.from_z(c, 1.0, +1, 2 / c)


def test_solve_small_time_expansion():
    # oracle: second order expansion of the equation gives z ~ +-2i sqrt(t),
    # matching the lambda=0 slit tip
    for c in (1 + 1j, 2 + 1j, 1 + 2j):
        for branch in (+1, -1):
            st_ = solve_pioneer(c, 1e-4, branch)
            assert abs(st_.z - branch * 2j * 1e-2) <= 10 * 1e-4
            assert st_.ell == 0
            assert abs(pioneer_residual(st_)) <= 1e-11 * (1 + abs(c * c) * 1e-4)


def test_solve_warm_start_large_time():
    tr = trace_pioneer_curve(2 + 1j, 100.0, 0.5)
    z = tr.gamma_plus[-1]
    assert abs(z / 100.0 - (2 + 1j)) <= 0.02 * abs(2 + 1j) * 2  # within 2 percent-ish at t=100
    st_ = _solve_at(tr, 77.7, +1)
    assert abs(pioneer_residual(st_)) <= 1e-9 * (1 + abs((2 + 1j) ** 2) * 77.7)


def test_trace_residual_and_branch_invariants():
    c = 1 + 2j
    tr = trace_pioneer_curve(c, 50.0, 0.25)
    scale = 1 + abs(c * c) * tr.times
    assert np.all(tr.residuals <= 1e-9 * scale)
    # theta continuity and ell increments on the minus branch
    wm = tr.meta["w_minus"]
    n = tr.meta["n_minus"]
    dth = np.diff(np.asarray(wm[:n]).imag)
    assert np.max(np.abs(dth)) < math.pi / 2
    dell = np.diff(tr.ell_minus[:n])
    assert set(dell.tolist()) <= {0, 1}


def test_ell_increments_exactly_at_arg_wraps():
    # the winding index moves by one exactly where the principal argument of
    # 2 - c z jumps by about -2 pi between consecutive samples
    c = 1 + 2j
    tr = trace_pioneer_curve(c, 40.0, 0.2)
    n = tr.meta["n_minus"]
    theta = np.asarray(tr.meta["w_minus"][:n]).imag
    principal = theta - 2 * math.pi * np.round(theta / (2 * math.pi))
    jumps = np.diff(principal)
    dell = np.diff(tr.ell_minus[:n])
    assert np.all(np.abs(jumps[dell == 1] + 2 * math.pi) < math.pi / 2)
    assert np.all(np.abs(jumps[dell == 0]) < math.pi / 2)
    assert int(dell.sum()) == tr.ell_minus[n - 1] - tr.ell_minus[0] > 5


def test_trace_reflection_conjugate_c():
    # traces for conj(c) are conjugates of the swapped branches for c
    c = 1.3 + 0.7j
    tr = trace_pioneer_curve(c, 3.0, 0.1)
    tc = trace_pioneer_curve(c.conjugate(), 3.0, 0.1)
    for t in (0.5, 1.5, 2.9):
        zp = _solve_at(tr, t, +1).z
        zm_c = _solve_at(tc, t, -1).z
        assert abs(zm_c - zp.conjugate()) < 1e-9


def test_omega_plus_l_term_decay():
    c = 2 + 1j
    tr = trace_pioneer_curve(c, 60.0, 0.5)
    wp = np.asarray(tr.meta["w_plus"])
    sel = tr.times >= 10.0
    l_term = np.abs(wp[sel].real) / tr.times[sel]
    bound = 2 * np.log(1 + abs(c) ** 2 * tr.times[sel]) / tr.times[sel]
    assert np.all(l_term <= bound)


def test_strip_bound_first_quadrant():
    for c in (2 + 1j, 1 + 1j, 1 + 2j):
        tr = trace_pioneer_curve(c, 10.0, 0.1)
        n = tr.meta["n_minus"]
        assert np.nanmin(tr.gamma_plus.real) >= -1e-6
        assert np.nanmin(tr.gamma_minus[:n].real) >= -1e-6


def test_two_sided_agreement_with_frontier():
    # cross-oracle: pioneer continuation against backward-flow frontier limits
    c = 2 + 1j
    d = Driver.linear(c)
    ft = trace_two_sided_curve(d, 5.0, 0.5)
    pt = trace_pioneer_curve(c, 5.0, 0.5)
    for k, t in enumerate(ft.times):
        if t == 0.0:
            continue
        assert abs(_solve_at(pt, float(t), +1).z - ft.gamma_plus[k]) <= 1e-4
        assert abs(_solve_at(pt, float(t), -1).z - ft.gamma_minus[k]) <= 1e-4


def test_axes_delegate_to_frontier():
    with pytest.raises(PhaseError):
        trace_pioneer_curve(3.0, 1.0, 0.1)


# -- Omega- spiral -----------------------------------------------------------


def test_spiral_diagnostics():
    c = 1 + 2j
    tr = trace_pioneer_curve(c, 200.0, 0.5)
    rep = spiral_diagnostics(c, tr)
    assert rep.spiral_limit_error <= 1e-2
    assert abs(rep.angle_slope - 4.0) <= 0.02 * 4.0
    assert rep.im_nonpositive_from is not None and rep.im_nonpositive_from <= 50.0
    with pytest.raises(PhaseError):
        spiral_diagnostics(2 + 1j, tr)


# -- Omega0 events -----------------------------------------------------------


@pytest.mark.parametrize(
    "c,t_cut,t_star",
    [(1 + 1j, math.pi, 2 * math.pi), (cmath.rect(2.0, math.pi / 4), math.pi / 2, math.pi)],
)
def test_omega0_events(c, t_cut, t_star):
    c = complex(c.real, c.real)  # snap to exact Omega0 (equal components)
    tr = trace_pioneer_curve(c, t_star, t_star / 4096.0)
    ev = omega0_events(c, tr)
    assert abs(ev.t_cut - t_cut) <= 1e-3 * t_cut
    assert abs(ev.t_star - t_star) <= 1e-2 * t_star
    assert ev.origin_revisit_norm <= 1e-3
    assert ev.reflection_residual <= 1e-3
    assert ev.reflection_residual_interior <= 1e-5
    assert ev.ell_window_ok


def test_omega0_events_phase_guard():
    tr = trace_pioneer_curve(2 + 1j, 5.0, 0.1)
    with pytest.raises(PhaseError):
        omega0_events(2 + 1j, tr)


# -- simplicity --------------------------------------------------------------


def test_trace_robust_across_parameter_sweep():
    # continuation should survive a spread of magnitudes and phases in all
    # three regions with the residual contract intact
    cases = [0.1 + 0.1j, 10 + 10j, 5 + 1j, 0.3 + 2j, 1 + 0.1j, 0.2 + 3j]
    for c in cases:
        rec = classify(c)
        horizon = min(20.0, 2.0 * rec.t_star) if rec.region == "Omega0" else 20.0
        tr = trace_pioneer_curve(c, horizon, horizon / 256.0)
        scale = 1 + abs(c * c) * tr.times
        assert np.all(tr.residuals <= 1e-9 * scale), c
        assert np.all(np.isfinite(tr.gamma_plus)), c


def test_simplicity_scan_simple_curve():
    tr = trace_pioneer_curve(2 + 1j, 50.0, 0.25)
    assert simplicity_scan(tr, 1e-3) is None


def test_simplicity_scan_omega0_contact_at_tstar():
    t_star = 2 * math.pi
    tr = trace_pioneer_curve(1 + 1j, t_star, t_star / 4096.0)
    t_contact = simplicity_scan(tr, 1e-3)
    assert t_contact is not None
    assert abs(t_contact - t_star) <= 0.01 * t_star
