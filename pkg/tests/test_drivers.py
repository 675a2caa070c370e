"""Driver evaluation, transform algebra, Hoelder estimation, subdivision."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loewner.drivers import Driver, c1_subdivision, holder_half_norm
from loewner.errors import DomainError, ParameterError, RegularityError

SQRT3 = math.sqrt(3.0)


def test_eval_closed_forms():
    assert Driver.linear(1 + 1j).eval(2.0) == 2 + 2j
    assert abs(Driver.counterexample().eval(0.0) - 4j / SQRT3) < 1e-15
    assert abs(Driver.sqrt_forward(4 / SQRT3).eval(1.0) - 4 / SQRT3) < 1e-15


def test_counterexample_pieces_and_continuity():
    ce = Driver.counterexample()
    assert abs(ce.eval(1.0)) < 1e-15
    assert abs(ce.eval(2.0) - 4 / SQRT3) < 1e-15
    # continuity across the kink
    assert abs(ce.eval(1.0 - 1e-12) - ce.eval(1.0 + 1e-12)) < 1e-5
    assert ce.eval(0.5).real == 0.0
    assert ce.eval(1.5).imag == 0.0


def test_domain_errors():
    ce = Driver.counterexample()
    with pytest.raises(DomainError):
        ce.eval(2.5)
    with pytest.raises(DomainError):
        ce.eval(-0.1)
    with pytest.raises(ParameterError):
        Driver.linear(1).scaled(0.0)
    with pytest.raises(ParameterError):
        Driver.linear(1).scaled(-2.0)


def test_dual_rotated_example():
    # -i c (T - u) for c = 1+i, T = 1 at u = 0 gives 1 - i
    d = Driver.linear(1 + 1j).dual_rotated(1.0)
    assert abs(d.eval(0.0) - (1 - 1j)) < 1e-15
    assert abs(d.eval(1.0)) == 0.0


def test_conjugation_closed_under_linear():
    c = 1.7 - 0.3j
    d = Driver.linear(c).conjugated()
    ref = Driver.linear(c.conjugate())
    ts = np.linspace(0.0, 3.0, 17)
    assert np.max(np.abs(d.eval(ts) - ref.eval(ts))) == 0.0


def test_conj_negated_is_ict_for_omega0():
    # for c in Omega0 the dual driver ict equals -conj(lambda_c)
    c = 1 + 1j
    d = Driver.linear(c).conj_negated()
    ts = np.linspace(0.0, 2.0, 9)
    assert np.max(np.abs(d.eval(ts) - (1j * c) * ts)) < 1e-15


def test_involutions():
    base = Driver.counterexample()
    ts = np.linspace(0.0, 2.0, 23)
    for tf in ("conjugated", "negated"):
        twice = getattr(getattr(base, tf)(), tf)()
        assert np.max(np.abs(twice.eval(ts) - base.eval(ts))) == 0.0


@pytest.mark.parametrize("a", [2.0, 0.5])
def test_scaling_exact_for_dyadic_factor(a):
    for base in (Driver.linear(1 + 1j), Driver.constant(2 - 1j), Driver.sqrt_forward(1.5)):
        scaled = base.scaled(a)
        ts = np.linspace(0.0, 1.5, 13)
        assert np.max(np.abs(scaled.eval(a * a * ts) - a * base.eval(ts))) == 0.0


def test_sqrt_driver_scale_invariant():
    # a * (b sqrt(t / a^2)) = b sqrt(t): the family is a fixed point of scaling
    d = Driver.sqrt_forward(1.3)
    ts = np.linspace(0.0, 4.0, 17)
    assert np.max(np.abs(d.scaled(2.0).eval(ts) - d.eval(ts))) == 0.0


def test_holder_linear_exact_at_dyadic_T():
    c = 1 + 1j
    est = holder_half_norm(Driver.linear(c), 4.0, 256)
    assert est.value == abs(c) * 2.0


@settings(max_examples=40, deadline=None)
@given(
    st.floats(0.1, 5.0),
    st.floats(0.0, 3.0),
    st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
)
def test_scaling_and_shift_algebra(a, t, cval):
    d = Driver.linear(cval)
    scaled = d.scaled(a)
    assert abs(scaled.eval(a * a * t) - a * d.eval(t)) <= 1e-12 * (1 + abs(cval) * t * a)
    shifted = d.shifted(t)
    assert abs(shifted.eval(0.5) - d.eval(t + 0.5)) <= 1e-12 * (1 + abs(cval) * (t + 1))


def test_tabulated_interpolation():
    d = Driver.tabulated([(0.0, 0.0), (1.0, 1 + 1j), (2.0, 2.0)])
    assert abs(d.eval(0.5) - (0.5 + 0.5j)) < 1e-15
    assert abs(d.eval(1.5) - (1.5 + 0.5j)) < 1e-15
    assert d.t_max == 2.0
    with pytest.raises(ParameterError):
        Driver.tabulated([(0.5, 0.0), (1.0, 1.0)])  # must start at t=0
    with pytest.raises(ParameterError):
        Driver.tabulated([(0.0, 0.0), (0.0, 1.0)])  # strictly increasing


def test_json_round_trip():
    drivers = [
        Driver.linear(2 + 1j).scaled(2.0).translated(1j),
        Driver.counterexample().dual_rotated(1.0),
        Driver.tabulated([(0.0, 0.0), (1.0, 1j)]),
    ]
    ts = np.linspace(0.0, 0.9, 7)
    for d in drivers:
        d2 = Driver.from_json(d.to_json())
        assert np.max(np.abs(d.eval(ts) - d2.eval(ts))) == 0.0
        assert d.fingerprint == d2.fingerprint


def test_holder_linear_exact_endpoint_pair():
    T = 2 * math.pi
    est = holder_half_norm(Driver.linear(1 + 1j), T, 1024)
    # the sup is attained at the (0, T) pair: |c| sqrt(T) = 2 sqrt(pi)
    assert abs(est.value - 2 * math.sqrt(math.pi)) < 1e-6


def test_holder_constant_zero():
    assert holder_half_norm(Driver.constant(3 + 2j), 5.0, 64).value == 0.0


def test_holder_sqrt_driver_approaches_a():
    # oracle: |a sqrt(t) - a sqrt(s)| / sqrt(t-s) <= a, attained as s -> t -> 0
    # and at the (0, 1) pair; a fine grid must approach the sup a from below
    a = 1.7
    v_coarse = holder_half_norm(Driver.sqrt_forward(a), 1.0, 64).value
    v_fine = holder_half_norm(Driver.sqrt_forward(a), 1.0, 2048).value
    assert v_coarse <= v_fine <= a + 1e-12
    assert v_fine >= a - 5e-3


@pytest.mark.parametrize("grid", [16, 32, 64])
def test_holder_monotone_under_refinement(grid):
    d = Driver.counterexample()
    v1 = holder_half_norm(d, 2.0, grid).value
    v2 = holder_half_norm(d, 2.0, 2 * grid).value
    assert v2 >= v1 - 1e-14


def test_holder_rejects_tiny_grid():
    with pytest.raises(ParameterError):
        holder_half_norm(Driver.linear(1), 1.0, 1)


def test_subdivision_linear():
    part = c1_subdivision(Driver.linear(1 + 1j), 1.0, sigma=1.0 / 3.0, deriv_sup=math.sqrt(2))
    # delta = (sigma / sup)^2 = 1/18, so 18 uniform pieces
    assert part.n_intervals == 18
    assert abs(part.max_step - 1.0 / 18.0) < 1e-15


def test_subdivision_constant_single_piece():
    part = c1_subdivision(Driver.constant(5.0), 1.0, sigma=1.0 / 3.0)
    assert part.n_intervals == 1


def test_subdivision_regularity_errors():
    with pytest.raises(RegularityError):
        c1_subdivision(Driver.sqrt_forward(1.0), 1.0)
    with pytest.raises(RegularityError):
        c1_subdivision(Driver.counterexample(), 2.0)


def test_subdivision_pieces_obey_sigma():
    # every sub-interval's directly estimated Hoelder norm stays below sigma
    sigma = 1.0 / 3.0
    for d in (Driver.linear(1 + 1j), Driver.tabulated([(0.0, 0.0), (0.5, 0.4j), (1.0, 0.7j)])):
        part = c1_subdivision(d, 1.0, sigma=sigma)
        bp = part.breakpoints
        for k in range(1, len(bp)):
            est = holder_half_norm(d.shifted(bp[k - 1]), bp[k] - bp[k - 1], 128)
            assert est.value <= sigma + 1e-12


def test_deriv_sup_values():
    assert Driver.linear(3 + 4j).deriv_sup(7.0) == 5.0
    assert Driver.constant(1j).deriv_sup(1.0) == 0.0
    assert math.isinf(Driver.sqrt_forward(1.0).deriv_sup(1.0))
    assert math.isinf(Driver.counterexample().deriv_sup(1.5))
    # smooth on [0, 0.75]: sup attained at the right end
    d = Driver.counterexample()
    expect = (4 / SQRT3 / 2) / math.sqrt(0.25)
    assert abs(d.deriv_sup(0.75) - expect) < 1e-12
