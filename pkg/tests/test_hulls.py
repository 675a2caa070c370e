"""Hull rasters, duality, frontier traces, intersections."""

import math

import numpy as np
import pytest

from loewner.drivers import Driver
from loewner.engine import SolverOptions
from loewner.errors import GridError
from loewner.geometry import hausdorff_distance
from loewner.hulls import (
    Grid,
    hull_intersection,
    left_hull_field,
    right_hull_field,
    trace_two_sided_curve,
)

ZERO = Driver.constant(0)
SQRT3 = math.sqrt(3.0)

# the straight-slit hull of a*sqrt(t): from the explicit map
# F(w) = (w-p)^phi (w+q)^(1-phi), the tip sits at radius
# (p+q) phi^phi (1-phi)^(1-phi) sqrt(t) with phi = Theta(a)/pi


def slit_tip_radius(a, t):
    phi = 0.5 * (1.0 - a / math.sqrt(16.0 + a * a))
    coeff = 2.0 / math.sqrt(phi * (1 - phi)) * phi**phi * (1 - phi) ** (1 - phi)
    return coeff * math.sqrt(t)


def test_left_field_zero_driver_segment():
    g = Grid(-1.0, 1.0, -3.0, 3.0, 129, 129)
    f = left_hull_field(ZERO, 1.0, g)
    pts = f.swallowed_points()
    assert len(pts) > 20
    assert np.all(pts.real == 0.0)
    assert np.abs(pts.imag).max() <= 2.0 + 1e-9
    # field value at iy is y^2/4 (closed form), sampled at exact nodes
    ys = g.ys[np.abs(g.ys) <= 1.9]
    for y in ys[:: len(ys) // 7]:
        if abs(y) < 1e-12:
            continue
        assert abs(f.value_near(1j * y) - y * y / 4.0) <= 1e-6


def test_left_field_t_zero_is_driver_start():
    f = left_hull_field(ZERO, 0.0, Grid(-1, 1, -1, 1, 33, 33))
    assert list(f.swallowed_points()) == [0j]


def test_right_field_zero_driver_real_segment():
    g = Grid(-3.0, 3.0, -1.0, 1.0, 129, 129)
    f = right_hull_field(ZERO, 1.0, g)
    pts = f.swallowed_points()
    assert np.all(pts.imag == 0.0)
    assert abs(np.abs(pts.real).max() - 2.0) <= 2 * g.cell_diag


def test_right_field_counterexample_arms():
    # R_1 = i L_1(4/sqrt(3) sqrt(.)): two segments at angles 3pi/4 and pi/4
    ce = Driver.counterexample()
    g = Grid(-3.0, 3.0, -3.0, 3.0, 257, 257)
    f = right_hull_field(ce, 1.0, g)
    pts = f.swallowed_points()
    assert len(pts) > 50
    on_diag = np.abs(pts.real - pts.imag) < 1e-12
    on_anti = np.abs(pts.real + pts.imag) < 1e-12
    assert np.all(on_diag | on_anti)
    assert pts[on_diag].real.min() >= -1e-12  # pi/4 arm in the first quadrant
    assert pts[on_anti].real.max() <= 1e-12  # 3pi/4 arm in the second
    r_max = np.abs(pts).max()
    assert abs(r_max - slit_tip_radius(4 / SQRT3, 1.0)) <= 2 * g.cell_diag


def test_left_field_linear_small_time_near_pioneer_arcs():
    # at small T every swallowed node must sit inside the blow-up halo of the
    # two pioneer arcs (which start as +-2i sqrt(t))
    from loewner.linear import solve_pioneer

    c = 1 + 1j
    T = 0.01
    g = Grid(-0.1, 0.1, -0.3, 0.3, 65, 65)
    f = left_hull_field(Driver.linear(c), T, g)
    arcs = np.array(
        [solve_pioneer(c, t, b).z for t in np.linspace(1e-6, T, 200) for b in (+1, -1)]
        + [0j]
    )
    for z in f.swallowed_points():
        assert np.min(np.abs(arcs - z)) <= 2 * g.cell_diag


def test_reflection_rr_raster():
    # L_t(conj lambda) equals the conjugate-reflected raster
    d = Driver.counterexample()
    g = Grid(-2.0, 2.0, -3.0, 3.0, 129, 129)
    f1 = left_hull_field(d, 1.5, g)
    g_ref = Grid(g.x0, g.x1, -g.y1, -g.y0, g.nx, g.ny)
    f2 = left_hull_field(d.conjugated(), 1.5, g_ref)
    hd = hausdorff_distance(np.conj(f1.swallowed_points()), f2.swallowed_points())
    assert hd <= 2 * g.cell_diag
    assert f1.swallowed_mask().sum() > 0


def test_unresolved_cells_counted_not_fatal():
    f = left_hull_field(ZERO, 1.0, Grid(-1, 1, -1, 1, 17, 17),
                        SolverOptions(rel_tol=1e-12, abs_tol=1e-12, max_steps=10_000))
    assert f.n_unresolved >= 0  # construction survives regardless


def test_frontier_trace_zero_driver_slit():
    tr = trace_two_sided_curve(ZERO, 1.0, 0.05)
    t = tr.times[1:]
    assert np.nanmax(np.abs(tr.gamma_plus[1:] - 2j * np.sqrt(t))) < 1e-3
    assert np.nanmax(np.abs(tr.gamma_minus[1:] + 2j * np.sqrt(t))) < 1e-3
    assert tr.gamma_plus[0] == 0.0 and tr.gamma_minus[0] == 0.0
    assert np.nanmax(tr.residuals) < 1e-4


def test_frontier_trace_starts_at_driver():
    d = Driver.linear(2 + 1j)
    tr = trace_two_sided_curve(d, 0.5, 0.25)
    assert abs(tr.gamma_plus[0] - d.eval(0.0)) <= 1e-6


def test_frontier_sqrt_tip_matches_slit_map():
    a = 4 / SQRT3
    tr = trace_two_sided_curve(Driver.sqrt_forward(a), 1.0, 0.25)
    tip = tr.gamma_plus[-1]
    expected = slit_tip_radius(a, 1.0) * np.exp(1j * math.pi / 4)
    assert abs(tip - expected) < 1e-3


def test_polyline_orders_two_sided_curve():
    tr = trace_two_sided_curve(ZERO, 1.0, 0.25)
    params, pts = tr.polyline()
    assert params[0] == -1.0 and params[-1] == 1.0
    assert np.all(np.diff(params) > 0)
    # one shared origin sample
    assert np.sum(np.abs(pts) < 1e-12) == 1


def test_hull_intersection_zero_driver_origin_only():
    g = Grid(-2.5, 2.5, -2.5, 2.5, 101, 101)
    fl = left_hull_field(ZERO, 1.0, g)
    fr = right_hull_field(ZERO, 1.0, g)
    rep = hull_intersection(fl, fr)
    assert list(rep.points) == [0j]


def test_hull_intersection_disjoint_empty():
    # segments on x = 0 and x = 2 never meet
    g = Grid(-2.5, 2.5, -2.5, 2.5, 101, 101)
    fa = left_hull_field(ZERO, 1.0, g)
    fb = left_hull_field(Driver.constant(2.0), 1.0, g)
    rep = hull_intersection(fa, fb)
    assert len(rep.points) == 0
    assert fa.swallowed_mask().sum() > 0 and fb.swallowed_mask().sum() > 0


def test_hull_intersection_grid_mismatch():
    fl = left_hull_field(ZERO, 1.0, Grid(-1, 1, -1, 1, 33, 33))
    fr = right_hull_field(ZERO, 1.0, Grid(-1, 1, -1, 1, 65, 65))
    with pytest.raises(GridError):
        hull_intersection(fl, fr)


def test_translation_scaling_rasters():
    # raster of translated driver equals translated raster; scaled likewise
    a = 1 + 1j
    g = Grid(-1.0, 1.0, -3.0, 3.0, 65, 65)
    f = left_hull_field(ZERO, 1.0, g)
    g2 = Grid(g.x0 + a.real, g.x1 + a.real, g.y0 + a.imag, g.y1 + a.imag, 65, 65)
    f2 = left_hull_field(ZERO.translated(a), 1.0, g2)
    assert hausdorff_distance(f.swallowed_points() + a, f2.swallowed_points()) <= 2 * g.cell_diag
    s = 2.0
    g3 = Grid(s * g.x0, s * g.x1, s * g.y0, s * g.y1, 65, 65)
    f3 = left_hull_field(ZERO.scaled(s), s * s * 1.0, g3)
    assert hausdorff_distance(s * f.swallowed_points(), f3.swallowed_points()) <= 2 * g3.cell_diag
