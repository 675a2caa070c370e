"""Left/right hull rasters and two-sided curve tracing by frontier limits.

A hull raster integrates every grid node forward and records its swallow
time; sublevel sets of the raster are the left hulls.  Right hulls come from
the duality principle: a node w lies in R_t exactly when -i*w is swallowed by
time t under the dual driver -i*lambda(t-.), so the right raster integrates
the rotated nodes and keeps the original grid coordinates.

Rasters can resolve the hull only where grid nodes actually meet it: a node
registers as swallowed when its trajectory reaches the blow_up_eps tube
around the driver, which happens for nodes on (or within ~1e-9 of) the hull.
Set comparisons therefore use Hausdorff distances with a 2-cell tolerance and
treat the raster as a sample of the hull, not a fattening of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import default_threads, kernel
from .drivers import Driver
from .engine import DEFAULT_OPTS, SolverOptions, inverse_map
from .errors import GridError, StiffnessError
from .geometry import hausdorff_distance

# rasters need tighter local error than trajectories: an on-hull seed that
# drifts delta off the invariant manifold only dips to ~sqrt(2*delta) from the
# driver, so accumulated error must stay below blow_up_eps^2/2
RASTER_OPTS = SolverOptions(rel_tol=1e-12, abs_tol=1e-12)

DEFAULT_EPS_SCHEDULE = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class Grid:
    x0: float
    x1: float
    y0: float
    y1: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2 or self.x1 <= self.x0 or self.y1 <= self.y0:
            raise GridError("grid must span a rectangle with nx, ny >= 2")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y0, self.y1, self.ny)

    def nodes(self) -> np.ndarray:
        return self.xs[None, :] + 1j * self.ys[:, None]

    @property
    def cell(self) -> tuple:
        return ((self.x1 - self.x0) / (self.nx - 1), (self.y1 - self.y0) / (self.ny - 1))

    @property
    def cell_diag(self) -> float:
        dx, dy = self.cell
        return float(np.hypot(dx, dy))

    @staticmethod
    def square(center: complex, half: float, n: int) -> "Grid":
        c = complex(center)
        return Grid(c.real - half, c.real + half, c.imag - half, c.imag + half, n, n)

    @staticmethod
    def for_driver(driver: Driver, T: float, n: int = 512, pad: float = 0.2) -> "Grid":
        """Covers the strip bound on Re with margin; Im sized by hull growth."""
        lam = driver.eval(np.linspace(0.0, float(T), 256))
        gr = 2.0 * np.sqrt(float(T))  # vertical slit scale, the worst case
        x0, x1 = lam.real.min(), lam.real.max()
        y0, y1 = lam.imag.min() - gr, lam.imag.max() + gr
        mx = pad * max(x1 - x0, gr)
        my = pad * (y1 - y0)
        return Grid(x0 - mx, x1 + mx, y0 - my, y1 + my, n, n)


@dataclass(frozen=True)
class HullField:
    """Raster of blow-up times: +inf for alive nodes, NaN for solver failures."""

    grid: Grid
    times: np.ndarray
    t_max: float
    driver_fingerprint: str
    side: str = "left"

    def swallowed_mask(self, t: float | None = None) -> np.ndarray:
        level = self.t_max if t is None else float(t)
        with np.errstate(invalid="ignore"):
            return self.times <= level

    def swallowed_points(self, t: float | None = None) -> np.ndarray:
        return self.grid.nodes()[self.swallowed_mask(t)]

    @property
    def n_unresolved(self) -> int:
        return int(np.isnan(self.times).sum())

    def value_near(self, z: complex) -> float:
        i = int(np.argmin(np.abs(self.grid.xs - complex(z).real)))
        j = int(np.argmin(np.abs(self.grid.ys - complex(z).imag)))
        return float(self.times[j, i])


def _batch_times(driver: Driver, seeds: np.ndarray, T: float, opts: SolverOptions, threads):
    head, tab_t, tab_v, knots = driver.kernel_spec(T)
    status, t_out, _, _ = kernel.integrate_many(
        head, tab_t, tab_v, knots, seeds.ravel(), float(T), 1.0,
        opts.blow_up_eps, opts.rel_tol, opts.abs_tol, opts.max_step,
        opts.min_step, opts.singularity_safety, opts.max_steps,
        threads if threads is not None else default_threads(),
    )
    times = np.where(
        status == 1, t_out, np.where(status == 0, np.inf, np.nan)
    ).reshape(seeds.shape)
    return times


def left_hull_field(
    driver: Driver,
    T: float,
    grid: Grid | None = None,
    opts: SolverOptions = RASTER_OPTS,
    threads: int | None = None,
) -> HullField:
    """Blow-up-time raster; sublevel sets are the left hulls L_t for t <= T."""
    grid = grid if grid is not None else Grid.for_driver(driver, T)
    times = _batch_times(driver, grid.nodes(), T, opts, threads)
    return HullField(grid, times, float(T), driver.fingerprint, side="left")


def right_hull_field(
    driver: Driver,
    t: float,
    grid: Grid | None = None,
    opts: SolverOptions = RASTER_OPTS,
    threads: int | None = None,
) -> HullField:
    """Raster of R_t via duality: w in R_t iff -i*w in L_t(-i*lambda(t-.))."""
    dual = driver.dual_rotated(float(t))
    if grid is None:
        g = Grid.for_driver(dual, t)
        # i * ([x0,x1] x [y0,y1]) = [-y1,-y0] x [x0,x1]
        grid = Grid(-g.y1, -g.y0, g.x0, g.x1, g.ny, g.nx)
    seeds = -1j * grid.nodes()
    times = _batch_times(dual, seeds, t, opts, threads)
    return HullField(grid, times, float(t), driver.fingerprint, side="right")


@dataclass(frozen=True)
class CurveTrace:
    """Sampled two-sided curve: gamma_plus at +t, gamma_minus at -t.

    Missing samples (failed frontier limits, truncated branches) are NaN.
    ell_plus/ell_minus are None for general drivers and winding-index arrays
    for pioneer traces of the linear driver.
    """

    times: np.ndarray
    gamma_plus: np.ndarray
    gamma_minus: np.ndarray
    residuals: np.ndarray
    ell_plus: np.ndarray | None = None
    ell_minus: np.ndarray | None = None
    ok_plus: np.ndarray | None = None
    ok_minus: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def polyline(self):
        """(params, points) walking the curve from -a to +b, NaN samples dropped."""
        m_ok = ~np.isnan(self.gamma_minus)
        p_ok = ~np.isnan(self.gamma_plus)
        params = np.concatenate([-self.times[m_ok][::-1], self.times[p_ok]])
        pts = np.concatenate([self.gamma_minus[m_ok][::-1], self.gamma_plus[p_ok]])
        # the two branches share gamma(0); drop the duplicate vertex
        if m_ok[0] and p_ok[0]:
            keep = np.ones(len(params), dtype=bool)
            keep[m_ok.sum()] = False
            params, pts = params[keep], pts[keep]
        return params, pts


def trace_two_sided_curve(
    driver: Driver,
    T: float,
    dt: float,
    eps_schedule=DEFAULT_EPS_SCHEDULE,
    opts: SolverOptions = DEFAULT_OPTS,
) -> CurveTrace:
    """Frontier-limit trace: gamma^+(t), gamma^-(-t) from g_t^{-1}(lambda(t) +- i*eps).

    The last iterate of the eps schedule is reported; the gap between the
    final two iterates is the per-sample residual.  Samples whose backward
    flow collides with the driver are flagged and left NaN.
    """
    n = max(1, int(round(float(T) / float(dt))))
    times = np.linspace(0.0, float(T), n + 1)
    gp = np.full(n + 1, np.nan, dtype=np.complex128)
    gm = np.full(n + 1, np.nan, dtype=np.complex128)
    res = np.zeros(n + 1)
    okp = np.ones(n + 1, dtype=bool)
    okm = np.ones(n + 1, dtype=bool)
    lam0 = driver.eval(0.0)
    gp[0] = gm[0] = lam0

    for k in range(1, n + 1):
        t = float(times[k])
        lam = driver.eval(t)
        for sign, arr, ok in ((1.0, gp, okp), (-1.0, gm, okm)):
            vals = []
            try:
                for eps in eps_schedule:
                    vals.append(inverse_map(driver, t, lam + 1j * sign * eps, opts))
            except StiffnessError:
                ok[k] = False
                res[k] = np.inf
                continue
            arr[k] = vals[-1]
            gap = abs(vals[-1] - vals[-2]) if len(vals) > 1 else 0.0
            res[k] = max(res[k], gap)
    return CurveTrace(times, gp, gm, res, ok_plus=okp, ok_minus=okm,
                      meta={"driver": driver.fingerprint, "kind": "frontier"})


@dataclass(frozen=True)
class IntersectionReport:
    points: np.ndarray
    resolution: float
    hausdorff_to_expected: float | None = None
    n_unresolved: int = 0


def hull_intersection(
    a: HullField,
    b: HullField,
    t_a: float | None = None,
    t_b: float | None = None,
    expected=None,
) -> IntersectionReport:
    """Nodes swallowed in both rasters; optionally compared to an expected set.

    `expected` may be an array of complex points or a callable u -> point on
    [0, 1] that is sampled densely.
    """
    if a.grid.nx != b.grid.nx or a.grid.ny != b.grid.ny or not (
        np.allclose(a.grid.xs, b.grid.xs) and np.allclose(a.grid.ys, b.grid.ys)
    ):
        raise GridError("hull fields live on incommensurable grids")
    mask = a.swallowed_mask(t_a) & b.swallowed_mask(t_b)
    pts = a.grid.nodes()[mask]
    hd = None
    if expected is not None:
        if callable(expected):
            expected = np.asarray([expected(u) for u in np.linspace(0.0, 1.0, 2048)])
        hd = hausdorff_distance(pts, expected)
    n_bad = int(np.isnan(a.times).sum() + np.isnan(b.times).sum())
    return IntersectionReport(pts, a.grid.cell_diag, hd, n_bad)
