"""Everything specific to the linear driver lambda_c(t) = c*t.

The pioneer equation  c z + 2 log(2 - c z) = 2 log 2 + c^2 t  governs the
points newly added to the left hull.  All solves here run in the log variable
w = log(2 - c z), where the equation reads

    2 w - e^w = 2 log 2 - 2 + c^2 t,

the continuously unwrapped argument of 2 - c z is exactly Im(w), and the
branch index is ell = round((Im w - ARG(2 - c z)) / 2 pi).  Newton in w stays
well conditioned through the Omega- spiral, where 2 - c z underflows doubles;
the only degenerate spots are e^w = 2 (the curve tips at t = 0 and, on the
Omega0 minus branch, at t* = 4 pi / Im(c^2)), handled by the local square
root expansion.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ContinuationError,
    ParameterError,
    PhaseError,
    SingularityError,
    TraceTooShortError,
)
from .hulls import CurveTrace

_LOG2 = math.log(2.0)
_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# phase classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseRecord:
    """Region of the linear-driver phase diagram with its predicted constants."""

    c: complex
    region: str  # Omega+ | Omega- | Omega0 | RealAxis | ImagAxis | Origin
    reflected_class: str  # C+ | C- | C0 | boundary | origin
    fq_representative: complex
    reflections: tuple  # sequence from {RR, RI, RO} mapping c into the closed FQ
    re_c2: float
    im_c2: float
    rates: tuple | None = None  # (R_inf, I_inf) for Omega+
    spiral_target: complex | None = None  # 2/c for Omega-
    spiral_rate: float | None = None  # Im(c^2) for Omega-
    t_cut: float | None = None  # 2 pi / Im(c^2) for Omega0
    t_star: float | None = None  # 4 pi / Im(c^2) for Omega0
    holder_at_tstar: float | None = None  # |c| sqrt(t_star) = 2 sqrt(pi)

    def to_json(self) -> dict:
        out = {
            "c": [self.c.real, self.c.imag],
            "region": self.region,
            "reflected_class": self.reflected_class,
            "fq_representative": [self.fq_representative.real, self.fq_representative.imag],
            "reflections": list(self.reflections),
            "re_c2": self.re_c2,
            "im_c2": self.im_c2,
            "rates": list(self.rates) if self.rates is not None else None,
            "spiral_target": (
                [self.spiral_target.real, self.spiral_target.imag]
                if self.spiral_target is not None
                else None
            ),
            "spiral_rate": self.spiral_rate,
            "t_cut": self.t_cut,
            "t_star": self.t_star,
            "holder_at_tstar": self.holder_at_tstar,
        }
        return out


def _fold_first_quadrant(c: complex):
    """Reflect c into the closed first quadrant, recording the reflection used."""
    if c.real >= 0.0 and c.imag >= 0.0:
        return c, ()
    if c.real < 0.0 and c.imag >= 0.0:
        return -c.conjugate(), ("RI",)
    if c.real <= 0.0 and c.imag < 0.0:
        return -c, ("RO",)
    return c.conjugate(), ("RR",)


def asymptotic_rates(c: complex) -> tuple:
    """Closed-form growth rates (R_inf, I_inf) for c in Omega+.

    Solves the 2x2 limit system; algebraically R_inf + i I_inf = c.
    """
    c = complex(c)
    rec = classify(c)
    if rec.region != "Omega+":
        raise PhaseError(f"asymptotic rates require Omega+, got {rec.region}")
    fq = rec.fq_representative
    re_c, im_c = fq.real, fq.imag
    re_c2, im_c2 = rec.re_c2, rec.im_c2
    n2 = re_c * re_c + im_c * im_c
    r = (re_c2 * re_c + im_c * im_c2) / n2
    i = (re_c * im_c2 - re_c2 * im_c) / n2
    return (r, i)


def holder_at_tstar(c: complex) -> float:
    """|c| sqrt(4 pi / Im c^2); equals 2 sqrt(pi) for every c in Omega0."""
    rec = classify(c)
    if rec.region != "Omega0":
        raise PhaseError(f"holder_at_tstar requires Omega0, got {rec.region}")
    return abs(c) * math.sqrt(4.0 * math.pi / rec.im_c2)


def classify(c) -> PhaseRecord:
    """Phase diagram of the linear driver: sign of Re(c^2) after folding into
    the first quadrant; axes and the origin are boundary cases."""
    c = complex(c)
    if c == 0.0:
        return PhaseRecord(c, "Origin", "origin", c, (), 0.0, 0.0)
    fq, refl = _fold_first_quadrant(c)
    # constants are quoted for the folded representative; Re(c^2) is
    # reflection-invariant, Im(c^2) flips under RR/RI and is >= 0 for fq
    c2 = fq * fq
    re_c2, im_c2 = c2.real, c2.imag
    if c.imag == 0.0 or c.real == 0.0:
        region = "RealAxis" if c.imag == 0.0 else "ImagAxis"
        return PhaseRecord(c, region, "boundary", fq, refl, re_c2, im_c2)
    if re_c2 > 0.0:
        n2 = fq.real * fq.real + fq.imag * fq.imag
        rates = (
            (re_c2 * fq.real + fq.imag * im_c2) / n2,
            (fq.real * im_c2 - re_c2 * fq.imag) / n2,
        )
        return PhaseRecord(c, "Omega+", "C+", fq, refl, re_c2, im_c2, rates=rates)
    if re_c2 < 0.0:
        return PhaseRecord(
            c,
            "Omega-",
            "C-",
            fq,
            refl,
            re_c2,
            im_c2,
            spiral_target=2.0 / fq,
            spiral_rate=im_c2,
        )
    t_star = 4.0 * math.pi / im_c2
    return PhaseRecord(
        c,
        "Omega0",
        "C0",
        fq,
        refl,
        re_c2,
        im_c2,
        t_cut=t_star / 2.0,
        t_star=t_star,
        holder_at_tstar=abs(fq) * math.sqrt(t_star),
    )


# ---------------------------------------------------------------------------
# pioneer equation machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PioneerState:
    """One converged point of the pioneer equation continuation."""

    c: complex
    t: float
    branch: int  # +1 top frontier, -1 bottom frontier
    w: complex  # log(2 - c z) on the tracked branch
    residual: float

    @property
    def z(self) -> complex:
        return (2.0 - cmath.exp(self.w)) / self.c

    @property
    def theta(self) -> float:
        """Continuously unwrapped arg(2 - c z)."""
        return self.w.imag

    @property
    def ell(self) -> int:
        return int(round((self.theta - _principal(self.theta)) / _TWO_PI))

    @classmethod
    def from_z(cls, c, t, branch, z, theta=None) -> "PioneerState":
        """Build a (not necessarily converged) state from z and an unwrapped angle."""
        c, z = complex(c), complex(z)
        u = 2.0 - c * z
        if u == 0.0:
            raise SingularityError("z = 2/c is the logarithmic singularity")
        if theta is None:
            theta = cmath.phase(u)
        w = complex(math.log(abs(u)), float(theta))
        state = cls(c=c, t=float(t), branch=int(branch), w=w, residual=math.nan)
        return state


def _principal(theta: float) -> float:
    k = math.floor((theta + math.pi) / _TWO_PI)
    return theta - _TWO_PI * k


def _pe_rhs(c: complex, t: float) -> complex:
    return 2.0 * _LOG2 - 2.0 + c * c * t


def pioneer_residual(state: PioneerState) -> complex:
    """cz + 2(log|2-cz| + i theta) - 2 log 2 - c^2 t on the tracked branch."""
    return 2.0 * state.w - cmath.exp(state.w) - _pe_rhs(state.c, state.t)


def _residual_scale(c: complex, t: float) -> float:
    return 1.0 + abs(c * c) * abs(t)


def _newton_w(c, t, w0, tol, max_iter=60):
    """Damped Newton for 2w - e^w = rhs(t); returns (w, |G|, converged)."""
    rhs = _pe_rhs(c, t)
    w = w0
    g = 2.0 * w - cmath.exp(w) - rhs
    for _ in range(max_iter):
        if abs(g) <= tol:
            return w, abs(g), True
        jac = 2.0 - cmath.exp(w)
        if abs(jac) < 1e-12:
            break  # degenerate tip; caller falls back to the local expansion
        dw = -g / jac
        step = 1.0
        for _ in range(10):
            w_new = w + step * dw
            g_new = 2.0 * w_new - cmath.exp(w_new) - rhs
            if abs(g_new) < abs(g):
                break
            step *= 0.5
        else:
            return w, abs(g), False
        w, g = w_new, g_new
    return w, abs(g), abs(g) <= tol


def _expansion_seed(c, t, w_center, sign_hint):
    """Root near a degenerate tip e^w = 2: w = w_center + delta, delta^2 ~ A.

    w_center is log 2 + 2 pi i k; A = (2 w_center - 2 - rhs).  The sqrt sign
    is chosen to match sign_hint (a predictor or branch orientation).
    """
    rhs = _pe_rhs(c, t)
    a = 2.0 * w_center - 2.0 - rhs
    delta = cmath.sqrt(a)
    if (delta.real * sign_hint.real + delta.imag * sign_hint.imag) < 0.0:
        delta = -delta
    # one correction for the cubic term: delta^2 (1 + delta/3) = A
    for _ in range(2):
        delta = cmath.sqrt(a / (1.0 + delta / 3.0 + delta * delta / 12.0))
        if (delta.real * sign_hint.real + delta.imag * sign_hint.imag) < 0.0:
            delta = -delta
    return w_center + delta


def solve_pioneer(c, t, branch, warm_start: PioneerState | None = None, tol_factor=1e-12):
    """Solve the pioneer equation at time t on one branch.

    Cold starts (no warm_start) seed from the t -> 0 expansion z = +-2i sqrt(t)
    and are only trustworthy at small |c|^2 t; continuation should pass the
    previous state.  Raises ContinuationError when Newton cannot converge.
    """
    c = complex(c)
    t = float(t)
    branch = int(branch)
    if t < 0.0:
        raise ParameterError("pioneer time must be >= 0")
    tol = tol_factor * _residual_scale(c, t)
    if t == 0.0:
        return PioneerState(c, 0.0, branch, complex(_LOG2, 0.0), 0.0)
    if warm_start is None:
        w0 = _LOG2 - 1j * branch * c * cmath.sqrt(t)
    else:
        jac = 2.0 - cmath.exp(warm_start.w)
        dt = t - warm_start.t
        if abs(jac) > 1e-9:
            w0 = warm_start.w + dt * c * c / jac
        else:
            w0 = warm_start.w
    w, res, ok = _newton_w(c, t, w0, tol)
    if not ok:
        # near a tip the Jacobian 2 - e^w vanishes; solve the local expansion
        k = round(w0.imag / _TWO_PI)
        w_center = complex(_LOG2, _TWO_PI * k)
        hint = w0 - w_center
        if abs(hint) == 0.0:
            hint = -1j * branch * c
        w_seed = _expansion_seed(c, t, w_center, hint)
        w, res, ok = _newton_w(c, t, w_seed, tol)
        if not ok and res > 1e-7 * _residual_scale(c, t):
            raise ContinuationError(
                f"pioneer solve failed at t={t:.6g} (residual {res:.3g})",
                last_state=warm_start,
            )
    return PioneerState(c, t, branch, w, res)


# ---------------------------------------------------------------------------
# continuation tracer
# ---------------------------------------------------------------------------


def trace_pioneer_curve(c, T, dt, tol_factor=1e-12, tail_rel=1e-10) -> CurveTrace:
    """Predictor-corrector continuation of both branches of the pioneer curve.

    Samples are recorded on a shared adaptive grid with spacing at most dt.
    For c in Omega0 the minus branch is truncated at t* (its curve stops
    growing there); approach to t* is geometric down to tail_rel * t*, so the
    recorded minimum of |gamma(-t)| reflects the origin revisit.  For Omega0
    and Omega- the plus branch continues to T.
    """
    c = complex(c)
    rec = classify(c)
    if rec.region not in ("Omega+", "Omega-", "Omega0"):
        raise PhaseError(
            "pioneer tracing needs c off the axes; use the frontier tracer instead"
        )
    T = float(T)
    dt = float(dt)
    if T <= 0.0 or dt <= 0.0:
        raise ParameterError("T and dt must be positive")
    t_star = rec.t_star if rec.region == "Omega0" else math.inf
    minus_cap = min(T, t_star * (1.0 - tail_rel) if math.isfinite(t_star) else T)

    times = [0.0]
    states = {
        +1: [solve_pioneer(c, 0.0, +1, tol_factor=tol_factor)],
        -1: [solve_pioneer(c, 0.0, -1, tol_factor=tol_factor)],
    }

    def _advance(branch, t_target):
        prev = states[branch][-1]
        trial = solve_pioneer(c, t_target, branch, warm_start=prev, tol_factor=tol_factor)
        if abs(trial.w.imag - prev.w.imag) > 0.5 * math.pi:
            raise ContinuationError("angle jump exceeded pi/2", last_state=prev)
        return trial

    # both branches march on one ladder so the CurveTrace shares times
    t = 0.0
    h = min(dt, 0.005 / max(abs(c) ** 2, 1e-12))
    h_min = 1e-12 * max(T, 1.0)
    while t < T * (1.0 - 1e-15):
        active_minus = t < minus_cap
        t_next = min(t + h, T)
        if active_minus and math.isfinite(t_star):
            # geometric approach to t*: never step past the halfway point
            gap = minus_cap - t
            if t_next > t + 0.5 * gap and t + 0.5 * gap > t:
                t_next = min(t_next, t + max(0.5 * gap, tail_rel * t_star))
        try:
            new_plus = _advance(+1, t_next)
            new_minus = _advance(-1, t_next) if active_minus and t_next <= minus_cap else None
        except ContinuationError:
            if h <= h_min:
                raise
            h = max(h * 0.5, h_min)
            continue
        states[+1].append(new_plus)
        if new_minus is not None:
            states[-1].append(new_minus)
        times.append(t_next)
        t = t_next
        h = min(dt, h * 2.0)

    n = len(times)
    times_arr = np.asarray(times)
    gp = np.full(n, np.nan, dtype=np.complex128)
    gm = np.full(n, np.nan, dtype=np.complex128)
    wp = np.full(n, np.nan, dtype=np.complex128)
    wm = np.full(n, np.nan, dtype=np.complex128)
    ellp = np.zeros(n, dtype=np.int64)
    ellm = np.zeros(n, dtype=np.int64)
    res = np.zeros(n)
    for i, st in enumerate(states[+1]):
        gp[i], wp[i], ellp[i] = st.z, st.w, st.ell
        res[i] = max(res[i], st.residual)
    for i, st in enumerate(states[-1]):
        gm[i], wm[i], ellm[i] = st.z, st.w, st.ell
        res[i] = max(res[i], st.residual)
    return CurveTrace(
        times_arr,
        gp,
        gm,
        res,
        ell_plus=ellp,
        ell_minus=ellm,
        meta={
            "kind": "pioneer",
            "c": c,
            "region": rec.region,
            "w_plus": wp,
            "w_minus": wm,
            "n_minus": len(states[-1]),
            "t_star": rec.t_star,
            "t_cut": rec.t_cut,
        },
    )


def _minus_count(trace: CurveTrace) -> int:
    return int(trace.meta.get("n_minus", len(trace.times)))


def _solve_at(trace: CurveTrace, t: float, branch: int) -> PioneerState:
    """Re-solve at an arbitrary time, warm started from the nearest sample."""
    c = trace.meta["c"]
    key = "w_plus" if branch > 0 else "w_minus"
    ws = trace.meta[key]
    count = len(trace.times) if branch > 0 else _minus_count(trace)
    idx = int(np.searchsorted(trace.times[:count], t))
    idx = min(max(idx, 0), count - 1)
    warm = PioneerState(c, float(trace.times[idx]), branch, complex(ws[idx]), 0.0)
    return solve_pioneer(c, t, branch, warm_start=warm)


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticsReport:
    """Measured rate functionals of a pioneer trace with last-decade drift bars."""

    c: complex
    times: np.ndarray
    ratios: dict  # name -> sample array over times ("R+", "I+", "L+", "R-", ...)
    fitted: dict  # name -> (limit estimate, last-decade drift)
    spiral_limit: complex | None = None
    spiral_limit_error: float | None = None
    angle_slope: float | None = None
    angle_slope_drift: float | None = None
    im_nonpositive_from: float | None = None


def _ratio_fit(times, values):
    """Endpoint estimate of lim values(t) with the drift over the last decade."""
    t_end = times[-1]
    mid_idx = int(np.searchsorted(times, t_end / 2.0))
    end, mid = values[-1], values[mid_idx]
    return float(end), float(abs(end - mid))


def asymptotics_report(c, trace: CurveTrace, im_tol: float = 1e-6) -> AsymptoticsReport:
    """R, I, L functionals for both branches; spiral quantities when Omega-."""
    c = complex(c)
    rec = classify(c)
    times = trace.times
    if times[-1] <= 0.0 or times[-1] / max(times[1], 1e-300) < 10.0:
        raise TraceTooShortError("trace must cover at least a decade of times")
    sel = times > 0.0
    wm_all = trace.meta.get("w_minus")
    wp_all = trace.meta.get("w_plus")
    if wp_all is None:
        raise ParameterError("asymptotics need a pioneer trace with stored w arrays")
    ratios = {}
    fitted = {}
    nm = _minus_count(trace)
    for name, gamma, w, count in (
        ("+", trace.gamma_plus, wp_all, len(times)),
        ("-", trace.gamma_minus, wm_all, nm),
    ):
        tt = times[1:count]
        ratios[f"R{name}"] = gamma[1:count].real / tt
        ratios[f"I{name}"] = gamma[1:count].imag / tt
        ratios[f"L{name}"] = np.asarray(w)[1:count].real / tt
        for q in ("R", "I", "L"):
            fitted[f"{q}{name}"] = _ratio_fit(tt, ratios[f"{q}{name}"])
    spiral_limit = spiral_err = slope = slope_drift = im_from = None
    if rec.region == "Omega-":
        tt = times[1:nm]
        wm = np.asarray(wm_all)[1:nm]
        zm = trace.gamma_minus[1:nm]
        spiral_limit = complex(zm[-1])
        spiral_err = float(abs(zm[-1] - 2.0 / c))
        slope, slope_drift = _ratio_fit(tt, 2.0 * wm.imag / tt)
        ok = zm.imag <= im_tol
        idx = len(ok)
        for i in range(len(ok) - 1, -1, -1):
            if not ok[i]:
                break
            idx = i
        im_from = float(tt[idx]) if idx < len(ok) else None
    return AsymptoticsReport(
        c,
        times,
        ratios,
        fitted,
        spiral_limit=spiral_limit,
        spiral_limit_error=spiral_err,
        angle_slope=slope,
        angle_slope_drift=slope_drift,
        im_nonpositive_from=im_from,
    )


def spiral_diagnostics(c, trace: CurveTrace, im_tol: float = 1e-6) -> AsymptoticsReport:
    """Omega- spiral: limit 2/c and unwrapped-angle slope Im(c^2)."""
    rec = classify(complex(c))
    if rec.region != "Omega-":
        raise PhaseError(f"spiral diagnostics require Omega-, got {rec.region}")
    return asymptotics_report(c, trace, im_tol=im_tol)


@dataclass(frozen=True)
class Omega0Events:
    """Detected exotic-phase events against their predicted values."""

    c: complex
    t_cut: float
    t_cut_predicted: float
    t_star: float
    t_star_predicted: float
    origin_revisit_norm: float
    reflection_residual: float
    reflection_residual_interior: float
    ell_window_ok: bool

    def to_json(self) -> dict:
        return {
            "t_cut": self.t_cut,
            "t_star": self.t_star,
            "origin_revisit_norm": self.origin_revisit_norm,
            "reflection_residual": self.reflection_residual,
            "reflection_residual_interior": self.reflection_residual_interior,
            "ell_window_ok": self.ell_window_ok,
        }


def omega0_events(c, trace: CurveTrace) -> Omega0Events:
    """Branch-cut touch, origin revisit, reflection identity and ell window.

    t_cut: first minus-branch time with Re z = -Im z and |z| >= 2/|c|.
    Origin revisit: argmin of |gamma(-t)| near t*.  Reflection residual:
    sup_t |-i conj(gamma(-(t*-t))) - gamma(-t)| with mirror points re-solved
    at the exact mirrored times.
    """
    c = complex(c)
    rec = classify(c)
    if rec.region != "Omega0":
        raise PhaseError(f"omega0 events require Omega0, got {rec.region}")
    t_star_p, t_cut_p = rec.t_star, rec.t_cut
    nm = _minus_count(trace)
    times = trace.times[:nm]
    zm = trace.gamma_minus[:nm]
    if times[-1] < 0.99 * t_star_p:
        raise TraceTooShortError("trace must cover [0, t*] on the minus branch")

    # (i) branch-cut touch: zero of Re+Im under the magnitude guard
    s = zm.real + zm.imag
    guard = np.abs(zm) >= 1.5 / abs(c)
    k = None
    for i in range(1, len(times) - 1):
        if guard[i] and guard[i + 1] and s[i] == 0.0:
            k = (i, i)
            break
        if guard[i] and guard[i + 1] and s[i] * s[i + 1] < 0.0:
            k = (i, i + 1)
            break
    if k is None:
        raise TraceTooShortError("no branch-cut touch found on the minus branch")
    if k[0] == k[1]:
        t_cut = float(times[k[0]])
    else:
        f = lambda t: (lambda st: st.z.real + st.z.imag)(_solve_at(trace, t, -1))
        t_cut = float(brentq(f, times[k[0]], times[k[1]], xtol=1e-13 * t_star_p, rtol=1e-15))
    z_cut = _solve_at(trace, t_cut, -1).z
    if abs(z_cut) < 2.0 / abs(c) * (1.0 - 1e-6):
        raise ContinuationError("branch-cut candidate fails the magnitude guard")

    # (ii) origin revisit
    i_min = int(np.argmin(np.abs(zm[1:]))) + 1
    t_star = float(times[i_min])
    revisit_norm = float(abs(zm[i_min]))

    # (iii) reflection residual, mirror points solved at t*_predicted - t
    def _mirror_residual(lo_frac, hi_frac):
        worst = 0.0
        for i in range(nm):
            t = float(times[i])
            if not (lo_frac * t_star_p <= t <= hi_frac * t_star_p):
                continue
            tm = t_star_p - t
            zm_mirror = _solve_at(trace, tm, -1).z
            worst = max(worst, abs(-1j * zm_mirror.conjugate() - zm[i]))
        return worst

    refl_global = _mirror_residual(0.0, 1.0)
    refl_interior = _mirror_residual(0.05, 0.95)

    # (iv) ell = 1 throughout (t_cut, t*)
    ells = trace.ell_minus[:nm]
    margin = 2.0 * max(np.diff(times).max(), 1e-9)
    window = (times > t_cut + margin) & (times < t_star_p)
    before = times < t_cut - margin
    ell_ok = bool(np.all(ells[window] == 1)) and bool(np.all(ells[before] == 0))

    return Omega0Events(
        c=c,
        t_cut=t_cut,
        t_cut_predicted=t_cut_p,
        t_star=t_star,
        t_star_predicted=t_star_p,
        origin_revisit_norm=revisit_norm,
        reflection_residual=refl_global,
        reflection_residual_interior=refl_interior,
        ell_window_ok=ell_ok,
    )


def simplicity_scan(trace: CurveTrace, tol: float) -> float | None:
    """Earliest |t| at which two non-adjacent polyline segments come within tol."""
    from .geometry import first_self_contact

    params, pts = trace.polyline()
    return first_self_contact(params, pts, tol)
