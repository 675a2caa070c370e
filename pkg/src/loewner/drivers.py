"""Driving functions and their transform algebra.

A driver is a continuous complex-valued function of Loewner time.  Every
driver here is a closed-form base (constant, linear, a*sqrt(t), the piecewise
counterexample, or a tabulated polyline) wrapped in zero or more transforms
(shift, translate, scale, conjugate, negate, dual-rotate).  Any chain of
wrappers collapses to

    lambda(t) = p * C(base(alpha*t + beta)) + q

with C either identity or complex conjugation.  The collapsed form is what
the integration kernels consume; the original wrapper list is kept for JSON
round trips and fingerprints.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError, RegularityError

_SQRT3 = math.sqrt(3.0)
COUNTEREXAMPLE_COEFF = 4.0 / _SQRT3

_BASE_KINDS = ("constant", "linear", "sqrt", "counterexample", "tabulated")
_KIND_CODE = {k: i for i, k in enumerate(_BASE_KINDS)}

# columns of the packed kernel head vector
HEAD_LEN = 13


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class Driver:
    """Immutable driving function; all transforms return new instances."""

    kind: str
    params: tuple = ()
    transforms: tuple = ()
    # collapsed representation, derived in __post_init__
    alpha: float = field(init=False, default=1.0)
    beta: float = field(init=False, default=0.0)
    p: complex = field(init=False, default=1.0 + 0.0j)
    q: complex = field(init=False, default=0.0 + 0.0j)
    conj: bool = field(init=False, default=False)

    def __post_init__(self):
        if self.kind not in _BASE_KINDS:
            raise ParameterError(f"unknown driver kind {self.kind!r}")
        alpha, beta = 1.0, 0.0
        p, q, conj = 1.0 + 0.0j, 0.0 + 0.0j, False
        for name, arg in self.transforms:
            if name == "shifted":
                t0 = float(arg)
                beta = alpha * t0 + beta
            elif name == "translated":
                q = q + _as_complex(arg)
            elif name == "scaled":
                a = float(arg)
                if not a > 0.0:
                    raise ParameterError("scaling factor must be positive")
                alpha /= a * a
                p *= a
                q *= a
            elif name == "conjugated":
                p, q, conj = p.conjugate(), q.conjugate(), not conj
            elif name == "negated":
                p, q = -p, -q
            elif name == "conj_negated":
                p, q, conj = -p.conjugate(), -q.conjugate(), not conj
            elif name == "dual_rotated":
                T = float(arg)
                beta = alpha * T + beta
                alpha = -alpha
                p *= -1.0j
                q *= -1.0j
            elif name == "time_reversed":  # internal, used by the backward flow
                T = float(arg)
                beta = alpha * T + beta
                alpha = -alpha
            else:
                raise ParameterError(f"unknown transform {name!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "conj", conj)
        if self.t_max < 0.0:
            raise DomainError("transform chain leaves an empty time domain")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(x) -> "Driver":
        return Driver("constant", (_as_complex(x),))

    @staticmethod
    def linear(c) -> "Driver":
        return Driver("linear", (_as_complex(c),))

    @staticmethod
    def sqrt_forward(a: float) -> "Driver":
        a = float(a)
        if a < 0.0:
            raise ParameterError("sqrt driver coefficient must be >= 0")
        return Driver("sqrt", (a,))

    @staticmethod
    def counterexample() -> "Driver":
        return Driver("counterexample")

    @staticmethod
    def tabulated(samples) -> "Driver":
        ts = np.asarray([float(s[0]) for s in samples], dtype=np.float64)
        vs = np.asarray(
            [
                _as_complex(s[1]) if len(s) == 2 else complex(float(s[1]), float(s[2]))
                for s in samples
            ],
            dtype=np.complex128,
        )
        if len(ts) < 2 or ts[0] != 0.0 or np.any(np.diff(ts) <= 0.0):
            raise ParameterError("tabulated samples must start at t=0 and increase")
        return Driver("tabulated", (ts, vs))

    # -- transforms --------------------------------------------------------

    def _wrap(self, name, arg=None) -> "Driver":
        return Driver(self.kind, self.params, self.transforms + ((name, arg),))

    def shifted(self, t0: float) -> "Driver":
        self._check_time(float(t0))
        return self._wrap("shifted", float(t0))

    def translated(self, a) -> "Driver":
        return self._wrap("translated", _as_complex(a))

    def scaled(self, a: float) -> "Driver":
        return self._wrap("scaled", float(a))

    def conjugated(self) -> "Driver":
        return self._wrap("conjugated")

    def negated(self) -> "Driver":
        return self._wrap("negated")

    def conj_negated(self) -> "Driver":
        return self._wrap("conj_negated")

    def dual_rotated(self, T: float) -> "Driver":
        self._check_time(float(T))
        return self._wrap("dual_rotated", float(T))

    def time_reversed(self, T: float) -> "Driver":
        """lambda(T - t), the driver seen by the backward flow. Internal."""
        self._check_time(float(T))
        return self._wrap("time_reversed", float(T))

    def transform(self, name: str, arg=None) -> "Driver":
        table = {
            "shifted": self.shifted,
            "translated": self.translated,
            "scaled": self.scaled,
            "conjugated": self.conjugated,
            "negated": self.negated,
            "conj_negated": self.conj_negated,
            "dual_rotated": self.dual_rotated,
        }
        if name not in table:
            raise ParameterError(f"unknown transform {name!r}")
        return table[name]() if arg is None else table[name](arg)

    # -- domain ------------------------------------------------------------

    @property
    def _base_t_max(self) -> float:
        if self.kind == "counterexample":
            return 2.0
        if self.kind == "tabulated":
            return float(self.params[0][-1])
        return math.inf

    @property
    def t_max(self) -> float:
        """Upper end of the declared domain [0, t_max]."""
        s_hi = self._base_t_max
        if self.alpha > 0.0:
            return (s_hi - self.beta) / self.alpha if math.isfinite(s_hi) else math.inf
        return -self.beta / self.alpha  # alpha < 0 needs beta (= image of 0) finite

    def _check_time(self, t: float, fuzz: float = 1e-9):
        if not (-fuzz <= t <= self.t_max * (1.0 + fuzz) + fuzz):
            raise DomainError(f"t={t} outside driver domain [0, {self.t_max}]")

    # -- evaluation --------------------------------------------------------

    def eval(self, t):
        """Evaluate lambda(t); accepts scalars or arrays."""
        scalar = np.isscalar(t)
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        hi = self.t_max
        fuzz = 1e-9 * (1.0 + np.abs(t_arr))
        if np.any(t_arr < -fuzz) or np.any(t_arr > hi + fuzz):
            raise DomainError(f"time outside driver domain [0, {hi}]")
        head, tab_t, tab_v, _ = self.kernel_spec()
        out = eval_packed(head, tab_t, tab_v, t_arr)
        return complex(out[0]) if scalar else out

    __call__ = eval

    # -- smoothness --------------------------------------------------------

    def _s_range(self, T: float):
        s0, s1 = self.beta, self.alpha * T + self.beta
        lo, hi = min(s0, s1), max(s0, s1)
        s_hi = self._base_t_max
        return max(lo, 0.0), min(hi, s_hi) if math.isfinite(s_hi) else hi

    def deriv_sup(self, T: float) -> float:
        """sup of |lambda'| over [0, T]; inf when the derivative is unbounded."""
        self._check_time(T)
        lo, hi = self._s_range(T)
        scale = abs(self.p) * abs(self.alpha)
        if self.kind == "constant":
            return 0.0
        if self.kind == "linear":
            return scale * abs(self.params[0])
        if self.kind == "sqrt":
            a = self.params[0]
            if a == 0.0:
                return 0.0
            return math.inf if lo <= 0.0 else scale * a / (2.0 * math.sqrt(lo))
        if self.kind == "counterexample":
            if lo <= 1.0 <= hi:
                return math.inf
            gap = (1.0 - hi) if hi < 1.0 else (lo - 1.0)
            return scale * (COUNTEREXAMPLE_COEFF / 2.0) / math.sqrt(gap)
        ts, vs = self.params
        slopes = np.abs(np.diff(vs) / np.diff(ts))
        keep = (ts[1:] > lo) & (ts[:-1] < hi)
        return scale * float(slopes[keep].max()) if keep.any() else 0.0

    def knots_in(self, t0: float, t1: float) -> np.ndarray:
        """Interior times in (t0, t1) where the driver is not smooth."""
        if self.kind == "counterexample":
            base = np.array([1.0])
        elif self.kind == "sqrt":
            base = np.array([0.0])
        elif self.kind == "tabulated":
            base = np.asarray(self.params[0][1:-1], dtype=np.float64)
        else:
            return np.empty(0)
        ts = (base - self.beta) / self.alpha
        ts = np.sort(ts)
        return ts[(ts > t0 + 1e-15) & (ts < t1 - 1e-15)]

    # -- kernel marshaling ---------------------------------------------------

    def kernel_spec(self, t_end: float | None = None):
        head = np.zeros(HEAD_LEN, dtype=np.float64)
        head[0] = _KIND_CODE[self.kind]
        if self.kind in ("constant", "linear"):
            head[1], head[2] = self.params[0].real, self.params[0].imag
        elif self.kind == "sqrt":
            head[3] = self.params[0]
        head[4], head[5] = self.alpha, self.beta
        head[6], head[7] = self.p.real, self.p.imag
        head[8], head[9] = self.q.real, self.q.imag
        head[10] = 1.0 if self.conj else 0.0
        head[12] = self._base_t_max
        if self.kind == "tabulated":
            tab_t = np.ascontiguousarray(self.params[0])
            tab_v = np.ascontiguousarray(self.params[1])
        else:
            tab_t = np.empty(0, dtype=np.float64)
            tab_v = np.empty(0, dtype=np.complex128)
        hi = t_end if t_end is not None else min(self.t_max, 1e18)
        knots = np.ascontiguousarray(self.knots_in(0.0, hi), dtype=np.float64)
        return head, tab_t, tab_v, knots

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "constant":
            base = {"kind": "constant", "x": [self.params[0].real, self.params[0].imag]}
        elif self.kind == "linear":
            base = {"kind": "linear", "c": [self.params[0].real, self.params[0].imag]}
        elif self.kind == "sqrt":
            base = {"kind": "sqrt", "a": self.params[0]}
        elif self.kind == "counterexample":
            base = {"kind": "counterexample"}
        else:
            ts, vs = self.params
            base = {
                "kind": "tabulated",
                "samples": [[float(t), float(v.real), float(v.imag)] for t, v in zip(ts, vs)],
            }
        if self.transforms:
            tf = []
            for name, arg in self.transforms:
                entry = {"kind": name}
                if name == "shifted":
                    entry["t0"] = arg
                elif name == "translated":
                    entry["a"] = [arg.real, arg.imag]
                elif name == "scaled":
                    entry["a"] = arg
                elif name in ("dual_rotated", "time_reversed"):
                    entry["T"] = arg
                tf.append(entry)
            base["transforms"] = tf
        return base

    @staticmethod
    def from_json(spec) -> "Driver":
        if isinstance(spec, str):
            spec = json.loads(spec)
        kind = spec.get("kind")
        if kind == "constant":
            drv = Driver.constant(spec["x"])
        elif kind == "linear":
            drv = Driver.linear(spec["c"])
        elif kind == "sqrt":
            drv = Driver.sqrt_forward(spec["a"])
        elif kind == "counterexample":
            drv = Driver.counterexample()
        elif kind == "tabulated":
            drv = Driver.tabulated(spec["samples"])
        else:
            raise ParameterError(f"unknown driver kind {kind!r}")
        for tf in spec.get("transforms", ()):
            name = tf["kind"]
            arg = tf.get("t0", tf.get("a", tf.get("T")))
            drv = drv.transform(name, arg)
        return drv

    @property
    def fingerprint(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True)
        return hashlib.sha1(blob.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class HolderEstimate:
    """Grid estimate of the Hoelder-1/2 norm on [0, t_max]."""

    t_max: float
    grid_size: int
    value: float


@dataclass(frozen=True)
class Partition:
    """Breakpoints 0 = t_0 < ... < t_K = T with gaps <= max_step."""

    breakpoints: np.ndarray
    max_step: float

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=np.float64)
        object.__setattr__(self, "breakpoints", bp)
        if bp[0] != 0.0 or np.any(np.diff(bp) <= 0.0):
            raise ParameterError("breakpoints must start at 0 and increase")
        if np.any(np.diff(bp) > self.max_step * (1.0 + 1e-12)):
            raise ParameterError("a sub-interval exceeds max_step")

    @property
    def n_intervals(self) -> int:
        return len(self.breakpoints) - 1


def eval_packed(head, tab_t, tab_v, t):
    """Evaluate a packed driver on a float array; no domain checks.

    This is the reference implementation of the collapsed form; the compiled
    kernel mirrors it in C arithmetically step for step.
    """
    kind = int(head[0])
    s = head[4] * t + head[5]
    s_hi = head[12]
    s = np.clip(s, 0.0, s_hi) if math.isfinite(s_hi) else np.maximum(s, 0.0)
    if kind == 0:
        v = np.full(s.shape, complex(head[1], head[2]), dtype=np.complex128)
    elif kind == 1:
        v = complex(head[1], head[2]) * s
    elif kind == 2:
        v = (head[3] * np.sqrt(s)).astype(np.complex128)
    elif kind == 3:
        v = np.empty(s.shape, dtype=np.complex128)
        first = s <= 1.0
        v[first] = 1j * COUNTEREXAMPLE_COEFF * np.sqrt(np.maximum(1.0 - s[first], 0.0))
        v[~first] = COUNTEREXAMPLE_COEFF * np.sqrt(np.maximum(s[~first] - 1.0, 0.0))
    else:
        v = np.interp(s, tab_t, tab_v.real) + 1j * np.interp(s, tab_t, tab_v.imag)
    if head[10] != 0.0:
        v = np.conj(v)
    return complex(head[6], head[7]) * v + complex(head[8], head[9])


def holder_half_norm(driver: Driver, T: float, grid_size: int) -> HolderEstimate:
    """sup over grid pairs of |lambda(t)-lambda(s)| / sqrt|t-s|."""
    if grid_size < 2:
        raise ParameterError("grid_size must be >= 2")
    if T <= 0.0:
        raise ParameterError("T must be positive")
    ts = np.linspace(0.0, float(T), int(grid_size))
    vs = driver.eval(ts)
    best = 0.0
    chunk = 512
    for i in range(0, len(ts), chunk):
        dv = np.abs(vs[i : i + chunk, None] - vs[None, :])
        dt = np.abs(ts[i : i + chunk, None] - ts[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dt > 0.0, dv / np.sqrt(dt), 0.0)
        best = max(best, float(ratio.max()))
    return HolderEstimate(t_max=float(T), grid_size=int(grid_size), value=best)


def c1_subdivision(
    driver: Driver, T: float, sigma: float = 1.0 / 3.0, deriv_sup: float | None = None
) -> Partition:
    """Uniform partition of [0, T] whose pieces all have Hoelder-1/2 norm <= sigma.

    Uses step delta = (sigma / sup|lambda'|)^2, the bound the mean-value
    estimate sup|lambda'| * delta^(1/2) <= sigma actually yields.
    """
    if sigma <= 0.0:
        raise ParameterError("sigma must be positive")
    if T <= 0.0:
        raise ParameterError("T must be positive")
    M = driver.deriv_sup(T) if deriv_sup is None else float(deriv_sup)
    if not math.isfinite(M):
        raise RegularityError("driver is not C^1 with bounded derivative on [0, T]")
    if M == 0.0:
        return Partition(np.array([0.0, T]), max_step=float(T))
    delta = (sigma / M) ** 2
    K = max(1, int(math.ceil(T / delta - 1e-12)))
    return Partition(np.linspace(0.0, T, K + 1), max_step=T / K)
