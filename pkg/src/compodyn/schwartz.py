"""Rapidly decreasing weights, weighted sup-seminorms and decay tables.

The seminorm p_{m,v}(f) = sup_x max_{j<=m} |v(x) f^(j)(x)| is estimated as a
sampled sup over |x| <= R* plus an analytic tail bound C_max * gauge(R*),
where the gauge comes with each weight and the C's from the function's
polynomial growth certificate.  Every estimate carries its certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import io
import math

import numpy as np

from .config import DEFAULTS
from .errors import UnboundedTailError, UsageError
from .symbols import _ramp_eval, chebyshev_nodes

__all__ = [
    "Weight",
    "DecayTable",
    "SeminormEstimate",
    "RapidDecayReport",
    "weight_catalog",
    "parse_weight_labels",
    "default_weight_family",
    "evidence_weight_family",
    "majorant",
    "seminorm",
    "rapid_decay_test",
]


# -- decay tables ----------------------------------------------------------------


@dataclass
class DecayTable:
    """One scalar sequence indexed by n, with log magnitudes kept separately."""

    n: np.ndarray
    value: np.ndarray
    log_value: np.ndarray
    arg_x: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,value,log_value\n")
        for i in range(len(self.n)):
            buf.write(f"{int(self.n[i])},{self.value[i]!r},{self.log_value[i]!r}\n")
        return buf.getvalue()

    def rows(self):
        return list(zip(self.n.tolist(), self.value.tolist(), self.log_value.tolist()))

    def to_dict(self) -> dict:
        return {
            "meta": self.meta,
            "n": self.n.tolist(),
            "value": self.value.tolist(),
            "log_value": self.log_value.tolist(),
        }


# -- weights ----------------------------------------------------------------


class Weight:
    """Positive rapidly decreasing weight with a per-power decay gauge."""

    def __init__(self, label, eval_vec, log_eval_vec, gauge, *, monotone_shape=True,
                 t_max=None):
        self.label = label
        self._eval = eval_vec
        self._log = log_eval_vec
        self._gauge = gauge
        self.monotone_shape = monotone_shape
        self.t_max = DEFAULTS.weight_t_max if t_max is None else t_max

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = self._eval(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def log_eval(self, x):
        arr = np.asarray(x, dtype=float)
        out = self._log(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def decay_gauge(self, radius: float, t: int) -> float:
        """Upper bound for sup_{|x| >= radius} v(x) (1+x^2)^t."""
        if t > self.t_max:
            raise UsageError(f"gauge of {self.label} only covers t <= {self.t_max}")
        return float(self._gauge(float(radius), int(t)))

    def __repr__(self):
        return f"Weight({self.label!r})"


def _gauss_weight(a: float) -> Weight:
    def gauge(radius, t):
        u_star = max(radius * radius, t / a - 1.0)
        return math.exp(-a * u_star + t * math.log1p(u_star))

    return Weight(
        f"gauss:{a:g}",
        lambda x: np.exp(-a * x * x),
        lambda x: -a * x * x,
        gauge,
    )


def _expcone_weight(a: float) -> Weight:
    def gauge(radius, t):
        u_star = max(radius * radius, (2.0 * t / a) ** 2 - 1.0)
        return math.exp(-a * math.sqrt(1.0 + u_star) + t * math.log1p(u_star))

    return Weight(
        f"expcone:{a:g}",
        lambda x: np.exp(-a * np.sqrt(1.0 + x * x)),
        lambda x: -a * np.sqrt(1.0 + x * x),
        gauge,
    )


def _left_exp_weight() -> Weight:
    """Equals e^x for x <= -1; blends to a flat top at 0; even mirror beyond."""

    def core(ax):  # on (-inf, 0], non-decreasing
        t = ax + 1.0  # blend coordinate on [-1, 0] -> [0, 1]
        w = _ramp_eval(np.clip(t, 0.0, 1.0), 0.0, 1.0, rising=True)
        return np.where(ax <= -1.0, np.exp(ax), np.exp(ax) * (1.0 - w) + w)

    def ev(x):
        return core(-np.abs(x))

    def log_ev(x):
        ax = np.abs(x)
        with np.errstate(divide="ignore"):
            return np.where(ax >= 1.0, -ax, np.log(core(-ax)))

    def gauge(radius, t):
        cands = []
        if radius < 1.0:
            cands.append(2.0**t)  # v <= 1 on [radius, 1]
        lo = max(radius, 1.0)
        if t >= 1:
            x_star = t + math.sqrt(t * t - 1.0)
        else:
            x_star = 0.0
        x0 = max(lo, x_star)
        cands.append(math.exp(-x0 + t * math.log1p(x0 * x0)))
        return max(cands)

    return Weight("left_exp", ev, log_ev, gauge)


def weight_catalog(name: str, a: float = 1.0) -> Weight:
    """gauss(a) = exp(-a x^2); expcone(a) = exp(-a sqrt(1+x^2)); left_exp."""
    if name in ("gauss", "expcone") and not a > 0:
        raise UsageError(f"{name} needs a positive parameter, got {a}")
    if name == "gauss":
        return _gauss_weight(float(a))
    if name == "expcone":
        return _expcone_weight(float(a))
    if name == "left_exp":
        return _left_exp_weight()
    raise UsageError(f"unknown weight {name!r}; known: gauss, expcone, left_exp")


def parse_weight_labels(labels) -> list:
    out = []
    for lab in labels:
        if ":" in lab:
            name, param = lab.split(":", 1)
            out.append(weight_catalog(name, float(param)))
        else:
            out.append(weight_catalog(lab))
    return out


def default_weight_family() -> list:
    """Seminorm family: the configured finite surrogate for all of S(R)."""
    return [
        weight_catalog("gauss", 1.0),
        weight_catalog("gauss", 0.1),
        weight_catalog("expcone", 1.0),
        weight_catalog("left_exp"),
    ]


def evidence_weight_family() -> list:
    """Fast-decay tier whose table decay grounds EvidenceHolds verdicts."""
    return [weight_catalog("gauss", 1.0)]


# -- rapid decay test ----------------------------------------------------------------


@dataclass
class RapidDecayReport:
    passed: bool
    n_max: int
    bounds: dict            # n -> sup of (1+x^2)^n |f|
    tables: list            # DecayTable per n (block maxima along the radius schedule)
    witness: tuple | None = None  # (n, x, value)

    def bound_tail(self, radius: float) -> float:
        """sup_{|x| >= radius} |f| from the strongest certified power."""
        n = max(self.bounds)
        return self.bounds[n] / (1.0 + radius * radius) ** n


def _radius_blocks():
    edges = [0.0] + [2.0**j for j in range(DEFAULTS.radius_exponents + 1)]
    return list(zip(edges[:-1], edges[1:]))


def rapid_decay_test(f, n_max: int, radii=None) -> RapidDecayReport:
    """PASS iff (1+x^2)^n |f| stays capped and non-increasing along the tail blocks."""
    blocks = radii if radii is not None else _radius_blocks()
    samples = []
    for lo, hi in blocks:
        xs = chebyshev_nodes(lo, hi, 129)
        xs = np.concatenate([xs, -xs])
        samples.append((xs, np.abs(np.asarray(f(xs), dtype=float))))
    tables = []
    witness = None
    passed = True
    bounds = {}
    for n in range(1, n_max + 1):
        vals, args = [], []
        for xs, fv in samples:
            t = (1.0 + xs * xs) ** n * fv
            i = int(np.argmax(t))
            vals.append(float(t[i]))
            args.append(float(xs[i]))
        vals = np.array(vals)
        with np.errstate(divide="ignore"):
            table = DecayTable(
                np.arange(1, len(vals) + 1),
                vals,
                np.log(np.maximum(vals, 1e-320)),
                arg_x=np.array(args),
                meta={"kind": "rapid_decay", "power": n},
            )
        tables.append(table)
        bounds[n] = float(vals.max())
        if passed:
            if vals.max() > DEFAULTS.bound_cap:
                i = int(np.argmax(vals))
                witness = (n, args[i], float(vals[i]))
                passed = False
            else:
                w = DEFAULTS.decay_window
                tail = vals[-(w + 1):]
                rising = np.nonzero(tail[1:] > tail[:-1] * (1.0 + 1e-9))[0]
                if rising.size:
                    i = len(vals) - (w + 1) + int(rising[-1]) + 1
                    witness = (n, args[i], float(vals[i]))
                    passed = False
    return RapidDecayReport(passed, n_max, bounds, tables, witness)


# -- majorant ----------------------------------------------------------------


def majorant(f, cutoff=None, n_cap: int = 64, decay: RapidDecayReport | None = None) -> Weight:
    """Even, two-sided-monotone Schwartz majorant of |f| via shell suprema.

    With s[k] = sup_{|x| >= k} |f|, the majorant on [n, n+1) runs from
    s[max(n-1, 0)] down to s[n] through a non-increasing smooth cutoff, with
    even reflection for x < 0.  (The innermost shell reuses sup |f| so the
    result dominates |f| and is exactly flat at the origin.)
    """
    if decay is None:
        decay = rapid_decay_test(f, n_max=7)
    if not decay.passed:
        raise UsageError(f"majorant needs a rapidly decreasing f; witness {decay.witness}")
    if cutoff is None:
        def cutoff(t):
            return _ramp_eval(t, 0.05, 0.95, rising=False)

    far = float(n_cap) + 2.0
    xs = np.concatenate([chebyshev_nodes(k, k + 1.0, 129) for k in range(int(far))])
    fv = np.maximum(
        np.abs(np.asarray(f(xs), dtype=float)), np.abs(np.asarray(f(-xs), dtype=float))
    )
    suffix = np.maximum.accumulate(fv[::-1])[::-1]
    tail_far = decay.bound_tail(far)
    s = np.empty(n_cap + 2)
    for k in range(n_cap + 2):
        i = int(np.searchsorted(xs, float(k)))
        s[k] = max(suffix[i] if i < xs.size else 0.0, tail_far)
    s = np.maximum.accumulate(s[::-1])[::-1]
    n_tail = max(decay.bounds)
    b_tail = decay.bounds[n_tail]

    def _s_of(k_arr):
        k_arr = np.asarray(k_arr, dtype=int)
        out = np.empty(k_arr.shape, dtype=float)
        small = k_arr <= n_cap + 1
        out[small] = s[np.minimum(k_arr[small], n_cap + 1)]
        if np.any(~small):
            kb = k_arr[~small].astype(float)
            out[~small] = np.minimum(s[n_cap + 1], b_tail / (1.0 + kb * kb) ** n_tail)
        return out

    def ev(x):
        ax = np.abs(np.asarray(x, dtype=float))
        n_arr = np.floor(ax).astype(int)
        s_end = _s_of(n_arr)
        s_start = _s_of(np.maximum(n_arr - 1, 0))
        return s_end + (s_start - s_end) * cutoff(ax - n_arr)

    def log_ev(x):
        with np.errstate(divide="ignore"):
            return np.log(np.maximum(ev(x), 1e-320))

    def gauge(radius, t):
        start = max(int(math.floor(radius)), 0)
        ns = np.arange(start, n_cap + 2)
        vals = _s_of(np.maximum(ns - 1, 0)) * (1.0 + (ns + 1.0) ** 2) ** t
        out = float(vals.max(initial=0.0))
        if n_tail > t:
            nb = float(max(start, n_cap + 2))
            out = max(
                out,
                b_tail * (1.0 + (nb + 1.0) ** 2) ** t / (1.0 + (nb - 1.0) ** 2) ** n_tail,
            )
        return out

    label = getattr(f, "label", getattr(f, "__name__", "f"))
    return Weight(
        f"majorant({label})", ev, log_ev, gauge, monotone_shape=True, t_max=n_tail - 1
    )


# -- seminorms ----------------------------------------------------------------


@dataclass
class SeminormEstimate:
    value: float
    tail_bound: float
    radius: float
    m: int
    weight: str

    def __float__(self):
        return self.value


def _golden_max(g, lo: float, hi: float, iters: int = 40):
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - phi * (b - a), a + phi * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iters):
        if gc < gd:
            a, c, gc = c, d, gd
            d = a + phi * (b - a)
            gd = g(d)
        else:
            b, d, gd = d, c, gc
            c = b - phi * (b - a)
            gc = g(c)
    return max(gc, gd)


def seminorm(f, m: int, v: Weight) -> SeminormEstimate:
    """p_{m,v}(f) as sampled sup + certified tail bound below tail_tol."""
    cert = f.growth_certificate
    if cert.max_order < m:
        raise UsageError(f"growth certificate covers orders <= {cert.max_order}, need {m}")

    def tail(radius):
        out = 0.0
        for j in range(m + 1):
            c, t = cert.order_entry(j)
            if c > 0.0:
                out = max(out, c * v.decay_gauge(radius, t))
        return out

    r_star = None
    for j in range(DEFAULTS.radius_exponents + 1):
        r = 2.0**j
        if tail(r) < DEFAULTS.tail_tol:
            r_star = r
            break
    if r_star is None:
        raise UnboundedTailError(
            f"no radius below {2.0**DEFAULTS.radius_exponents} certifies the tail for {v.label}"
        )

    batch = getattr(f, "jets_batch", None)

    def g_at(x):
        jet = f.jet_at(float(x), m)
        return float(v(x) * np.max(np.abs(jet.derivs)))

    blocks = [(lo, hi) for lo, hi in _radius_blocks() if lo < r_star]
    best = []
    for lo, hi in blocks:
        hi = min(hi, r_star)
        xs = chebyshev_nodes(lo, hi, DEFAULTS.probe_points_per_block)
        xs = np.concatenate([xs, -xs])
        if batch is not None:
            rows = np.abs(batch(xs, m))
            vals = np.asarray(v(xs)) * rows.max(axis=1)
        else:
            vals = np.array([g_at(x) for x in xs])
        i = int(np.argmax(vals))
        best.append((float(vals[i]), float(xs[i]), lo, hi))
    best.sort(reverse=True)
    value = best[0][0]
    if len(best) >= 2 and (best[0][0] - best[1][0]) > 0.01 * max(best[0][0], 1e-300):
        _, xb, lo, hi = best[0]
        span = 0.5 * (hi - lo) / (DEFAULTS.probe_points_per_block - 1) * math.pi
        a0, b0 = xb - span, xb + span
        value = max(value, _golden_max(g_at, a0, b0))
    return SeminormEstimate(value, tail(r_star), r_star, m, v.label)
