"""Smooth monotone symbols and the example catalog.

A :class:`Symbol` is a smooth strictly monotone map of the real line with
vectorized evaluation, exact jets, structural flags and a polynomial growth
certificate.  Piecewise symbols are glued with a strictly increasing C^inf
blend: the blend's *derivative* is a partition-of-unity profile

    d(x) = d_L(x) * wL(t) + d_R(x) * wR(t) + s * (1 - wL - wR)(t)

where wL/wR are plateau cutoffs built from exp(-1/t) (exactly flat at the
window ends, so the blend continues the neighbouring pieces to all orders)
and the interior level ``s`` solves a linear equation so the integral meets
the required value increment.  ``s > 0`` guarantees monotonicity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .config import DEFAULTS
from .errors import InfeasibleExtensionError, UsageError
from .jets import (
    Jet,
    affine_jet,
    constant_jet,
    exp_jet,
    identity_jet,
    jet_add,
    jet_compose,
    jet_div,
    jet_mul,
    jet_scale,
    poly_jet,
    recip_jet,
    sqrt_jet,
)

__all__ = [
    "Symbol",
    "GrowthCertificate",
    "ExtensionSpec",
    "Fragment",
    "smooth_monotone_extension",
    "make_translation",
    "make_sqrt_glide",
    "make_tiled_3x",
    "make_exp_double",
    "make_gauss_perturbed",
    "reflect",
    "get_symbol",
    "catalog_labels",
    "chebyshev_nodes",
]

ABOVE = "above_diagonal"
BELOW = "below_diagonal"
FIXED = "has_fixed_point"


def chebyshev_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    """Chebyshev-Lobatto points on [lo, hi], endpoints included."""
    if n == 1:
        return np.array([0.5 * (lo + hi)])
    k = np.arange(n)
    t = 0.5 * (1.0 - np.cos(np.pi * k / (n - 1)))
    return lo + (hi - lo) * t


# -- C^inf cutoff ----------------------------------------------------------------


def _bump_exp(t):
    """exp(-1/t) for t > 0, else 0 (vectorized)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    with np.errstate(divide="ignore", over="ignore"):
        out[pos] = np.exp(-1.0 / t[pos])
    return out


def _cutoff_eval(t):
    """Monotone C^inf ramp w on [0,1]: w(0)=0, w(1)=1, flat at both ends."""
    t = np.asarray(t, dtype=float)
    b0 = _bump_exp(t)
    b1 = _bump_exp(1.0 - t)
    with np.errstate(invalid="ignore"):
        w = np.where(t <= 0.0, 0.0, np.where(t >= 1.0, 1.0, b0 / (b0 + b1)))
    return w


def _bump_exp_jet(t: float, order: int) -> Jet:
    """Jet of exp(-1/t); identically zero for t <= 0."""
    if t <= 0.0:
        return constant_jet(t, 0.0, order)
    inner = poly_jet(t, [0.0, 1.0], order)  # t itself
    minus_inv = jet_scale(jet_compose(recip_jet(t, order), inner), -1.0)
    return jet_compose(exp_jet(minus_inv.value, order), minus_inv)


def _cutoff_jet(t: float, order: int) -> Jet:
    if t <= 0.0:
        return constant_jet(t, 0.0, order)
    if t >= 1.0:
        return constant_jet(t, 1.0, order)
    b0 = _bump_exp_jet(t, order)
    # B(1-t): compose with the affine map u = 1 - t
    b1_outer = _bump_exp_jet(1.0 - t, order)
    b1 = jet_compose(b1_outer, affine_jet(t, -1.0, 1.0, order))
    return jet_div(b0, jet_add(b0, b1))


def _cutoff_deriv(t):
    """First derivative of the ramp w = B(t)/(B(t)+B(1-t)) (vectorized)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    b0 = np.exp(-1.0 / tm)
    b1 = np.exp(-1.0 / (1.0 - tm))
    out[mid] = b0 * b1 * (1.0 / tm**2 + 1.0 / (1.0 - tm) ** 2) / (b0 + b1) ** 2
    return out


def _ramp_eval(t, lo: float, hi: float, rising: bool):
    """Plateau ramp: constant outside [lo, hi], cutoff-shaped inside."""
    u = (np.asarray(t, dtype=float) - lo) / (hi - lo)
    w = _cutoff_eval(np.clip(u, 0.0, 1.0))
    return w if rising else 1.0 - w


def _ramp_deriv(t, lo: float, hi: float, rising: bool):
    u = (np.asarray(t, dtype=float) - lo) / (hi - lo)
    d = _cutoff_deriv(np.clip(u, 0.0, 1.0)) / (hi - lo)
    return d if rising else -d


def _ramp_jet(t: float, lo: float, hi: float, rising: bool, order: int) -> Jet:
    scale = 1.0 / (hi - lo)
    u = (t - lo) * scale
    if u <= 0.0:
        val = 0.0 if rising else 1.0
        return constant_jet(t, val, order)
    if u >= 1.0:
        val = 1.0 if rising else 0.0
        return constant_jet(t, val, order)
    inner = affine_jet(t, scale, -lo * scale, order)
    w = jet_compose(_cutoff_jet(u, order), inner)
    if rising:
        return w
    return jet_add(constant_jet(t, 1.0, order), jet_scale(w, -1.0))


# -- growth certificates -----------------------------------------------------------


@dataclass
class GrowthCertificate:
    """Fitted bounds |psi^(j)(x)| <= C_j (1+x^2)^{t_j} on |x| <= validation_radius."""

    entries: list  # (j, C_j, t_j)
    validation_radius: float
    validated: bool = False

    def bound(self, j: int, x) -> np.ndarray:
        for jj, c, t in self.entries:
            if jj == j:
                return c * (1.0 + np.asarray(x, dtype=float) ** 2) ** t
        raise UsageError(f"certificate has no entry for order {j}")

    def order_entry(self, j: int):
        for jj, c, t in self.entries:
            if jj == j:
                return c, t
        raise UsageError(f"certificate has no entry for order {j}")

    @property
    def max_order(self) -> int:
        return max(j for j, _, _ in self.entries)


def fit_polynomial_bound(xs: np.ndarray, vals: np.ndarray, t_max: int = None, safety: float = 1.1):
    """Smallest integer t with vals/(1+x^2)^t not growing toward the probe edge.

    Returns (C, t) with ``safety`` headroom on C, or None when even t_max grows.
    Zero data yields (0.0, 0).
    """
    if t_max is None:
        t_max = DEFAULTS.weight_t_max
    vals = np.asarray(vals, dtype=float)
    if not np.any(vals > 0.0):
        return 0.0, 0
    r = np.abs(np.asarray(xs, dtype=float))
    # dyadic blocks by |x|
    edges = [0.0] + [2.0**j for j in range(0, 40) if 2.0**j < r.max()] + [r.max() + 1.0]
    for t in range(t_max + 1):
        ratio = vals / (1.0 + r**2) ** t
        block_max = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            m = (r >= lo) & (r < hi)
            if np.any(m):
                block_max.append(ratio[m].max())
        growing = len(block_max) >= 2 and block_max[-1] > 1.01 * max(block_max[:-1])
        if not growing:
            return safety * float(ratio.max()), t
    return None


# -- symbol ----------------------------------------------------------------


class Symbol:
    """Smooth monotone map of the line with jets and structural flags."""

    def __init__(
        self,
        label: str,
        eval_vec,
        deriv_vec,
        jet_fn,
        *,
        deriv2_vec=None,
        displacement_vec=None,
        strictly_increasing: bool = True,
        bijective: bool = True,
        fixed_point_free: bool = True,
        displacement_sign: str = ABOVE,
        range_: tuple = (-math.inf, math.inf),
        certificate: GrowthCertificate | None = None,
    ):
        self.label = label
        self._eval = eval_vec
        self._deriv = deriv_vec
        self._deriv2 = deriv2_vec
        self._disp = displacement_vec
        self._jet = jet_fn
        self.strictly_increasing = strictly_increasing
        self.bijective = bijective
        self.fixed_point_free = fixed_point_free
        self.displacement_sign = displacement_sign
        self.range_ = range_
        self._certificate = certificate

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = self._eval(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def deriv(self, x):
        arr = np.asarray(x, dtype=float)
        out = self._deriv(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def deriv2(self, x):
        if self._deriv2 is None:
            raise UsageError(f"{self.label} has no vectorized second derivative")
        arr = np.asarray(x, dtype=float)
        out = self._deriv2(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def displacement(self, x):
        """psi(x) - x, via a cancellation-safe closed form when available."""
        arr = np.asarray(x, dtype=float)
        x1 = np.atleast_1d(arr)
        out = self._disp(x1) if self._disp is not None else self._eval(x1) - x1
        return float(out[0]) if arr.ndim == 0 else out

    def jet_at(self, x: float, order: int) -> Jet:
        if order > DEFAULTS.max_order:
            raise UsageError(f"order {order} above configured maximum {DEFAULTS.max_order}")
        return self._jet(float(x), int(order))

    @property
    def props(self) -> dict:
        return {
            "strictly_increasing": self.strictly_increasing,
            "bijective": self.bijective,
            "fixed_point_free": self.fixed_point_free,
            "displacement_sign": self.displacement_sign,
        }

    @property
    def growth_certificate(self) -> GrowthCertificate:
        if self._certificate is None:
            self._certificate = fit_certificate(self)
        return self._certificate

    def __repr__(self):
        return f"Symbol({self.label!r})"


def fit_certificate(sym: Symbol, j_max: int = 5, radius: float = None) -> GrowthCertificate:
    """Sample |psi^(j)| on dyadic blocks and fit (C_j, t_j) per order."""
    if radius is None:
        radius = DEFAULTS.certificate_radius
    xs = []
    hi = 1.0
    lo = 0.0
    while lo < radius:
        block = chebyshev_nodes(lo, min(hi, radius), 33)
        xs.extend(block)
        xs.extend(-block)
        lo, hi = hi, hi * 2
    xs = np.unique(np.asarray(xs))
    vals = np.empty((j_max + 1, xs.size))
    for i, x in enumerate(xs):
        vals[:, i] = np.abs(sym.jet_at(x, j_max).derivs)
    entries = []
    for j in range(j_max + 1):
        fit = fit_polynomial_bound(xs, vals[j])
        if fit is None:
            raise UsageError(f"no polynomial bound of order <= {DEFAULTS.weight_t_max} for derivative {j}")
        c, t = fit
        entries.append((j, c, t))
    cert = GrowthCertificate(entries, radius, validated=False)
    # validation pass: the fitted bound must hold at every probe point
    ok = all(
        np.all(vals[j] <= cert.bound(j, xs) + 1e-300) for j in range(j_max + 1)
    )
    cert.validated = bool(ok)
    return cert


# -- pieces and blends ----------------------------------------------------------------


@dataclass
class Fragment:
    """One monotone piece: closed-form callables on an interval."""

    lo: float
    hi: float
    eval_vec: object
    deriv_vec: object
    jet_fn: object
    deriv2_vec: object = None


@dataclass
class ExtensionSpec:
    """Data for a strictly increasing C^inf join of two fragments."""

    left: Fragment
    right: Fragment
    window: tuple
    ramp: tuple = (0.05, 0.15)
    margin_frac: float = 0.05
    panels: int = 96
    gauss_nodes: int = 16
    derivative_profile: object = None  # optional override d(x) on the window


class _Blend:
    """Strictly increasing C^inf filler on [a, b] between two fragments."""

    def __init__(self, spec: ExtensionSpec):
        a, b = spec.window
        if not b > a:
            raise InfeasibleExtensionError("empty blend window")
        va = float(np.asarray(spec.left.eval_vec(np.array([a])))[0])
        vb = float(np.asarray(spec.right.eval_vec(np.array([b])))[0])
        if not vb > va:
            raise InfeasibleExtensionError(
                f"left value {va} must lie below right value {vb}"
            )
        self.a, self.b, self.va, self.vb = a, b, va, vb
        self.width = b - a
        self.dL = spec.left.deriv_vec
        self.dR = spec.right.deriv_vec
        self.dL2 = spec.left.deriv2_vec
        self.dR2 = spec.right.deriv2_vec
        self.jL = spec.left.jet_fn
        self.jR = spec.right.jet_fn
        self.profile_override = spec.derivative_profile

        nodes, wts = np.polynomial.legendre.leggauss(spec.gauss_nodes)
        self._gl = (nodes, wts)
        self.edges = np.linspace(a, b, spec.panels + 1)

        mean_slope = (vb - va) / self.width
        r0, r1 = spec.ramp
        while True:
            self.r0, self.r1 = r0, r1
            iL = self._integrate(lambda x: self.dL(x) * self._wL(x))
            iR = self._integrate(lambda x: self.dR(x) * self._wR(x))
            iM = self._integrate(lambda x: self._wM(x))
            s = (vb - va - iL.sum() - iR.sum()) / iM.sum()
            if s >= spec.margin_frac * mean_slope:
                break
            r0, r1 = 0.5 * r0, 0.5 * r1
            if r1 < 1e-3:
                raise InfeasibleExtensionError(
                    "no positive interior slope: value increment too small for the"
                    " endpoint derivative mass"
                )
        self.s = s
        sample = chebyshev_nodes(a, b, 512)
        dmin = float(np.min(self.profile(sample)))
        if dmin <= 0.0:
            raise InfeasibleExtensionError(f"blend derivative dips to {dmin}")
        panel_mass = iL + iR + s * iM
        self.cum = np.concatenate([[0.0], np.cumsum(panel_mass)])

    # cutoff weights in window coordinates
    def _t(self, x):
        return (np.asarray(x, dtype=float) - self.a) / self.width

    def _wL(self, x):
        return _ramp_eval(self._t(x), self.r0, self.r1, rising=False)

    def _wR(self, x):
        return _ramp_eval(self._t(x), 1.0 - self.r1, 1.0 - self.r0, rising=True)

    def _wM(self, x):
        return 1.0 - self._wL(x) - self._wR(x)

    def profile(self, x):
        if self.profile_override is not None:
            return self.profile_override(x)
        return (
            self.dL(x) * self._wL(x)
            + self.dR(x) * self._wR(x)
            + self.s * self._wM(x)
        )

    def _integrate(self, f) -> np.ndarray:
        nodes, wts = self._gl
        lo, hi = self.edges[:-1], self.edges[1:]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        xs = mid[:, None] + half[:, None] * nodes[None, :]
        vals = f(xs.ravel()).reshape(xs.shape)
        return (vals * wts[None, :]).sum(axis=1) * half

    def eval_vec(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, len(self.edges) - 2)
        start = self.edges[idx]
        nodes, wts = self._gl
        mid, half = 0.5 * (start + x), 0.5 * (x - start)
        xs = mid[..., None] + half[..., None] * nodes
        vals = self.profile(xs.ravel()).reshape(xs.shape)
        partial = (vals * wts).sum(axis=-1) * half
        return self.va + self.cum[idx] + partial

    def deriv_vec(self, x):
        return self.profile(x)

    def deriv2_vec(self, x):
        if self.profile_override is not None or self.dL2 is None or self.dR2 is None:
            raise UsageError("second derivative unavailable for custom blend profiles")
        t = self._t(x)
        inv_w = 1.0 / self.width
        wL = self._wL(x)
        wR = self._wR(x)
        wLp = _ramp_deriv(t, self.r0, self.r1, rising=False) * inv_w
        wRp = _ramp_deriv(t, 1.0 - self.r1, 1.0 - self.r0, rising=True) * inv_w
        return (
            self.dL2(x) * wL + self.dL(x) * wLp
            + self.dR2(x) * wR + self.dR(x) * wRp
            + self.s * (-wLp - wRp)
        )

    def jet_fn(self, x: float, order: int) -> Jet:
        value = float(self.eval_vec(np.array([x]))[0])
        if order == 0:
            return Jet(x, np.array([value]))
        d = self._profile_jet(x, order - 1)
        derivs = np.concatenate([[value], d.derivs])
        return Jet(x, derivs, d.overflow_flag)

    def _profile_jet(self, x: float, order: int) -> Jet:
        t = float(self._t(x))
        tscale = 1.0 / self.width
        inner = affine_jet(x, tscale, -self.a * tscale, order)
        wL = jet_compose(_ramp_jet(t, self.r0, self.r1, False, order), inner)
        wR = jet_compose(
            _ramp_jet(t, 1.0 - self.r1, 1.0 - self.r0, True, order), inner
        )
        one = constant_jet(x, 1.0, order)
        wM = jet_add(one, jet_scale(jet_add(wL, wR), -1.0))
        dL = self.jL(x, order + 1)
        dR = self.jR(x, order + 1)
        dL = Jet(x, dL.derivs[1:], dL.overflow_flag)
        dR = Jet(x, dR.derivs[1:], dR.overflow_flag)
        term = jet_add(jet_mul(dL, wL), jet_mul(dR, wR))
        return jet_add(term, jet_scale(wM, self.s))


def smooth_monotone_extension(spec: ExtensionSpec) -> Fragment:
    """Strictly increasing C^inf fragment joining spec.left to spec.right."""
    a, b = spec.window
    if not (np.asarray(spec.left.deriv_vec(np.array([a])))[0] > 0
            and np.asarray(spec.right.deriv_vec(np.array([b])))[0] > 0):
        raise InfeasibleExtensionError("pieces must be strictly increasing at the join points")
    blend = _Blend(spec)
    d2 = None
    if spec.derivative_profile is None and spec.left.deriv2_vec is not None and spec.right.deriv2_vec is not None:
        d2 = blend.deriv2_vec
    return Fragment(spec.window[0], spec.window[1], blend.eval_vec, blend.deriv_vec,
                    blend.jet_fn, deriv2_vec=d2)


class _Piecewise:
    """Dispatch eval/deriv/jets over contiguous fragments."""

    def __init__(self, fragments: list):
        self.fragments = sorted(fragments, key=lambda f: f.lo)
        self.cuts = np.array([f.hi for f in self.fragments[:-1]])

    def _index(self, x):
        return np.searchsorted(self.cuts, x, side="right")

    def eval_vec(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        idx = self._index(x)
        for i, frag in enumerate(self.fragments):
            m = idx == i
            if np.any(m):
                out[m] = frag.eval_vec(x[m])
        return out

    def deriv_vec(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        idx = self._index(x)
        for i, frag in enumerate(self.fragments):
            m = idx == i
            if np.any(m):
                out[m] = frag.deriv_vec(x[m])
        return out

    def deriv2_vec(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        idx = self._index(x)
        for i, frag in enumerate(self.fragments):
            m = idx == i
            if np.any(m):
                if frag.deriv2_vec is None:
                    raise UsageError("fragment lacks a second derivative")
                out[m] = frag.deriv2_vec(x[m])
        return out

    def jet_fn(self, x: float, order: int) -> Jet:
        i = int(self._index(np.array([x]))[0])
        return self.fragments[i].jet_fn(x, order)


# -- catalog ----------------------------------------------------------------


def make_translation(beta: float) -> Symbol:
    """psi(x) = x + beta with exact jets."""
    beta = float(beta)
    if beta == 0.0:
        raise UsageError("beta = 0 is the identity, not a translation")
    cert = GrowthCertificate(
        [(0, 1.0 + abs(beta), 1), (1, 1.0, 0)] + [(j, 0.0, 0) for j in range(2, 6)],
        DEFAULTS.certificate_radius,
        validated=True,
    )
    return Symbol(
        f"translation:{beta:g}",
        lambda x: x + beta,
        lambda x: np.ones_like(x),
        lambda x, m: affine_jet(x, 1.0, beta, m),
        deriv2_vec=lambda x: np.zeros_like(x),
        displacement_vec=lambda x: np.full_like(x, beta),
        displacement_sign=ABOVE if beta > 0 else BELOW,
        certificate=cert,
    )


def _sqrt_shift_fragment(lo, hi, shift, sign) -> Fragment:
    """sign * sqrt(x^2 + shift) on [lo, hi]."""

    def ev(x):
        return sign * np.sqrt(x * x + shift)

    def dv(x):
        return sign * x / np.sqrt(x * x + shift)

    def d2(x):
        return sign * shift / (x * x + shift) ** 1.5

    def jf(x, m):
        u = x * x + shift
        return jet_scale(jet_compose(sqrt_jet(u, m), poly_jet(x, [shift, 0.0, 1.0], m)), sign)

    return Fragment(lo, hi, ev, dv, jf, deriv2_vec=d2)


def _affine_fragment(lo, hi, a, b) -> Fragment:
    return Fragment(
        lo,
        hi,
        lambda x: a * x + b,
        lambda x: np.full_like(np.asarray(x, dtype=float), a),
        lambda x, m: affine_jet(x, a, b, m),
        deriv2_vec=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
    )


@lru_cache(maxsize=None)
def make_sqrt_glide() -> Symbol:
    """Bijective symbol gliding along sqrt(x^2+1); displacement decays at +-inf."""
    s2 = math.sqrt(2.0)
    s3 = math.sqrt(3.0)
    left = _sqrt_shift_fragment(-math.inf, -s3, -1.0, -1.0)  # -sqrt(x^2-1)
    mid = _affine_fragment(-s2, 0.0, s2 / 2.0, 1.0)
    right = _sqrt_shift_fragment(1.0, math.inf, 1.0, 1.0)  # sqrt(x^2+1)
    blend1 = smooth_monotone_extension(ExtensionSpec(left, mid, (-s3, -s2)))
    blend2 = smooth_monotone_extension(ExtensionSpec(mid, right, (0.0, 1.0)))
    pw = _Piecewise([
        Fragment(-math.inf, -s3, left.eval_vec, left.deriv_vec, left.jet_fn, left.deriv2_vec),
        blend1,
        Fragment(-s2, 0.0, mid.eval_vec, mid.deriv_vec, mid.jet_fn, mid.deriv2_vec),
        blend2,
        Fragment(1.0, math.inf, right.eval_vec, right.deriv_vec, right.jet_fn, right.deriv2_vec),
    ])

    def disp(x):
        out = pw.eval_vec(x) - x
        hi = x >= 1.0
        out[hi] = 1.0 / (np.sqrt(x[hi] * x[hi] + 1.0) + x[hi])
        lo = x <= -s3
        out[lo] = 1.0 / (np.sqrt(x[lo] * x[lo] - 1.0) - x[lo])
        return out

    return Symbol("sqrt_glide", pw.eval_vec, pw.deriv_vec, pw.jet_fn, deriv2_vec=pw.deriv2_vec,
                  displacement_vec=disp)


@lru_cache(maxsize=None)
def make_tiled_3x() -> Symbol:
    """Tiled map: psi(x+1) = psi(x)+1, locally 3x+1 then 3x-1 on each tile."""
    lo_aff = _affine_fragment(0.0, 1.0 / 7.0, 3.0, 1.0)
    hi_aff = _affine_fragment(6.0 / 7.0, 1.0, 3.0, -1.0)
    blend = smooth_monotone_extension(
        ExtensionSpec(lo_aff, hi_aff, (1.0 / 7.0, 6.0 / 7.0))
    )
    tile = _Piecewise([lo_aff, blend, hi_aff])

    def ev(x):
        x = np.asarray(x, dtype=float)
        n = np.floor(x)
        return tile.eval_vec(x - n) + n

    def dv(x):
        x = np.asarray(x, dtype=float)
        return tile.deriv_vec(x - np.floor(x))

    def d2(x):
        x = np.asarray(x, dtype=float)
        return tile.deriv2_vec(x - np.floor(x))

    def disp(x):
        x = np.asarray(x, dtype=float)
        u = x - np.floor(x)
        return tile.eval_vec(u) - u

    def jf(x, m):
        n = math.floor(x)
        j = tile.jet_fn(x - n, m)
        d = j.derivs.copy()
        d[0] += n
        return Jet(x, d, j.overflow_flag)

    return Symbol("tiled_3x", ev, dv, jf, deriv2_vec=d2, displacement_vec=disp)


@lru_cache(maxsize=None)
def make_exp_double() -> Symbol:
    """e^x for x <= 0, 2x for x >= 1; injective with range (0, inf)."""

    def exp_jf(x, m):
        return Jet(x, np.full(m + 1, math.exp(x)))

    left = Fragment(-math.inf, 0.0, np.exp, np.exp, exp_jf, deriv2_vec=np.exp)
    right = _affine_fragment(1.0, math.inf, 2.0, 0.0)
    blend = smooth_monotone_extension(ExtensionSpec(left, right, (0.0, 1.0)))
    pw = _Piecewise([left, blend, right])
    return Symbol(
        "exp_double",
        pw.eval_vec,
        pw.deriv_vec,
        pw.jet_fn,
        deriv2_vec=pw.deriv2_vec,
        displacement_vec=lambda x: np.where(x >= 1.0, x, pw.eval_vec(x) - x),
        bijective=False,
        range_=(0.0, math.inf),
    )


@lru_cache(maxsize=None)
def make_gauss_perturbed() -> Symbol:
    """psi(x) = x + exp(-x^2/2); fixed-point free but not transitive-compatible."""

    def ev(x):
        return x + np.exp(-0.5 * x * x)

    def dv(x):
        return 1.0 - x * np.exp(-0.5 * x * x)

    def d2(x):
        return (x * x - 1.0) * np.exp(-0.5 * x * x)

    def jf(x, m):
        g = jet_compose(exp_jet(-0.5 * x * x, m), poly_jet(x, [0.0, 0.0, -0.5], m))
        return jet_add(identity_jet(x, m), g)

    return Symbol("gauss_perturbed", ev, dv, jf, deriv2_vec=d2,
                  displacement_vec=lambda x: np.exp(-0.5 * x * x))


def reflect(sym: Symbol) -> Symbol:
    """Conjugation sigma(psi)(x) = -psi(-x); jets follow the sign rule."""

    def ev(x):
        return -sym._eval(-np.asarray(x, dtype=float))

    def dv(x):
        return sym._deriv(-np.asarray(x, dtype=float))

    def d2(x):
        return -sym._deriv2(-np.asarray(x, dtype=float))

    def disp_vec(x):
        x = np.asarray(x, dtype=float)
        if sym._disp is not None:
            return -sym._disp(-x)
        return -(sym._eval(-x) - (-x))

    def jf(x, m):
        j = sym.jet_at(-x, m)
        signs = np.array([-((-1.0) ** k) for k in range(m + 1)])  # (-1)^(j-1)
        return Jet(x, signs * j.derivs, j.overflow_flag)

    if sym.displacement_sign == ABOVE:
        sign = BELOW
    elif sym.displacement_sign == BELOW:
        sign = ABOVE
    else:
        sign = FIXED
    lo, hi = sym.range_
    return Symbol(
        f"reflect({sym.label})",
        ev,
        dv,
        jf,
        deriv2_vec=d2 if sym._deriv2 is not None else None,
        displacement_vec=disp_vec,
        strictly_increasing=sym.strictly_increasing,
        bijective=sym.bijective,
        fixed_point_free=sym.fixed_point_free,
        displacement_sign=sign,
        range_=(-hi, -lo),
        certificate=sym._certificate,
    )


_FACTORIES = {
    "sqrt_glide": make_sqrt_glide,
    "tiled_3x": make_tiled_3x,
    "exp_double": make_exp_double,
    "gauss_perturbed": make_gauss_perturbed,
}


def catalog_labels() -> list:
    return ["translation:<beta>"] + sorted(_FACTORIES)


def get_symbol(label: str) -> Symbol:
    """Resolve a catalog label like ``translation:1`` or ``sqrt_glide``."""
    if label.startswith("translation:"):
        try:
            beta = float(label.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(f"bad translation parameter in {label!r}") from exc
        return make_translation(beta)
    if label.startswith("reflect(") and label.endswith(")"):
        return reflect(get_symbol(label[len("reflect("):-1]))
    try:
        return _FACTORIES[label]()
    except KeyError as exc:
        raise UsageError(f"unknown symbol {label!r}; known: {catalog_labels()}") from exc
