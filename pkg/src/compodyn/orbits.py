"""Forward/backward iteration of symbols and jet transport along orbits.

Backward steps invert the symbol numerically: a monotone bracket found by
geometric expansion, bisection down to a relative width, then two Newton
polish steps.  Jets transport by chaining compositions forward, or per-step
inverse jets backward; a log-magnitude companion for the first derivative
survives past float overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .config import DEFAULTS
from .errors import OutOfRangeError, UsageError
from .jets import Jet, identity_jet, jet_compose, jet_invert
from .symbols import ABOVE, BELOW, Symbol

__all__ = ["OrbitTransport", "iterate", "inverse_eval", "transport", "transport_jet", "image_interval"]


@dataclass
class OrbitTransport:
    """Orbit of one point with (optionally) the jet of the n-step map."""

    symbol: str
    start: float
    steps: int
    points: np.ndarray
    jet: Jet | None = None
    log_deriv_mag: float = 0.0
    overflow_flag: bool = False

    @property
    def end(self) -> float:
        return float(self.points[-1])


def inverse_eval(sym: Symbol, y: float, seed: float | None = None) -> float:
    """Solve sym(x) = y for a bijective strictly increasing symbol."""
    if not (sym.bijective and sym.strictly_increasing):
        raise UsageError(f"{sym.label} is not a strictly increasing bijection")
    return _invert_increasing(sym, float(y), seed)


def _invert_increasing(sym: Symbol, y: float, seed: float | None = None) -> float:
    """Bracketed inversion; assumes strict monotonicity (surjectivity checked by bracket)."""
    lo, hi = None, None
    if seed is not None:
        v = sym(seed)
        if v <= y:
            lo = seed
        else:
            hi = seed
    if sym.displacement_sign == ABOVE:
        hi = y if hi is None else hi  # psi(y) > y means the preimage lies below y
    elif sym.displacement_sign == BELOW:
        lo = y if lo is None else lo
    step = 1.0
    guess = y if (lo is None or hi is None) else 0.5 * (lo + hi)
    while lo is None or hi is None:
        if lo is None:
            cand = (hi if hi is not None else guess) - step
            if sym(cand) <= y:
                lo = cand
            step *= 2.0
        else:
            cand = lo + step
            if sym(cand) > y:
                hi = cand
            step *= 2.0
        if step > DEFAULTS.max_range:
            raise OutOfRangeError(f"no preimage of {y} within |x| <= {DEFAULTS.max_range}")
    width = DEFAULTS.inversion_width
    while hi - lo > width * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if sym(mid) <= y:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(DEFAULTS.newton_polish_steps):
        d = sym.deriv(x)
        if d > DEFAULTS.derivative_floor:
            step = (sym(x) - y) / d
            cand = x - step
            if lo <= cand <= hi or abs(step) < 1.0:
                x = cand
    return x


def invert_batch(sym: Symbol, ys: np.ndarray) -> np.ndarray:
    """Vectorized monotone inversion of a strictly increasing symbol."""
    if not sym.strictly_increasing:
        raise UsageError(f"batch inversion needs a strictly increasing symbol, got {sym.label}")
    ys = np.asarray(ys, dtype=float)
    if sym.displacement_sign == ABOVE:
        hi = ys.copy()
        lo = ys - 1.0
    elif sym.displacement_sign == BELOW:
        lo = ys.copy()
        hi = ys + 1.0
    else:
        lo, hi = ys - 1.0, ys + 1.0
    step = 1.0
    while True:
        bad_lo = np.asarray(sym(lo)) > ys
        bad_hi = np.asarray(sym(hi)) <= ys
        if not (bad_lo.any() or bad_hi.any()):
            break
        lo = np.where(bad_lo, lo - step, lo)
        hi = np.where(bad_hi, hi + step, hi)
        step *= 2.0
        if step > DEFAULTS.max_range:
            raise OutOfRangeError("batch bracket expansion exceeded max_range")
    scale = np.maximum(1.0, np.maximum(np.abs(lo), np.abs(hi)))
    while np.any(hi - lo > DEFAULTS.inversion_width * scale):
        mid = 0.5 * (lo + hi)
        left = np.asarray(sym(mid)) <= ys
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(DEFAULTS.newton_polish_steps):
        d = np.asarray(sym.deriv(x))
        ok = d > DEFAULTS.derivative_floor
        delta = np.where(ok, (np.asarray(sym(x)) - ys) / np.where(ok, d, 1.0), 0.0)
        x = np.where(np.abs(delta) < 1.0, x - delta, x)
    return x


def iterate(sym: Symbol, n: int, x: float) -> float:
    """n-fold application; negative n walks the inverse branch."""
    return _orbit_points(sym, n, float(x))[-1]


def _orbit_points(sym: Symbol, n: int, x: float) -> np.ndarray:
    pts = np.empty(abs(n) + 1)
    pts[0] = x
    if n >= 0:
        for i in range(n):
            pts[i + 1] = sym(pts[i])
    else:
        if not (sym.bijective and sym.strictly_increasing):
            raise UsageError(f"backward iteration needs a strictly increasing bijection, got {sym.label}")
        for i in range(-n):
            pts[i + 1] = _invert_increasing(sym, pts[i], seed=pts[i - 1] if i >= 1 else None)
    return pts


def transport(sym: Symbol, n: int, x: float, order: int | None = None) -> OrbitTransport:
    """Orbit of x under n steps of sym, with the jet of psi_n and log|dpsi_n|."""
    pts = _orbit_points(sym, n, float(x))
    result = OrbitTransport(sym.label, float(x), n, pts)
    if order is None:
        return result
    if order > DEFAULTS.max_order:
        raise UsageError(f"order {order} above configured maximum {DEFAULTS.max_order}")
    jet = None
    logmag = 0.0
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        for i in range(abs(n)):
            if n >= 0:
                step = sym.jet_at(pts[i], order)
                d1 = step.derivs[1] if order >= 1 else 1.0
                logmag += math.log(abs(d1)) if d1 != 0.0 else -math.inf
            else:
                fwd = sym.jet_at(pts[i + 1], order)  # jet at the preimage
                step = jet_invert(fwd)               # jet of psi^{-1} at pts[i]
                if order >= 1:
                    logmag -= math.log(abs(fwd.derivs[1]))
            jet = step if jet is None else jet_compose(step, jet)
    if jet is None:
        jet = identity_jet(float(x), order)
    result.jet = jet
    result.log_deriv_mag = logmag
    result.overflow_flag = jet.overflow_flag
    return result


def transport_jet(sym: Symbol, n: int, x: float, order: int) -> Jet:
    """Jet of psi_n at x (chained compositions; inverse jets on backward steps)."""
    return transport(sym, n, x, order).jet


def image_interval(sym: Symbol, n: int, interval: tuple) -> tuple:
    """Monotone transport of [a, b] endpoints by psi_n."""
    a, b = interval
    if not sym.strictly_increasing:
        raise UsageError("interval transport needs a strictly increasing symbol")
    if not a <= b:
        raise UsageError(f"empty interval [{a}, {b}]")
    return (iterate(sym, n, a), iterate(sym, n, b))
