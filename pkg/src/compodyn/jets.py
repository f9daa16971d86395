"""Truncated derivative calculus at a point.

A :class:`Jet` stores raw derivatives ``f(x), f'(x), ..., f^(m)(x)`` (not
Taylor coefficients).  Composition uses the partition expansion

    (f o g)^(j)(x) = sum over i_1 + 2 i_2 + ... + j i_j = j of
        j! / (i_1! ... i_j!) * f^(i_1+...+i_j)(g(x)) * prod_r (g^(r)(x)/r!)^i_r

with exact integer coefficients.  Inverse jets come in two independent
flavours (a polynomial recursion in the forward derivatives, and an
order-by-order solve of ``compose(inverse, jet) = identity``) which are
required to agree; overflow saturates into a flag instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from .config import DEFAULTS
from .errors import ChainingError, CriticalPointError, UsageError

__all__ = [
    "Jet",
    "jet_compose",
    "jet_invert",
    "jet_add",
    "jet_mul",
    "jet_scale",
    "jet_div",
    "identity_jet",
    "constant_jet",
    "affine_jet",
    "sqrt_jet",
    "exp_jet",
    "recip_jet",
    "poly_jet",
]


@dataclass(frozen=True, eq=False)
class Jet:
    """Value and raw derivatives of a function at ``base_point`` up to ``order``."""

    base_point: float
    derivs: np.ndarray
    overflow_flag: bool = False

    def __post_init__(self):
        d = np.asarray(self.derivs, dtype=float)
        object.__setattr__(self, "derivs", d)
        if d.ndim != 1 or d.size == 0:
            raise UsageError("jet needs a one-dimensional, non-empty derivative array")
        if not self.overflow_flag and not np.all(np.isfinite(d)):
            object.__setattr__(self, "overflow_flag", True)

    @property
    def order(self) -> int:
        return self.derivs.size - 1

    @property
    def value(self) -> float:
        return float(self.derivs[0])

    def taylor_coeffs(self) -> np.ndarray:
        """derivs[j] / j! — exact for j <= 20 in double precision."""
        facts = np.array([math.factorial(j) for j in range(self.order + 1)], dtype=float)
        return self.derivs / facts

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise UsageError(f"cannot truncate order-{self.order} jet to order {order}")
        return Jet(self.base_point, self.derivs[: order + 1].copy(), self.overflow_flag)

    def __repr__(self):
        flag = ", overflow" if self.overflow_flag else ""
        return f"Jet(x={self.base_point!r}, derivs={self.derivs.tolist()!r}{flag})"


def _chain_ok(a: float, b: float, rtol: float) -> bool:
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


@lru_cache(maxsize=64)
def _compose_terms(j: int) -> tuple:
    """Partition data for order ``j``: tuples (coeff, k, multiplicities).

    ``multiplicities[r-1]`` is i_r; ``k = sum i_r`` is the outer derivative
    order; ``coeff = j! / prod(i_r! * (r!)**i_r)`` is an exact integer.
    """
    terms = []

    def rec(largest_part: int, remaining: int, mults: list):
        if remaining == 0:
            i = tuple(mults)
            k = sum(i)
            denom = 1
            for r, m in enumerate(i, start=1):
                denom *= math.factorial(m) * math.factorial(r) ** m
            terms.append((math.factorial(j) // denom, k, i))
            return
        for part in range(min(largest_part, remaining), 0, -1):
            for count in range(remaining // part, 0, -1):
                new = mults.copy()
                new[part - 1] += count
                rec(part - 1, remaining - part * count, new)

    rec(j, j, [0] * j)
    return tuple(terms)


def jet_compose(outer: Jet, inner: Jet) -> Jet:
    """Jet of ``f o g`` at ``inner.base_point`` from jets of f at g(x) and g at x."""
    if outer.order != inner.order:
        raise UsageError(f"order mismatch: outer {outer.order} vs inner {inner.order}")
    if not (outer.overflow_flag or inner.overflow_flag):
        if not _chain_ok(outer.base_point, inner.value, DEFAULTS.base_point_rtol):
            raise ChainingError(
                f"outer jet based at {outer.base_point}, inner value {inner.value}"
            )
    m = outer.order
    out = np.empty(m + 1)
    out[0] = outer.derivs[0]
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        for j in range(1, m + 1):
            acc = 0.0
            for coeff, k, mults in _compose_terms(j):
                term = float(coeff) * outer.derivs[k]
                for r, cnt in enumerate(mults, start=1):
                    if cnt:
                        term *= inner.derivs[r] ** cnt
                acc += term
            out[j] = acc
    flag = outer.overflow_flag or inner.overflow_flag or not np.all(np.isfinite(out))
    return Jet(inner.base_point, out, flag)


@lru_cache(maxsize=32)
def _inverse_poly(n: int) -> tuple:
    """Integer polynomial P_n with (psi^{-1})^(n) = (1/psi')^(2n-1) P_n(psi', ..., psi^(n)).

    Encoded as ((coeff, exponents), ...) where ``exponents[k-1]`` is the power of
    the k-th forward derivative.  Recursion (differentiate once more):
        P_{n+1} = -(2n-1) u_2 P_n + u_1 * sum_k dP_n/du_k * u_{k+1}.
    """
    if n == 1:
        return ((1, (0,)),)
    prev = _inverse_poly(n - 1)
    m = n - 1
    poly: dict[tuple, int] = {}

    def add(expo: tuple, c: int):
        if c:
            poly[expo] = poly.get(expo, 0) + c
            if poly[expo] == 0:
                del poly[expo]

    for coeff, expo in prev:
        e = list(expo) + [0]
        # -(2m-1) * u_2 * term
        e2 = e.copy()
        e2[1] += 1
        add(tuple(e2), -(2 * m - 1) * coeff)
        # u_1 * sum_k d/du_k term * u_{k+1}
        for k in range(1, m + 1):
            if e[k - 1] == 0:
                continue
            ek = e.copy()
            ek[k - 1] -= 1
            ek[k] += 1
            ek[0] += 1
            add(tuple(ek), coeff * expo[k - 1])
    return tuple((c, e) for e, c in sorted(poly.items()))


def jet_invert(j: Jet, method: str = "series") -> Jet:
    """Jet of the inverse function at ``j.value`` from the jet of a monotone f at x.

    ``method`` is "series" (order-by-order solve of compose(inv, j) = id) or
    "poly" (the integer-coefficient recursion); the two agree to rounding.
    """
    if j.order < 1:
        raise UsageError("inverse jet needs order >= 1")
    if not abs(j.derivs[1]) > DEFAULTS.derivative_floor:
        raise CriticalPointError(f"derivative {j.derivs[1]!r} below floor at {j.base_point!r}")
    m = j.order
    if method == "poly":
        inv = np.empty(m + 1)
        inv[0] = j.base_point
        d1 = j.derivs[1]
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            for n in range(1, m + 1):
                acc = 0.0
                for coeff, expo in _inverse_poly(n):
                    term = float(coeff)
                    for k, p in enumerate(expo, start=1):
                        if p:
                            term *= j.derivs[k] ** p
                    acc += term
                inv[n] = acc / d1 ** (2 * n - 1)
        flag = j.overflow_flag or not np.all(np.isfinite(inv))
        return Jet(j.value, inv, flag)
    if method != "series":
        raise UsageError(f"unknown inverse method {method!r}")
    inv = np.zeros(m + 1)
    inv[0] = j.base_point
    inv[1] = 1.0 / j.derivs[1]
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        for n in range(2, m + 1):
            # (inv o j)^(n) = inv^(n) * (j')^n + lower-order terms; solve for inv^(n).
            partial = Jet(j.value, inv[: n + 1].copy())
            lower = jet_compose(partial, j.truncate(n)).derivs[n]
            inv[n] = -lower / j.derivs[1] ** n
    flag = j.overflow_flag or not np.all(np.isfinite(inv))
    return Jet(j.value, inv, flag)


def _check_pair(a: Jet, b: Jet):
    if a.order != b.order:
        raise UsageError(f"order mismatch: {a.order} vs {b.order}")
    if not _chain_ok(a.base_point, b.base_point, DEFAULTS.base_point_rtol):
        raise UsageError(f"base point mismatch: {a.base_point} vs {b.base_point}")


def jet_add(a: Jet, b: Jet) -> Jet:
    _check_pair(a, b)
    out = a.derivs + b.derivs
    return Jet(a.base_point, out, a.overflow_flag or b.overflow_flag)


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Leibniz rule: out[j] = sum_i C(j, i) a[i] b[j-i]."""
    _check_pair(a, b)
    m = a.order
    out = np.empty(m + 1)
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        for j in range(m + 1):
            out[j] = sum(
                math.comb(j, i) * a.derivs[i] * b.derivs[j - i] for i in range(j + 1)
            )
    flag = a.overflow_flag or b.overflow_flag or not np.all(np.isfinite(out))
    return Jet(a.base_point, out, flag)


def jet_scale(a: Jet, c: float) -> Jet:
    return Jet(a.base_point, a.derivs * float(c), a.overflow_flag)


def jet_div(a: Jet, b: Jet) -> Jet:
    """a / b via composing the reciprocal jet with b."""
    _check_pair(a, b)
    if abs(b.derivs[0]) <= DEFAULTS.derivative_floor:
        raise CriticalPointError("division by a jet with value ~ 0")
    return jet_mul(a, jet_compose(recip_jet(b.value, b.order), b))


# -- elementary jets -----------------------------------------------------------


def identity_jet(x: float, order: int) -> Jet:
    d = np.zeros(order + 1)
    d[0] = x
    if order >= 1:
        d[1] = 1.0
    return Jet(x, d)


def constant_jet(x: float, value: float, order: int) -> Jet:
    d = np.zeros(order + 1)
    d[0] = value
    return Jet(x, d)


def affine_jet(x: float, a: float, b: float, order: int) -> Jet:
    d = np.zeros(order + 1)
    d[0] = a * x + b
    if order >= 1:
        d[1] = a
    return Jet(x, d)


def sqrt_jet(u: float, order: int) -> Jet:
    """Jet of sqrt at u > 0."""
    if u <= 0:
        raise UsageError("sqrt jet needs a positive base value")
    d = np.empty(order + 1)
    d[0] = math.sqrt(u)
    c = 0.5
    p = d[0] / u  # u^{-1/2}
    for k in range(1, order + 1):
        d[k] = c * p
        p /= u
        c *= 0.5 - k
    return Jet(u, d)


def exp_jet(u: float, order: int) -> Jet:
    with np.errstate(over="ignore"):
        v = math.exp(u) if u < 709 else math.inf
    return Jet(u, np.full(order + 1, v))


def recip_jet(u: float, order: int) -> Jet:
    """Jet of 1/u: derivatives (-1)^k k! / u^{k+1}."""
    d = np.empty(order + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(order + 1):
            d[k] = (-1) ** k * math.factorial(k) / u ** (k + 1)
    return Jet(u, d)


def poly_jet(x: float, coeffs, order: int) -> Jet:
    """Jet of a polynomial given by coefficients in increasing degree."""
    c = np.asarray(coeffs, dtype=float)
    d = np.empty(order + 1)
    work = c.copy()
    for k in range(order + 1):
        d[k] = np.polyval(work[::-1], x) if work.size else 0.0
        work = work[1:] * np.arange(1, work.size)
    return Jet(x, d)
