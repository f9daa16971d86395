"""Numerical solution of the unit-step equation H(psi(x)) = H(x) + 1.

The solver seeds H on one fundamental interval [x0, psi(x0)) and extends by
the exact cocycle H = (seed at the pulled-back point) + step count, so the
equation holds at transported nodes by construction and the residual is pure
interpolation error.  Junction jets at psi(x0) are forced from the seed jet
at x0 through the inverse-function jet, giving C^K matching at every
junction psi_n(x0).

Seed interior: orbit-ratio limits.  With D_n = psi_n(x1) - psi_n(x0),

    h(u)  = lim (psi_n(u) - psi_n(x0)) / D_n,
    h'(u) = lim psi_n'(u) / D_n,

Richardson-extrapolated over doubling horizons (the error is a 1/n series
for slowly separating orbits and the limit is exact for rigid ones).  This
canonical normalization makes the solution inherit the symbol's closed-form
structure away from the seed; when the limit degenerates (orbit gaps that
collapse interior mass, e.g. expanding tiled maps) the solver falls back to
a two-point Hermite seed with the requested slope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.interpolate import BPoly

from .config import DEFAULTS
from .errors import OutOfRangeError, SeedInfeasibleError, UsageError
from .jets import Jet, jet_compose, jet_invert
from .orbits import transport
from .schwartz import default_weight_family, seminorm
from .symbols import (
    ABOVE,
    BELOW,
    GrowthCertificate,
    Symbol,
    chebyshev_nodes,
    fit_polynomial_bound,
    reflect,
)

__all__ = ["AbelSolution", "solve_abel", "verify_abel", "quasi_conjugacy_check",
           "abel_implies_dynamics"]

_LADDER_CAP = 20000
_MARCH_CAP = 100000


class AbelSolution:
    """H with H(psi(x)) = H(x) + 1, built from a seed on [x0, psi(x0))."""

    def __init__(self, sym: Symbol, seed: BPoly, x0: float, x1: float, K: int,
                 canonical: bool, seed_slope: float, meta: dict):
        self._sym = sym
        self.symbol_label = sym.label
        self.seed = seed
        self._seed_d1 = seed.derivative()
        self._seed_d2 = self._seed_d1.derivative()
        self.x0, self.x1 = x0, x1
        self.K = K
        self.canonical = canonical
        self.seed_slope = seed_slope
        self.meta = meta
        self.residual_certificate: dict | None = None
        self.growth_report: dict | None = None

        us = chebyshev_nodes(x0, x1, DEFAULTS.abel_seed_nodes)
        self._us = us
        self._h = self.seed(us)
        self._hp = self._seed_d1(us)
        self._hpp = self._seed_d2(us)
        self._lad_X = [us.copy()]
        self._lad_logD = [np.zeros_like(us)]
        self._lad_A = [np.zeros_like(us)]
        self._junctions = [x0, x1]
        self._cells: dict = {}

    @property
    def fundamental_interval(self) -> tuple:
        return (self.x0, self.x1)

    # -- ladder ----------------------------------------------------------

    def _advance_level(self):
        X = self._lad_X[-1]
        d = np.asarray(self._sym.deriv(X))
        d2 = np.asarray(self._sym.deriv2(X))
        logD = self._lad_logD[-1]
        with np.errstate(over="ignore", under="ignore"):
            self._lad_A.append(self._lad_A[-1] + (d2 / d) * np.exp(logD))
        self._lad_logD.append(logD + np.log(d))
        X_new = np.asarray(self._sym(X))
        self._lad_X.append(X_new)
        self._junctions.append(float(X_new[-1]))

    def _ensure_cover(self, x_max: float):
        while self._junctions[-1] <= x_max:
            if len(self._junctions) > _LADDER_CAP:
                raise OutOfRangeError(f"junction ladder exceeded {_LADDER_CAP} levels")
            self._advance_level()

    def _cell(self, n: int) -> BPoly:
        poly = self._cells.get(n)
        if poly is None:
            while len(self._lad_X) <= n:
                self._advance_level()
            X = self._lad_X[n]
            logD = self._lad_logD[n]
            A = self._lad_A[n]
            with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                inv_d = np.exp(np.minimum(-logD, 680.0))
                H = self._h + n
                Hp = np.clip(np.nan_to_num(self._hp * inv_d), -1e300, 1e300)
                Hpp = np.clip(np.nan_to_num((self._hpp - self._hp * A) * inv_d * inv_d),
                              -1e300, 1e300)
                data = np.stack([H, Hp, Hpp], axis=1)
                poly = BPoly.from_derivatives(X, data)
            self._cells[n] = poly
        return poly

    # -- evaluation ----------------------------------------------------------

    def _march_below(self, xs: np.ndarray):
        """u = psi_m(x) in [x0, x1), step count m, and the derivative chain."""
        u = xs.copy()
        m = np.zeros(xs.size, dtype=int)
        logD = np.zeros(xs.size)
        A = np.zeros(xs.size)
        for _ in range(_MARCH_CAP):
            act = u < self.x0
            if not np.any(act):
                break
            ua = u[act]
            d = np.asarray(self._sym.deriv(ua))
            d2 = np.asarray(self._sym.deriv2(ua))
            with np.errstate(over="ignore", under="ignore"):
                A[act] += (d2 / d) * np.exp(logD[act])
            logD[act] += np.log(d)
            u[act] = np.asarray(self._sym(ua))
            m[act] += 1
        else:
            raise OutOfRangeError("forward march into the fundamental interval did not land")
        return u, m, logD, A

    def jets_batch(self, xs, order: int = 2) -> np.ndarray:
        """[H, H', ..., H^(order)] rows; order <= 2."""
        if order > 2:
            raise UsageError("Abel solutions expose jets up to order 2")
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.empty((xs.size, order + 1))
        below = xs < self.x0
        seedr = (xs >= self.x0) & (xs < self.x1)
        above = xs >= self.x1
        if np.any(below):
            u, m, logD, A = self._march_below(xs[below])
            with np.errstate(over="ignore", under="ignore"):
                D = np.exp(np.minimum(logD, 700.0))
            rows = [self.seed(u) - m]
            if order >= 1:
                rows.append(self._seed_d1(u) * D)
            if order >= 2:
                rows.append(self._seed_d2(u) * D * D + self._seed_d1(u) * D * A)
            out[below] = np.stack(rows, axis=1)
        if np.any(seedr):
            u = xs[seedr]
            rows = [self.seed(u)]
            if order >= 1:
                rows.append(self._seed_d1(u))
            if order >= 2:
                rows.append(self._seed_d2(u))
            out[seedr] = np.stack(rows, axis=1)
        if np.any(above):
            xa = xs[above]
            self._ensure_cover(float(xa.max()))
            idx = np.searchsorted(np.asarray(self._junctions), xa, side="right") - 1
            sub = np.empty((xa.size, order + 1))
            for n in np.unique(idx):
                cell = self._cell(int(n))
                mask = idx == n
                sub[mask, 0] = cell(xa[mask])
                if order >= 1:
                    sub[mask, 1] = cell(xa[mask], nu=1)
                if order >= 2:
                    sub[mask, 2] = cell(xa[mask], nu=2)
            out[above] = sub
        return out

    def eval_H(self, x):
        arr = np.asarray(x, dtype=float)
        out = self.jets_batch(np.atleast_1d(arr), order=0)[:, 0]
        return float(out[0]) if arr.ndim == 0 else out

    def eval_H_prime(self, x):
        arr = np.asarray(x, dtype=float)
        out = self.jets_batch(np.atleast_1d(arr), order=1)[:, 1]
        return float(out[0]) if arr.ndim == 0 else out

    __call__ = eval_H

    def sample_csv(self, xs) -> str:
        rows = self.jets_batch(xs, order=1)
        lines = ["x,H,H_prime"]
        for x, (h, hp) in zip(np.atleast_1d(xs), rows):
            lines.append(f"{x!r},{h!r},{hp!r}")
        return "\n".join(lines) + "\n"


class _ReflectedAbelSolution:
    """Wrap a solution for sigma(psi) into one for psi: H(x) = G(-x)."""

    def __init__(self, inner: AbelSolution, sym: Symbol):
        self._inner = inner
        self._sym = sym
        self.symbol_label = sym.label
        self.K = inner.K
        self.canonical = inner.canonical
        self.seed_slope = inner.seed_slope
        self.meta = dict(inner.meta, reflected=True)
        self.residual_certificate = None
        self.growth_report = None

    @property
    def fundamental_interval(self) -> tuple:
        return (-self._inner.x1, -self._inner.x0)

    @property
    def x0(self):
        return -self._inner.x0

    @property
    def x1(self):
        return -self._inner.x1

    def jets_batch(self, xs, order: int = 2) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        rows = self._inner.jets_batch(-xs, order=order)
        for j in range(1, order + 1):
            rows[:, j] *= (-1.0) ** j
        return rows

    def eval_H(self, x):
        arr = np.asarray(x, dtype=float)
        out = self.jets_batch(np.atleast_1d(arr), order=0)[:, 0]
        return float(out[0]) if arr.ndim == 0 else out

    def eval_H_prime(self, x):
        arr = np.asarray(x, dtype=float)
        out = self.jets_batch(np.atleast_1d(arr), order=1)[:, 1]
        return float(out[0]) if arr.ndim == 0 else out

    __call__ = eval_H
    sample_csv = AbelSolution.sample_csv


# -- canonical seed ----------------------------------------------------------


def _canonical_seed(sym: Symbol, x0: float, x1: float, K: int):
    """Orbit-ratio limit of the seed (values, slopes, jet at x0), or None."""
    us = chebyshev_nodes(x0, x1, DEFAULTS.abel_seed_nodes)
    O = us.copy()
    logD = np.zeros_like(us)
    snaps = {}
    checkpoints = [2**k for k in range(3, 1 + int(math.log2(DEFAULTS.abel_limit_steps)))]
    n_done = 0
    for n in range(1, DEFAULTS.abel_limit_steps + 1):
        with np.errstate(over="ignore", under="ignore"):
            logD += np.log(np.asarray(sym.deriv(O)))
            O_next = np.asarray(sym(O))
        if not np.all(np.isfinite(O_next)):
            break
        O = O_next
        n_done = n
        if n in checkpoints:
            den = O[-1] - O[0]
            if not (np.isfinite(den) and den > 0):
                break
            with np.errstate(over="ignore", under="ignore"):
                snaps[n] = ((O - O[0]) / den, np.exp(logD - math.log(den)))
            ks = sorted(snaps)
            if len(ks) >= 3 and np.max(np.abs(snaps[ks[-1]][0] - snaps[ks[-2]][0])) < 5e-14:
                break
    ks = sorted(snaps)
    if len(ks) < 3:
        return None
    q, q2, q4 = ks[-3], ks[-2], ks[-1]
    if not (q2 == 2 * q and q4 == 4 * q):
        return None

    def extrap(idx):
        return (8.0 * snaps[q4][idx] - 6.0 * snaps[q2][idx] + snaps[q][idx]) / 3.0

    h_nodes = extrap(0)
    hp_nodes = extrap(1)
    delta = float(np.max(np.abs(snaps[q4][0] - snaps[q2][0])))
    # jet of h at x0 from the same limit applied to transported jets
    jets = {}
    for n in (q, q2, q4):
        tr = transport(sym, n, x0, K)
        jets[n] = tr.jet.derivs / _orbit_gap(sym, x0, x1, n)
    j0 = (8.0 * jets[q4] - 6.0 * jets[q2] + jets[q]) / 3.0
    j0[0] = 0.0
    ok = (
        delta < 3e-3
        and np.all(np.diff(h_nodes) > 0)
        and float(np.min(hp_nodes)) > 1e-6 * float(np.max(hp_nodes))
        and np.all(np.isfinite(hp_nodes))
        and j0[1] > 0
    )
    if not ok:
        return None
    return {"us": us, "h": h_nodes, "hp": hp_nodes, "jet0": j0, "delta": delta,
            "horizon": q4, "n_done": n_done}


def _orbit_gap(sym: Symbol, x0: float, x1: float, n: int) -> float:
    return transport(sym, n, x1).end - transport(sym, n, x0).end


def _forced_junction_jet(sym: Symbol, x0: float, jet0: np.ndarray, K: int) -> np.ndarray:
    """Jet of the seed at x1 forced by (h o psi)^(j)(x0) = h^(j)(x0), value 1."""
    target = Jet(x0, np.concatenate([[1.0], jet0[1:]]))
    inv = jet_invert(sym.jet_at(x0, K))
    return jet_compose(target, inv).derivs


def _build_seed(x0, x1, jet0, jet1, interior=None):
    if interior is None:
        xi = [x0, x1]
        yi = [list(jet0), list(jet1)]
    else:
        us, h, hp = interior
        xi = [x0] + list(us[1:-1]) + [x1]
        yi = [list(jet0)] + [[float(v), float(s)] for v, s in zip(h[1:-1], hp[1:-1])] + [list(jet1)]
    seed = BPoly.from_derivatives(xi, yi)
    probe = chebyshev_nodes(x0, x1, 4097)
    dmin = float(np.min(seed.derivative()(probe)))
    return (seed, dmin) if dmin > 0 else (None, dmin)


def solve_abel(sym: Symbol, K: int | None = None, x0: float = 0.0,
               seed_slope: float | None = None, grid=None) -> AbelSolution:
    """Construct H with H(psi(x)) = H(x) + 1 and verify the residual.

    ``seed_slope`` pins h'(x0); left unset the solver prefers the canonical
    orbit-ratio seed (exact for translations and for symbols with closed-form
    orbits) and falls back to a Hermite seed with slope 1/(psi(x0) - x0).
    """
    K = DEFAULTS.abel_junction_order if K is None else K
    if not (sym.strictly_increasing and sym.fixed_point_free):
        raise UsageError(f"{sym.label} must be strictly increasing and fixed-point free")
    if sym.displacement_sign == BELOW:
        inner = solve_abel(reflect(sym), K=K, x0=-x0, seed_slope=seed_slope, grid=None)
        sol = _ReflectedAbelSolution(inner, sym)
        sol.residual_certificate = _residual_certificate(sol, sym, grid)
        return sol

    x1 = sym(x0)
    meta: dict = {}
    seed = None
    canonical = False
    slope_used = None
    if seed_slope is None:
        data = _canonical_seed(sym, x0, x1, K)
        if data is not None:
            jet1 = _forced_junction_jet(sym, x0, data["jet0"], K)
            seed, dmin = _build_seed(x0, x1, data["jet0"], jet1,
                                     (data["us"], data["h"], data["hp"]))
            if seed is not None:
                canonical = True
                slope_used = float(data["jet0"][1])
                meta.update(limit_delta=data["delta"], limit_horizon=data["horizon"])
            else:
                meta["canonical_rejected"] = f"seed derivative dips to {dmin}"
        else:
            meta["canonical_rejected"] = "orbit-ratio limit degenerate or unconverged"
    if seed is None:
        c = seed_slope if seed_slope is not None else 1.0 / (x1 - x0)
        if not c > 0:
            raise UsageError("seed slope must be positive")
        jet0 = np.zeros(K + 1)
        jet0[1] = c
        jet1 = _forced_junction_jet(sym, x0, jet0, K)
        seed, dmin = _build_seed(x0, x1, jet0, jet1)
        if seed is None:
            mid = 0.5 * (x0 + x1)
            interior = (np.array([x0, mid, x1]), np.array([0.0, 0.5, 1.0]),
                        np.full(3, 1.0 / (x1 - x0)))
            seed, dmin = _build_seed(x0, x1, jet0, jet1, interior)
        if seed is None:
            raise SeedInfeasibleError(
                f"junction jets force a non-monotone seed (min h' = {dmin}); "
                "retry with a smaller seed slope or lower junction order"
            )
        slope_used = c
    sol = AbelSolution(sym, seed, x0, x1, K, canonical, slope_used, meta)
    sol.residual_certificate = _residual_certificate(sol, sym, grid)
    return sol


def _residual_certificate(sol, sym, grid=None) -> dict:
    if grid is None:
        grid = np.linspace(DEFAULTS.abel_grid_lo, DEFAULTS.abel_grid_hi,
                           DEFAULTS.abel_grid_points)
    grid = np.asarray(grid, dtype=float)
    H = sol.eval_H(grid)
    Hpsi = sol.eval_H(np.asarray(sym(grid)))
    resid = np.abs(Hpsi - H - 1.0)
    hp = sol.eval_H_prime(grid)
    return {
        "grid": (float(grid.min()), float(grid.max()), int(grid.size)),
        "max_residual": float(resid.max()),
        "argmax_x": float(grid[int(np.argmax(resid))]),
        "min_H_prime": float(hp.min()),
        "tolerance": DEFAULTS.abel_residual_tol,
        "passed": bool(resid.max() <= DEFAULTS.abel_residual_tol and hp.min() > 0),
    }


class _HFunction:
    """Adapter exposing H to the seminorm machinery."""

    def __init__(self, sol, cert: GrowthCertificate):
        self._sol = sol
        self.growth_certificate = cert
        self.label = f"abel_H[{sol.symbol_label}]"

    def jet_at(self, x: float, m: int) -> Jet:
        row = self._sol.jets_batch(np.array([x]), order=m)[0]
        return Jet(float(x), row)

    def jets_batch(self, xs, m: int):
        return self._sol.jets_batch(xs, order=m)


def verify_abel(sol, grid=None) -> dict:
    """Residual, monotonicity and membership-surrogate report for a solution."""
    sym = sol._sym
    cert = _residual_certificate(sol, sym, grid)
    xs = chebyshev_nodes(-DEFAULTS.probe_radius, DEFAULTS.probe_radius, 801)
    rows = sol.jets_batch(xs, order=2)
    entries = []
    fits_ok = True
    for j in range(3):
        fit = fit_polynomial_bound(xs, np.abs(rows[:, j]))
        if fit is None:
            fits_ok = False
            entries.append((j, math.inf, 0))
        else:
            entries.append((j, fit[0], fit[1]))
    fits_ok = fits_ok and max(c for _, c, _ in entries) < DEFAULTS.bound_cap
    membership = bool(fits_ok and cert["passed"])
    report = {
        "residual": cert,
        "growth_certificate": [
            {"order": j, "C": c, "t": t} for j, c, t in entries
        ],
        "membership_surrogate": membership,
        "seminorms": {},
    }
    if membership:
        gcert = GrowthCertificate(entries, DEFAULTS.probe_radius, validated=True)
        hfun = _HFunction(sol, gcert)
        for v in default_weight_family():
            per_m = {}
            for m in range(3):
                est = seminorm(hfun, m, v)
                per_m[m] = {"value": est.value, "tail_bound": est.tail_bound,
                            "radius": est.radius}
            report["seminorms"][v.label] = per_m
    else:
        report["note"] = ("derivatives of H leave every polynomial envelope on the probe"
                          " range or the residual certificate failed; membership surrogate"
                          " fails (growth diagnostics attached)")
        report["derivative_range"] = {
            "min_H_prime": float(np.min(rows[:, 1])),
            "max_H_prime": float(np.max(rows[:, 1])),
        }
    sol.growth_report = report
    return report


def quasi_conjugacy_check(sol, fs=None, grid=None) -> dict:
    """max |f(H(x)+1) - f(H(psi(x)))| per test function, against Lip(f)*residual."""
    sym = sol._sym
    if grid is None:
        grid = np.linspace(-10.0, 10.0, 2001)
    grid = np.asarray(grid, dtype=float)
    if fs is None:
        fs = [
            ("identity", lambda u: u, 1.0),
            ("gauss_bump", lambda u: np.exp(-u * u), math.sqrt(2.0 / math.e)),
        ]
    if sol.residual_certificate is None:
        sol.residual_certificate = _residual_certificate(sol, sym, grid)
    resid = sol.residual_certificate["max_residual"]
    H = sol.eval_H(grid)
    Hpsi = sol.eval_H(np.asarray(sym(grid)))
    rows = []
    for label, f, lip in fs:
        disc = float(np.max(np.abs(f(H + 1.0) - f(Hpsi))))
        bound = lip * resid
        rows.append({"f": label, "discrepancy": disc, "bound": bound,
                     "within": bool(disc <= bound * (1.0 + 1e-9) + 1e-13)})
    return {"rows": rows, "residual": resid}


def abel_implies_dynamics(sym: Symbol, n_max: int | None = None) -> dict:
    """Composite run: growth condition + mixing tables + solver; stamps when all hold."""
    from .classify import EVIDENCE, check_abel_growth, check_mixing_bijective

    growth = check_abel_growth(sym)
    mixing = check_mixing_bijective(sym, n_max=n_max)
    parts = {"abel_growth": growth.to_dict(), "mixing_bij": mixing.to_dict()}
    solver_ok = False
    try:
        sol = solve_abel(sym)
        parts["abel_residual"] = sol.residual_certificate
        solver_ok = sol.residual_certificate["passed"]
    except (UsageError, SeedInfeasibleError, OutOfRangeError) as exc:
        parts["abel_residual"] = {"error": str(exc)}
    stamped = growth.kind == EVIDENCE and mixing.kind == EVIDENCE and solver_ok
    return {
        "symbol": sym.label,
        "stamp": "hypercyclic and chaotic (numerically evidenced)" if stamped else None,
        "parts": parts,
    }
