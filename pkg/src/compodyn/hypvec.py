"""Constructive orbit machinery: schedule selection, the candidate vector g,
and verification that its orbit revisits each target.

The schedule picks, for each entry, the smallest power k that (a) keeps the
transported supports marching strictly rightward, (b) parks every earlier
summand far left of both -n-1 and the forward-bound anchor with its
derivative bounds dominated by the distance from the origin, and (c) parks
the new summand symmetrically far right.  Off the transported support the
composed summand vanishes, so the pointwise bounds only constrain the
support preimage; margins for all three conditions are recorded per entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import math

import numpy as np

from .config import DEFAULTS
from .errors import ScheduleCorruptError, ScheduleInfeasibleError, UsageError
from .jets import Jet, exp_jet, jet_add, jet_compose, jet_scale, poly_jet, recip_jet, constant_jet
from .orbits import invert_batch, transport
from .schwartz import DecayTable, evidence_weight_family
from .symbols import BELOW, Symbol, chebyshev_nodes, fit_polynomial_bound, reflect

__all__ = ["Bump", "Schedule", "AssembledVector", "default_targets",
           "select_schedule", "assemble_g", "verify_orbit_approach"]


class Bump:
    """Compactly supported mollifier amp * exp(1 - 1/(1-t^2)) on [lo, hi]."""

    def __init__(self, lo: float, hi: float, amplitude: float = 1.0, bound_order: int = 6):
        if not hi > lo:
            raise UsageError("bump needs a nonempty support")
        self.support = (float(lo), float(hi))
        self.amplitude = float(amplitude)
        self.label = f"bump[{lo:g},{hi:g}]x{amplitude:g}"
        xs = chebyshev_nodes(lo, hi, 2001)
        mags = np.zeros((bound_order + 1, xs.size))
        for i, x in enumerate(xs[1:-1], start=1):
            mags[:, i] = np.abs(self.jet_at(float(x), bound_order).derivs)
        # dense sampling with 10% headroom
        self.deriv_bounds = 1.1 * mags.max(axis=1)

    def _t(self, x):
        lo, hi = self.support
        return (2.0 * np.asarray(x, dtype=float) - lo - hi) / (hi - lo)

    def __call__(self, x):
        t = self._t(x)
        out = np.zeros_like(t)
        inside = np.abs(t) < 1.0
        with np.errstate(divide="ignore", over="ignore"):
            out[inside] = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
        return out

    def rows2(self, x) -> np.ndarray:
        """(p, p', p'') rows, vectorized (closed-form log-derivative chain)."""
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        scale = 2.0 / (hi - lo)
        t = self._t(x)
        out = np.zeros((x.size, 3))
        inside = np.abs(t) < 1.0
        ti = t[inside]
        u = 1.0 - ti * ti
        p = self.amplitude * np.exp(1.0 - 1.0 / u)
        g1 = -2.0 * ti / u**2 * scale
        g2 = (-2.0 / u**2 - 8.0 * ti * ti / u**3) * scale**2
        out[inside, 0] = p
        out[inside, 1] = p * g1
        out[inside, 2] = p * (g1 * g1 + g2)
        return out

    def jet_at(self, x: float, order: int) -> Jet:
        t = float(self._t(np.array([x]))[0])
        if not abs(t) < 1.0:
            return constant_jet(x, 0.0, order)
        lo, hi = self.support
        scale = 2.0 / (hi - lo)
        t_jet = poly_jet(x, [-(lo + hi) / (hi - lo), scale], order)
        one_minus = jet_add(constant_jet(x, 1.0, order),
                            jet_scale(jet_compose(poly_jet(t, [0.0, 0.0, 1.0], order), t_jet), -1.0))
        inner = jet_add(constant_jet(x, 1.0, order),
                        jet_scale(jet_compose(recip_jet(one_minus.value, order), one_minus), -1.0))
        return jet_scale(jet_compose(exp_jet(inner.value, order), inner), self.amplitude)

    def to_dict(self):
        return {"support": list(self.support), "amplitude": self.amplitude}


def default_targets() -> list:
    return [Bump(0.0, 1.0, 1.0), Bump(-0.5, 0.5, 0.5), Bump(-1.0, 1.0, 0.75)]


@dataclass
class Schedule:
    targets: list
    sequence: list            # target index per entry; each target recurs
    entries: list             # dicts: {n, k, margins}
    symbol: str
    j_max: int
    alpha: float
    beta: float
    reduced: bool = False
    work_sym: Symbol | None = field(default=None, repr=False)

    @property
    def ks(self) -> list:
        return [e["k"] for e in self.entries]

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "reduced_through_reflection": self.reduced,
            "j_max": self.j_max,
            "alpha": self.alpha,
            "beta": self.beta,
            "targets": [t.to_dict() for t in self.targets],
            "sequence": self.sequence,
            "entries": self.entries,
            "note": "pointwise bounds checked on transported supports only; the"
                    " composed summands vanish elsewhere",
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=repr, **kw)


class _EndpointOrbits:
    """Forward/backward orbits of support endpoints, grown on demand."""

    def __init__(self, sym: Symbol, support: tuple):
        self._sym = sym
        self._fwd = [np.array(support, dtype=float)]
        self._bwd = [np.array(support, dtype=float)]

    def forward(self, m: int) -> np.ndarray:
        while len(self._fwd) <= m:
            self._fwd.append(np.asarray(self._sym(self._fwd[-1])))
        return self._fwd[m]

    def backward(self, m: int) -> np.ndarray:
        while len(self._bwd) <= m:
            self._bwd.append(invert_batch(self._sym, self._bwd[-1]))
        return self._bwd[m]


def select_schedule(sym: Symbol, targets: list | None = None, j_max: int | None = None,
                    alpha: float = 0.0, beta: float = 0.0, sequence: list | None = None,
                    k_cap: int | None = None, hypothesis_check: bool = True) -> Schedule:
    """Smallest-k schedule satisfying the separation and bound conditions."""
    from .classify import EVIDENCE, check_hypercyclic_sufficient

    j_max = DEFAULTS.schedule_j_max if j_max is None else j_max
    k_cap = DEFAULTS.k_cap if k_cap is None else k_cap
    targets = default_targets() if targets is None else targets
    if sequence is None:
        sequence = [i for _ in range(3) for i in range(len(targets))]
    if hypothesis_check:
        verdict = check_hypercyclic_sufficient(sym, j_max=max(1, min(j_max, 3)),
                                               alpha=alpha, beta=beta)
        if verdict.kind != EVIDENCE:
            raise UsageError(
                f"{sym.label} does not evidence the construction hypotheses ({verdict.kind})"
            )
    reduced = False
    work = sym
    if sym.displacement_sign == BELOW:
        work = reflect(sym)
        alpha, beta = -beta, -alpha
        reduced = True

    orbits = [_EndpointOrbits(work, t.support) for t in targets]
    entries = [{"n": 1, "k": 0, "margins": {}}]
    for n in range(1, len(sequence)):
        prev_idx = sequence[n - 1]
        new_idx = sequence[n]
        k_prev = entries[-1]["k"]
        prev_sup = float(orbits[prev_idx].forward(k_prev)[1])
        j_hi = min(n + 1, j_max)
        found = None
        k = k_prev
        while found is None:
            k += 1
            if k > k_cap:
                raise ScheduleInfeasibleError(
                    f"no admissible power below k_cap={k_cap} for entry {n + 1}"
                )
            # (a) strict rightward separation of consecutive transported supports
            new_lo = float(orbits[new_idx].forward(k)[0])
            margin_a = new_lo - prev_sup
            if margin_a <= 0.0:
                continue
            # (b) earlier summands pulled far left with dominated bounds
            left_edge = min(-(n + 1), alpha)
            margin_b = math.inf
            ok = True
            for l in range(n):
                k_l = entries[l]["k"]
                seg = orbits[sequence[l]].backward(k - k_l)
                margin_b = min(margin_b, left_edge - float(seg[1]))
                if float(seg[1]) >= left_edge:
                    ok = False
                    break
                dist = abs(float(seg[1]))
                bound = float(np.max(targets[sequence[l]].deriv_bounds[: j_hi + 1]))
                margin_b = min(margin_b, dist - bound)
                if bound > dist:
                    ok = False
                    break
            if not ok:
                continue
            # (c) the new summand pushed far right, mirrored bounds
            right_edge = max(n + 1, beta)
            margin_c = math.inf
            bound_new = float(np.max(targets[new_idx].deriv_bounds[: j_hi + 1]))
            for l in range(n):
                k_l = entries[l]["k"]
                seg = orbits[new_idx].forward(k - k_l)
                margin_c = min(margin_c, float(seg[0]) - right_edge)
                if float(seg[0]) <= right_edge:
                    ok = False
                    break
                if bound_new > float(seg[0]):
                    ok = False
                    break
                margin_c = min(margin_c, float(seg[0]) - bound_new)
            if ok:
                found = {"n": n + 1, "k": k, "margins": {
                    "separation": margin_a, "left_group": margin_b, "right_group": margin_c,
                }}
        entries.append(found)
    return Schedule(targets, list(sequence), entries, sym.label, j_max, alpha, beta,
                    reduced, work)


class AssembledVector:
    """Finite sum g(x) = sum_m p_{seq(m)}(psi_{-k_m}(x)) with disjoint supports."""

    def __init__(self, schedule: Schedule):
        self.schedule = schedule
        self._sym = schedule.work_sym
        self.supports = []
        for m, idx in enumerate(schedule.sequence):
            k = schedule.entries[m]["k"]
            lo, hi = schedule.targets[idx].support
            tlo = transport(self._sym, k, lo).end
            thi = transport(self._sym, k, hi).end
            self.supports.append((tlo, thi))
        for (a, b), (c, d) in zip(self.supports[:-1], self.supports[1:]):
            if not b < c:
                raise ScheduleCorruptError(f"transported supports overlap: ({a},{b}) vs ({c},{d})")
        self.label = f"orbit_vector[{schedule.symbol}]"
        self._certificate = None

    def _locate(self, x: float) -> int | None:
        for m, (lo, hi) in enumerate(self.supports):
            if lo < x < hi:
                return m
        return None

    def __call__(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(xs)
        for m, (lo, hi) in enumerate(self.supports):
            mask = (xs > lo) & (xs < hi)
            if np.any(mask):
                k = self.schedule.entries[m]["k"]
                bump = self.schedule.targets[self.schedule.sequence[m]]
                pulled = xs[mask]
                for _ in range(k):
                    pulled = invert_batch(self._sym, pulled)
                out[mask] = bump(pulled)
        return float(out[0]) if np.ndim(x) == 0 else out

    def jet_at(self, x: float, order: int) -> Jet:
        m = self._locate(float(x))
        if m is None:
            return constant_jet(float(x), 0.0, order)
        k = self.schedule.entries[m]["k"]
        bump = self.schedule.targets[self.schedule.sequence[m]]
        tr = transport(self._sym, -k, float(x), order)
        return jet_compose(bump.jet_at(tr.end, order), tr.jet)

    def rows2(self, x) -> np.ndarray:
        """(g, g', g'') rows, vectorized over the disjoint summand supports."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros((xs.size, 3))
        for m, (lo, hi) in enumerate(self.supports):
            mask = (xs > lo) & (xs < hi)
            if np.any(mask):
                k = self.schedule.entries[m]["k"]
                bump = self.schedule.targets[self.schedule.sequence[m]]
                out[mask] = _term_rows(bump, self._sym, -k, xs[mask])
        return out

    @property
    def growth_certificate(self):
        if self._certificate is None:
            from .symbols import GrowthCertificate

            lo = min(s[0] for s in self.supports) - 2.0
            hi = max(s[1] for s in self.supports) + 2.0
            xs = chebyshev_nodes(lo, hi, 2049)
            mags = np.abs(self.rows2(xs)).T
            entries = []
            for j in range(3):
                fit = fit_polynomial_bound(xs, mags[j])
                entries.append((j, fit[0], fit[1]) if fit else (j, float(mags[j].max()), 0))
            self._certificate = GrowthCertificate(entries, max(abs(lo), abs(hi)), validated=True)
        return self._certificate


def assemble_g(sym: Symbol, schedule: Schedule) -> AssembledVector:
    """Assemble the candidate vector; supports must come out pairwise disjoint."""
    if sym.label != schedule.symbol:
        raise UsageError(f"schedule was built for {schedule.symbol}, got {sym.label}")
    return AssembledVector(schedule)


def _chain_maps(sym: Symbol, power: int, xs: np.ndarray):
    """Value and first two derivatives of psi_power at xs, vectorized."""
    val = np.asarray(xs, dtype=float).copy()
    d1 = np.ones_like(val)
    d2 = np.zeros_like(val)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        for _ in range(max(power, 0)):
            s1 = np.asarray(sym.deriv(val))
            s2 = np.asarray(sym.deriv2(val))
            d2 = s2 * d1 * d1 + s1 * d2
            d1 = s1 * d1
            val = np.asarray(sym(val))
        for _ in range(max(-power, 0)):
            nxt = invert_batch(sym, val)
            s1 = np.asarray(sym.deriv(nxt))
            s2 = np.asarray(sym.deriv2(nxt))
            inv1 = 1.0 / s1
            inv2 = -s2 / s1**3
            d2 = inv2 * d1 * d1 + inv1 * d2
            d1 = inv1 * d1
            val = nxt
    return val, d1, d2


def _term_rows(bump: Bump, sym: Symbol, power: int, xs: np.ndarray) -> np.ndarray:
    """(q, q', q'') rows of q = p o psi_power at xs."""
    val, d1, d2 = _chain_maps(sym, power, xs)
    rows = bump.rows2(val)
    out = np.empty_like(rows)
    out[:, 0] = rows[:, 0]
    out[:, 1] = rows[:, 1] * d1
    out[:, 2] = rows[:, 2] * d1 * d1 + rows[:, 1] * d2
    return out


def _residual_terms(schedule: Schedule, s: int) -> list:
    """Summands of C^{k_s} g - p_N: (bump, power k_s - k_l, transported support)."""
    sym = schedule.work_sym
    ks = schedule.ks
    out = []
    for l, idx in enumerate(schedule.sequence):
        if l == s:
            continue
        power = ks[s] - ks[l]
        lo, hi = schedule.targets[idx].support
        tlo = transport(sym, -power, lo).end
        thi = transport(sym, -power, hi).end
        out.append((schedule.targets[idx], power, (tlo, thi), l))
    return out


def verify_orbit_approach(sym: Symbol, g: AssembledVector, schedule: Schedule,
                          target_index: int, weights: list | None = None,
                          m_max: int = 2, samples: int = 65) -> dict:
    """Seminorm tables of C^{k_s} g - p_N over the revisit times of one target.

    Also reports the two convergence halves separately: sup norms on fixed
    compacts and the boundedness of the full orbit element.
    """
    if sym.label != schedule.symbol:
        raise UsageError(f"schedule was built for {schedule.symbol}, got {sym.label}")
    weights = evidence_weight_family() if weights is None else weights
    revisits = [m for m, idx in enumerate(schedule.sequence) if idx == target_index]
    if len(revisits) < 2:
        raise UsageError("target must recur at least twice in the schedule")
    if m_max > 2:
        raise UsageError("orbit verification exposes seminorm orders m <= 2")
    work = schedule.work_sym
    bump_n = schedule.targets[target_index]
    sup_tables = {(m, w.label): [] for m in range(m_max + 1) for w in weights}
    compact_sup = []
    bounded_part = []
    for s in revisits:
        terms = _residual_terms(schedule, s)
        best = {key: 0.0 for key in sup_tables}
        comp = 0.0
        for bump, power, (tlo, thi), _l in terms:
            xs = chebyshev_nodes(tlo, thi, samples)
            rows = np.abs(_term_rows(bump, work, power, xs))
            for w in weights:
                vx = np.asarray(w(xs))
                for m in range(m_max + 1):
                    key = (m, w.label)
                    best[key] = max(best[key], float(np.max(vx * rows[:, : m + 1].max(axis=1))))
            near = np.abs(xs) <= 5.0
            if np.any(near):
                comp = max(comp, float(rows[near].max()))
        for key, val in best.items():
            sup_tables[key].append(val)
        compact_sup.append(comp)
        # boundedness half: seminorm of the full orbit element includes the target
        lo, hi = bump_n.support
        xs = chebyshev_nodes(lo, hi, samples)
        brows = np.abs(bump_n.rows2(xs))[:, : m_max + 1]
        full = {}
        for w in weights:
            base = float(np.max(np.asarray(w(xs)) * brows.max(axis=1)))
            full[w.label] = max(base, best[(m_max, w.label)])
        bounded_part.append(full)
    tables = []
    for (m, wlab), vals in sorted(sup_tables.items()):
        vals = np.asarray(vals, dtype=float)
        with np.errstate(divide="ignore"):
            tables.append(DecayTable(
                np.arange(1, vals.size + 1), vals,
                np.log(np.maximum(vals, 1e-320)),
                meta={"kind": "orbit_approach", "m": m, "weight": wlab,
                      "target": target_index, "revisit_ks": [schedule.ks[s] for s in revisits]},
            ))
    return {
        "tables": tables,
        "revisits": revisits,
        "revisit_ks": [schedule.ks[s] for s in revisits],
        "compact_sup": compact_sup,
        "bounded_part": bounded_part,
        "split": "convergence on compacts and boundedness are reported separately",
    }
