"""Numerical criterion checks returning verdicts with witnesses.

Verdict semantics are fixed by an explicit finite protocol.  A decay table
"decays" when its last ``decay_window`` entries are non-increasing and the
final entry is below ``decay_tol``; it "grows" when an entry exceeds
``blowup_cap`` or the last window of log values increases with positive
least-squares slope.  Checks aggregate: any growing table refutes (with a
reproducible witness), all-decaying tables give evidence, anything else is
inconclusive.  Every verdict is stamped with the weight family, horizons and
protocol parameters it is relative to; only the non-transitivity check is a
theorem-grade implication.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import math

import numpy as np

from .config import DEFAULTS
from .errors import CriticalPointError, OutOfRangeError, UsageError
from .jets import jet_compose, jet_invert
from .orbits import invert_batch, iterate, transport
from .schwartz import (
    DecayTable,
    Weight,
    default_weight_family,
    evidence_weight_family,
    rapid_decay_test,
)
from .symbols import ABOVE, BELOW, Symbol, chebyshev_nodes, fit_polynomial_bound, reflect

__all__ = [
    "Verdict",
    "table_status",
    "check_necessary",
    "check_mixing_bijective",
    "check_mixing_nonsurjective",
    "check_hypercyclic_sufficient",
    "check_not_transitive",
    "check_abel_growth",
    "recompute_witness",
]

EVIDENCE = "EvidenceHolds"
FAILS = "FailsWithWitness"
VIOLATED = "HypothesisViolated"
INCONCLUSIVE = "Inconclusive"


@dataclass
class Verdict:
    kind: str
    criterion_id: str
    symbol: str
    witness: dict | None = None
    tables: list = field(default_factory=list)
    weight_family: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "criterion_id": self.criterion_id,
            "symbol": self.symbol,
            "verdict": self.kind,
            "witness": self.witness,
            "weight_family": self.weight_family,
            "params": self.params,
            "notes": self.notes,
            "payload": self.payload,
            "tables": [t.to_dict() for t in self.tables],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=repr, **kw)


def _protocol_params() -> dict:
    return {
        "decay_window": DEFAULTS.decay_window,
        "decay_tol": DEFAULTS.decay_tol,
        "blowup_cap": DEFAULTS.blowup_cap,
        "grow_slope_tol": DEFAULTS.grow_slope_tol,
    }


_STAMP = "evidence relative to (weight family, k_max, n_max, decay protocol); not a proof"
_A_GRID_NOTE = "transitivity-style conditions quantify over every base point; a finite a-grid is sampled"


def table_status(table: DecayTable):
    """(status, witness_index): status in {'decays', 'grows', 'inconclusive'}."""
    v = table.value
    w = DEFAULTS.decay_window
    finite = np.isfinite(v)
    over = (v >= DEFAULTS.blowup_cap) | ~finite
    if np.any(over):
        # prefer a finite witness row so recomputation can be compared within 1%
        cand = np.nonzero(finite & (v >= DEFAULTS.blowup_cap))[0]
        if cand.size:
            idx = int(cand[np.argmax(v[cand])])
        elif np.any(finite):
            idx = int(np.nonzero(finite)[0][np.argmax(v[finite])])
        else:
            idx = len(v) - 1
        return "grows", idx
    if len(v) >= w + 1:
        lv = table.log_value[-w:]
        if np.all(np.isfinite(lv)) and np.all(np.diff(lv) > 0):
            slope = np.polyfit(np.arange(w, dtype=float), lv, 1)[0]
            if slope > DEFAULTS.grow_slope_tol:
                return "grows", int(np.argmax(table.log_value))
    if len(v) >= w:
        tail = v[-w:]
        if np.all(tail[1:] <= tail[:-1] * (1.0 + 1e-12) + 1e-300) and tail[-1] < DEFAULTS.decay_tol:
            return "decays", None
    return "inconclusive", None


def _aggregate(kind_id: str, sym: Symbol, tables: list, weights: list, params: dict,
               notes: list, payload: dict, evidence_labels: set | None = None) -> Verdict:
    """Growth in any table refutes; all evidence-tier tables must decay for evidence.

    Every table participates in the refutation hunt; only tables whose weight
    label is in ``evidence_labels`` (default: all) ground EvidenceHolds.
    """
    witness = None
    evidence_statuses = []
    for t in tables:
        status, idx = table_status(t)
        t.meta["status"] = status
        in_evidence = evidence_labels is None or t.meta.get("weight") in evidence_labels
        t.meta["tier"] = "evidence" if in_evidence else "hunt"
        if in_evidence:
            evidence_statuses.append(status)
        if status == "grows" and witness is None and idx is not None:
            witness = {
                "n": int(t.n[idx]),
                "x": float(t.arg_x[idx]) if t.arg_x is not None else None,
                "value": float(t.value[idx]),
                "log_value": float(t.log_value[idx]),
                "weight": t.meta.get("weight"),
                "k": t.meta.get("k"),
                "side": t.meta.get("side"),
            }
    if witness is not None:
        kind = FAILS
    elif evidence_statuses and all(s == "decays" for s in evidence_statuses):
        kind = EVIDENCE
    else:
        kind = INCONCLUSIVE
    return Verdict(
        kind,
        kind_id,
        sym.label,
        witness=witness,
        tables=tables,
        weight_family=[w.label for w in weights],
        params={**params, **_protocol_params()},
        notes=notes,
        payload=payload,
    )


def _hypothesis_verdict(kind_id, sym, reason, weights=(), payload=None) -> Verdict:
    return Verdict(
        VIOLATED,
        kind_id,
        sym.label,
        weight_family=[w.label for w in weights],
        params=_protocol_params(),
        notes=[reason],
        payload=payload or {},
    )


# -- necessary condition ----------------------------------------------------------------


def _probe_grid(radius: float) -> np.ndarray:
    xs = [chebyshev_nodes(0.0, 1.0, DEFAULTS.probe_points_per_block)]
    lo, hi = 1.0, 2.0
    while lo < radius:
        xs.append(chebyshev_nodes(lo, min(hi, radius), DEFAULTS.probe_points_per_block))
        lo, hi = hi, 2.0 * hi
    grid = np.concatenate(xs)
    return np.unique(np.concatenate([grid, -grid]))


def check_necessary(sym: Symbol, radius: float | None = None) -> Verdict:
    """Fixed-point freeness and positive derivative, sampled on a probe grid."""
    radius = DEFAULTS.probe_radius if radius is None else radius
    xs = _probe_grid(radius)
    dp = np.asarray(sym.deriv(xs))
    disp = np.asarray(sym.displacement(xs))
    payload = {
        "min_derivative": float(dp.min()),
        "min_abs_displacement": float(np.abs(disp).min()),
        "displacement_sign_consistent": bool(np.all(disp > 0) or np.all(disp < 0)),
        "probe_radius": radius,
    }
    if dp.min() <= 0.0:
        i = int(np.argmin(dp))
        witness = {"x": float(xs[i]), "value": float(dp[i]), "quantity": "derivative"}
    elif np.abs(disp).min() <= 0.0 or not payload["displacement_sign_consistent"]:
        i = int(np.argmin(np.abs(disp)))
        witness = {"x": float(xs[i]), "value": float(disp[i]), "quantity": "displacement"}
    else:
        witness = None
    if witness is None:
        return Verdict(EVIDENCE, "necessary", sym.label, params=_protocol_params(), payload=payload)
    return Verdict(FAILS, "necessary", sym.label, witness=witness,
                   params=_protocol_params(), payload=payload)


# -- mixing checks ----------------------------------------------------------------


def _base_interval(sym: Symbol, a: float) -> tuple:
    pa = sym(a)
    return (min(a, pa), max(a, pa))


def _assemble_tables(sym, weights, per_n, side, k_max, n_max, anchor):
    """per_n: list over n of (x_points, |deriv| array (k_max, size), logmag array)."""
    tables = []
    with np.errstate(over="ignore", invalid="ignore", under="ignore", divide="ignore"):
        for w in weights:
            rows_v = np.empty((k_max, n_max))
            rows_l = np.empty((k_max, n_max))
            rows_x = np.empty((k_max, n_max))
            for n, (pts, dmag, logmag) in enumerate(per_n):
                vv = np.asarray(w(pts))
                lv = np.asarray(w.log_eval(pts))
                for k in range(1, k_max + 1):
                    d = dmag[k - 1]
                    prod = np.where(vv == 0.0, 0.0, vv * d)
                    if k == 1:
                        cand_log = lv + logmag
                        i = int(np.argmax(cand_log))
                    else:
                        safe = np.where(np.isnan(prod), -np.inf, prod)
                        i = int(np.argmax(safe))
                        cand_log = np.where(
                            prod > 0, np.log(np.maximum(prod, 1e-320)),
                            np.where(np.isinf(prod), np.inf, -np.inf),
                        )
                    rows_v[k - 1, n] = prod[i]
                    rows_l[k - 1, n] = cand_log[i]
                    rows_x[k - 1, n] = pts[i]
            for k in range(1, k_max + 1):
                tables.append(
                    DecayTable(
                        np.arange(1, n_max + 1), rows_v[k - 1].copy(), rows_l[k - 1].copy(),
                        arg_x=rows_x[k - 1].copy(),
                        meta={"side": side, "k": k, "weight": w.label, "a": anchor,
                              "symbol": sym.label},
                    )
                )
    return tables


def _forward_side_tables(sym: Symbol, a: float, k_max: int, n_max: int, weights: list) -> list:
    """sup over x in psi_{-n}([a, psi(a)]) of |v(x) (psi_n)^(k)(x)|, per (k, v)."""
    lo, hi = _base_interval(sym, a)
    pts = chebyshev_nodes(lo, hi, DEFAULTS.interval_samples)
    jets = [None] * pts.size
    logmag = np.zeros(pts.size)
    per_n = []
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        for _ in range(n_max):
            pts = invert_batch(sym, pts)
            dmag = np.empty((k_max, pts.size))
            for i in range(pts.size):
                step = sym.jet_at(float(pts[i]), k_max)
                logmag[i] += math.log(abs(step.derivs[1]))
                jets[i] = step if jets[i] is None else jet_compose(jets[i], step)
                dmag[:, i] = np.abs(jets[i].derivs[1:k_max + 1])
            per_n.append((pts.copy(), dmag, logmag.copy()))
    return _assemble_tables(sym, weights, per_n, "forward", k_max, n_max, a)


def _backward_side_tables(sym: Symbol, b: float, k_max: int, n_max: int, weights: list) -> list:
    """sup over x in psi_n([b, psi(b)]) of |v(x) (psi_{-n})^(k)(x)|, per (k, v).

    Sampled in the base interval and pushed forward; the backward jet at
    psi_n(u) is the inverse of the forward jet at u, so no numerical
    inversion enters.
    """
    lo, hi = _base_interval(sym, b)
    us = chebyshev_nodes(lo, hi, DEFAULTS.interval_samples)
    pts = us.copy()
    fwd = [None] * us.size
    logmag = np.zeros(us.size)
    per_n = []
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        for _ in range(n_max):
            dmag = np.empty((k_max, us.size))
            for i in range(us.size):
                step = sym.jet_at(float(pts[i]), k_max)
                fwd[i] = step if fwd[i] is None else jet_compose(step, fwd[i])
                logmag[i] += math.log(abs(step.derivs[1]))
                try:
                    inv = jet_invert(fwd[i])
                    dmag[:, i] = np.abs(inv.derivs[1:k_max + 1])
                except CriticalPointError:
                    dmag[:, i] = np.inf
            pts = np.asarray(sym(pts))
            per_n.append((pts.copy(), dmag, -logmag.copy()))
    return _assemble_tables(sym, weights, per_n, "backward", k_max, n_max, b)


def _weight_tiers(weights):
    """(all weights for the refutation hunt, labels of the evidence tier)."""
    if weights is None:
        hunt = default_weight_family()
        evidence = {w.label for w in evidence_weight_family()}
    else:
        hunt = list(weights)
        evidence = {w.label for w in hunt}
    return hunt, evidence


def check_mixing_bijective(sym: Symbol, a: float | None = None, k_max: int | None = None,
                           n_max: int | None = None, weights: list | None = None,
                           b: float | None = None) -> Verdict:
    """Two-sided transported-interval decay tables for a bijective symbol."""
    k_max = DEFAULTS.classify_k_max if k_max is None else k_max
    n_max = DEFAULTS.classify_n_max if n_max is None else n_max
    hunt, evidence = _weight_tiers(weights)
    params = {"a": a, "b": b, "k_max": k_max, "n_max": n_max,
              "evidence_weights": sorted(evidence)}
    if not (sym.bijective and sym.strictly_increasing):
        return _hypothesis_verdict("mixing_bij", sym, "symbol is not a strictly increasing bijection", hunt)
    nec = check_necessary(sym)
    if nec.kind != EVIDENCE:
        v = _hypothesis_verdict("mixing_bij", sym, "necessary condition fails", hunt,
                                payload={"necessary": nec.to_dict()})
        v.witness = nec.witness
        return v
    a_list = [a] if a is not None else list(DEFAULTS.default_a_grid)
    b_list = [b] if b is not None else a_list
    tables = []
    for aa in a_list:
        tables.extend(_forward_side_tables(sym, aa, k_max, n_max, hunt))
    for bb in b_list:
        tables.extend(_backward_side_tables(sym, bb, k_max, n_max, hunt))
    notes = [_STAMP, _A_GRID_NOTE]
    return _aggregate("mixing_bij", sym, tables, hunt, params, notes, {}, evidence)


def check_mixing_nonsurjective(sym: Symbol, a: float | None = None, k_max: int | None = None,
                               n_max: int | None = None, weights: list | None = None) -> Verdict:
    """Backward-only decay tables for an injective non-surjective symbol."""
    k_max = DEFAULTS.classify_k_max if k_max is None else k_max
    n_max = DEFAULTS.classify_n_max if n_max is None else n_max
    hunt, evidence = _weight_tiers(weights)
    params = {"a": a, "k_max": k_max, "n_max": n_max,
              "evidence_weights": sorted(evidence)}
    if sym.bijective or not sym.strictly_increasing:
        return _hypothesis_verdict("mixing_nonsurj", sym, "symbol must be injective and non-surjective", hunt)
    nec = check_necessary(sym)
    if nec.kind != EVIDENCE:
        v = _hypothesis_verdict("mixing_nonsurj", sym, "necessary condition fails", hunt)
        v.witness = nec.witness
        return v
    a_list = [a] if a is not None else list(DEFAULTS.default_a_grid)
    tables = []
    for aa in a_list:
        tables.extend(_backward_side_tables(sym, aa, k_max, n_max, hunt))
    notes = [_STAMP, _A_GRID_NOTE]
    return _aggregate("mixing_nonsurj", sym, tables, hunt, params, notes, {}, evidence)


# -- hypercyclicity sufficient condition ----------------------------------------------------------------


def _halfline_probes(anchor: float, direction: int, span: float = 16.0) -> np.ndarray:
    """Dyadic Chebyshev probes on [anchor, anchor + direction*span], anchor included."""
    out = [np.array([anchor])]
    lo, width = 0.0, 1.0
    while lo < span:
        hi = min(lo + width, span)
        block = chebyshev_nodes(lo, hi, 17)
        out.append(anchor + direction * block)
        lo, width = hi, width * 2.0
    return np.unique(np.concatenate(out))


def _sequence_grows(seq: np.ndarray) -> int | None:
    """Index of a growth witness in an n-indexed boundedness sequence, else None.

    Unlike the decay protocol this asks for unbounded growth, so the cap only
    guards overflow and the log-affine rule carries the decision.
    """
    w = DEFAULTS.decay_window
    finite = np.isfinite(seq)
    if not np.all(finite):
        good = np.nonzero(finite)[0]
        return int(good[np.argmax(seq[good])]) if good.size else len(seq) - 1
    if len(seq) >= w + 1:
        with np.errstate(divide="ignore"):
            lv = np.log(np.maximum(seq[-w:], 1e-320))
        if np.all(np.diff(lv) > 0):
            slope = np.polyfit(np.arange(w, dtype=float), lv, 1)[0]
            if slope > DEFAULTS.grow_slope_tol:
                return int(np.argmax(seq))
    return None




def check_hypercyclic_sufficient(sym: Symbol, j_max: int = 3, n_max: int = 15,
                                 alpha: float = 0.0, beta: float = 0.0,
                                 weights: list | None = None) -> Verdict:
    """Uniform-in-n polynomial bounds for backward jets right of beta and forward
    jets left of alpha; also the bounded-first-derivative shortcut."""
    weights = evidence_weight_family() if weights is None else weights
    cid = "hypercyclic_sufficient"
    if not (sym.bijective and sym.strictly_increasing and sym.fixed_point_free):
        return _hypothesis_verdict(cid, sym, "needs a fixed-point-free increasing bijection", weights)
    notes = [_STAMP, "interval endpoints included: a bound violated at the boundary is violated uniformly nearby"]
    if sym.displacement_sign == BELOW:
        inner = check_hypercyclic_sufficient(reflect(sym), j_max, n_max, -beta, -alpha, weights)
        inner.symbol = sym.label
        inner.notes = inner.notes + ["reduced through the reflection conjugation"]
        return inner

    params = {"j_max": j_max, "n_max": n_max, "alpha": alpha, "beta": beta}
    payload: dict = {"fits": {}}
    n_long = 4 * n_max
    w = DEFAULTS.decay_window

    def scan(side: str, probes: np.ndarray):
        """Jets of psi_{+-n} at fixed probes, maintained incrementally.

        The march continues past n_max to 4*n_max, keeping the final window:
        a genuine violation is still growing there AND has left the fitted
        polynomial envelope far behind; a branch-transit transient has
        stabilized (or never left the envelope) and is discarded.
        """
        order = min(j_max, DEFAULTS.max_order)
        jets = [None] * probes.size
        pts = probes.copy()
        sup = np.zeros((j_max, probes.size))
        seqs = np.zeros((j_max, n_max, probes.size))
        tail = np.zeros((j_max, w + 1, probes.size))
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            for n in range(1, n_long + 1):
                if side == "backward":
                    nxt = invert_batch(sym, pts)
                    for i in range(probes.size):
                        step = jet_invert(sym.jet_at(float(nxt[i]), order))
                        jets[i] = step if jets[i] is None else jet_compose(step, jets[i])
                    pts = nxt
                else:
                    for i in range(probes.size):
                        step = sym.jet_at(float(pts[i]), order)
                        jets[i] = step if jets[i] is None else jet_compose(step, jets[i])
                    pts = np.asarray(sym(pts))
                if n <= n_max:
                    for i in range(probes.size):
                        d = np.abs(jets[i].derivs[1:j_max + 1])
                        seqs[:, n - 1, i] = d
                        sup[:, i] = np.maximum(sup[:, i], d)
                if n > n_long - (w + 1):
                    k = n - (n_long - w)
                    for i in range(probes.size):
                        tail[:, k, i] = np.abs(jets[i].derivs[1:j_max + 1])
        return sup, seqs, tail

    probes_b = _halfline_probes(beta, +1)
    probes_f = _halfline_probes(alpha, -1)
    back = scan("backward", probes_b)
    fwd = scan("forward", probes_f)

    fits_ok = True
    envelopes = {}
    for side, probes, (sup, seqs, tail) in (("backward", probes_b, back),
                                            ("forward", probes_f, fwd)):
        payload["fits"][side] = {}
        envelopes[side] = {}
        for j in range(1, j_max + 1):
            fit = fit_polynomial_bound(probes, sup[j - 1], safety=1.0)
            payload["fits"][side][j] = None if fit is None else {"C": fit[0], "t": fit[1]}
            if fit is None:
                fits_ok = False
                cmax = float(np.max(sup[j - 1]))
                envelopes[side][j] = lambda x, c=cmax: c
            else:
                envelopes[side][j] = lambda x, c=fit[0], t=fit[1]: c * (1.0 + x * x) ** t

    def _still_growing(tail_j_i):
        if not np.all(np.isfinite(tail_j_i)):
            return True
        with np.errstate(divide="ignore"):
            lv = np.log(np.maximum(tail_j_i, 1e-320))
        if not np.all(np.diff(lv) > 0):
            return False
        return np.polyfit(np.arange(lv.size, dtype=float), lv, 1)[0] > DEFAULTS.grow_slope_tol

    witness = None
    for side, anchor, probes, (sup, seqs, tail) in (
        ("forward", alpha, probes_f, fwd),
        ("backward", beta, probes_b, back),
    ):
        order = np.argsort(np.abs(probes - anchor), kind="stable")
        for j in range(1, j_max + 1):
            for i in order:
                idx = _sequence_grows(seqs[j - 1, :, i])
                if idx is None:
                    continue
                if not _still_growing(tail[j - 1, :, i]):
                    continue
                last = tail[j - 1, -1, i]
                env = envelopes[side][j](float(probes[i]))
                if (not math.isfinite(last)) or last > 32.0 * max(env, 1e-300):
                    witness = {
                        "side": side, "j": j, "n": int(idx + 1), "x": float(probes[i]),
                        "value": float(seqs[j - 1, idx, i]),
                    }
                    break
            if witness:
                break
        if witness:
            break

    # corollary mode: bounded {(psi_n)': |n| <= n_max} across the weight family
    grid = chebyshev_nodes(-8.0, 8.0, DEFAULTS.interval_samples)
    bound = 0.0
    for direction in (+1, -1):
        pts = grid.copy()
        logmag = np.zeros(grid.size)
        for n in range(1, n_max + 1):
            if direction > 0:
                dp = np.log(np.abs(np.asarray(sym.deriv(pts))))
                logmag += dp
                pts = np.asarray(sym(pts))
            else:
                pts = invert_batch(sym, pts)
                logmag -= np.log(np.abs(np.asarray(sym.deriv(pts))))
            for w in weights:
                term = np.max(np.asarray(w.log_eval(grid)) + logmag)
                bound = max(bound, float(np.exp(min(term, 700.0))))
    payload["bounded_derivative_mode"] = {
        "sup": bound,
        "holds": bool(bound <= DEFAULTS.bound_cap),
    }

    if witness is not None:
        return Verdict(FAILS, cid, sym.label, witness=witness, params={**params, **_protocol_params()},
                       weight_family=[w.label for w in weights], notes=notes, payload=payload)
    if not fits_ok:
        return Verdict(INCONCLUSIVE, cid, sym.label, params={**params, **_protocol_params()},
                       weight_family=[w.label for w in weights], notes=notes, payload=payload)
    return Verdict(EVIDENCE, cid, sym.label, params={**params, **_protocol_params()},
                   weight_family=[w.label for w in weights], notes=notes, payload=payload)


# -- non-transitivity ----------------------------------------------------------------


def check_not_transitive(sym: Symbol, n_max: int = 6, j_max: int = 3) -> Verdict:
    """Theorem-grade non-transitivity from the displacement hypotheses."""
    cid = "not_transitive"

    def f_vec(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(sym(x)) - x

    decay = rapid_decay_test(f_vec, n_max)
    xs = _probe_grid(DEFAULTS.probe_radius)
    inf_dpsi = float(np.min(np.abs(np.asarray(sym.deriv(xs)))))
    xs50 = _probe_grid(DEFAULTS.certificate_radius)
    fits = {}
    fits_ok = True
    for j in range(1, j_max + 1):
        vals = np.empty(xs50.size)
        for i, x in enumerate(xs50):
            d = sym.jet_at(float(x), j_max).derivs[j]
            vals[i] = abs(d - 1.0) if j == 1 else abs(d)
        fit = fit_polynomial_bound(xs50, vals)
        if fit is None:
            fits_ok = False
            fits[j] = None
        else:
            fits[j] = {"C": fit[0], "t": fit[1]}
    payload = {
        "rapid_decay_passed": decay.passed,
        "rapid_decay_witness": decay.witness,
        "inf_abs_one_plus_fprime": inf_dpsi,
        "displacement_derivative_fits": fits,
    }
    hypotheses_hold = decay.passed and inf_dpsi > 1e-6 and fits_ok
    notes = ["conclusive implication when hypotheses hold (modulo their sampled numerics)"]
    if hypotheses_hold:
        payload["conclusion"] = "NOT topologically transitive on the slowly increasing smooth functions"
        return Verdict(EVIDENCE, cid, sym.label, params=_protocol_params(),
                       tables=decay.tables, notes=notes, payload=payload)
    reasons = []
    if not decay.passed:
        reasons.append("displacement is not rapidly decreasing")
    if not inf_dpsi > 1e-6:
        reasons.append("derivative approaches zero")
    if not fits_ok:
        reasons.append("displacement derivative admits no polynomial bound")
    return Verdict(VIOLATED, cid, sym.label, params=_protocol_params(),
                   witness=(None if decay.passed else
                            {"n": decay.witness[0], "x": decay.witness[1], "value": decay.witness[2]}),
                   tables=decay.tables, notes=notes + reasons, payload=payload)


# -- Abel growth condition ----------------------------------------------------------------


def check_abel_growth(sym: Symbol, weights: list | None = None, n_max: int | None = None) -> Verdict:
    """Tables n * v(psi_{+-n}(0)) plus the uniform-displacement shortcut."""
    cid = "abel_growth"
    hunt, evidence = _weight_tiers(weights)
    n_max = DEFAULTS.abel_growth_n_max if n_max is None else n_max
    if not (sym.bijective and sym.strictly_increasing and sym.fixed_point_free):
        return _hypothesis_verdict(cid, sym, "needs a fixed-point-free increasing bijection", hunt)
    fwd = np.empty(n_max)
    bwd = np.empty(n_max)
    x = 0.0
    for n in range(n_max):
        x = sym(x)
        fwd[n] = x
    x = np.array([0.0])
    for n in range(n_max):
        x = invert_batch(sym, x)
        bwd[n] = float(x[0])
    ns = np.arange(1, n_max + 1, dtype=float)
    tables = []
    with np.errstate(over="ignore", under="ignore"):
        for side, pts in (("forward", fwd), ("backward", bwd)):
            for w in hunt:
                vals = np.asarray(w(pts)) * ns
                logs = np.asarray(w.log_eval(pts)) + np.log(ns)
                tables.append(DecayTable(ns.astype(int), vals, logs, arg_x=pts,
                                         meta={"side": side, "weight": w.label, "k": 0,
                                               "symbol": sym.label}))
    xs = _probe_grid(DEFAULTS.certificate_radius)
    disp = np.abs(np.asarray(sym.displacement(xs)))
    inf_disp = float(disp.min())
    near = np.nonzero(disp <= inf_disp * (1.0 + 1e-9))[0]
    i = int(near[np.argmin(np.abs(xs[near]))])  # innermost attainment of the min
    flat = float(disp.max() - disp.min()) < 1e-9
    interior = abs(xs[i]) < 0.8 * DEFAULTS.certificate_radius
    shortcut = {
        "fired": bool(inf_disp > 1e-6 and (flat or interior)),
        "inf_displacement": inf_disp,
        "argmin_x": float(xs[i]),
        "note": "uniform displacement bound implies the growth condition",
    }
    params = {"n_max": n_max, "evidence_weights": sorted(evidence)}
    verdict = _aggregate(cid, sym, tables, hunt, params, [_STAMP], {"shortcut": shortcut},
                         evidence)
    if verdict.kind != EVIDENCE and shortcut["fired"]:
        verdict.notes.append("shortcut fired; tables alone were " + verdict.kind)
        verdict.kind = EVIDENCE
    return verdict


# -- witness soundness ----------------------------------------------------------------


def recompute_witness(sym: Symbol, verdict: Verdict) -> float:
    """Re-evaluate a FailsWithWitness tuple from scratch; returns the value."""
    w = verdict.witness
    if w is None:
        raise UsageError("verdict carries no witness")
    cid = verdict.criterion_id
    if cid in ("mixing_bij", "mixing_nonsurj"):
        weight = _weight_by_label(verdict, w["weight"])
        n = w["n"] if w["side"] == "forward" else -w["n"]
        jet = transport(sym, int(n), float(w["x"]), int(w["k"])).jet
        return float(weight(w["x"])) * abs(float(jet.derivs[int(w["k"])]))
    if cid == "hypercyclic_sufficient":
        n = -w["n"] if w["side"] == "backward" else w["n"]
        jet = transport(sym, int(n), float(w["x"]), int(w["j"])).jet
        return abs(float(jet.derivs[int(w["j"])]))
    if cid == "abel_growth":
        weight = _weight_by_label(verdict, w["weight"])
        n = w["n"] if w["side"] == "forward" else -w["n"]
        return float(weight(iterate(sym, int(n), 0.0))) * abs(n)
    raise UsageError(f"no recompute rule for criterion {cid}")


def _weight_by_label(verdict: Verdict, label: str) -> Weight:
    from .schwartz import parse_weight_labels

    return parse_weight_labels([label])[0]
