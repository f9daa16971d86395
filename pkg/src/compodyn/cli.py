"""Command-line front end.

Subcommands: ``classify`` (criterion checks with verdicts), ``abel`` (solve
and verify the unit-step equation), ``hypvec`` (schedule + candidate-vector
experiments), ``examples`` (one-shot consistency matrix over the catalog)
and ``iterate`` (ad-hoc orbit queries).  Reports are deterministic JSON
envelopes (modulo the timing field); decay tables export as CSV.

Exit codes for classify-style runs: 0 all evidence holds, 2 a refutation
witness was found, 3 hypotheses violated, 4 inconclusive, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .abel import quasi_conjugacy_check, solve_abel, verify_abel
from .classify import (
    EVIDENCE,
    FAILS,
    INCONCLUSIVE,
    VIOLATED,
    check_abel_growth,
    check_hypercyclic_sufficient,
    check_mixing_bijective,
    check_mixing_nonsurjective,
    check_necessary,
    check_not_transitive,
)
from .config import RunConfig, defaults_dict
from .errors import CompodynError, UsageError
from .hypvec import assemble_g, select_schedule, verify_orbit_approach
from .orbits import transport
from .schwartz import parse_weight_labels
from .symbols import catalog_labels, get_symbol

EXIT_OK = 0
EXIT_WITNESS = 2
EXIT_HYPOTHESIS = 3
EXIT_INCONCLUSIVE = 4
EXIT_USAGE = 64

_CRITERIA = {
    "necessary": lambda sym, kw: check_necessary(sym),
    "mixing_bij": lambda sym, kw: check_mixing_bijective(
        sym, a=kw.get("a"), b=kw.get("b"), k_max=kw.get("kmax"), n_max=kw.get("nmax"),
        weights=kw.get("weights")),
    "mixing_nonsurj": lambda sym, kw: check_mixing_nonsurjective(
        sym, a=kw.get("a"), k_max=kw.get("kmax"), n_max=kw.get("nmax"),
        weights=kw.get("weights")),
    "hypercyclic_sufficient": lambda sym, kw: check_hypercyclic_sufficient(
        sym, alpha=kw.get("alpha") or 0.0, beta=kw.get("beta") or 0.0,
        weights=kw.get("weights")),
    "not_transitive": lambda sym, kw: check_not_transitive(sym),
    "abel_growth": lambda sym, kw: check_abel_growth(
        sym, weights=kw.get("weights"), n_max=kw.get("nmax")),
}

_KIND_EXIT = {EVIDENCE: EXIT_OK, FAILS: EXIT_WITNESS, VIOLATED: EXIT_HYPOTHESIS,
              INCONCLUSIVE: EXIT_INCONCLUSIVE}


def _envelope(command: str, echo: dict, symbol: str | None, payload, t0: float) -> dict:
    cfg = RunConfig({"command": command, "echo": echo, "defaults": defaults_dict()})
    return {
        "tool": {"name": "compodyn", "version": __version__},
        "command": command,
        "echo": echo,
        "defaults": defaults_dict(),
        "config_digest": cfg.digest(),
        "symbol": symbol,
        "payload": payload,
        "timing_s": round(time.perf_counter() - t0, 6),
    }


def _emit(envelope: dict, args, summary_lines: list):
    if getattr(args, "json", False):
        print(json.dumps(envelope, sort_keys=True, default=repr))
    else:
        for line in summary_lines:
            print(line)


def _emit_tables(tables, directory: str, prefix: str):
    os.makedirs(directory, exist_ok=True)
    for i, t in enumerate(tables):
        bits = [prefix]
        for key in ("side", "k", "weight", "m", "target", "power"):
            if key in t.meta:
                bits.append(f"{key}-{t.meta[key]}")
        path = os.path.join(directory, "_".join(str(b) for b in bits) + f"_{i}.csv")
        with open(path, "w") as fh:
            fh.write(t.to_csv())


def cmd_classify(args) -> int:
    t0 = time.perf_counter()
    try:
        sym = get_symbol(args.symbol)
    except UsageError as exc:
        print(f"unknown symbol: {exc}", file=sys.stderr)
        return EXIT_USAGE
    kw = {
        "a": args.a, "b": args.b, "kmax": args.kmax, "nmax": args.nmax,
        "alpha": args.alpha, "beta": args.beta,
        "weights": parse_weight_labels(args.weights.split(",")) if args.weights else None,
    }
    names = [c.strip() for c in args.criteria.split(",") if c.strip()]
    verdicts = []
    for name in names:
        runner = _CRITERIA.get(name)
        if runner is None:
            print(f"unknown criterion {name!r}; known: {sorted(_CRITERIA)}", file=sys.stderr)
            return EXIT_USAGE
        verdicts.append(runner(sym, kw))
    payload = {v.criterion_id: v.to_dict() for v in verdicts}
    echo = {"symbol": args.symbol, "criteria": names,
            "params": {k: (v if not hasattr(v, "__iter__") or isinstance(v, str) else str(v))
                       for k, v in kw.items() if v is not None}}
    env = _envelope("classify", echo, sym.label, payload, t0)
    lines = [f"{sym.label} {v.criterion_id}: {v.kind}"
             + (f"  witness={v.witness}" if v.witness else "") for v in verdicts]
    _emit(env, args, lines)
    if args.emit_csv:
        for v in verdicts:
            _emit_tables(v.tables, args.emit_csv, f"{sym.label}_{v.criterion_id}")
    kinds = [v.kind for v in verdicts]
    if FAILS in kinds:
        return EXIT_WITNESS
    if VIOLATED in kinds:
        return EXIT_HYPOTHESIS
    if INCONCLUSIVE in kinds:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_abel(args) -> int:
    t0 = time.perf_counter()
    try:
        sym = get_symbol(args.symbol)
    except UsageError as exc:
        print(f"unknown symbol: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        sol = solve_abel(sym, K=args.K, x0=args.x0 or 0.0)
    except CompodynError as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    report = verify_abel(sol)
    report["quasi_conjugacy"] = quasi_conjugacy_check(sol)
    echo = {"symbol": args.symbol, "K": args.K, "x0": args.x0}
    env = _envelope("abel", echo, sym.label, report, t0)
    res = report["residual"]
    lines = [
        f"{sym.label}: residual {res['max_residual']:.3e} "
        f"(tol {res['tolerance']:.0e}) min H' {res['min_H_prime']:.3e} "
        f"membership={report['membership_surrogate']}",
    ]
    _emit(env, args, lines)
    if args.emit_csv:
        os.makedirs(args.emit_csv, exist_ok=True)
        xs = np.linspace(res["grid"][0], res["grid"][1], 801)
        with open(os.path.join(args.emit_csv, f"abel_{sym.label.replace(':', '_')}.csv"), "w") as fh:
            fh.write(sol.sample_csv(xs))
    return EXIT_OK if res["passed"] else EXIT_WITNESS


def cmd_hypvec(args) -> int:
    t0 = time.perf_counter()
    try:
        sym = get_symbol(args.symbol)
    except UsageError as exc:
        print(f"unknown symbol: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        schedule = select_schedule(sym, j_max=args.jmax, alpha=args.alpha or 0.0,
                                   beta=args.beta or 0.0)
    except UsageError as exc:
        print(f"hypotheses not evidenced: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except CompodynError as exc:
        print(f"schedule failed: {exc}", file=sys.stderr)
        return EXIT_WITNESS
    g = assemble_g(sym, schedule)
    reports = {}
    tables = []
    for target in sorted(set(schedule.sequence)):
        rep = verify_orbit_approach(sym, g, schedule, target)
        tables.extend(rep["tables"])
        reports[target] = {
            "revisit_ks": rep["revisit_ks"],
            "compact_sup": rep["compact_sup"],
            "bounded_part": rep["bounded_part"],
            "tables": [t.to_dict() for t in rep["tables"]],
        }
    payload = {"schedule": schedule.to_dict(), "supports": g.supports,
               "verification": reports,
               "alpha": args.alpha or 0.0, "beta": args.beta or 0.0}
    echo = {"symbol": args.symbol, "jmax": args.jmax, "alpha": args.alpha, "beta": args.beta}
    env = _envelope("hypvec", echo, sym.label, payload, t0)
    lines = [f"{sym.label}: schedule k = {schedule.ks}",
             f"supports disjoint: {g.supports}"]
    _emit(env, args, lines)
    if args.emit_csv:
        _emit_tables(tables, args.emit_csv, f"hypvec_{sym.label.replace(':', '_')}")
        with open(os.path.join(args.emit_csv, "schedule.json"), "w") as fh:
            fh.write(schedule.to_json(indent=2))
    return EXIT_OK


# expected consistency matrix: (symbol, criterion, expected verdict, extra kwargs)
EXAMPLES_MATRIX = [
    ("translation:1", "necessary", EVIDENCE, {}),
    ("translation:1", "mixing_bij", EVIDENCE, {}),
    ("translation:1", "hypercyclic_sufficient", EVIDENCE, {}),
    ("translation:1", "abel_growth", EVIDENCE, {}),
    ("translation:1", "not_transitive", VIOLATED, {}),
    ("tiled_3x", "necessary", EVIDENCE, {}),
    ("tiled_3x", "mixing_bij", FAILS, {"a": 0.0}),
    ("sqrt_glide", "mixing_bij", EVIDENCE, {"a": -2.0}),
    ("sqrt_glide", "abel_growth", EVIDENCE, {}),
    ("exp_double", "mixing_nonsurj", EVIDENCE, {"a": 1.0}),
    ("gauss_perturbed", "necessary", EVIDENCE, {}),
    ("gauss_perturbed", "not_transitive", EVIDENCE, {}),
]


def run_examples_matrix():
    """(rows, all_match); one row per (symbol, criterion, expected, observed)."""
    rows = []
    all_match = True
    for label, criterion, expected, extra in EXAMPLES_MATRIX:
        sym = get_symbol(label)
        kw = {"a": None, "b": None, "kmax": None, "nmax": None, "alpha": None,
              "beta": None, "weights": None}
        kw.update(extra)
        verdict = _CRITERIA[criterion](sym, kw)
        match = verdict.kind == expected
        all_match = all_match and match
        rows.append({
            "symbol": label, "criterion": criterion, "expected": expected,
            "observed": verdict.kind, "match": match,
            "witness": verdict.witness,
            "tables": verdict.tables,
        })
    return rows, all_match


def cmd_examples(args) -> int:
    t0 = time.perf_counter()
    rows, all_match = run_examples_matrix()
    payload = [
        {k: v for k, v in row.items() if k != "tables"} for row in rows
    ]
    env = _envelope("examples", {}, None, payload, t0)
    lines = [f"{'symbol':18s} {'criterion':24s} {'expected':18s} {'observed':18s} match"]
    for row in rows:
        lines.append(f"{row['symbol']:18s} {row['criterion']:24s} "
                     f"{row['expected']:18s} {row['observed']:18s} "
                     f"{'ok' if row['match'] else 'MISMATCH'}")
    _emit(env, args, lines)
    if args.emit_csv:
        for row in rows:
            _emit_tables(row["tables"], args.emit_csv,
                         f"{row['symbol'].replace(':', '_')}_{row['criterion']}")
    return EXIT_OK if all_match else EXIT_WITNESS


def cmd_iterate(args) -> int:
    t0 = time.perf_counter()
    try:
        sym = get_symbol(args.symbol)
    except UsageError as exc:
        print(f"unknown symbol: {exc}", file=sys.stderr)
        return EXIT_USAGE
    tr = transport(sym, args.n, args.x)
    payload = {"points": tr.points.tolist(), "n": args.n, "x": args.x}
    env = _envelope("iterate", {"symbol": args.symbol, "n": args.n, "x": args.x},
                    sym.label, payload, t0)
    lines = ["n,x_n"] + [f"{i},{p!r}" for i, p in enumerate(tr.points)]
    _emit(env, args, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="compodyn",
        description="Numerical laboratory for composition-operator dynamics on the line",
    )
    p.add_argument("--version", action="version", version=f"compodyn {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="emit the full JSON envelope")
        sp.add_argument("--emit-csv", metavar="DIR", default=None,
                        help="write decay tables / samples as CSV into DIR")

    sp = sub.add_parser("classify", help="run criterion checks on a symbol")
    sp.add_argument("--symbol", required=True, help=f"one of {catalog_labels()}")
    sp.add_argument("--criteria", required=True,
                    help="comma list: " + ",".join(sorted(_CRITERIA)))
    sp.add_argument("--weights", default=None, help="comma list, e.g. gauss:1,left_exp")
    sp.add_argument("--kmax", type=int, default=None)
    sp.add_argument("--nmax", type=int, default=None)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--beta", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("abel", help="solve H(psi(x)) = H(x) + 1 and verify")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--K", type=int, default=None, help="junction matching order")
    sp.add_argument("--x0", type=float, default=None, help="fundamental interval anchor")
    common(sp)
    sp.set_defaults(func=cmd_abel)

    sp = sub.add_parser("hypvec", help="schedule + candidate-vector experiment")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--jmax", type=int, default=None)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--beta", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_hypvec)

    sp = sub.add_parser("examples", help="reproduce the catalog consistency matrix")
    common(sp)
    sp.set_defaults(func=cmd_examples)

    sp = sub.add_parser("iterate", help="orbit dump for ad-hoc queries")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--x", type=float, required=True)
    common(sp)
    sp.set_defaults(func=cmd_iterate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
