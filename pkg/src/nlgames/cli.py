"""Command-line front end: analyze game files, check closed forms, verify
no-quantum-advantage games, scan random corpora, and run the acceptance suite.

Exit codes: 0 success, 1 validation or verification failure, 2 parse error,
3 enumeration budget exceeded.  Floats print with 12 significant digits and
rationals as "num/den (decimal)", so runs with the same inputs and seed are
byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bounds import EnumerationBudgetError, GameReport, analyze, phi_norms
from .games import GameFormatError, GameValidationError, chsh_d, game_from_json, game_to_json, random_xor_game
from .nlc import (
    lambda_profile,
    nlc_classical_strategy,
    nlc_quantum_bound,
    nlc_spec_from_json,
    verify_block_circulant,
    verify_theorem3,
)
from .rng import SplitMix64
from .selftest import run_all

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3

SCAN_COLUMNS = [
    "index",
    "order",
    "mA",
    "mB",
    "lemma1_bound",
    "classical_value",
    "classical_value_exact",
    "quantum_bound_raw",
    "quantum_bound",
    "ns_value",
    "rank_phi1",
    "pseudo_telepathy_possible",
]


@dataclass
class RunConfig:
    command: str
    path: str | None = None
    fmt: str = "text"
    seed: int = 0
    count: int = 0
    d: int = 2
    m: int = 2
    p: int = 2
    r: int = 1
    verify: bool = False
    rank_tol: float = 1e-8
    eq_tol: float = 1e-10


def fmt_float(x: float) -> str:
    return f"{x:.12g}"


def fmt_fraction(fr: Fraction | None) -> str:
    if fr is None:
        return "-"
    return f"{fr.numerator}/{fr.denominator} ({fmt_float(float(fr))})"


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _report_scalars(report: GameReport, index: int | None = None) -> dict:
    exact = report.classical_value_exact
    row = {
        "order": report.order,
        "mA": report.mA,
        "mB": report.mB,
        "lemma1_bound": fmt_float(report.lemma1_bound),
        "classical_value": fmt_float(report.classical_value),
        "classical_value_exact": "-"
        if exact is None
        else f"{exact.numerator}/{exact.denominator}",
        "quantum_bound_raw": fmt_float(report.quantum_bound_raw),
        "quantum_bound": fmt_float(report.quantum_bound),
        "ns_value": fmt_float(report.ns_value),
        "rank_phi1": report.rank_phi1,
        "pseudo_telepathy_possible": report.pseudo_telepathy_possible,
    }
    if index is not None:
        row = {"index": index, **row}
    return row


def _print_report(report: GameReport, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report.to_json_dict(), indent=2))
        return
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS[1:], lineterminator="\n")
        writer.writeheader()
        writer.writerow(_report_scalars(report))
        sys.stdout.write(buf.getvalue())
        return
    doc = report.to_json_dict()
    print(f"group: {json.dumps(doc['group'])}")
    print(f"questions: {report.mA} x {report.mB}, answers: {report.order}")
    print(f"lemma1_bound: {fmt_float(report.lemma1_bound)}")
    print(
        "classical_value: "
        + (
            fmt_fraction(report.classical_value_exact)
            if report.classical_value_exact is not None
            else fmt_float(report.classical_value)
        )
    )
    print(f"alice_strategy: {doc['classical_strategy']['alice']}")
    print(f"bob_strategy: {doc['classical_strategy']['bob']}")
    print(f"quantum_bound_raw: {fmt_float(report.quantum_bound_raw)}")
    print(f"quantum_bound: {fmt_float(report.quantum_bound)}")
    print("norms: " + " ".join(fmt_float(x) for x in report.norms))
    print(f"ns_value: {fmt_float(report.ns_value)}")
    print(f"rank_phi1: {report.rank_phi1}")
    print(f"pseudo_telepathy_possible: {report.pseudo_telepathy_possible}")


def cmd_analyze(cfg: RunConfig) -> int:
    game = game_from_json(_load_json(cfg.path))
    report = analyze(game, rank_tol=cfg.rank_tol)
    _print_report(report, cfg.fmt)
    return EXIT_OK


def cmd_chsh(cfg: RunConfig) -> int:
    game = chsh_d(cfg.p, cfg.r)
    d = game.order
    norms = phi_norms(game)
    bound = (1.0 + float(np.sqrt(game.mA * game.mB)) * sum(norms)) / d
    closed = 1.0 / d + (d - 1) / (d * np.sqrt(d))
    diff = abs(bound - closed)
    print(f"d: {d}")
    print("norms: " + " ".join(fmt_float(x) for x in norms))
    print(f"bound: {fmt_float(bound)}")
    print(f"closed_form: {fmt_float(closed)}")
    print(f"difference: {fmt_float(diff)}")
    if diff >= cfg.eq_tol:
        print(
            f"error: bound differs from the closed form by {diff!r}",
            file=sys.stderr,
        )
        return EXIT_FAILURE
    return EXIT_OK


def cmd_nlc(cfg: RunConfig) -> int:
    spec = nlc_spec_from_json(_load_json(cfg.path))
    profile = lambda_profile(spec)
    strategy = nlc_classical_strategy(spec)
    bound = nlc_quantum_bound(spec)
    print(f"d: {spec.d}, n: {spec.n}")
    print("lambda_counts: " + " ".join(str(c) for c in profile.counts))
    print(
        "lambda_weighted: "
        + " ".join(f"{w.numerator}/{w.denominator}" for w in profile.weighted)
    )
    print(f"mu: {profile.mu}")
    print(f"strategy_value: {fmt_fraction(strategy.value)}")
    print(f"quantum_bound: {fmt_fraction(bound)}")
    if cfg.verify:
        report = verify_theorem3(spec)
        brute = (
            fmt_fraction(report.brute_force_value)
            if report.brute_forced
            else "skipped (over budget)"
        )
        print(
            f"verify theorem: ok (strategy {fmt_fraction(report.strategy_value)}, "
            f"brute force {brute}, spectral {fmt_float(report.spectral_bound)})"
        )
        if spec.d**spec.n <= 81:
            for k in range(1, spec.d):
                block = verify_block_circulant(spec, k)
                print(
                    f"verify blocks k={k}: ok (off-diagonal "
                    f"{fmt_float(block.off_diagonal_max)}, norm "
                    f"{fmt_float(block.spectral_norm)})"
                )
        else:
            print("verify blocks: skipped (d^n above the structure-check cap)")
    return EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    rng = SplitMix64(cfg.seed)
    writer = csv.DictWriter(sys.stdout, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for index in range(cfg.count):
        game = random_xor_game(rng, cfg.d, cfg.m)
        try:
            report = analyze(game, rank_tol=cfg.rank_tol)
        except Exception:
            print(
                "chain violation; offending game: " + json.dumps(game_to_json(game)),
                file=sys.stderr,
            )
            raise
        writer.writerow(_report_scalars(report, index=index))
    return EXIT_OK


def cmd_selftest(cfg: RunConfig) -> int:
    results = run_all(sys.stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlgames",
        description="Linear-game values: exact classical optima, spectral "
        "quantum bounds, and no-signaling boxes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze_p = sub.add_parser("analyze", help="full report for a game JSON file")
    analyze_p.add_argument("path")
    analyze_p.add_argument("--format", default="text", choices=["text", "json", "csv"])
    analyze_p.add_argument("--rank-tol", type=float, default=1e-8)

    chsh_p = sub.add_parser("chsh", help="field-multiplication game closed form")
    chsh_p.add_argument("p", type=int)
    chsh_p.add_argument("r", type=int, nargs="?", default=1)
    chsh_p.add_argument("--eq-tol", type=float, default=1e-10)

    nlc_p = sub.add_parser("nlc", help="analyze an NLC spec JSON file")
    nlc_p.add_argument("path")
    nlc_p.add_argument("--verify", action="store_true")

    scan_p = sub.add_parser("scan", help="CSV reports for seeded random games")
    scan_p.add_argument("--seed", type=int, default=0)
    scan_p.add_argument("--count", type=int, default=10)
    scan_p.add_argument("--d", type=int, default=2)
    scan_p.add_argument("--m", type=int, default=3)
    scan_p.add_argument("--rank-tol", type=float, default=1e-8)

    sub.add_parser("selftest", help="run the acceptance suite")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("path", "seed", "count", "d", "m", "p", "r", "verify"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "format"):
        cfg.fmt = args.format
    if hasattr(args, "rank_tol"):
        cfg.rank_tol = args.rank_tol
    if hasattr(args, "eq_tol"):
        cfg.eq_tol = args.eq_tol
    if cfg.rank_tol <= 0 or cfg.eq_tol <= 0:
        raise GameFormatError("tolerances must be positive")
    return cfg


_COMMANDS = {
    "analyze": cmd_analyze,
    "chsh": cmd_chsh,
    "nlc": cmd_nlc,
    "scan": cmd_scan,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[cfg.command](cfg)
    except (json.JSONDecodeError, GameFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EnumerationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GameValidationError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
