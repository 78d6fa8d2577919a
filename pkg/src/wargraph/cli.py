"""Command-line front end: every analysis as a reproducible batch command.

Exit codes: 0 = success, 1 = usage error (bad flags, invalid probabilities,
oversize n), 2 = a requested claim check failed (e.g. --expect-absorbing on
a graph with wandering states, or a certificate that does not verify).

Reports are byte-identical for identical argv: timing is reported as null
unless --timing is given, and every report embeds its effective
configuration under "config".
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .classic import (
    WarConfig,
    monte_carlo_classic,
    parse_classic_deal,
    random_deal,
    simulate_classic,
    verify_value_cycle,
)
from .cycles import (
    CycleCertificate,
    DeterministicPolicy,
    find_cycles,
    two_outcome_deals,
    verify_cycle,
)
from .graph import EdgeFilter, GameGraph, degree_audit
from .markov import (
    ConvergenceError,
    DecayBoundError,
    NonAbsorbingGraphError,
    PlacementProbabilities,
    decay_certificate,
    expected_absorption,
    monte_carlo_length,
    tail_probability,
)
from .rules import ComparisonRule, parse_state
from .state_space import MAX_N

_EDGE_CHOICES = {
    "both": EdgeFilter.BOTH_ORDERS,
    "own-first": EdgeFilter.OWN_FIRST_ONLY,
    "rival-first": EdgeFilter.RIVAL_FIRST_ONLY,
    "seat-left": EdgeFilter.SEAT_LEFT_FIRST_ONLY,
    "seat-right": EdgeFilter.SEAT_RIGHT_FIRST_ONLY,
}
_RULE_CHOICES = {"standard": ComparisonRule.STANDARD, "cyclic": ComparisonRule.CYCLIC_LOW_BEATS_HIGH}
_POLICY_CHOICES = {p.value: p for p in DeterministicPolicy}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract here reserves 2 for failed
    claim checks, so usage problems are remapped to exit 1."""

    def error(self, message):
        self.exit(1, f"error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    """The effective settings of one CLI invocation, echoed in every report."""

    command: str
    n: int | None = None
    rule: str | None = None
    edges: str | None = None
    policy: str | None = None
    pL1: float | None = None
    pR1: float | None = None
    trials: int | None = None
    seed: int | None = None
    max_steps: int | None = None
    threads: int | None = None
    format: str | None = None
    output: str | None = None

    def to_json_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def _write(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(report: dict, output: str | None) -> None:
    _write(json.dumps(report, indent=2) + "\n", output)


def _probs(args) -> PlacementProbabilities:
    return PlacementProbabilities.of(args.pl1, args.pr1)


def _add_prob_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pl1", type=float, default=0.5,
                   help="left winner's own-first probability (default 0.5; complement derived)")
    p.add_argument("--pr1", type=float, default=0.5,
                   help="right winner's own-first probability (default 0.5; complement derived)")


def _add_common(p: argparse.ArgumentParser, n_required: bool = True) -> None:
    p.add_argument("--n", type=int, required=n_required, help=f"model deck size (even, <= {MAX_N})")
    p.add_argument("--rule", choices=sorted(_RULE_CHOICES), default="standard",
                   help="comparison rule (default standard)")
    p.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true",
                   help="report real elapsed milliseconds (off by default to keep output reproducible)")


def _build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="wargraph",
                  description="State-graph analysis, absorption certificates and simulation for War")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[], help="attaining/wandering classification plus degree audit")
    _add_common(p)
    p.add_argument("--edges", choices=sorted(_EDGE_CHOICES), default="both",
                   help="edge filter (default both)")
    p.add_argument("--expect-absorbing", action="store_true",
                   help="exit 2 unless every state is attaining")
    p.add_argument("--no-audit", action="store_true",
                   help="skip the degree audit (reported as null)")

    p = sub.add_parser("expected-length", help="exact expected moves to absorption")
    _add_common(p)
    _add_prob_flags(p)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--max-iterations", type=int, default=10**6)
    p.add_argument("--method", choices=("auto", "dense", "iterative"), default="auto")

    p = sub.add_parser("tail-curve", help="exact survival probabilities p_alive(k)")
    _add_common(p)
    _add_prob_flags(p)
    p.add_argument("--ks", default="0-100",
                   help="steps to report: comma list and/or ranges, e.g. '0-100' or '0,10,50-60' (default 0-100)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("decay-cert", help="geometric-decay certificate (N, q), verified")
    _add_common(p)
    _add_prob_flags(p)
    p.add_argument("--horizon", type=int, default=200)

    p = sub.add_parser("find-cycle", help="scan deals for never-ending games under a fixed policy")
    _add_common(p)
    p.add_argument("--policy", choices=sorted(_POLICY_CHOICES), required=True)
    p.add_argument("--all-states", action="store_true", help="scan every state, not just equal splits")
    p.add_argument("--force", action="store_true", help="allow scans beyond the default size cap")
    p.add_argument("--max-steps", type=int, default=None)

    p = sub.add_parser("verify-cycle", help="check a stored cycle certificate")
    p.add_argument("certificate", metavar="CERT_FILE", help="JSON certificate file ('-' for stdin)")
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--timing", action="store_true")

    p = sub.add_parser("two-outcome", help="deals from which either player can win")
    _add_common(p)
    p.add_argument("--force", action="store_true", help="allow scans beyond the default size cap")

    p = sub.add_parser("simulate-classic", help="play one full 52-card game")
    p.add_argument("--deal", help="classic deal text 'L: AH ... ; R: ...' (default: a seeded shuffle)")
    _add_prob_flags(p)
    p.add_argument("--face-down", type=int, default=1, help="cards laid face-down per war round (default 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=10**6)
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--timing", action="store_true")

    p = sub.add_parser("mc-classic", help="aggregate many seeded 52-card games")
    p.add_argument("--trials", type=int, default=10_000)
    _add_prob_flags(p)
    p.add_argument("--face-down", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=10**6)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads (default: available cores); output is thread-count independent")
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--timing", action="store_true")

    p = sub.add_parser("verify-deal", help="validate a deal in either text format")
    p.add_argument("--model", help="model deal text, e.g. 'L: 3 1 ; R: 2 4'")
    p.add_argument("--classic", help="classic deal text, e.g. 'L: AH ... ; R: ...'")
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--timing", action="store_true")

    return top


def _parse_ks(text: str) -> list[int]:
    ks: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            ks.extend(range(int(lo), int(hi) + 1))
        else:
            ks.append(int(part))
    if not ks:
        raise ValueError(f"no step counts in {text!r}")
    return ks


def _cmd_analyze(args) -> int:
    rule = _RULE_CHOICES[args.rule]
    edges = _EDGE_CHOICES[args.edges]
    graph = GameGraph(args.n, rule, edges)
    report = graph.reachability(track_parents=False)
    audit = None if args.no_audit else degree_audit(args.n, rule)
    config = RunConfig(command="analyze", n=args.n, rule=args.rule, edges=args.edges,
                       output=args.output)
    out = report.to_json_dict(include_timing=args.timing)
    out["audit"] = (
        None
        if audit is None
        else {"out_violations": audit.out_degree_violations, "in_violations": audit.in_degree_violations}
    )
    out["config"] = config.to_json_dict()
    _emit_json(out, args.output)
    if args.expect_absorbing and report.wandering_count > 0:
        sample = report.wandering_samples[0] if report.wandering_samples else None
        print(f"claim failed: {report.wandering_count} wandering states "
              f"(e.g. {sample})", file=sys.stderr)
        return 2
    if audit is not None and not audit.clean:
        print("claim failed: degree audit found violations", file=sys.stderr)
        return 2
    return 0


def _cmd_expected_length(args) -> int:
    rule = _RULE_CHOICES[args.rule]
    solution = expected_absorption(
        args.n, rule, _probs(args),
        tolerance=args.tolerance, max_iterations=args.max_iterations, method=args.method,
    )
    config = RunConfig(command="expected-length", n=args.n, rule=args.rule,
                       pL1=args.pl1, pR1=args.pr1, output=args.output)
    out = solution.to_json_dict()
    out["config"] = config.to_json_dict()
    _emit_json(out, args.output)
    return 0


def _cmd_tail_curve(args) -> int:
    rule = _RULE_CHOICES[args.rule]
    ks = _parse_ks(args.ks)
    curve = tail_probability(args.n, rule, _probs(args), ks=ks)
    config = RunConfig(command="tail-curve", n=args.n, rule=args.rule,
                       pL1=args.pl1, pR1=args.pr1, format=args.format, output=args.output)
    if args.format == "csv":
        _write(curve.to_csv_text(), args.output)
    else:
        out = {
            "n": args.n,
            "rule": args.rule,
            "initial_distribution": curve.initial_distribution,
            "points": [[k, p] for k, p in curve.points],
            "config": config.to_json_dict(),
        }
        _emit_json(out, args.output)
    return 0


def _cmd_decay_cert(args) -> int:
    rule = _RULE_CHOICES[args.rule]
    cert = decay_certificate(args.n, rule, _probs(args), horizon=args.horizon)
    config = RunConfig(command="decay-cert", n=args.n, rule=args.rule,
                       pL1=args.pl1, pR1=args.pr1, output=args.output)
    out = cert.to_json_dict()
    out["config"] = config.to_json_dict()
    _emit_json(out, args.output)
    return 0


def _cmd_find_cycle(args) -> int:
    rule = _RULE_CHOICES[args.rule]
    policy = _POLICY_CHOICES[args.policy]
    certs = find_cycles(args.n, policy, rule, max_steps=args.max_steps,
                        all_states=args.all_states, force=args.force)
    config = RunConfig(command="find-cycle", n=args.n, rule=args.rule,
                       policy=args.policy, max_steps=args.max_steps, output=args.output)
    out = {
        "count": len(certs),
        "certificates": [c.to_json_dict() for c in certs],
        "config": config.to_json_dict(),
    }
    _emit_json(out, args.output)
    return 0


def _cmd_verify_cycle(args) -> int:
    if args.certificate == "-":
        data = json.load(sys.stdin)
    else:
        with open(args.certificate) as fh:
            data = json.load(fh)
    cert = CycleCertificate.from_json_dict(data)
    ok = verify_cycle(cert)
    out = {"ok": ok, "certificate": cert.to_json_dict(),
           "config": RunConfig(command="verify-cycle", output=args.output).to_json_dict()}
    _emit_json(out, args.output)
    if not ok:
        print("claim failed: certificate does not verify", file=sys.stderr)
        return 2
    return 0


def _cmd_two_outcome(args) -> int:
    rule = _RULE_CHOICES[args.rule]
    certs = two_outcome_deals(args.n, rule, force=args.force)
    config = RunConfig(command="two-outcome", n=args.n, rule=args.rule, output=args.output)
    out = {
        "count": len(certs),
        "certificates": [c.to_json_dict() for c in certs],
        "config": config.to_json_dict(),
    }
    _emit_json(out, args.output)
    return 0


def _cmd_simulate_classic(args) -> int:
    import random as _random

    if args.deal:
        deal = parse_classic_deal(args.deal)
    else:
        deal = random_deal(_random.Random(f"deal:{args.seed}"))
    record = simulate_classic(
        deal, _probs(args), WarConfig(face_down_count=args.face_down),
        seed=args.seed, max_steps=args.max_steps,
    )
    config = RunConfig(command="simulate-classic", pL1=args.pl1, pR1=args.pr1,
                       seed=args.seed, max_steps=args.max_steps, output=args.output)
    out = {
        "deal": str(record.deal),
        "moves": record.moves,
        "winner": record.winner.value if record.winner else None,
        "wars": record.wars,
        "truncated": record.truncated,
        "card_plays": record.card_plays,
        "face_down_count": args.face_down,
        "config": config.to_json_dict(),
    }
    _emit_json(out, args.output)
    return 0


def _cmd_mc_classic(args) -> int:
    summary = monte_carlo_classic(
        args.trials, _probs(args), WarConfig(face_down_count=args.face_down),
        seed=args.seed, max_steps=args.max_steps, threads=args.threads,
    )
    config = RunConfig(command="mc-classic", pL1=args.pl1, pR1=args.pr1,
                       trials=args.trials, seed=args.seed, max_steps=args.max_steps,
                       threads=args.threads, output=args.output)
    out = summary.to_json_dict()
    out["config"] = config.to_json_dict()
    _emit_json(out, args.output)
    return 0


def _cmd_verify_deal(args) -> int:
    if (args.model is None) == (args.classic is None):
        print("error: give exactly one of --model or --classic", file=sys.stderr)
        return 1
    config = RunConfig(command="verify-deal", output=args.output).to_json_dict()
    try:
        if args.model is not None:
            state = parse_state(args.model)
            out = {"valid": True, "kind": "model", "n": state.n,
                   "is_final": state.is_final, "deal": str(state), "config": config}
        else:
            state = parse_classic_deal(args.classic)
            out = {"valid": True, "kind": "classic",
                   "is_final": state.is_final, "deal": str(state), "config": config}
    except ValueError as exc:
        _emit_json({"valid": False, "error": str(exc), "config": config}, args.output)
        print(f"claim failed: {exc}", file=sys.stderr)
        return 2
    _emit_json(out, args.output)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "expected-length": _cmd_expected_length,
    "tail-curve": _cmd_tail_curve,
    "decay-cert": _cmd_decay_cert,
    "find-cycle": _cmd_find_cycle,
    "verify-cycle": _cmd_verify_cycle,
    "two-outcome": _cmd_two_outcome,
    "simulate-classic": _cmd_simulate_classic,
    "mc-classic": _cmd_mc_classic,
    "verify-deal": _cmd_verify_deal,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _COMMANDS[args.command](args)
    except (NonAbsorbingGraphError, DecayBoundError, ConvergenceError) as exc:
        print(f"claim failed: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
