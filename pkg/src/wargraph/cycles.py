"""Deterministic placement policies: never-ending deals and two-outcome deals.

When the trick winner always applies the same placement choice the game is a
pure function of the deal, so every orbit either terminates or closes a
cycle within (n+1)! moves.  This module detects which (Brent's algorithm,
exact states), scans all equal-split deals for cycling ones, and certifies
deals from which both players can win when both placement orders stay open.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graph import EdgeFilter, GameGraph, PathWitness, WinnerTarget
from .rules import (
    ComparisonRule,
    GameState,
    PlacementOrder,
    Side,
    format_state,
    parse_state,
    resolve_trick,
    trick_winner,
)
from .state_space import _FACTORIALS, state_count

#: Largest n the exhaustive deal scans accept without force=True.
MAX_SCAN_N = 8
MAX_TWO_OUTCOME_N = 6


class DeterministicPolicy(Enum):
    """A fixed placement choice applied by the trick winner on every move."""

    OWN_FIRST = "own-first"
    RIVAL_FIRST = "rival-first"
    SEAT_LEFT_FIRST = "seat-left-first"
    SEAT_RIGHT_FIRST = "seat-right-first"

    def order_for(self, winner: Side) -> PlacementOrder:
        if self is DeterministicPolicy.OWN_FIRST:
            return PlacementOrder.OWN_FIRST
        if self is DeterministicPolicy.RIVAL_FIRST:
            return PlacementOrder.RIVAL_FIRST
        left_wins = winner is Side.LEFT
        if self is DeterministicPolicy.SEAT_LEFT_FIRST:
            return PlacementOrder.OWN_FIRST if left_wins else PlacementOrder.RIVAL_FIRST
        return PlacementOrder.RIVAL_FIRST if left_wins else PlacementOrder.OWN_FIRST

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Terminated:
    steps: int
    winner: Side


@dataclass(frozen=True)
class Cycle:
    pre_period: int
    period: int


@dataclass(frozen=True)
class Truncated:
    max_steps: int


TrajectoryOutcome = Terminated | Cycle | Truncated


def _policy_step(policy: DeterministicPolicy, rule: ComparisonRule):
    def step(state: GameState) -> GameState:
        return resolve_trick(state, policy.order_for(trick_winner(state, rule)), rule)

    return step


def simulate_policy(
    deal: GameState,
    policy: DeterministicPolicy,
    rule: ComparisonRule = ComparisonRule.STANDARD,
    max_steps: int | None = None,
) -> TrajectoryOutcome:
    """Classify the deterministic orbit of a deal.

    Runs Brent's cycle detection over exact states, so a reported Cycle has
    minimal pre_period and minimal period and never rests on hash collisions.
    Whenever the orbit terminates or closes its cycle within max_steps moves
    (default (n+1)! + 1, enough for any orbit by pigeonhole) the true outcome
    is returned; Truncated appears only beyond that, after an O(max_steps)
    search allowance is exhausted.
    """
    deal.validate()
    if deal.is_final:
        return Terminated(0, deal.winner)
    if max_steps is None:
        max_steps = state_count(deal.n) + 1
    step = _policy_step(policy, rule)
    allowance = 3 * (max_steps + 2)

    # Phase 1: hare walks the orbit; tortoise teleports at powers of two.
    power = lam = 1
    tortoise = deal
    hare = step(deal)
    hare_pos = 1
    while tortoise != hare:
        if hare.is_final:
            return Terminated(hare_pos, hare.winner)
        if hare_pos >= allowance:
            return Truncated(max_steps)
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = step(hare)
        hare_pos += 1
        lam += 1

    # Phase 2: with the period known, align two walkers lam apart.
    tortoise = hare = deal
    for _ in range(lam):
        hare = step(hare)
    mu = 0
    while tortoise != hare:
        tortoise = step(tortoise)
        hare = step(hare)
        mu += 1
    if mu + lam > max_steps:
        return Truncated(max_steps)
    return Cycle(pre_period=mu, period=lam)


@dataclass(frozen=True)
class CycleCertificate:
    """A replayable witness that one deal never finishes under one policy."""

    deal: GameState
    policy: DeterministicPolicy
    rule: ComparisonRule
    pre_period: int
    period: int

    def to_json_dict(self) -> dict:
        return {
            "deal": format_state(self.deal),
            "policy": self.policy.value,
            "rule": self.rule.value,
            "pre_period": self.pre_period,
            "period": self.period,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CycleCertificate":
        return cls(
            deal=parse_state(data["deal"]),
            policy=DeterministicPolicy(data["policy"]),
            rule=ComparisonRule(data["rule"]),
            pre_period=int(data["pre_period"]),
            period=int(data["period"]),
        )


def verify_cycle(certificate: CycleCertificate) -> bool:
    """Independently replay a certificate; exact, minimal-period check."""
    try:
        certificate.deal.validate()
    except (ValueError, TypeError):
        return False
    if certificate.pre_period < 0 or certificate.period < 1:
        return False
    step = _policy_step(certificate.policy, certificate.rule)
    state = certificate.deal
    for _ in range(certificate.pre_period):
        if state.is_final:
            return False
        state = step(state)
    anchor = state
    for done in range(1, certificate.period + 1):
        if state.is_final:
            return False
        state = step(state)
        if state == anchor:
            return done == certificate.period
    return False


def _equal_split_deals(n: int):
    from itertools import permutations

    half = n // 2
    for perm in permutations(range(1, n + 1)):
        yield GameState(perm[:half], perm[half:])


def _all_nonfinal_deals(n: int):
    from itertools import permutations

    for perm in permutations(range(1, n + 1)):
        for split in range(1, n):
            yield GameState(perm[:split], perm[split:])


def find_cycles(
    n: int,
    policy: DeterministicPolicy,
    rule: ComparisonRule = ComparisonRule.STANDARD,
    max_steps: int | None = None,
    all_states: bool = False,
    force: bool = False,
) -> list[CycleCertificate]:
    """Exhaustively scan deals for never-ending games under one policy.

    Scans the n! equal-split deals in deal-rank order (every nonfinal state
    with all_states=True).  n is capped at MAX_SCAN_N unless force=True.
    """
    if n > MAX_SCAN_N and not force:
        raise ValueError(
            f"exhaustive scan over n={n} needs force=True (cap is {MAX_SCAN_N})"
        )
    state_count(n)
    deals = _all_nonfinal_deals(n) if all_states else _equal_split_deals(n)
    found = []
    for deal in deals:
        outcome = simulate_policy(deal, policy, rule, max_steps)
        if isinstance(outcome, Cycle):
            found.append(
                CycleCertificate(
                    deal=deal,
                    policy=policy,
                    rule=rule,
                    pre_period=outcome.pre_period,
                    period=outcome.period,
                )
            )
    return found


def _witness_to_json(witness: PathWitness) -> dict:
    return {
        "start": format_state(witness.start),
        "orders": [order.value for order, _ in witness.steps],
    }


def witness_from_json(data: dict, rule: ComparisonRule) -> PathWitness:
    """Rebuild a path witness by replaying its recorded placement orders."""
    state = parse_state(data["start"])
    steps = []
    for value in data["orders"]:
        state = resolve_trick(state, PlacementOrder(value), rule)
        steps.append((PlacementOrder(value), state))
    return PathWitness(start=parse_state(data["start"]), steps=tuple(steps))


@dataclass(frozen=True)
class TwoOutcomeCertificate:
    """One deal with explicit winning routes for both players."""

    deal: GameState
    rule: ComparisonRule
    left_win_path: PathWitness
    right_win_path: PathWitness

    def to_json_dict(self) -> dict:
        return {
            "deal": format_state(self.deal),
            "rule": self.rule.value,
            "left_win_path": _witness_to_json(self.left_win_path),
            "right_win_path": _witness_to_json(self.right_win_path),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TwoOutcomeCertificate":
        rule = ComparisonRule(data["rule"])
        return cls(
            deal=parse_state(data["deal"]),
            rule=rule,
            left_win_path=witness_from_json(data["left_win_path"], rule),
            right_win_path=witness_from_json(data["right_win_path"], rule),
        )

    def verify(self) -> bool:
        for path, side in ((self.left_win_path, Side.LEFT), (self.right_win_path, Side.RIGHT)):
            if path.start != self.deal or not path.replay_ok(self.rule):
                return False
            end = path.steps[-1][1] if path.steps else path.start
            if not end.is_final or end.winner is not side:
                return False
        return True


def two_outcome_deals(
    n: int,
    rule: ComparisonRule = ComparisonRule.STANDARD,
    force: bool = False,
) -> list[TwoOutcomeCertificate]:
    """Equal-split deals from which either player can still win.

    Winner classes come from two reverse-reachability sweeps (one per
    winner) under BOTH_ORDERS, so the scan costs two BFS runs rather than a
    forward search per deal; witness paths are read off the BFS parents.
    """
    if n > MAX_TWO_OUTCOME_N and not force:
        raise ValueError(
            f"two-outcome scan over n={n} needs force=True (cap is {MAX_TWO_OUTCOME_N})"
        )
    graph = GameGraph(n, rule, EdgeFilter.BOTH_ORDERS)
    left_report = graph.reachability(WinnerTarget.LEFT_WINS)
    right_report = graph.reachability(WinnerTarget.RIGHT_WINS)
    found = []
    for deal in _equal_split_deals(n):
        if left_report.is_attaining(deal) and right_report.is_attaining(deal):
            found.append(
                TwoOutcomeCertificate(
                    deal=deal,
                    rule=rule,
                    left_win_path=graph.path_to_final(deal, WinnerTarget.LEFT_WINS),
                    right_win_path=graph.path_to_final(deal, WinnerTarget.RIGHT_WINS),
                )
            )
    return found
