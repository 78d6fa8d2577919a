"""Implicit game-state graph: reachability, degree audits and path witnesses.

The graph is never stored; successors come from trick resolution and
predecessors from its analytic inverse.  Attaining/wandering classification
runs a multi-source reverse BFS from the final states over a packed bit
array, so the full space of (n+1)! states needs (n+1)! bits plus a queue.
"""

from __future__ import annotations

import time
from array import array
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations

from .rules import (
    ComparisonRule,
    GameState,
    PlacementOrder,
    Side,
    predecessor_edges,
    resolve_trick,
    trick_winner,
)
from .state_space import _FACTORIALS, decode, encode, state_count


class EdgeFilter(Enum):
    """Which of the two placement-order edges each non-final state keeps.

    Seat filters keep the edge on which the named seat's card is placed
    first regardless of who won the trick.
    """

    BOTH_ORDERS = "both"
    OWN_FIRST_ONLY = "own-first"
    RIVAL_FIRST_ONLY = "rival-first"
    SEAT_LEFT_FIRST_ONLY = "seat-left"
    SEAT_RIGHT_FIRST_ONLY = "seat-right"

    def allows(self, winner: Side, order: PlacementOrder) -> bool:
        if self is EdgeFilter.BOTH_ORDERS:
            return True
        if self is EdgeFilter.OWN_FIRST_ONLY:
            return order is PlacementOrder.OWN_FIRST
        if self is EdgeFilter.RIVAL_FIRST_ONLY:
            return order is PlacementOrder.RIVAL_FIRST
        left_first = (order is PlacementOrder.OWN_FIRST) == (winner is Side.LEFT)
        if self is EdgeFilter.SEAT_LEFT_FIRST_ONLY:
            return left_first
        return not left_first

    def is_subset_of(self, other: "EdgeFilter") -> bool:
        return self is other or other is EdgeFilter.BOTH_ORDERS

    def __str__(self) -> str:
        return self.value


class WinnerTarget(Enum):
    """Which class of final states a reachability run aims for."""

    ANY_FINAL = "any"
    LEFT_WINS = "left"
    RIGHT_WINS = "right"


class WanderingStateError(ValueError):
    """Raised when a path witness is requested from a wandering start state."""


class Bitset:
    """Fixed-size bit array over state ranks, packed 8 per byte."""

    __slots__ = ("size", "_bits")

    def __init__(self, size: int, _bits: bytearray | None = None):
        self.size = size
        self._bits = _bits if _bits is not None else bytearray((size + 7) // 8)

    def test(self, i: int) -> bool:
        return bool(self._bits[i >> 3] & (1 << (i & 7)))

    def set(self, i: int) -> None:
        self._bits[i >> 3] |= 1 << (i & 7)

    def count(self) -> int:
        return int.from_bytes(self._bits, "little").bit_count()

    def is_subset_of(self, other: "Bitset") -> bool:
        if self.size != other.size:
            raise ValueError("bitset sizes differ")
        a = int.from_bytes(self._bits, "little")
        b = int.from_bytes(other._bits, "little")
        return a & ~b == 0

    def __len__(self) -> int:
        return self.size


@dataclass
class ReachabilityReport:
    """Result of one reverse-reachability sweep over the full state space."""

    n: int
    rule: ComparisonRule
    edge_filter: EdgeFilter
    target: WinnerTarget
    total_states: int
    attaining_count: int
    wandering_count: int
    wandering_samples: tuple[GameState, ...]
    max_distance: int
    elapsed_ms: float
    attaining: Bitset
    next_hop: array | None = field(repr=False, default=None)

    @property
    def is_absorbing(self) -> bool:
        return self.wandering_count == 0

    def is_attaining(self, state: GameState) -> bool:
        return self.attaining.test(encode(state))

    def to_json_dict(self, include_timing: bool = True) -> dict:
        return {
            "n": self.n,
            "rule": self.rule.value,
            "edge_filter": self.edge_filter.value,
            "total_states": self.total_states,
            "attaining": self.attaining_count,
            "wandering": self.wandering_count,
            "elapsed_ms": round(self.elapsed_ms, 3) if include_timing else None,
        }


@dataclass(frozen=True)
class DegreeAudit:
    n: int
    out_degree_violations: int
    in_degree_violations: int
    checked_states: int

    @property
    def clean(self) -> bool:
        return self.out_degree_violations == 0 and self.in_degree_violations == 0


@dataclass(frozen=True)
class PathWitness:
    """An explicit edge-by-edge route from `start` to a final state."""

    start: GameState
    steps: tuple[tuple[PlacementOrder, GameState], ...]

    def replay_ok(self, rule: ComparisonRule = ComparisonRule.STANDARD) -> bool:
        """Re-run every step through trick resolution and check the endpoint."""
        cur = self.start
        for order, nxt in self.steps:
            if cur.is_final or resolve_trick(cur, order, rule) != nxt:
                return False
            cur = nxt
        return cur.is_final


def _reverse_reachability(
    n: int,
    rule: ComparisonRule,
    edge_filter: EdgeFilter,
    target: WinnerTarget,
    track_parents: bool,
    sample_cap: int,
) -> ReachabilityReport:
    """Multi-source reverse BFS from the target final states.

    States travel through the queue as raw hand tuples; ranks are computed
    inline (Lehmer rank of the concatenation times n+1 plus the split) so the
    hot loop never builds GameState objects.
    """
    t0 = time.perf_counter()
    total = state_count(n)
    np1 = n + 1
    fact = _FACTORIALS
    cyclic = rule is ComparisonRule.CYCLIC_LOW_BEATS_HIGH
    bits = bytearray((total + 7) // 8)
    hops = array("q", [-1]) * total if track_parents else None

    # Placement order per reversed edge: the candidate's order is OWN_FIRST
    # exactly when the winning card sits deeper of the collected pair.
    allow = edge_filter.allows
    own, rival = PlacementOrder.OWN_FIRST, PlacementOrder.RIVAL_FIRST
    left_own = allow(Side.LEFT, own)
    left_rival = allow(Side.LEFT, rival)
    right_own = allow(Side.RIGHT, own)
    right_rival = allow(Side.RIGHT, rival)

    queue: deque = deque()
    deck = range(1, n + 1)
    for perm_rank, perm in enumerate(permutations(deck)):
        base = perm_rank * np1
        if target in (WinnerTarget.ANY_FINAL, WinnerTarget.RIGHT_WINS):
            r = base  # left hand empty
            bits[r >> 3] |= 1 << (r & 7)
            queue.append(((), perm, r, 0))
        if target in (WinnerTarget.ANY_FINAL, WinnerTarget.LEFT_WINS):
            r = base + n  # right hand empty
            bits[r >> 3] |= 1 << (r & 7)
            queue.append((perm, (), r, 0))

    max_dist = 0
    pop = queue.popleft
    push = queue.append
    while queue:
        left, right, rank, dist = pop()
        if dist > max_dist:
            max_dist = dist
        nd = dist + 1
        for candidate in range(2):
            if candidate == 0:
                if len(left) < 2:
                    continue
                u, v = left[-2], left[-1]
            else:
                if len(right) < 2:
                    continue
                u, v = right[-2], right[-1]
            if cyclic and ((u == 1 and v == n) or (u == n and v == 1)):
                w, l = (1, v) if u == 1 else (1, u)
            elif u > v:
                w, l = u, v
            else:
                w, l = v, u
            own_first = w == u
            if candidate == 0:
                if not (left_own if own_first else left_rival):
                    continue
                pl = (w,) + left[:-2]
                pr = (l,) + right
            else:
                if not (right_own if own_first else right_rival):
                    continue
                pl = (l,) + left
                pr = (w,) + right[:-2]
            seq = pl + pr
            prank = 0
            for i in range(n - 1):
                si = seq[i]
                c = 0
                for j in range(i + 1, n):
                    if seq[j] < si:
                        c += 1
                prank += c * fact[n - 1 - i]
            pr_rank = prank * np1 + len(pl)
            if not bits[pr_rank >> 3] & (1 << (pr_rank & 7)):
                bits[pr_rank >> 3] |= 1 << (pr_rank & 7)
                if hops is not None:
                    hops[pr_rank] = rank
                push((pl, pr, pr_rank, nd))

    attaining = Bitset(total, bits)
    attained = attaining.count()
    wandering = total - attained
    samples = []
    if wandering and sample_cap > 0:
        for r in range(total):
            if not bits[r >> 3] & (1 << (r & 7)):
                samples.append(decode(r, n))
                if len(samples) >= sample_cap:
                    break
    elapsed = (time.perf_counter() - t0) * 1000.0
    return ReachabilityReport(
        n=n,
        rule=rule,
        edge_filter=edge_filter,
        target=target,
        total_states=total,
        attaining_count=attained,
        wandering_count=wandering,
        wandering_samples=tuple(samples),
        max_distance=max_dist,
        elapsed_ms=elapsed,
        attaining=attaining,
        next_hop=hops,
    )


class GameGraph:
    """The implicit directed graph of an n-card game under one edge filter."""

    def __init__(
        self,
        n: int,
        rule: ComparisonRule = ComparisonRule.STANDARD,
        edge_filter: EdgeFilter = EdgeFilter.BOTH_ORDERS,
    ):
        state_count(n)  # validates the ceiling
        self.n = n
        self.rule = rule
        self.edge_filter = edge_filter
        self._reports: dict[tuple[WinnerTarget, bool], ReachabilityReport] = {}

    def successor_edges(self, state: GameState) -> list[tuple[PlacementOrder, GameState]]:
        """Filtered out-edges of a state as (order, successor) pairs."""
        if state.is_final:
            return []
        winner = trick_winner(state, self.rule)
        return [
            (order, resolve_trick(state, order, self.rule))
            for order in PlacementOrder
            if self.edge_filter.allows(winner, order)
        ]

    def predecessor_edges(self, state: GameState):
        """Filtered in-edges of a state (see rules.predecessor_edges)."""
        return [
            e
            for e in predecessor_edges(state, self.rule)
            if self.edge_filter.allows(e.winner, e.order)
        ]

    def reachability(
        self,
        target: WinnerTarget = WinnerTarget.ANY_FINAL,
        track_parents: bool = True,
        sample_cap: int = 16,
    ) -> ReachabilityReport:
        key = (target, track_parents)
        report = self._reports.get(key)
        if report is None and track_parents is False:
            # A parent-tracking run answers the same queries.
            report = self._reports.get((target, True))
        if report is None:
            report = _reverse_reachability(
                self.n, self.rule, self.edge_filter, target, track_parents, sample_cap
            )
            self._reports[key] = report
        return report

    def path_to_final(
        self, state: GameState, target: WinnerTarget = WinnerTarget.ANY_FINAL
    ) -> PathWitness:
        """Shortest-in-layers path witness from `state` to a target final state."""
        report = self.reachability(target, track_parents=True)
        rank = encode(state)
        if not report.attaining.test(rank):
            raise WanderingStateError(
                f"state {state} is wandering under filter {self.edge_filter.value}"
            )
        assert report.next_hop is not None
        steps = []
        cur = state
        while not cur.is_final:
            nxt_rank = report.next_hop[encode(cur, check=False)]
            taken = None
            for order in PlacementOrder:
                succ = resolve_trick(cur, order, self.rule)
                if encode(succ, check=False) == nxt_rank:
                    winner = trick_winner(cur, self.rule)
                    if self.edge_filter.allows(winner, order):
                        taken = (order, succ)
                        break
            if taken is None:
                raise RuntimeError(f"broken parent chain at {cur}")
            steps.append(taken)
            cur = taken[1]
        return PathWitness(start=state, steps=tuple(steps))


def attaining_set(
    n: int,
    rule: ComparisonRule = ComparisonRule.STANDARD,
    edge_filter: EdgeFilter = EdgeFilter.BOTH_ORDERS,
    *,
    target: WinnerTarget = WinnerTarget.ANY_FINAL,
    track_parents: bool = True,
    sample_cap: int = 16,
) -> ReachabilityReport:
    """Classify every state as attaining or wandering via reverse BFS."""
    return _reverse_reachability(n, rule, edge_filter, target, track_parents, sample_cap)


def path_to_final(state: GameState, graph: GameGraph) -> PathWitness:
    return graph.path_to_final(state)


def degree_audit(n: int, rule: ComparisonRule = ComparisonRule.STANDARD) -> DegreeAudit:
    """Check out-degree 0/2 and the closed-form in-degree over every state.

    In-degrees are counted twice, independently: once by accumulating over
    all successor edges and once by reversing each state's tricks; both must
    match [|L| >= 2] + [|R| >= 2].
    """
    total = state_count(n)
    np1 = n + 1
    indeg = bytearray(total)
    out_violations = 0
    deck = range(1, n + 1)

    states = []
    for perm_rank, perm in enumerate(permutations(deck)):
        for split in range(np1):
            states.append((perm_rank * np1 + split, perm[:split], perm[split:]))

    for rank, left, right in states:
        if not left or not right:
            continue
        state = GameState(left, right)
        s1, s2 = (
            resolve_trick(state, PlacementOrder.OWN_FIRST, rule),
            resolve_trick(state, PlacementOrder.RIVAL_FIRST, rule),
        )
        if s1 == s2:
            out_violations += 1
        indeg[encode(s1, check=False)] += 1
        indeg[encode(s2, check=False)] += 1

    in_violations = 0
    for rank, left, right in states:
        expected = (len(left) >= 2) + (len(right) >= 2)
        preds = predecessor_edges(GameState(left, right), rule)
        if len(preds) != expected or indeg[rank] != expected:
            in_violations += 1

    return DegreeAudit(
        n=n,
        out_degree_violations=out_violations,
        in_degree_violations=in_violations,
        checked_states=total,
    )


def wandering_closure_check(report: ReachabilityReport, graph: GameGraph) -> bool:
    """Is the report's wandering set closed under the graph's edges?

    Successor closure is checked always; the no-in-edges-from-outside half
    only under BOTH_ORDERS, where the in-degree formula makes every
    predecessor edge available.  Vacuously true when no state wanders.
    """
    if report.wandering_count == 0:
        return True
    attaining = report.attaining
    check_in_edges = graph.edge_filter is EdgeFilter.BOTH_ORDERS
    for rank in range(report.total_states):
        if attaining.test(rank):
            continue
        state = decode(rank, graph.n)
        for _, succ in graph.successor_edges(state):
            if attaining.test(encode(succ, check=False)):
                return False
        if check_in_edges:
            for pred, _, _ in graph.predecessor_edges(state):
                if attaining.test(encode(pred, check=False)):
                    return False
    return True


def subgraph_monotonicity(
    n: int,
    rule: ComparisonRule,
    filter_a: EdgeFilter,
    filter_b: EdgeFilter,
) -> bool:
    """Wandering sets shrink when edges are added: wandering(b) ⊆ wandering(a).

    Requires filter_a's edge set to be contained in filter_b's.
    """
    if not filter_a.is_subset_of(filter_b):
        raise ValueError(
            f"edge set of {filter_a.value} is not contained in {filter_b.value}"
        )
    report_a = attaining_set(n, rule, filter_a, track_parents=False, sample_cap=0)
    report_b = attaining_set(n, rule, filter_b, track_parents=False, sample_cap=0)
    return report_a.attaining.is_subset_of(report_b.attaining)
