"""The classic 52-card game: wars on ties, simulation, and rank-cycle checks.

Hands are ordered card sequences exactly as in the small model; the new
ingredients are suits (four of each rank, so tricks can tie) and the war
mechanic that resolves ties.  The state space is far too large to
enumerate, so this module offers fast seeded simulation plus a deterministic
26-move rank-periodicity check for hand-crafted cycling deals.
"""

from __future__ import annotations

import random
import warnings
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum

from .cycles import DeterministicPolicy
from .markov import MC_CHUNKS, PlacementProbabilities, _mc_chunk_counts
from .rules import PlacementOrder, Side


class Suit(Enum):
    HEARTS = "H"
    CLUBS = "C"
    DIAMONDS = "D"
    SPADES = "S"

    def __str__(self) -> str:
        return self.value


_RANK_TO_SYMBOL = {
    **{r: str(r) for r in range(2, 10)},
    10: "T",
    11: "J",
    12: "Q",
    13: "K",
    14: "A",
}
_SYMBOL_TO_RANK = {s: r for r, s in _RANK_TO_SYMBOL.items()}
_SUITS = tuple(Suit)
_SUIT_INDEX = {s: i for i, s in enumerate(_SUITS)}


@dataclass(frozen=True, slots=True, order=True)
class ClassicCard:
    """One card of the standard deck; rank 14 is the ace, the highest."""

    rank: int
    suit: Suit

    def __post_init__(self):
        if not 2 <= self.rank <= 14:
            raise ValueError(f"rank must be 2..14, got {self.rank}")

    def __str__(self) -> str:
        return f"{_RANK_TO_SYMBOL[self.rank]}{self.suit.value}"

    @classmethod
    def parse(cls, text: str) -> "ClassicCard":
        text = text.strip().upper()
        if len(text) != 2 or text[0] not in _SYMBOL_TO_RANK:
            raise ValueError(f"bad card {text!r}: expected rank+suit like 'AH' or 'TS'")
        try:
            suit = Suit(text[1])
        except ValueError:
            raise ValueError(f"bad suit in {text!r}: expected one of H, C, D, S") from None
        return cls(_SYMBOL_TO_RANK[text[0]], suit)


def standard_deck() -> tuple[ClassicCard, ...]:
    """All 52 cards, suits in H, C, D, S order, ranks ascending within a suit."""
    return tuple(ClassicCard(rank, suit) for suit in _SUITS for rank in range(2, 15))


def _encode_card(card: ClassicCard) -> int:
    return (card.rank << 2) | _SUIT_INDEX[card.suit]


def _decode_card(code: int) -> ClassicCard:
    return ClassicCard(code >> 2, _SUITS[code & 3])


class ExhaustionRule(Enum):
    """What happens when a player cannot lay enough cards to finish a war."""

    EXHAUSTED_PLAYER_LOSES = "exhausted-player-loses"


@dataclass(frozen=True)
class WarConfig:
    """War shape: cards laid face-down per round, and the exhaustion rule.

    When both players are too short to continue a war, the one with fewer
    cards loses; on an exact tie the left player loses.  This tie-break is a
    convention the game's usual description leaves open, fixed here so every
    game is decided deterministically.
    """

    face_down_count: int = 1
    exhaustion_rule: ExhaustionRule = ExhaustionRule.EXHAUSTED_PLAYER_LOSES

    def __post_init__(self):
        if self.face_down_count < 0:
            raise ValueError("face_down_count must be >= 0")


@dataclass(frozen=True)
class ClassicState:
    """Ordered 52-card position between tricks; index 0 is the top of a hand."""

    left: tuple[ClassicCard, ...]
    right: tuple[ClassicCard, ...]

    @property
    def is_final(self) -> bool:
        return not self.left or not self.right

    def winner(self) -> Side | None:
        if not self.left and self.right:
            return Side.RIGHT
        if not self.right and self.left:
            return Side.LEFT
        return None

    def validate(self) -> None:
        cards = self.left + self.right
        if len(cards) != 52 or len(set(cards)) != 52:
            raise ValueError(
                f"hands must partition the 52-card deck (got {len(cards)} cards, "
                f"{len(set(cards))} distinct)"
            )

    def __str__(self) -> str:
        return format_classic_deal(self)


def format_classic_deal(state: ClassicState) -> str:
    left = " ".join(str(c) for c in state.left) or "-"
    right = " ".join(str(c) for c in state.right) or "-"
    return f"L: {left} ; R: {right}"


def parse_classic_deal(text: str) -> ClassicState:
    """Parse `L: AH KC ... ; R: ...` (a lone `-` stands for an empty hand)."""
    parts = text.split(";")
    if len(parts) != 2:
        raise ValueError(f"expected one ';' separating the hands in {text!r}")
    hands = []
    for part, label in zip(parts, ("L", "R")):
        part = part.strip()
        if not part.startswith(f"{label}:"):
            raise ValueError(f"expected {label}: prefix in {part!r}")
        body = part[2:].strip()
        if body == "-" or not body:
            hands.append(())
        else:
            hands.append(tuple(ClassicCard.parse(tok) for tok in body.split()))
    state = ClassicState(hands[0], hands[1])
    state.validate()
    return state


@dataclass(frozen=True)
class GameRecord:
    """Outcome of one simulated classic game."""

    deal: ClassicState
    moves: int
    winner: Side | None
    wars: int
    truncated: bool
    card_plays: int


def _run_tricks(
    left: deque,
    right: deque,
    choose_own_first,
    face_down: int,
    max_moves: int,
) -> tuple[int, int, int]:
    """Drive int-encoded hands until one empties or max_moves tricks pass.

    choose_own_first(winner_left: bool) -> bool is consulted once per trick,
    after the winner is known.  Returns (moves, wars, card_plays); the hands
    are mutated in place and card conservation holds throughout (a mid-war
    exhaustion hands the whole pile and the loser's remnant to the winner,
    which empties the loser and ends the game on the usual no-cards rule).
    """
    moves = wars = plays = 0
    need = face_down + 1
    while left and right and moves < max_moves:
        lstack = [left.popleft()]
        rstack = [right.popleft()]
        plays += 2
        exhausted_loser = None
        while (lstack[-1] >> 2) == (rstack[-1] >> 2):
            wars += 1
            l_short = len(left) < need
            r_short = len(right) < need
            if l_short or r_short:
                if l_short and r_short:
                    exhausted_loser = Side.LEFT if len(left) <= len(right) else Side.RIGHT
                else:
                    exhausted_loser = Side.LEFT if l_short else Side.RIGHT
                break
            for _ in range(need):
                lstack.append(left.popleft())
                rstack.append(right.popleft())
            plays += 2 * need
        moves += 1
        if exhausted_loser is not None:
            if exhausted_loser is Side.LEFT:
                right.extend(rstack)
                right.extend(lstack)
                right.extend(left)
                left.clear()
            else:
                left.extend(lstack)
                left.extend(rstack)
                left.extend(right)
                right.clear()
            break
        left_won = (lstack[-1] >> 2) > (rstack[-1] >> 2)
        own_first = choose_own_first(left_won)
        if left_won:
            first, second = (lstack, rstack) if own_first else (rstack, lstack)
            left.extend(first)
            left.extend(second)
        else:
            first, second = (rstack, lstack) if own_first else (lstack, rstack)
            right.extend(first)
            right.extend(second)
    return moves, wars, plays


def _hands_to_deques(state: ClassicState) -> tuple[deque, deque]:
    return (
        deque(_encode_card(c) for c in state.left),
        deque(_encode_card(c) for c in state.right),
    )


def _deques_to_state(left: deque, right: deque) -> ClassicState:
    return ClassicState(
        tuple(_decode_card(c) for c in left),
        tuple(_decode_card(c) for c in right),
    )


def resolve_classic_trick(
    state: ClassicState,
    order: PlacementOrder,
    war_config: WarConfig | None = None,
) -> ClassicState:
    """Play exactly one trick (wars included) with a fixed placement order.

    The winner's pile lands own laid stack first under OWN_FIRST and rival
    stack first under RIVAL_FIRST, each stack in the order it was laid.  The
    returned state is final when the trick ends the game.
    """
    if war_config is None:
        war_config = WarConfig()
    # partial positions are allowed here (handy for worked examples); only
    # card distinctness matters to a single trick, not the full-deck split
    cards = state.left + state.right
    if len(set(cards)) != len(cards):
        raise ValueError("hands share a card")
    if state.is_final:
        raise ValueError("cannot play a trick from a final position")
    left, right = _hands_to_deques(state)
    own = order is PlacementOrder.OWN_FIRST
    _run_tricks(left, right, lambda _lw: own, war_config.face_down_count, max_moves=1)
    return _deques_to_state(left, right)


def simulate_classic(
    deal: ClassicState,
    probs: PlacementProbabilities | None = None,
    war_config: WarConfig | None = None,
    seed: int = 0,
    max_steps: int = 10**6,
) -> GameRecord:
    """Play one full game with seeded random placement choices."""
    if probs is None:
        probs = PlacementProbabilities.symmetric()
    if war_config is None:
        war_config = WarConfig()
    deal.validate()
    rng = random.Random(seed)
    rand = rng.random
    pl1, pr1 = probs.pL1, probs.pR1

    def choose(left_won: bool) -> bool:
        return rand() < (pl1 if left_won else pr1)

    left, right = _hands_to_deques(deal)
    moves, wars, plays = _run_tricks(
        left, right, choose, war_config.face_down_count, max_steps
    )
    if left and right:
        winner = None
        truncated = True
    else:
        winner = Side.LEFT if left else Side.RIGHT
        truncated = False
    return GameRecord(
        deal=deal, moves=moves, winner=winner, wars=wars, truncated=truncated, card_plays=plays
    )


@dataclass(frozen=True)
class ValueCycleCheck:
    """Result of the 26-move rank-periodicity check."""

    ok: bool
    period_in_values: int
    wars_encountered: int

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "period_in_values": self.period_in_values,
            "wars_encountered": self.wars_encountered,
        }


def verify_value_cycle(
    deal: ClassicState,
    policy: DeterministicPolicy = DeterministicPolicy.SEAT_LEFT_FIRST,
) -> ValueCycleCheck:
    """Does the deal repeat both hands' rank sequences every 26 moves?

    Plays 26 tricks under the deterministic policy.  Passes only when no war
    occurred, the game did not end, and each hand's suit-erased card
    sequence is exactly what it started as.
    """
    deal.validate()
    left, right = _hands_to_deques(deal)
    start_left_ranks = [c >> 2 for c in left]
    start_right_ranks = [c >> 2 for c in right]

    def choose(left_won: bool) -> bool:
        w = Side.LEFT if left_won else Side.RIGHT
        return policy.order_for(w) is PlacementOrder.OWN_FIRST

    moves, wars, _ = _run_tricks(left, right, choose, face_down=1, max_moves=26)
    ok = (
        wars == 0
        and moves == 26
        and bool(left)
        and bool(right)
        and [c >> 2 for c in left] == start_left_ranks
        and [c >> 2 for c in right] == start_right_ranks
    )
    return ValueCycleCheck(
        ok=ok, period_in_values=26 if ok else 0, wars_encountered=wars
    )


def random_deal(rng: random.Random) -> ClassicState:
    """A uniformly shuffled 26/26 deal drawn from the given stream."""
    deck = list(standard_deck())
    rng.shuffle(deck)
    return ClassicState(tuple(deck[:26]), tuple(deck[26:]))


@dataclass(frozen=True)
class ClassicMonteCarloSummary:
    """Aggregate statistics over many simulated classic games."""

    trials: int
    seed: int
    probs: PlacementProbabilities
    war_config: WarConfig
    max_steps: int
    completed: int
    truncations: int
    mean_moves: float
    mean_wars: float
    length_histogram: dict[int, int] = field(repr=False)

    def survival(self, k: int) -> float:
        """Fraction of all games still unfinished after k moves.

        Truncated games count as surviving every k below max_steps.
        """
        alive = sum(c for moves, c in self.length_histogram.items() if moves > k)
        if k < self.max_steps:
            alive += self.truncations
        return alive / self.trials

    def to_json_dict(self, survival_at: tuple[int, ...] = (10, 100, 1000, 10000)) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "probs": self.probs.to_json_dict(),
            "face_down_count": self.war_config.face_down_count,
            "completed": self.completed,
            "truncations": self.truncations,
            "mean_moves": self.mean_moves,
            "mean_wars": self.mean_wars,
            "survival": {str(k): self.survival(k) for k in survival_at},
        }


def monte_carlo_classic(
    trials: int,
    probs: PlacementProbabilities | None = None,
    war_config: WarConfig | None = None,
    seed: int = 0,
    max_steps: int = 10**6,
    threads: int = 1,
) -> ClassicMonteCarloSummary:
    """Simulate many games from fresh uniform shuffles.

    Deals and placement choices come from MC_CHUNKS fixed substreams seeded
    f"{seed}:{chunk}" (shared with the model-game Monte Carlo), so summaries
    depend only on (seed, trials) regardless of thread count; histogram
    merging is commutative.
    """
    if probs is None:
        probs = PlacementProbabilities.symmetric()
    if war_config is None:
        war_config = WarConfig()
    if trials < 1:
        raise ValueError("trials must be >= 1")
    pl1, pr1 = probs.pL1, probs.pR1
    face_down = war_config.face_down_count

    def run_chunk(chunk: int, chunk_trials: int):
        rng = random.Random(f"{seed}:{chunk}")
        rand = rng.random
        shuffle = rng.shuffle
        deck0 = [_encode_card(c) for c in standard_deck()]
        hist: Counter = Counter()
        wars_total = 0
        truncated = 0

        def choose(left_won: bool) -> bool:
            return rand() < (pl1 if left_won else pr1)

        for _ in range(chunk_trials):
            deck = deck0[:]
            shuffle(deck)
            left = deque(deck[:26])
            right = deque(deck[26:])
            moves, wars, _ = _run_tricks(left, right, choose, face_down, max_steps)
            if left and right:
                truncated += 1
            else:
                hist[moves] += 1
                wars_total += wars
        return hist, wars_total, truncated

    counts = _mc_chunk_counts(trials)
    jobs = [(c, t) for c, t in enumerate(counts) if t > 0]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda job: run_chunk(*job), jobs))
    else:
        results = [run_chunk(c, t) for c, t in jobs]

    histogram: Counter = Counter()
    wars_total = 0
    truncations = 0
    for hist, wars, trunc in results:
        histogram.update(hist)
        wars_total += wars
        truncations += trunc
    completed = sum(histogram.values())
    if truncations:
        warnings.warn(
            f"{truncations} of {trials} games hit the {max_steps}-step cap and are "
            "excluded from the mean",
            RuntimeWarning,
            stacklevel=2,
        )
    if completed == 0:
        raise RuntimeError("every trial was truncated; raise max_steps")
    mean_moves = sum(m * c for m, c in histogram.items()) / completed
    mean_wars = wars_total / completed
    return ClassicMonteCarloSummary(
        trials=trials,
        seed=seed,
        probs=probs,
        war_config=war_config,
        max_steps=max_steps,
        completed=completed,
        truncations=truncations,
        mean_moves=mean_moves,
        mean_wars=mean_wars,
        length_histogram=dict(histogram),
    )
