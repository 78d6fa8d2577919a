"""Single-suit War: cards, hands, states and the trick-resolution step.

The model deck holds the values 1..n (n even).  A game state is an ordered
partition of the deck into two hands; index 0 of a hand is the top card
(played next) and cards collected by a trick's winner are appended at the
bottom.  Every non-final state has exactly two successors, one per placement
order of the collected pair, and reversing a trick analytically yields its
predecessors without ever materialising the graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

Hand = tuple[int, ...]


class ComparisonRule(Enum):
    """How the two revealed cards are compared."""

    STANDARD = "standard"
    # Identical to STANDARD except that 1 beats n (and only that pair flips).
    CYCLIC_LOW_BEATS_HIGH = "cyclic"

    def __str__(self) -> str:
        return self.value


class PlacementOrder(Enum):
    """Order in which the winner returns the collected pair to their bottom.

    OWN_FIRST: the winner's own card is placed first, so the rival's card
    becomes the new very bottom.  RIVAL_FIRST is the mirror image.
    """

    OWN_FIRST = "own-first"
    RIVAL_FIRST = "rival-first"

    def __str__(self) -> str:
        return self.value


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"

    def opponent(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DeckSpec:
    """A model deck: values 1..n with a comparison rule."""

    n: int
    rule: ComparisonRule = ComparisonRule.STANDARD

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError(f"deck size must be an even integer >= 2, got {self.n}")

    @property
    def cards(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))


@dataclass(frozen=True, slots=True)
class GameState:
    """Ordered partition of the deck 1..n into the two players' hands."""

    left: Hand
    right: Hand

    @property
    def n(self) -> int:
        return len(self.left) + len(self.right)

    @property
    def is_final(self) -> bool:
        return not self.left or not self.right

    @property
    def winner(self) -> Side | None:
        """Winning side of a final state, None if the game is still running."""
        if not self.right and self.left:
            return Side.LEFT
        if not self.left and self.right:
            return Side.RIGHT
        return None

    def validate(self) -> "GameState":
        """Check the partition invariant; returns self to allow chaining."""
        n = self.n
        if n < 1:
            raise ValueError("state has no cards")
        if n % 2:
            raise ValueError(f"total card count must be even, got {n}")
        if sorted(self.left + self.right) != list(range(1, n + 1)):
            raise ValueError(
                f"hands {self.left} / {self.right} are not a partition of 1..{n}"
            )
        return self

    def __str__(self) -> str:
        return format_state(self)


class PredecessorEdge(NamedTuple):
    """A reversed trick: the state it came from plus the edge's labels."""

    state: GameState
    winner: Side
    order: PlacementOrder


def compare(u: int, v: int, rule: ComparisonRule, n: int) -> int:
    """Winner of the pair {u, v} under the given rule for a deck of size n.

    Ties cannot occur in the single-suit model; equal inputs are rejected.
    """
    if u == v:
        raise ValueError(f"equal cards cannot meet in the model game: {u}")
    if not (1 <= u <= n and 1 <= v <= n):
        raise ValueError(f"cards {u}, {v} out of range 1..{n}")
    if rule is ComparisonRule.CYCLIC_LOW_BEATS_HIGH and {u, v} == {1, n}:
        return 1
    return u if u > v else v


def _resolved_hands(
    left: Hand, right: Hand, order: PlacementOrder, rule: ComparisonRule, n: int
) -> tuple[Hand, Hand]:
    """Trick resolution over raw hand tuples (hot-path core)."""
    u, v = left[0], right[0]
    w = compare(u, v, rule, n)
    if order is PlacementOrder.OWN_FIRST:
        pair = (u, v) if w == u else (v, u)
    else:
        pair = (v, u) if w == u else (u, v)
    if w == u:
        return left[1:] + pair, right[1:]
    return left[1:], right[1:] + pair


def resolve_trick(
    state: GameState, order: PlacementOrder, rule: ComparisonRule = ComparisonRule.STANDARD
) -> GameState:
    """Play one trick: both top cards go to the winner's bottom in `order`."""
    if state.is_final:
        raise ValueError(f"cannot play a trick from the final state {state}")
    left, right = _resolved_hands(state.left, state.right, order, rule, state.n)
    return GameState(left, right)


def trick_winner(state: GameState, rule: ComparisonRule = ComparisonRule.STANDARD) -> Side:
    """Which side wins the trick about to be played from `state`."""
    if state.is_final:
        raise ValueError("final state has no trick to win")
    w = compare(state.left[0], state.right[0], rule, state.n)
    return Side.LEFT if w == state.left[0] else Side.RIGHT


def successors(
    state: GameState, rule: ComparisonRule = ComparisonRule.STANDARD
) -> tuple[GameState, GameState]:
    """The two successor states, in (OWN_FIRST, RIVAL_FIRST) order."""
    return (
        resolve_trick(state, PlacementOrder.OWN_FIRST, rule),
        resolve_trick(state, PlacementOrder.RIVAL_FIRST, rule),
    )


def _pred_edges(
    left: Hand, right: Hand, rule: ComparisonRule, n: int
) -> list[tuple[Hand, Hand, Side, PlacementOrder]]:
    """Reversed-trick candidates over raw hand tuples.

    A side can have just won only if it now holds at least two cards: its
    bottom two are the collected pair, the pair's winner was the card the
    side played, and the placement order is read off from which of the two
    ended up deeper.
    """
    out = []
    if len(left) >= 2:
        u, v = left[-2], left[-1]
        w = compare(u, v, rule, n)
        l = v if w == u else u
        order = PlacementOrder.OWN_FIRST if w == u else PlacementOrder.RIVAL_FIRST
        out.append(((w,) + left[:-2], (l,) + right, Side.LEFT, order))
    if len(right) >= 2:
        u, v = right[-2], right[-1]
        w = compare(u, v, rule, n)
        l = v if w == u else u
        order = PlacementOrder.OWN_FIRST if w == u else PlacementOrder.RIVAL_FIRST
        out.append(((l,) + left, (w,) + right[:-2], Side.RIGHT, order))
    return out


def predecessor_edges(
    state: GameState, rule: ComparisonRule = ComparisonRule.STANDARD
) -> list[PredecessorEdge]:
    """All states one trick before `state`, with winner side and order labels."""
    n = state.n
    return [
        PredecessorEdge(GameState(pl, pr), side, order)
        for pl, pr, side, order in _pred_edges(state.left, state.right, rule, n)
    ]


def predecessors(
    state: GameState, rule: ComparisonRule = ComparisonRule.STANDARD
) -> list[GameState]:
    """States one trick before `state` (0, 1 or 2 of them)."""
    return [edge.state for edge in predecessor_edges(state, rule)]


def format_state(state: GameState) -> str:
    """Deal text, e.g. ``L: 3 1 ; R: 2 4`` with ``-`` for an empty hand."""
    left = " ".join(map(str, state.left)) if state.left else "-"
    right = " ".join(map(str, state.right)) if state.right else "-"
    return f"L: {left} ; R: {right}"


def parse_state(text: str) -> GameState:
    """Parse the deal text format produced by :func:`format_state`."""
    try:
        left_part, right_part = text.split(";")
    except ValueError:
        raise ValueError(f"deal text needs exactly one ';': {text!r}") from None
    hands = []
    for part, tag in ((left_part, "L"), (right_part, "R")):
        part = part.strip()
        if not part.startswith(f"{tag}:"):
            raise ValueError(f"expected '{tag}:' in {part!r}")
        body = part[len(tag) + 1 :].strip()
        if body == "-" or body == "":
            hands.append(())
        else:
            try:
                hands.append(tuple(int(tok) for tok in body.split()))
            except ValueError:
                raise ValueError(f"non-integer card in {part!r}") from None
    return GameState(hands[0], hands[1]).validate()
