"""Dense bijective indexing of every model-game state.

A state is the permutation ``left ++ right`` of 1..n plus the split point
``|left|``, so ranks run over ``[0, (n+1)!)`` as
``lehmer_rank(permutation) * (n+1) + |left|``.  Encode and decode are O(n^2)
with n capped at 12 (the bit-array over all states is the real ceiling).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterator

from .rules import GameState

MAX_N = 12

_FACTORIALS = [factorial(i) for i in range(MAX_N + 2)]


def _check_n(n: int) -> None:
    if n < 2:
        raise ValueError(f"deck size must be >= 2, got {n}")
    if n % 2:
        raise ValueError(f"deck size must be even, got {n}")
    if n > MAX_N:
        raise ValueError(f"deck size {n} exceeds the index ceiling {MAX_N}")


def state_count(n: int) -> int:
    """Number of states of the n-card game: (n+1)!."""
    _check_n(n)
    return _FACTORIALS[n + 1]


@dataclass(frozen=True)
class StateSpaceStats:
    n: int
    total_states: int
    final_states: int
    nonfinal_states: int


def stats(n: int) -> StateSpaceStats:
    total = state_count(n)
    final = 2 * _FACTORIALS[n]
    return StateSpaceStats(n, total, final, total - final)


def permutation_rank(perm: tuple[int, ...]) -> int:
    """Lehmer-code rank of a permutation of 1..n within [0, n!)."""
    n = len(perm)
    rank = 0
    for i in range(n):
        smaller_after = 0
        for j in range(i + 1, n):
            if perm[j] < perm[i]:
                smaller_after += 1
        rank += smaller_after * _FACTORIALS[n - 1 - i]
    return rank


def permutation_unrank(rank: int, n: int) -> tuple[int, ...]:
    """Inverse of :func:`permutation_rank` for permutations of 1..n."""
    remaining = list(range(1, n + 1))
    out = []
    for i in range(n):
        f = _FACTORIALS[n - 1 - i]
        digit, rank = divmod(rank, f)
        out.append(remaining.pop(digit))
    return tuple(out)


def encode(state: GameState, check: bool = True) -> int:
    """Dense rank of a state; rejects malformed states unless `check=False`."""
    if check:
        state.validate()
    n = state.n
    _check_n(n)
    return permutation_rank(state.left + state.right) * (n + 1) + len(state.left)


def decode(rank: int, n: int) -> GameState:
    """State with the given rank; inverse of :func:`encode`."""
    total = state_count(n)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range [0, {total}) for n={n}")
    perm_rank, split = divmod(rank, n + 1)
    perm = permutation_unrank(perm_rank, n)
    return GameState(perm[:split], perm[split:])


def enumerate_states(n: int) -> Iterator[GameState]:
    """Yield every state of the n-card game exactly once, in rank order."""
    _check_n(n)
    for perm_rank in range(_FACTORIALS[n]):
        perm = permutation_unrank(perm_rank, n)
        for split in range(n + 1):
            yield GameState(perm[:split], perm[split:])
