"""Absorption analysis of the probabilistic placement model.

Each non-final state has two outgoing edges; the trick winner places the
collected pair own-card-first with probability p1 or rival-card-first with
probability p2 = 1 - p1, each side carrying its own pair of probabilities.
This module computes exact expected absorption times (dense solve for small
spaces, Gauss-Seidel sweeps above that), propagates survival curves, builds
the geometric-decay certificate (N, q), and cross-checks by simulation.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .graph import EdgeFilter, ReachabilityReport, attaining_set
from .rules import ComparisonRule
from .state_space import _FACTORIALS, encode, state_count

#: Largest state count handled by the direct dense solver.
DENSE_STATE_LIMIT = 10_000

#: Number of independent random substreams a Monte Carlo run is split into.
#: Fixed so that results depend only on (seed, trials), never on thread count.
MC_CHUNKS = 64

_PROB_TOL = 1e-12


class NonAbsorbingGraphError(ValueError):
    """The chain has wandering states, so absorption times are not finite."""


class ConvergenceError(RuntimeError):
    """Iterative solver ran out of sweeps; carries the last residual."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class DecayBoundError(AssertionError):
    """The certified bound p_alive(kN) <= (1-q)^k failed a numeric check."""


@dataclass(frozen=True)
class PlacementProbabilities:
    """Per-side probabilities of the two placement orders.

    pL1/pL2 apply when the left seat wins a trick (own-first / rival-first),
    pR1/pR2 when the right seat wins.  Each pair sums to 1 and every entry
    is strictly positive.
    """

    pL1: float
    pL2: float
    pR1: float
    pR2: float

    def __post_init__(self):
        for a, b, side in ((self.pL1, self.pL2, "L"), (self.pR1, self.pR2, "R")):
            if abs(a + b - 1.0) > _PROB_TOL:
                raise ValueError(f"p{side}1 + p{side}2 = {a + b!r}, expected 1")
            if a <= 0.0 or b <= 0.0:
                raise ValueError(f"placement probabilities for side {side} must be > 0")

    @classmethod
    def symmetric(cls) -> "PlacementProbabilities":
        return cls(0.5, 0.5, 0.5, 0.5)

    @classmethod
    def of(cls, pl1: float = 0.5, pr1: float = 0.5) -> "PlacementProbabilities":
        return cls(pl1, 1.0 - pl1, pr1, 1.0 - pr1)

    def to_json_dict(self) -> dict:
        return {"pL1": self.pL1, "pL2": self.pL2, "pR1": self.pR1, "pR2": self.pR2}


@lru_cache(maxsize=8)
def transition_tables(n: int, rule: ComparisonRule = ComparisonRule.STANDARD):
    """Flat successor tables over all state ranks.

    Returns read-only arrays (s_own, s_rival, left_wins, final): the ranks of
    the own-first and rival-first successors, who wins the trick, and the
    final-state mask.  Final rows carry self-loops that no caller follows.
    """
    total = state_count(n)
    np1 = n + 1
    fact = _FACTORIALS
    cyclic = rule is ComparisonRule.CYCLIC_LOW_BEATS_HIGH
    s_own = np.empty(total, dtype=np.int64)
    s_rival = np.empty(total, dtype=np.int64)
    left_wins = np.zeros(total, dtype=bool)
    final = np.zeros(total, dtype=bool)

    def prank(seq: tuple) -> int:
        r = 0
        for i in range(n - 1):
            si = seq[i]
            c = 0
            for j in range(i + 1, n):
                if seq[j] < si:
                    c += 1
            r += c * fact[n - 1 - i]
        return r

    rank = 0
    for perm in permutations(range(1, n + 1)):
        u = perm[0]
        for split in range(np1):
            if split == 0 or split == n:
                final[rank] = True
                s_own[rank] = s_rival[rank] = rank
                rank += 1
                continue
            v = perm[split]
            if cyclic and ((u == 1 and v == n) or (u == n and v == 1)):
                lw = u == 1
            else:
                lw = u > v
            left_rest = perm[1:split]
            right_rest = perm[split + 1 :]
            if lw:
                base = left_rest
                tail = right_rest
                seq_own = base + (u, v) + tail
                seq_rival = base + (v, u) + tail
                new_split = split + 1
            else:
                seq_own = left_rest + right_rest + (v, u)
                seq_rival = left_rest + right_rest + (u, v)
                new_split = split - 1
            s_own[rank] = prank(seq_own) * np1 + new_split
            s_rival[rank] = prank(seq_rival) * np1 + new_split
            left_wins[rank] = lw
            rank += 1

    for arr in (s_own, s_rival, left_wins, final):
        arr.setflags(write=False)
    return s_own, s_rival, left_wins, final


def _edge_probabilities(n: int, rule: ComparisonRule, probs: PlacementProbabilities):
    """Per-state probabilities of the own-first and rival-first edges."""
    _, _, left_wins, _ = transition_tables(n, rule)
    p_own = np.where(left_wins, probs.pL1, probs.pR1)
    p_rival = np.where(left_wins, probs.pL2, probs.pR2)
    return p_own, p_rival


def transition_probability(state, successor, probs: PlacementProbabilities, rule=ComparisonRule.STANDARD) -> float:
    """Probability of the edge state -> successor; rejects non-edges."""
    from .rules import PlacementOrder, Side, resolve_trick, trick_winner

    if state.is_final:
        raise ValueError(f"final state {state} has no outgoing edges")
    winner = trick_winner(state, rule)
    for order in PlacementOrder:
        if resolve_trick(state, order, rule) == successor:
            own = order is PlacementOrder.OWN_FIRST
            if winner is Side.LEFT:
                return probs.pL1 if own else probs.pL2
            return probs.pR1 if own else probs.pR2
    raise ValueError(f"{successor} is not a successor of {state}")


@lru_cache(maxsize=8)
def _any_final_report(n: int, rule: ComparisonRule) -> ReachabilityReport:
    return attaining_set(
        n, rule, EdgeFilter.BOTH_ORDERS, track_parents=False, sample_cap=3
    )


def _require_absorbing(n: int, rule: ComparisonRule) -> ReachabilityReport:
    report = _any_final_report(n, rule)
    if not report.is_absorbing:
        sample = report.wandering_samples[0] if report.wandering_samples else None
        raise NonAbsorbingGraphError(
            f"n={n} under rule '{rule.value}' has {report.wandering_count} wandering "
            f"states (e.g. {sample}); expected absorption times are infinite there"
        )
    return report


def equal_split_ranks(n: int) -> np.ndarray:
    """Ranks of all states with both hands holding n/2 cards."""
    np1 = n + 1
    return np.arange(_FACTORIALS[n], dtype=np.int64) * np1 + n // 2


def equal_split_distribution(n: int) -> np.ndarray:
    """Uniform distribution over the n! equal-split deals, as a full vector."""
    dist = np.zeros(state_count(n))
    dist[equal_split_ranks(n)] = 1.0 / _FACTORIALS[n]
    return dist


@dataclass(frozen=True)
class AbsorptionSolution:
    """Exact expected moves-to-absorption for every state of one chain."""

    n: int
    rule: ComparisonRule
    probs: PlacementProbabilities
    expected_steps: np.ndarray
    residual: float
    iterations: int

    @property
    def mean_equal_split(self) -> float:
        return float(self.expected_steps[equal_split_ranks(self.n)].mean())

    @property
    def max_state_expectation(self) -> float:
        return float(self.expected_steps.max())

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "rule": self.rule.value,
            "probs": self.probs.to_json_dict(),
            "mean_equal_split": self.mean_equal_split,
            "max_state_expectation": self.max_state_expectation,
            "residual": self.residual,
            "iterations": self.iterations,
        }


def expected_absorption(
    n: int,
    rule: ComparisonRule = ComparisonRule.STANDARD,
    probs: PlacementProbabilities | None = None,
    tolerance: float = 1e-10,
    max_iterations: int = 10**6,
    method: str = "auto",
) -> AbsorptionSolution:
    """Solve t = 1 + Q t over the non-final states.

    `method` is "auto" (dense below DENSE_STATE_LIMIT states, else
    iterative), "dense", or "iterative".  The iterative path runs
    Gauss-Seidel sweeps ordered by decreasing trick-winner hand size, so
    values flow backwards from nearly-finished states; `iterations` reports
    the sweep count (0 for the direct solver).
    """
    if probs is None:
        probs = PlacementProbabilities.symmetric()
    if tolerance <= 0:
        raise ValueError("tolerance must be > 0")
    if method not in ("auto", "dense", "iterative"):
        raise ValueError(f"unknown method {method!r}")
    _require_absorbing(n, rule)

    s_own, s_rival, left_wins, final = transition_tables(n, rule)
    total = state_count(n)
    p_own, p_rival = _edge_probabilities(n, rule, probs)
    nf_idx = np.flatnonzero(~final)
    if method == "auto":
        method = "dense" if total <= DENSE_STATE_LIMIT else "iterative"

    t = np.zeros(total)
    if method == "dense":
        m = len(nf_idx)
        pos = np.full(total, -1, dtype=np.int64)
        pos[nf_idx] = np.arange(m)
        a_mat = np.eye(m)
        rows = np.arange(m)
        for succ, p in ((s_own, p_own), (s_rival, p_rival)):
            cols = pos[succ[nf_idx]]
            keep = cols >= 0
            a_mat[rows[keep], cols[keep]] -= p[nf_idx][keep]
        t[nf_idx] = np.linalg.solve(a_mat, np.ones(m))
        iterations = 0
    else:
        np1 = n + 1
        splits = nf_idx % np1
        winner_hand = np.where(left_wins[nf_idx], splits, n - splits)
        order = nf_idx[np.argsort(-winner_hand, kind="stable")].tolist()
        tl = [0.0] * total
        s1l, s2l = s_own.tolist(), s_rival.tolist()
        p1l, p2l = p_own.tolist(), p_rival.tolist()
        iterations = 0
        residual = float("inf")
        while iterations < max_iterations:
            iterations += 1
            for r in order:
                tl[r] = 1.0 + p1l[r] * tl[s1l[r]] + p2l[r] * tl[s2l[r]]
            t = np.asarray(tl)
            residual = float(
                np.abs(t[nf_idx] - 1.0 - p_own[nf_idx] * t[s_own[nf_idx]] - p_rival[nf_idx] * t[s_rival[nf_idx]]).max()
            )
            if residual <= tolerance:
                break
        else:
            raise ConvergenceError(
                f"no convergence after {iterations} sweeps (residual {residual:.3e})",
                residual=residual,
                iterations=iterations,
            )

    residual = float(
        np.abs(t[nf_idx] - 1.0 - p_own[nf_idx] * t[s_own[nf_idx]] - p_rival[nf_idx] * t[s_rival[nf_idx]]).max()
    )
    t.setflags(write=False)
    return AbsorptionSolution(
        n=n, rule=rule, probs=probs, expected_steps=t, residual=residual, iterations=iterations
    )


@dataclass(frozen=True)
class TailCurve:
    """Survival probabilities p_alive(k) for one initial distribution."""

    initial_distribution: str
    points: tuple[tuple[int, float], ...]

    def to_csv_text(self) -> str:
        lines = ["k,p_alive"]
        lines.extend(f"{k},{repr(p)}" for k, p in self.points)
        return "\n".join(lines) + "\n"


def tail_probability(
    n: int,
    rule: ComparisonRule = ComparisonRule.STANDARD,
    probs: PlacementProbabilities | None = None,
    initial: np.ndarray | dict | None = None,
    ks: list[int] | None = None,
    description: str | None = None,
) -> TailCurve:
    """Exact survival curve: alive mass after k moves, for each requested k.

    `initial` is a distribution over states (full vector indexed by rank, or
    a dict keyed by rank or GameState); defaults to uniform over equal-split
    deals.  Mass is conserved to 1e-12 at every step, and mass on final
    states never moves again.
    """
    if probs is None:
        probs = PlacementProbabilities.symmetric()
    if ks is None:
        ks = list(range(0, 101))
    total = state_count(n)
    if initial is None:
        m = equal_split_distribution(n)
        if description is None:
            description = "uniform-equal-split"
    elif isinstance(initial, dict):
        m = np.zeros(total)
        for key, mass in initial.items():
            m[key if isinstance(key, int) else encode(key)] = mass
    else:
        m = np.asarray(initial, dtype=float).copy()
        if m.shape != (total,):
            raise ValueError(f"initial distribution must have length {total}")
    if abs(m.sum() - 1.0) > 1e-9:
        raise ValueError(f"initial distribution sums to {m.sum()!r}, expected 1")
    if description is None:
        description = "custom"

    s_own, s_rival, _, final = transition_tables(n, rule)
    p_own, p_rival = _edge_probabilities(n, rule, probs)
    nf_idx = np.flatnonzero(~final)
    so, sr = s_own[nf_idx], s_rival[nf_idx]
    po, pr = p_own[nf_idx], p_rival[nf_idx]

    wanted = sorted(set(ks))
    if wanted and wanted[0] < 0:
        raise ValueError("step counts must be >= 0")
    curve: dict[int, float] = {}
    step = 0
    if step in wanted:
        curve[step] = float(m[nf_idx].sum())
    for step in range(1, (wanted[-1] if wanted else 0) + 1):
        m_next = np.zeros(total)
        m_next[final] = m[final]
        src = m[nf_idx]
        np.add.at(m_next, so, src * po)
        np.add.at(m_next, sr, src * pr)
        m = m_next
        if abs(m.sum() - 1.0) > 1e-12:
            raise ArithmeticError(f"probability mass drifted to {m.sum()!r} at step {step}")
        if step in wanted:
            curve[step] = float(m[nf_idx].sum())
    return TailCurve(
        initial_distribution=description,
        points=tuple((k, curve[k]) for k in wanted),
    )


@dataclass(frozen=True)
class DecayCertificate:
    """Geometric-decay witness: from anywhere, P(absorb within N moves) >= q.

    Construction only returns after numerically re-verifying
    p_alive(kN) <= (1-q)^k for k = 1..verified_up_to against the exact
    worst-case survival curve.
    """

    N: int
    q: float
    verified_up_to: int

    def to_json_dict(self) -> dict:
        return {"N": self.N, "q": self.q, "verified_up_to": self.verified_up_to}


def decay_certificate(
    n: int,
    rule: ComparisonRule = ComparisonRule.STANDARD,
    probs: PlacementProbabilities | None = None,
    horizon: int = 200,
) -> DecayCertificate:
    """Compute the (N, q) pair and check the bound it certifies.

    N is the largest BFS distance from any state to the final set; q is the
    worst-case probability of absorbing within N moves.  The verification
    compares (1-q)^k against the survival curve maximised over all starting
    states, which dominates every initial distribution at once.
    """
    if probs is None:
        probs = PlacementProbabilities.symmetric()
    report = _require_absorbing(n, rule)
    big_n = report.max_distance

    s_own, s_rival, _, final = transition_tables(n, rule)
    p_own, p_rival = _edge_probabilities(n, rule, probs)
    nonfinal = ~final

    absorbed = final.astype(float)
    q = None
    worst_alive = [0.0] * (horizon + 1)
    worst_alive[0] = 1.0 if nonfinal.any() else 0.0
    for step in range(1, horizon + 1):
        absorbed = np.where(final, 1.0, p_own * absorbed[s_own] + p_rival * absorbed[s_rival])
        worst_alive[step] = float(1.0 - absorbed[nonfinal].min()) if nonfinal.any() else 0.0
        if step == big_n:
            q = float(absorbed[nonfinal].min()) if nonfinal.any() else 1.0
    if q is None:  # horizon shorter than N
        raise ValueError(f"horizon {horizon} is shorter than the window N={big_n}")
    if q <= 0.0:
        raise DecayBoundError(f"computed q={q!r} is not positive")

    windows = horizon // big_n if big_n > 0 else 0
    for k in range(1, windows + 1):
        bound = (1.0 - q) ** k
        if worst_alive[k * big_n] > bound + 1e-12:
            raise DecayBoundError(
                f"p_alive({k}*{big_n}) = {worst_alive[k * big_n]!r} exceeds (1-q)^{k} = {bound!r}"
            )
    return DecayCertificate(N=big_n, q=q, verified_up_to=windows)


@dataclass(frozen=True)
class MonteCarloSummary:
    """Empirical game-length statistics from seeded simulation."""

    n: int
    rule: ComparisonRule
    probs: PlacementProbabilities
    trials: int
    seed: int
    max_steps: int
    completed: int
    truncations: int
    mean: float
    variance: float
    std_error: float
    ci_half_width: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "rule": self.rule.value,
            "probs": self.probs.to_json_dict(),
            "trials": self.trials,
            "seed": self.seed,
            "completed": self.completed,
            "truncations": self.truncations,
            "mean": self.mean,
            "variance": self.variance,
            "std_error": self.std_error,
            "ci_half_width": self.ci_half_width,
        }


def _mc_chunk_counts(trials: int) -> list[int]:
    base, extra = divmod(trials, MC_CHUNKS)
    return [base + (1 if c < extra else 0) for c in range(MC_CHUNKS)]


def monte_carlo_length(
    n: int,
    rule: ComparisonRule = ComparisonRule.STANDARD,
    probs: PlacementProbabilities | None = None,
    trials: int = 10_000,
    seed: int = 0,
    max_steps: int = 10**6,
    threads: int = 1,
) -> MonteCarloSummary:
    """Simulate game lengths from uniformly random equal-split deals.

    Work is split into MC_CHUNKS substreams seeded as f"{seed}:{chunk}" and
    merged in chunk order, so the summary depends only on (seed, trials) no
    matter how many threads run the chunks.  Truncated games are counted and
    excluded from the moments, with a warning.
    """
    if probs is None:
        probs = PlacementProbabilities.symmetric()
    if trials < 1:
        raise ValueError("trials must be >= 1")
    s_own, s_rival, _, final = transition_tables(n, rule)
    p_own, _ = _edge_probabilities(n, rule, probs)
    s1l, s2l = s_own.tolist(), s_rival.tolist()
    p1l = p_own.tolist()
    finl = final.tolist()
    np1 = n + 1
    half = n // 2
    nfact = _FACTORIALS[n]

    def run_chunk(chunk: int, chunk_trials: int) -> tuple[int, float, float, int]:
        rng = random.Random(f"{seed}:{chunk}")
        rand = rng.random
        randrange = rng.randrange
        count = 0
        total = 0.0
        total_sq = 0.0
        truncated = 0
        for _ in range(chunk_trials):
            r = randrange(nfact) * np1 + half
            steps = 0
            while steps < max_steps and not finl[r]:
                r = s1l[r] if rand() < p1l[r] else s2l[r]
                steps += 1
            if finl[r]:
                count += 1
                total += steps
                total_sq += steps * steps
            else:
                truncated += 1
        return count, total, total_sq, truncated

    counts = _mc_chunk_counts(trials)
    jobs = [(c, t) for c, t in enumerate(counts) if t > 0]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda job: run_chunk(*job), jobs))
    else:
        results = [run_chunk(c, t) for c, t in jobs]

    completed = sum(r[0] for r in results)
    total = sum(r[1] for r in results)
    total_sq = sum(r[2] for r in results)
    truncations = sum(r[3] for r in results)
    if truncations:
        warnings.warn(
            f"{truncations} of {trials} games hit the {max_steps}-step cap and are "
            "excluded from the mean",
            RuntimeWarning,
            stacklevel=2,
        )
    if completed == 0:
        raise RuntimeError("every trial was truncated; raise max_steps")
    mean = total / completed
    variance = (
        (total_sq - completed * mean * mean) / (completed - 1) if completed > 1 else 0.0
    )
    variance = max(variance, 0.0)
    std_error = (variance / completed) ** 0.5
    return MonteCarloSummary(
        n=n,
        rule=rule,
        probs=probs,
        trials=trials,
        seed=seed,
        max_steps=max_steps,
        completed=completed,
        truncations=truncations,
        mean=mean,
        variance=variance,
        std_error=std_error,
        ci_half_width=1.96 * std_error,
    )
