"""State-graph analysis, absorption certificates and simulation for War.

The model game deals a single ordered deck 1..n to two players; each trick
compares top cards and the winner collects both, placing them at the bottom
of their hand in one of two orders.  This package enumerates the full state
graph of that game, proves (or refutes) that every state can reach a final
one, computes exact expected game lengths under probabilistic placement,
certifies geometric tail decay, finds deals that cycle forever under
deterministic placement, and simulates the classic 52-card game with wars.
"""

from .classic import (
    ClassicCard,
    ClassicMonteCarloSummary,
    ClassicState,
    ExhaustionRule,
    GameRecord,
    Suit,
    ValueCycleCheck,
    WarConfig,
    format_classic_deal,
    monte_carlo_classic,
    parse_classic_deal,
    random_deal,
    resolve_classic_trick,
    simulate_classic,
    standard_deck,
    verify_value_cycle,
)
from .cycles import (
    Cycle,
    CycleCertificate,
    DeterministicPolicy,
    Terminated,
    Truncated,
    TwoOutcomeCertificate,
    find_cycles,
    simulate_policy,
    two_outcome_deals,
    verify_cycle,
)
from .graph import (
    DegreeAudit,
    EdgeFilter,
    GameGraph,
    PathWitness,
    ReachabilityReport,
    WanderingStateError,
    WinnerTarget,
    attaining_set,
    degree_audit,
    path_to_final,
    subgraph_monotonicity,
    wandering_closure_check,
)
from .markov import (
    AbsorptionSolution,
    ConvergenceError,
    DecayBoundError,
    DecayCertificate,
    MonteCarloSummary,
    NonAbsorbingGraphError,
    PlacementProbabilities,
    TailCurve,
    decay_certificate,
    equal_split_distribution,
    expected_absorption,
    monte_carlo_length,
    tail_probability,
    transition_probability,
)
from .rules import (
    ComparisonRule,
    DeckSpec,
    GameState,
    PlacementOrder,
    PredecessorEdge,
    Side,
    compare,
    format_state,
    parse_state,
    predecessor_edges,
    predecessors,
    resolve_trick,
    successors,
    trick_winner,
)
from .state_space import (
    MAX_N,
    StateSpaceStats,
    decode,
    encode,
    enumerate_states,
    permutation_rank,
    permutation_unrank,
    state_count,
    stats,
)

__version__ = "0.1.0"

__all__ = [
    "AbsorptionSolution",
    "ClassicCard",
    "ClassicMonteCarloSummary",
    "ClassicState",
    "ComparisonRule",
    "ConvergenceError",
    "Cycle",
    "CycleCertificate",
    "DecayBoundError",
    "DecayCertificate",
    "DeckSpec",
    "DegreeAudit",
    "DeterministicPolicy",
    "EdgeFilter",
    "ExhaustionRule",
    "GameGraph",
    "GameRecord",
    "GameState",
    "MAX_N",
    "MonteCarloSummary",
    "NonAbsorbingGraphError",
    "PathWitness",
    "PlacementOrder",
    "PlacementProbabilities",
    "PredecessorEdge",
    "ReachabilityReport",
    "Side",
    "StateSpaceStats",
    "Suit",
    "TailCurve",
    "Terminated",
    "Truncated",
    "TwoOutcomeCertificate",
    "ValueCycleCheck",
    "WanderingStateError",
    "WarConfig",
    "WinnerTarget",
    "attaining_set",
    "compare",
    "decay_certificate",
    "decode",
    "degree_audit",
    "encode",
    "enumerate_states",
    "equal_split_distribution",
    "expected_absorption",
    "find_cycles",
    "format_classic_deal",
    "format_state",
    "monte_carlo_classic",
    "monte_carlo_length",
    "parse_classic_deal",
    "parse_state",
    "path_to_final",
    "permutation_rank",
    "permutation_unrank",
    "predecessor_edges",
    "predecessors",
    "random_deal",
    "resolve_classic_trick",
    "resolve_trick",
    "simulate_classic",
    "simulate_policy",
    "standard_deck",
    "state_count",
    "stats",
    "subgraph_monotonicity",
    "successors",
    "tail_probability",
    "transition_probability",
    "trick_winner",
    "two_outcome_deals",
    "verify_cycle",
    "verify_value_cycle",
    "wandering_closure_check",
]
