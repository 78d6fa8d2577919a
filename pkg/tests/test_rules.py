"""Trick resolution, successor/predecessor duality, and deal text format."""

import itertools

import pytest

from wargraph import (
    ComparisonRule,
    GameState,
    PlacementOrder,
    Side,
    compare,
    enumerate_states,
    format_state,
    parse_state,
    predecessor_edges,
    predecessors,
    resolve_trick,
    successors,
    trick_winner,
)

STANDARD = ComparisonRule.STANDARD
CYCLIC = ComparisonRule.CYCLIC_LOW_BEATS_HIGH


def S(left, right):
    return GameState(tuple(left), tuple(right))


class TestCompare:
    def test_standard_is_max(self):
        assert compare(5, 3, STANDARD, n=6) == 5
        assert compare(3, 5, STANDARD, n=6) == 5

    def test_cyclic_low_beats_high_only_on_extremal_pair(self):
        for n in (2, 4, 6):
            assert compare(1, n, CYCLIC, n=n) == 1
            assert compare(n, 1, CYCLIC, n=n) == 1
        assert compare(2, 3, CYCLIC, n=4) == 3

    def test_cyclic_non_extremal_falls_back_to_max(self):
        for u, v in itertools.combinations(range(1, 7), 2):
            if {u, v} != {1, 6}:
                assert compare(u, v, CYCLIC, n=6) == max(u, v)

    def test_total_and_antisymmetric(self):
        for rule in (STANDARD, CYCLIC):
            for u, v in itertools.permutations(range(1, 7), 2):
                w = compare(u, v, rule, n=6)
                assert w in (u, v)
                assert w == compare(v, u, rule, n=6)

    def test_equal_values_rejected(self):
        with pytest.raises(ValueError):
            compare(3, 3, STANDARD, n=6)


class TestResolveTrick:
    def test_forced_single_trick_game(self):
        out = resolve_trick(S([2], [1]), PlacementOrder.OWN_FIRST, STANDARD)
        assert out == S([2, 1], [])
        assert out.is_final

    def test_rival_first_places_rival_card_deeper(self):
        out = resolve_trick(S([3, 1], [2, 4]), PlacementOrder.RIVAL_FIRST, STANDARD)
        assert out == S([1, 2, 3], [4])

    def test_own_first_places_own_card_deeper(self):
        out = resolve_trick(S([3, 1], [2, 4]), PlacementOrder.OWN_FIRST, STANDARD)
        assert out == S([1, 3, 2], [4])

    def test_cyclic_variant_one_beats_top(self):
        out = resolve_trick(S([1, 2], [4, 3]), PlacementOrder.OWN_FIRST, CYCLIC)
        assert out == S([2, 1, 4], [3])

    def test_final_state_rejected(self):
        with pytest.raises(ValueError):
            resolve_trick(S([1, 2], []), PlacementOrder.OWN_FIRST, STANDARD)

    def test_deck_conservation_and_hand_size_shift(self):
        for state in enumerate_states(4):
            if state.is_final:
                continue
            for order in PlacementOrder:
                out = resolve_trick(state, order, STANDARD)
                assert sorted(out.left + out.right) == sorted(state.left + state.right)
                assert abs(len(out.left) - len(state.left)) == 1

    def test_winner_gains_both_cards_at_bottom(self):
        state = S([5, 1, 3], [6, 2, 4])
        out = resolve_trick(state, PlacementOrder.OWN_FIRST, STANDARD)
        # right's 6 beats left's 5; right keeps its tail then gains [6, 5]
        assert out == S([1, 3], [2, 4, 6, 5])
        out = resolve_trick(state, PlacementOrder.RIVAL_FIRST, STANDARD)
        assert out == S([1, 3], [2, 4, 5, 6])


class TestTrickWinner:
    def test_matches_compare_on_top_cards(self):
        for state in enumerate_states(4):
            if state.is_final:
                continue
            for rule in (STANDARD, CYCLIC):
                winner = trick_winner(state, rule)
                tops = {Side.LEFT: state.left[0], Side.RIGHT: state.right[0]}
                assert tops[winner] == compare(state.left[0], state.right[0], rule, n=4)


class TestSuccessors:
    def test_two_distinct_successors_everywhere(self):
        for n in (2, 4):
            for state in enumerate_states(n):
                if state.is_final:
                    continue
                for rule in (STANDARD, CYCLIC):
                    a, b = successors(state, rule)
                    assert a != b

    def test_single_card_hands_give_two_final_states(self):
        assert set(successors(S([2], [1]), STANDARD)) == {S([2, 1], []), S([1, 2], [])}

    def test_both_orders_of_collected_pair(self):
        assert set(successors(S([3, 1], [2, 4]), STANDARD)) == {
            S([1, 3, 2], [4]),
            S([1, 2, 3], [4]),
        }


class TestPredecessors:
    def test_single_predecessor_when_one_hand_short(self):
        assert predecessors(S([1, 3, 2], [4]), STANDARD) == [S([3, 1], [2, 4])]

    def test_count_follows_hand_sizes(self):
        for state in enumerate_states(4):
            expected = (len(state.left) >= 2) + (len(state.right) >= 2)
            assert len(predecessors(state, STANDARD)) == expected

    def test_two_single_card_hands_have_no_predecessor(self):
        assert predecessors(S([1], [2]), STANDARD) == []

    def test_round_trip_through_resolve(self):
        for n in (2, 4):
            for rule in (STANDARD, CYCLIC):
                for state in enumerate_states(n):
                    if state.is_final:
                        continue
                    for order in PlacementOrder:
                        out = resolve_trick(state, order, rule)
                        assert state in predecessors(out, rule)

    def test_every_predecessor_reaches_state_forward(self):
        for rule in (STANDARD, CYCLIC):
            for state in enumerate_states(4):
                for pred in predecessors(state, rule):
                    assert state in successors(pred, rule)

    def test_edges_carry_correct_winner_and_order(self):
        for rule in (STANDARD, CYCLIC):
            for state in enumerate_states(4):
                for edge in predecessor_edges(state, rule):
                    assert trick_winner(edge.state, rule) == edge.winner
                    assert resolve_trick(edge.state, edge.order, rule) == state


class TestHighestCardConservation:
    def test_card_n_never_changes_hands_under_standard(self):
        for n in (4, 6):
            for state in enumerate_states(n):
                if state.is_final:
                    continue
                holder_left = n in state.left
                for succ in successors(state, STANDARD):
                    assert (n in succ.left) == holder_left


class TestGameState:
    def test_validation_rejects_bad_partitions(self):
        with pytest.raises(ValueError):
            S([1, 1], [2, 4]).validate()
        with pytest.raises(ValueError):
            S([1, 2], [3]).validate()  # odd total
        with pytest.raises(ValueError):
            S([0, 1], [2, 3]).validate()

    def test_winner_defined_only_when_final(self):
        assert S([1, 2], []).winner == Side.LEFT
        assert S([], [1, 2]).winner == Side.RIGHT
        assert S([1], [2]).winner is None


class TestDealText:
    def test_round_trip_all_states(self):
        for state in enumerate_states(4):
            assert parse_state(format_state(state)) == state

    def test_canonical_forms(self):
        assert format_state(S([3, 1], [2, 4])) == "L: 3 1 ; R: 2 4"
        assert format_state(S([1, 2], [])) == "L: 1 2 ; R: -"
        assert parse_state("L: - ; R: 2 1") == S([], [2, 1])

    def test_malformed_text_rejected(self):
        for bad in ("", "L: 1 2", "L: 1 x ; R: 2", "R: 1 ; L: 2", "L: 1 1 ; R: 2 4"):
            with pytest.raises(ValueError):
                parse_state(bad)
