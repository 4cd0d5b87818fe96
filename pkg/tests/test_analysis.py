from __future__ import annotations

import pytest

from cautomata import (
    admits_strong_agreement,
    automaton,
    branching_condition,
    is_strongly_safe,
    match_vector,
    mixed_choice_states,
    mpc,
    offer_vector,
    product,
    rcv,
    request_vector,
    snd,
)
from cautomata.errors import ShapeError
from cautomata.oracle import generate_random_system

from desk import (
    empty_language_principal,
    game_principals,
    intermediary_principals,
    looping_safe_automaton,
    mixed_choice_diamond,
    mixed_choice_pair,
    offer_only_automaton,
    quad_principals,
    trio_principals,
)
from oracles import brute_branching_holds


def test_snd_and_rcv_read_positions_off_the_tuple():
    assert snd(match_vector(3, 0, 1, "a")) == 1
    assert rcv(match_vector(3, 0, 1, "a")) == 2
    assert snd(match_vector(3, 1, 2, "b")) == 2
    assert rcv(request_vector(3, 2, "c")) == 3
    assert snd(offer_vector(3, 0, "b")) == 1


def test_snd_and_rcv_reject_the_wrong_shapes():
    with pytest.raises(ShapeError):
        snd(request_vector(2, 0, "a"))
    with pytest.raises(ShapeError):
        rcv(offer_vector(2, 0, "a"))


def test_game_product_is_not_strongly_safe():
    assert not is_strongly_safe(product(list(game_principals())))


def test_mpc_is_always_strongly_safe():
    for family in (game_principals(), trio_principals(), quad_principals()):
        assert is_strongly_safe(mpc(product(list(family))))


def test_looping_automaton_is_strongly_safe():
    assert is_strongly_safe(looping_safe_automaton())


def test_safety_ignores_useless_branches():
    # an offer transition outside every accepting path does not spoil safety
    s0, s1, dead = ("x0", "y0"), ("x1", "y1"), ("x2", "y0")
    a = automaton(
        2,
        [s0, s1, dead],
        s0,
        [s1],
        [(s0, match_vector(2, 0, 1, "a"), s1), (s0, offer_vector(2, 0, "b"), dead)],
    )
    assert is_strongly_safe(a)


def test_admits_strong_agreement_examples():
    assert admits_strong_agreement(product(list(game_principals())))
    assert not admits_strong_agreement(offer_only_automaton())
    assert not admits_strong_agreement(empty_language_principal())


def test_strong_safety_relates_to_admission():
    for a in (looping_safe_automaton(), product(list(quad_principals()))):
        assert is_strongly_safe(a)
        assert admits_strong_agreement(a) == bool(a.accepting)
    empty = empty_language_principal()
    assert is_strongly_safe(empty)  # the empty language is vacuously safe
    assert not admits_strong_agreement(empty)


def test_trio_product_has_the_branching_condition():
    assert branching_condition(product(list(trio_principals()))).holds


def test_trio_mpc_branching_witness():
    report = branching_condition(mpc(product(list(trio_principals()))))
    assert not report.holds
    enabled_at, missing_at, action = report.witness
    assert action == match_vector(3, 0, 1, "a")
    # the sender's component in the witness is participant 1's initial local state
    assert enabled_at[0] == "q0"
    assert missing_at == ("q0", "q0", "q0")
    assert enabled_at == ("q0", "q2", "q3")


def test_game_mpc_has_the_branching_condition():
    assert branching_condition(mpc(product(list(game_principals())))).holds


def test_quad_mpc_lacks_the_branching_condition():
    assert not branching_condition(mpc(product(list(quad_principals())))).holds


def test_intermediary_controller_lacks_the_branching_condition():
    ks = mpc(product(list(intermediary_principals())))
    report = branching_condition(ks)
    assert not report.holds
    enabled_at, missing_at, action = report.witness
    # the witness pins two states sharing the sender's local state
    assert enabled_at[action.offer_pos] == missing_at[action.offer_pos]


def test_branching_is_reflexive_on_single_state_automata():
    s0 = ("u0", "u0")
    lone = automaton(2, [s0, ("u1", "u1")], s0, [("u1", "u1")], [])
    assert branching_condition(lone).holds


def test_branching_agrees_with_the_double_loop():
    for seed in range(40):
        prod = product(generate_random_system(2, 3, 2, seed))
        assert branching_condition(prod).holds == brute_branching_holds(prod)
        ks = mpc(prod)
        assert branching_condition(ks).holds == brute_branching_holds(ks)


def test_mixed_choice_examples():
    pair = product(list(mixed_choice_pair()))
    assert pair.initial in mixed_choice_states(pair)
    diamond = product(list(mixed_choice_diamond()))
    assert diamond.initial in mixed_choice_states(diamond)
    assert mixed_choice_states(product(list(quad_principals()))) == frozenset()


def test_single_polarity_states_are_never_mixed():
    from desk import mismatched_pair_principals

    prod = product(list(mismatched_pair_principals()))
    assert mixed_choice_states(prod) == frozenset()


def test_mixed_choice_flags_the_trading_states_of_the_game():
    # Bob both requests a and offers b while at its initial local state
    prod = product(list(game_principals()))
    assert prod.initial in mixed_choice_states(prod)
