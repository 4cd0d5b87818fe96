from __future__ import annotations

import pytest

from cautomata import product
from cautomata.errors import EmptyOperandsError
from cautomata.oracle import generate_random_system

from desk import (
    GAME_STATES,
    GAME_TRANSITIONS,
    TRIO_STATES,
    TRIO_TRANSITIONS,
    game_principals,
    mismatched_pair_principals,
    quad_principals,
    trio_principals,
)
from oracles import brute_product


def _transition_set(a):
    return {(t.source, t.action, t.target) for t in a.transitions}


def test_game_product_matches_the_frozen_derivation():
    prod = product(list(game_principals()))
    assert prod.rank == 3
    assert prod.states == frozenset(GAME_STATES)
    assert _transition_set(prod) == GAME_TRANSITIONS
    assert prod.accepting == frozenset({("q1", "q3", "q1")})


def test_game_product_initial_fires_matches_only():
    prod = product(list(game_principals()))
    initial_moves = prod.outgoing(prod.initial)
    assert len(initial_moves) == 3
    assert all(t.action.is_match for t in initial_moves)


def test_match_forcing_suppresses_lone_halves():
    prod = product(list(game_principals()))
    for t in prod.outgoing(prod.initial):
        assert not (t.action.is_offer or t.action.is_request)


def test_product_of_one_principal_is_the_principal():
    _, bob, _ = game_principals()
    assert product([bob]) == bob


def test_trio_product_matches_the_frozen_derivation():
    prod = product(list(trio_principals()))
    assert prod.states == frozenset(TRIO_STATES)
    assert _transition_set(prod) == TRIO_TRANSITIONS


def test_quad_product_emits_one_match_per_qualifying_pair():
    prod = product(list(quad_principals()))
    assert len(prod.states) == 6
    assert len(prod.transitions) == 8
    assert len(prod.outgoing(prod.initial)) == 4  # A/B each serve C/D
    assert all(t.action.is_match for t in prod.transitions)


def test_unmatchable_principals_interleave_freely():
    prod = product(list(mismatched_pair_principals()))
    assert len(prod.states) == 4
    assert all(not t.action.is_match for t in prod.transitions)


def test_empty_operands_is_an_error():
    with pytest.raises(EmptyOperandsError):
        product([])


def test_product_agrees_with_the_literal_case_analysis():
    for seed in range(40):
        family = generate_random_system(2, 4, 2, seed)
        assert product(family) == brute_product(family)
    for seed in range(20):
        family = generate_random_system(3, 3, 3, 500 + seed)
        assert product(family) == brute_product(family)


def test_desk_products_agree_with_the_literal_case_analysis():
    for family in (game_principals(), trio_principals(), quad_principals()):
        assert product(list(family)) == brute_product(list(family))
