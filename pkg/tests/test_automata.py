from __future__ import annotations

import pytest

from cautomata import (
    automaton,
    match_vector,
    offer,
    offer_vector,
    principal,
    product,
    request,
    validate_principal,
)
from cautomata.errors import RankError, ValidationError
from cautomata.oracle import generate_random_system

from desk import game_principals
from oracles import brute_accepts, enumerate_accepted_words


def test_initial_state_must_not_be_accepting():
    with pytest.raises(ValidationError, match="initial state must not be accepting"):
        principal(["q0", "q1"], "q0", ["q0", "q1"], [("q0", offer("a"), "q1")])


def test_idle_components_must_stay_put():
    s0, s1 = ("x0", "y0"), ("x1", "y1")
    with pytest.raises(ValidationError, match="stay put"):
        automaton(2, [s0, s1], s0, [s1], [(s0, offer_vector(2, 0, "a"), s1)])


def test_nondeterminism_is_rejected():
    with pytest.raises(ValidationError, match="nondeterministic"):
        principal(
            ["q0", "q1", "q2"],
            "q0",
            ["q1"],
            [("q0", offer("a"), "q1"), ("q0", offer("a"), "q2")],
        )


def test_action_rank_must_match():
    s0, s1 = ("x0",), ("x1",)
    with pytest.raises(ValidationError, match="wrong rank"):
        automaton(1, [s0, s1], s0, [s1], [(s0, offer_vector(2, 0, "a"), s1)])


def test_transitions_must_stay_inside_the_state_set():
    s0, s1 = ("x0",), ("x1",)
    with pytest.raises(ValidationError, match="outside the state set"):
        automaton(1, [s0], s0, [], [(s0, offer_vector(1, 0, "a"), s1)])


def test_validate_principal_examples():
    alice, bob, _ = game_principals()
    assert validate_principal(alice)
    assert validate_principal(bob)  # offers b and requests a: never complementary
    both = principal(
        ["q0", "q1", "q2"],
        "q0",
        ["q2"],
        [("q0", offer("a"), "q1"), ("q1", request("a"), "q2")],
    )
    assert not validate_principal(both)


def test_validate_principal_requires_rank_one():
    prod = product(list(game_principals()))
    with pytest.raises(RankError):
        validate_principal(prod)


def test_accepts_game_words():
    prod = product(list(game_principals()))
    assert prod.accepts([match_vector(3, 0, 1, "a"), match_vector(3, 1, 2, "b")])
    assert not prod.accepts([])
    # Alice serves Carol directly, then Bob runs dry on its own
    from cautomata import request_vector

    assert prod.accepts(
        [
            match_vector(3, 0, 2, "a"),
            request_vector(3, 1, "a"),
            offer_vector(3, 1, "b"),
        ]
    )
    assert not prod.accepts([match_vector(3, 0, 1, "a")])


def test_accepts_agrees_with_path_enumeration():
    for seed in range(15):
        prod = product(generate_random_system(2, 3, 2, seed))
        words = enumerate_accepted_words(prod, 4)
        for word in words:
            assert prod.accepts(word)
            assert brute_accepts(prod, word)
        # negative probes: prefixes of accepted words and alien actions
        for word in list(words)[:20]:
            prefix = word[:-1]
            assert prod.accepts(prefix) == brute_accepts(prod, prefix)


def test_trimmed_drops_unreachable_states():
    s0, s1, orphan = ("x0",), ("x1",), ("zz",)
    a = automaton(
        1,
        [s0, s1, orphan],
        s0,
        [s1],
        [(s0, offer_vector(1, 0, "a"), s1), (orphan, offer_vector(1, 0, "b"), s1)],
    )
    trimmed = a.trimmed()
    assert trimmed.states == frozenset({s0, s1})
    assert len(trimmed.transitions) == 1
