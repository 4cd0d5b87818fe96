"""Standalone property suite.

Each test states one cross-cutting invariant and grinds it over the desk
examples plus seeded random instances; the module runs on its own via
``pytest tests/test_properties.py``.
"""

from __future__ import annotations

import random

from cautomata import (
    IDLE_LABEL,
    classify,
    is_convergent,
    is_deadlock_free,
    mpc,
    offer,
    product,
    project,
    reachable_graph,
    request,
)
from cautomata.cli import main
from cautomata.fileio import save_automaton
from cautomata.language import bounded_language_equal
from cautomata.oracle import generate_random_system

from desk import game_principals, quad_principals, trio_principals


def test_complement_is_an_involution_everywhere():
    rng = random.Random(3)
    names = ["a", "b", "ok", "data"]
    labels = [IDLE_LABEL] + [offer(n) for n in names] + [request(n) for n in names]
    for _ in range(300):
        label = rng.choice(labels)
        assert label.complement().complement() == label


def test_classification_is_total_and_exclusive():
    rng = random.Random(5)
    pool = [IDLE_LABEL, offer("a"), request("a"), offer("b"), request("b")]
    kinds = {"offer", "request", "match", "invalid"}
    for _ in range(600):
        labels = tuple(rng.choice(pool) for _ in range(rng.randint(1, 5)))
        verdict = classify(labels)
        assert verdict.kind in kinds
        if verdict.kind != "invalid":
            assert verdict.name


def test_controller_synthesis_is_idempotent_up_to_language():
    families = [game_principals(), trio_principals(), quad_principals()]
    families += [generate_random_system(2, 3, 2, seed) for seed in range(15)]
    for family in families:
        composed = product(list(family))
        once = mpc(composed)
        twice = mpc(once)
        equal, witness = bounded_language_equal(once, twice, 2 * len(composed.states))
        assert equal, witness


def test_convergent_systems_are_deadlock_free():
    families = [game_principals(), trio_principals(), quad_principals()]
    families += [generate_random_system(2, 3, 2, seed) for seed in range(25)]
    families += [generate_random_system(3, 3, 2, 300 + seed) for seed in range(10)]
    for family in families:
        system = project(mpc(product(list(family))))
        if is_convergent(system).holds:
            assert is_deadlock_free(system).holds


def test_every_explored_configuration_carries_at_most_one_message():
    families = [game_principals(), trio_principals(), quad_principals()]
    families += [generate_random_system(2, 3, 2, seed) for seed in range(25)]
    for family in families:
        system = project(mpc(product(list(family))))
        for config in reachable_graph(system).nodes:
            assert config.message_count <= 1


def test_reports_are_deterministic_across_runs(tmp_path, capsys):
    path = tmp_path / "game.json"
    save_automaton(product(list(game_principals())), path)
    outputs = []
    for _ in range(2):
        main(["liable", str(path), "--format", "json"])
        main(["safety", str(path), "--format", "json"])
        main(["verify", "--rank", "2", "--max-states", "3", "--trials", "15",
              "--seed", "7", "--format", "json"])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
