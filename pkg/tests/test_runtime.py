from __future__ import annotations

import pytest

from cautomata import (
    classify_configurations,
    enabled_actions,
    initial_configuration,
    is_convergent,
    is_deadlock_free,
    is_final,
    match_vector,
    mpc,
    parse_action,
    product,
    project,
    reachable_graph,
    receive,
    run_trace,
    send,
    step,
    translate_word,
)
from cautomata.errors import (
    EnvironmentChannelsError,
    NotEnabledError,
    TraceStuckError,
)
from cautomata.machines import (
    CommunicatingMachine,
    CommunicatingSystem,
    Finality,
)
from cautomata.oracle import generate_random_system

from desk import (
    environment_controller,
    game_principals,
    intermediary_principals,
    mixed_choice_diamond,
    quad_principals,
    trio_principals,
)


def quad_system():
    return project(mpc(product(list(quad_principals()))))


def trio_system():
    return project(mpc(product(list(trio_principals()))))


def game_system():
    return project(mpc(product(list(game_principals()))))


def intermediary_system():
    return project(mpc(product(list(intermediary_principals()))))


def test_step_send_then_receive():
    system = quad_system()
    start = initial_configuration(system)
    sent = step(system, start, send("A", "C", "a"))
    assert sent.buffer(("A", "C")) == ("a",)
    assert sent.control[0] == "q1"
    settled = step(system, sent, receive("A", "C", "a"))
    assert settled.is_stable
    assert settled.control[2] == "q1"


def test_step_receive_on_empty_channel_is_not_enabled():
    system = quad_system()
    with pytest.raises(NotEnabledError):
        step(system, initial_configuration(system), receive("A", "C", "a"))


def test_step_requires_the_machine_transition():
    system = quad_system()
    with pytest.raises(NotEnabledError):
        step(system, initial_configuration(system), send("C", "A", "a"))


def test_one_buffer_graph_of_an_inert_machine():
    lone = CommunicatingSystem(
        participants=("A",),
        machines=(
            CommunicatingMachine(
                states=frozenset({"q0"}),
                initial="q0",
                transitions=frozenset(),
                accepting=frozenset(),
            ),
        ),
    )
    graph = reachable_graph(lone)
    assert len(graph.nodes) == 1
    assert graph.edges[graph.initial] == ()


def test_every_explored_configuration_holds_at_most_one_message():
    for system in (quad_system(), trio_system(), game_system(), intermediary_system()):
        graph = reachable_graph(system)
        assert all(config.message_count <= 1 for config in graph.nodes)


def test_graph_size_respects_the_coarse_bound():
    for system in (quad_system(), trio_system(), game_system()):
        graph = reachable_graph(system)
        controls = 1
        for machine in system.machines:
            controls *= len(machine.states)
        channels = len(system.channels())
        names = len(system.message_names())
        assert len(graph.nodes) <= controls * (1 + channels * max(names, 1))


def test_quad_deadlock_classification():
    system = quad_system()
    trace = [send("A", "C", "a"), receive("A", "C", "a"), send("B", "C", "a")]
    config = run_trace(system, trace)
    graph = reachable_graph(system)
    classes = classify_configurations(graph)
    assert config in classes.deadlock
    assert not config.is_stable


def test_trio_system_is_doomed_after_the_early_handshake():
    system = trio_system()
    config = run_trace(system, [send("A", "B", "a"), receive("A", "B", "a")])
    graph = reachable_graph(system)
    classes = classify_configurations(graph)
    assert config in classes.doomed
    assert config not in classes.deadlock
    assert not is_convergent(system).holds
    assert is_deadlock_free(system).holds


def test_safe_branching_systems_have_no_bad_configurations():
    for family in (game_principals(), mixed_choice_diamond()):
        system = project(mpc(product(list(family))))
        classes = classify_configurations(reachable_graph(system))
        assert not classes.deadlock
        assert not classes.doomed
        assert is_convergent(system).holds


def test_quad_convergence_counterexample_is_the_shortest():
    report = is_convergent(quad_system())
    assert not report.holds
    assert [x.text() for x in report.counterexample] == ["AC!a", "AC?a", "BC!a"]


def test_intermediary_system_deadlocks():
    report = is_deadlock_free(intermediary_system())
    assert not report.holds
    final = run_trace(intermediary_system(), report.counterexample)
    assert not is_final(intermediary_system(), final)


def test_run_trace_reaches_the_stuck_buffer():
    system = intermediary_system()
    word = [
        match_vector(3, 0, 1, "a"),
        match_vector(3, 2, 1, "c"),
        match_vector(3, 1, 2, "ok"),
    ]
    trace = list(translate_word(word)) + [send("C", "A", "d")]
    config = run_trace(system, trace)
    assert config.buffer(("C", "A")) == ("d",)
    assert not config.is_stable
    assert enabled_actions(system, config) == []


def test_run_trace_empty_returns_the_initial_configuration():
    system = quad_system()
    assert run_trace(system, []) == initial_configuration(system)


def test_second_send_is_forbidden_under_one_buffer():
    system = quad_system()
    with pytest.raises(TraceStuckError) as info:
        run_trace(system, [send("A", "C", "a"), send("B", "C", "a")])
    assert info.value.step_index == 1


def test_k_bound_two_allows_the_second_send():
    system = quad_system()
    config = run_trace(system, [send("A", "C", "a"), send("B", "C", "a")], k_bound=2)
    assert config.message_count == 2


def test_final_configurations_use_the_vector_reading():
    system = trio_system()
    graph = reachable_graph(system)
    classes = classify_configurations(graph)
    for config in classes.final:
        assert config.is_stable
        assert config.control in system.finality.vectors


def test_local_finality_reading():
    lone = CommunicatingSystem(
        participants=("A",),
        machines=(
            CommunicatingMachine(
                states=frozenset({"q0"}),
                initial="q0",
                transitions=frozenset(),
                accepting=frozenset({"q0"}),
            ),
        ),
        finality=Finality("local"),
    )
    assert is_final(lone, initial_configuration(lone))
    assert is_deadlock_free(lone).holds


def test_environment_channels_require_environment_mode():
    system = project(environment_controller())
    assert system.uses_environment
    with pytest.raises(EnvironmentChannelsError):
        reachable_graph(system)
    with pytest.raises(EnvironmentChannelsError):
        run_trace(system, [send("A", "-", "b")])


def test_environment_mode_consumes_lone_offers_instantly():
    system = project(environment_controller())
    config = run_trace(system, [send("A", "-", "b")], env_mode=True)
    assert config.is_stable
    assert config.control[0] == "a1"


def test_environment_mode_still_deadlocks_the_controller():
    system = project(environment_controller())
    trace = [send("A", "-", "b"), send("B", "-", "d"), send("B", "A", "e")]
    config = run_trace(system, trace, env_mode=True)
    assert config.buffer(("B", "A")) == ("e",)
    assert enabled_actions(system, config, env_mode=True) == []
    report = is_deadlock_free(system, env_mode=True)
    assert not report.holds


def test_executions_alternate_send_and_matching_receive():
    # every 1-buffer path is a chain of completed exchanges, possibly with a
    # trailing send
    for system in (quad_system(), trio_system(), game_system()):
        graph = reachable_graph(system)

        def walk(config, pending, depth):
            if depth == 6:
                return
            for action, nxt in graph.edges[config]:
                if pending is None:
                    assert action.is_send
                    walk(nxt, action, depth + 1)
                else:
                    assert not action.is_send
                    assert action.channel == pending.channel
                    assert action.name == pending.name
                    walk(nxt, None, depth + 1)

        walk(graph.initial, None, 0)


def test_parse_action_roundtrip():
    system = quad_system()
    for machine in system.machines:
        for t in machine.transitions:
            assert parse_action(t.action.text(), system.participants) == t.action


def test_random_systems_explore_deterministically():
    for seed in range(10):
        system = project(mpc(product(generate_random_system(2, 3, 2, seed))))
        first = reachable_graph(system)
        second = reachable_graph(system)
        assert first.nodes == second.nodes
        assert first.edges == second.edges
