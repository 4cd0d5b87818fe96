"""Execution semantics of communicating systems.

Configurations pair a control-state vector with FIFO channel contents.  The
default exploration uses the 1-buffer restriction: a configuration is either
stable (all channels empty) or has exactly one channel holding exactly one
message, so a send is only allowed from stable configurations.  A per-channel
k-bounded restriction is available as a generalization; the correspondence
checks in the verification oracle concern the 1-buffer semantics only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import (
    EnvironmentChannelsError,
    NotEnabledError,
    TraceStuckError,
    ValidationError,
)
from .machines import (
    ENVIRONMENT,
    LOCAL_FINALITY,
    CfsmAction,
    CommunicatingSystem,
)

Channel = tuple[str, str]

ONE_BUFFER = "1-buffer"


@dataclass(frozen=True, slots=True)
class Configuration:
    """Control-state vector plus FIFO buffer contents.

    ``buffers`` holds the non-empty channels only, sorted by channel, so two
    configurations are equal exactly when control states and channel
    contents agree.
    """

    control: tuple[str, ...]
    buffers: tuple[tuple[Channel, tuple[str, ...]], ...] = ()

    @property
    def is_stable(self) -> bool:
        return not self.buffers

    @property
    def message_count(self) -> int:
        return sum(len(word) for _, word in self.buffers)

    def buffer(self, channel: Channel) -> tuple[str, ...]:
        for chan, word in self.buffers:
            if chan == channel:
                return word
        return ()

    def with_buffer(self, channel: Channel, word: tuple[str, ...]) -> Configuration:
        rest = [(c, w) for c, w in self.buffers if c != channel]
        if word:
            rest.append((channel, word))
        return Configuration(self.control, tuple(sorted(rest)))

    def text(self) -> str:
        control = ",".join(self.control)
        if self.is_stable:
            return f"<{control}>"
        pending = " ".join(f"{c[0]}{c[1]}:{'.'.join(w)}" for c, w in self.buffers)
        return f"<{control} | {pending}>"


def initial_configuration(system: CommunicatingSystem) -> Configuration:
    return Configuration(tuple(m.initial for m in system.machines))


def is_final(system: CommunicatingSystem, config: Configuration) -> bool:
    """Final = stable and accepting under the system's finality convention."""
    if not config.is_stable:
        return False
    if system.finality.mode == LOCAL_FINALITY:
        return all(
            local in machine.accepting
            for local, machine in zip(config.control, system.machines)
        )
    return config.control in system.finality.vectors


def step(
    system: CommunicatingSystem,
    config: Configuration,
    action: CfsmAction,
    *,
    env_mode: bool = False,
) -> Configuration:
    """Fire one action under the unrestricted FIFO semantics.

    A send appends its message to the channel (environment sends are consumed
    instantaneously in environment mode); a receive consumes the head of its
    channel.  Raises NotEnabledError when the machine lacks the transition or
    the channel head does not match.
    """
    subject = action.subject
    if subject == ENVIRONMENT:
        raise NotEnabledError("the environment participant never fires")
    index = system.participants.index(subject)
    machine = system.machines[index]
    target = machine.successor(config.control[index], action)
    if target is None:
        raise NotEnabledError(
            f"machine {subject} has no transition on {action.text()} at state "
            f"{config.control[index]}"
        )
    if action.uses_environment and not env_mode:
        raise EnvironmentChannelsError(
            f"action {action.text()} uses the environment channel; enable environment mode"
        )
    control = list(config.control)
    control[index] = target
    moved = Configuration(tuple(control), config.buffers)
    if action.is_send:
        if action.receiver == ENVIRONMENT:
            return moved  # consumed instantaneously by the environment
        word = config.buffer(action.channel)
        return moved.with_buffer(action.channel, word + (action.name,))
    if action.sender == ENVIRONMENT:
        raise NotEnabledError("receives from the environment are never enabled")
    word = config.buffer(action.channel)
    if not word or word[0] != action.name:
        raise NotEnabledError(
            f"channel {action.sender}{action.receiver} does not hold {action.name!r} at its head"
        )
    return moved.with_buffer(action.channel, word[1:])


def enabled_actions(
    system: CommunicatingSystem,
    config: Configuration,
    *,
    k_bound: int | str = ONE_BUFFER,
    env_mode: bool = False,
) -> list[CfsmAction]:
    """Actions fireable at ``config`` under the chosen restriction, in
    canonical order.

    Under the 1-buffer restriction sends require a stable configuration;
    under a per-channel bound k they require the target channel to hold
    fewer than k messages.  Receives always shrink buffers and are allowed
    whenever the channel head matches.
    """
    out = []
    for index, name in enumerate(system.participants):
        machine = system.machines[index]
        for t in machine.outgoing(config.control[index]):
            action = t.action
            if action.uses_environment and not env_mode:
                continue
            if action.is_send:
                if action.receiver == ENVIRONMENT:
                    out.append(action)  # no buffer involved
                    continue
                if k_bound == ONE_BUFFER:
                    if config.is_stable:
                        out.append(action)
                elif len(config.buffer(action.channel)) < int(k_bound):
                    out.append(action)
            else:
                if action.sender == ENVIRONMENT:
                    continue  # the environment never sends
                word = config.buffer(action.channel)
                if word and word[0] == action.name:
                    out.append(action)
    return sorted(set(out), key=CfsmAction.sort_key)


def _require_explorable(system: CommunicatingSystem, env_mode: bool) -> None:
    if system.uses_environment and not env_mode:
        raise EnvironmentChannelsError(
            "system uses environment ('-') channels; rerun with environment mode on"
        )


@dataclass
class ReachabilityGraph:
    """The transition graph of all configurations reachable under the
    restriction, rooted at the initial configuration.

    Nodes are listed in BFS discovery order (canonical action order within a
    node), which makes counterexample extraction deterministic.
    """

    system: CommunicatingSystem
    k_bound: int | str
    env_mode: bool
    initial: Configuration
    nodes: list[Configuration] = field(default_factory=list)
    edges: dict[Configuration, tuple[tuple[CfsmAction, Configuration], ...]] = field(
        default_factory=dict
    )
    parent: dict[Configuration, tuple[Configuration, CfsmAction] | None] = field(
        default_factory=dict
    )
    depth: dict[Configuration, int] = field(default_factory=dict)

    def trace_to(self, config: Configuration) -> tuple[CfsmAction, ...]:
        """The BFS path from the initial configuration to ``config``."""
        actions: list[CfsmAction] = []
        node = config
        while self.parent[node] is not None:
            node, action = self.parent[node]
            actions.append(action)
        return tuple(reversed(actions))


def reachable_graph(
    system: CommunicatingSystem,
    *,
    k_bound: int | str = ONE_BUFFER,
    env_mode: bool = False,
) -> ReachabilityGraph:
    """Explore every configuration reachable under the restriction.

    Finite by construction: control states are finite and buffers hold at
    most one message (1-buffer) or k messages per channel.
    """
    if k_bound != ONE_BUFFER and (not isinstance(k_bound, int) or k_bound < 1):
        raise ValidationError("the channel bound must be a positive integer")
    _require_explorable(system, env_mode)
    start = initial_configuration(system)
    graph = ReachabilityGraph(system, k_bound, env_mode, start)
    graph.nodes.append(start)
    graph.parent[start] = None
    graph.depth[start] = 0
    queue = deque([start])
    while queue:
        config = queue.popleft()
        successors = []
        for action in enabled_actions(system, config, k_bound=k_bound, env_mode=env_mode):
            nxt = step(system, config, action, env_mode=env_mode)
            successors.append((action, nxt))
            if nxt not in graph.parent:
                graph.parent[nxt] = (config, action)
                graph.depth[nxt] = graph.depth[config] + 1
                graph.nodes.append(nxt)
                queue.append(nxt)
        graph.edges[config] = tuple(successors)
    return graph


FINAL = "final"
DEADLOCK = "deadlock"
DOOMED = "doomed"
LIVE = "live"


@dataclass(frozen=True)
class ConfigurationClasses:
    """Partition of the reachable configurations.

    final: stable with an accepting control vector.
    deadlock: not final and without successors.
    doomed: non-deadlock configurations from which no final one is reachable.
    live: the rest (every one of them can still reach a final configuration).
    """

    final: frozenset[Configuration]
    deadlock: frozenset[Configuration]
    doomed: frozenset[Configuration]
    live: frozenset[Configuration]


def classify_configurations(graph: ReachabilityGraph) -> ConfigurationClasses:
    final = {c for c in graph.nodes if is_final(graph.system, c)}
    deadlock = {c for c in graph.nodes if c not in final and not graph.edges[c]}
    # backward reachability from the final configurations
    incoming: dict[Configuration, list[Configuration]] = {c: [] for c in graph.nodes}
    for source, successors in graph.edges.items():
        for _, target in successors:
            incoming[target].append(source)
    can_finish = set(final)
    queue = deque(final)
    while queue:
        config = queue.popleft()
        for prev in incoming[config]:
            if prev not in can_finish:
                can_finish.add(prev)
                queue.append(prev)
    doomed = {c for c in graph.nodes if c not in can_finish and c not in deadlock}
    live = {c for c in graph.nodes if c in can_finish and c not in final}
    return ConfigurationClasses(
        final=frozenset(final),
        deadlock=frozenset(deadlock),
        doomed=frozenset(doomed),
        live=frozenset(live),
    )


@dataclass(frozen=True)
class SemanticsReport:
    """Verdict of a convergence or deadlock-freedom check.

    ``counterexample`` is the BFS-shortest trace to an offending
    configuration (ties broken by canonical action order), None when the
    property holds.
    """

    holds: bool
    counterexample: tuple[CfsmAction, ...] | None = None
    configurations: int = 0


def _first_bad(graph: ReachabilityGraph, bad: frozenset[Configuration]) -> Configuration:
    return next(c for c in graph.nodes if c in bad)


def is_convergent(
    system: CommunicatingSystem,
    *,
    k_bound: int | str = ONE_BUFFER,
    env_mode: bool = False,
) -> SemanticsReport:
    """Whether every reachable configuration can reach a final one."""
    graph = reachable_graph(system, k_bound=k_bound, env_mode=env_mode)
    classes = classify_configurations(graph)
    bad = classes.deadlock | classes.doomed
    if not bad:
        return SemanticsReport(holds=True, configurations=len(graph.nodes))
    witness = _first_bad(graph, bad)
    return SemanticsReport(
        holds=False,
        counterexample=graph.trace_to(witness),
        configurations=len(graph.nodes),
    )


def is_deadlock_free(
    system: CommunicatingSystem,
    *,
    k_bound: int | str = ONE_BUFFER,
    env_mode: bool = False,
) -> SemanticsReport:
    """Whether no reachable configuration is a deadlock.

    Weaker than convergence: a convergent system is always deadlock-free.
    """
    graph = reachable_graph(system, k_bound=k_bound, env_mode=env_mode)
    classes = classify_configurations(graph)
    if not classes.deadlock:
        return SemanticsReport(holds=True, configurations=len(graph.nodes))
    witness = _first_bad(graph, classes.deadlock)
    return SemanticsReport(
        holds=False,
        counterexample=graph.trace_to(witness),
        configurations=len(graph.nodes),
    )


def run_trace(
    system: CommunicatingSystem,
    trace: tuple[CfsmAction, ...] | list[CfsmAction],
    *,
    k_bound: int | str = ONE_BUFFER,
    env_mode: bool = False,
) -> Configuration:
    """Fire the trace from the initial configuration under the restriction.

    Raises TraceStuckError naming the first step whose action is not enabled
    (including sends the buffer restriction forbids).
    """
    _require_explorable(system, env_mode)
    config = initial_configuration(system)
    for index, action in enumerate(trace):
        allowed = enabled_actions(system, config, k_bound=k_bound, env_mode=env_mode)
        if action not in allowed:
            raise TraceStuckError(
                index,
                f"step {index + 1} ({action.text()}) is not enabled at {config.text()}",
            )
        config = step(system, config, action, env_mode=env_mode)
    return config
