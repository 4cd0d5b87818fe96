"""Cross-checks of the controller/choreography correspondence.

Every check replays a claimed property of the synthesis pipeline on one
concrete automaton: the controller accepts exactly the strong agreements of
the composition, controller runs replay verbatim in the projected system,
executable agreement traces are runs of the composition, convergence
coincides with the branching condition, and traces that get stuck correspond
to runs through liable transitions.  A seeded generator produces random
principal families so the checks double as a regression battery.

The run-quantified statements are checked by memoized breadth-first search
over states (or configuration/state pairs) instead of enumerating paths; by
induction over run length this covers every run up to the requested depth
without the exponential path blow-up of loopy controllers.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .actions import Label, ActionVector, OFFER, REQUEST, match_vector
from .analysis import admits_strong_agreement, branching_condition
from .automata import ContractAutomaton, Transition, principal
from .composition import product
from .errors import NotEnabledError
from .language import bounded_language_equal
from .machines import CfsmAction, receive, send
from .projection import project
from .runtime import (
    Configuration,
    classify_configurations,
    enabled_actions,
    initial_configuration,
    is_convergent,
    reachable_graph,
    step,
)
from .synthesis import controlled_system, match_subautomaton, mpc

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"

NO_AGREEMENT = "controller admits no strong agreement; statement out of scope"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check: PASS, FAIL with violations, or SKIPPED."""

    name: str
    status: str
    violations: tuple[str, ...] = ()
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS


def _result(name: str, violations: list[str]) -> CheckResult:
    if violations:
        return CheckResult(name, FAIL, tuple(violations))
    return CheckResult(name, PASS)


def check_controller_language(a: ContractAutomaton, depth: int) -> CheckResult:
    """The controller accepts exactly the all-match words of ``a``.

    Compares the controller against the match-only subautomaton (whose
    language is the strong agreements of ``a`` by construction) with a
    bounded synchronized walk.
    """
    equal, witness = bounded_language_equal(mpc(a), match_subautomaton(a), depth)
    if equal:
        return CheckResult("controller-language", PASS)
    word = "".join(v.text() for v in witness)
    return CheckResult(
        "controller-language",
        FAIL,
        (f"controller and match-word language differ on {word or 'the empty word'}",),
    )


def check_run_replay(a: ContractAutomaton, depth: int) -> CheckResult:
    """Every controller run replays in the projected system.

    A controller run that ends in state q leaves the system in the stable
    configuration whose control vector is q, so it suffices to replay every
    controller transition from its source-induced configuration.
    """
    ks = mpc(a)
    system = project(ks)
    names = system.participants
    violations: list[str] = []
    depths = {ks.initial: 0}
    queue = deque([ks.initial])
    while queue:
        sv = queue.popleft()
        if depths[sv] >= depth:
            continue
        for t in ks.outgoing(sv):
            i, j = t.action.offer_pos, t.action.request_pos
            pair = (send(names[i], names[j], t.action.name),
                    receive(names[i], names[j], t.action.name))
            config = Configuration(sv)
            try:
                for action in pair:
                    config = step(system, config, action)
            except NotEnabledError as exc:
                violations.append(f"run step {t.text()} does not replay: {exc}")
                continue
            if config.control != t.target or not config.is_stable:
                violations.append(
                    f"run step {t.text()} replays to {config.text()} instead of its target"
                )
            if t.target not in depths:
                depths[t.target] = depths[sv] + 1
                queue.append(t.target)
    return _result("run-replay", violations)


def _match_of(action: CfsmAction, rank: int, names: tuple[str, ...]) -> ActionVector:
    return match_vector(
        rank, names.index(action.sender), names.index(action.receiver), action.name
    )


def check_trace_admission(a: ContractAutomaton, depth: int) -> CheckResult:
    """Every executable agreement trace of the projected system is a run of ``a``.

    Walks the stable-step graph of the system (one completed send/receive
    exchange at a time) while tracking the state the corresponding word
    reaches in ``a``; a missing transition refutes the statement.
    """
    ks = mpc(a)
    system = project(ks)
    names = system.participants
    violations: list[str] = []
    start = (initial_configuration(system), a.initial)
    depths = {(start[0].control, start[1]): 0}
    queue = deque([start])
    while queue:
        config, sv = queue.popleft()
        level = depths[(config.control, sv)]
        if level >= depth:
            continue
        for action in enabled_actions(system, config):
            if not action.is_send:
                continue
            in_flight = step(system, config, action)
            reply = receive(action.sender, action.receiver, action.name)
            if reply not in enabled_actions(system, in_flight):
                continue  # incomplete exchange; covered by the liability check
            settled = step(system, in_flight, reply)
            match = _match_of(action, a.rank, names)
            target = a.successor(sv, match)
            if target is None:
                violations.append(
                    f"executable exchange {action.text()}.{reply.text()} has no "
                    f"transition {match.text()} from {','.join(sv)}"
                )
                continue
            key = (settled.control, target)
            if key not in depths:
                depths[key] = level + 1
                queue.append((settled, target))
    return _result("trace-admission", violations)


def check_convergence_criterion(a: ContractAutomaton) -> CheckResult:
    """Convergence of the projected controller iff the controller has the
    branching condition.

    Skipped when the controller admits no strong agreement: its projection
    cannot move at all, so the correspondence degenerates.
    """
    if not admits_strong_agreement(a):
        return CheckResult("convergence-criterion", SKIPPED, reason=NO_AGREEMENT)
    ks = mpc(a)
    branching = branching_condition(ks)
    convergence = is_convergent(project(ks))
    if branching.holds == convergence.holds:
        return CheckResult("convergence-criterion", PASS)
    trace = ",".join(x.text() for x in convergence.counterexample or ())
    witness = branching.witness
    detail = (
        f"branching={branching.holds} convergent={convergence.holds}"
        + (f" branching-witness={witness}" if witness else "")
        + (f" trace={trace}" if trace else "")
    )
    return CheckResult("convergence-criterion", FAIL, (detail,))


def check_liability_coverage(a: ContractAutomaton, depth: int) -> CheckResult:
    """Stuck or hopeless system runs pass through liable transitions.

    Deadlock-reaching executions are checked only under the branching
    condition of ``a`` (the statement's hypothesis; reported SKIPPED
    otherwise), while executions reaching a stable configuration from which
    no final configuration is reachable are checked unconditionally.
    The converse is not claimed: runs through liable transitions may well
    avoid deadlocks.
    """
    if not admits_strong_agreement(a):
        return CheckResult("liability-coverage", SKIPPED, reason=NO_AGREEMENT)
    ks = mpc(a)
    cs = controlled_system(a)
    liable_set = cs.divergences
    system = project(ks)
    names = system.participants
    deadlock_check = branching_condition(a).holds
    graph = reachable_graph(system)
    classes = classify_configurations(graph)
    violations: list[str] = []

    start = (initial_configuration(system), a.initial, False)
    seen = {(start[0], start[1], start[2]): 0}
    queue = deque([start])

    def scold(config: Configuration, kind: str) -> None:
        violations.append(
            f"{kind} configuration {config.text()} reachable without traversing "
            "a liable transition"
        )

    while queue:
        config, sv, flagged = queue.popleft()
        level = seen[(config, sv, flagged)]
        is_deadlock = config in classes.deadlock
        if is_deadlock and deadlock_check:
            culpable = flagged
            if not config.is_stable:
                # extend the run by the match pending on the single buffer
                (channel, word), = config.buffers
                match = match_vector(
                    a.rank, names.index(channel[0]), names.index(channel[1]), word[0]
                )
                target = a.successor(sv, match)
                if target is None:
                    violations.append(
                        f"pending match {match.text()} at deadlock {config.text()} "
                        f"is no transition of the composition"
                    )
                    continue
                culpable = flagged or Transition(sv, match, target) in liable_set
            if not culpable:
                scold(config, "deadlock")
        if config in classes.doomed and config.is_stable and not flagged:
            scold(config, "doomed")
        if level >= depth:
            continue
        for action, nxt in graph.edges[config]:
            if action.is_send:
                entry = (nxt, sv, flagged)
            else:
                match = _match_of(action, a.rank, names)
                target = a.successor(sv, match)
                if target is None:
                    continue  # already reported by the completeness check
                entry = (nxt, target, flagged or Transition(sv, match, target) in liable_set)
            if entry not in seen:
                seen[entry] = level + 1
                queue.append(entry)
    result = _result("liability-coverage", violations)
    if result.passed and not deadlock_check:
        return CheckResult(
            "liability-coverage",
            PASS,
            reason="deadlock clause skipped: composition lacks the branching condition",
        )
    return result


def generate_random_system(
    rank: int, max_states: int, max_actions: int, seed: int
) -> list[ContractAutomaton]:
    """A deterministic family of random principals.

    Each principal fixes one polarity per action name (so the principal
    property holds by construction), draws 1..max_states states, and keeps
    its initial state non-accepting.  Identical arguments reproduce the
    identical family.
    """
    if not 2 <= rank <= 4:
        raise ValueError("rank must be between 2 and 4")
    if not 2 <= max_states <= 5:
        raise ValueError("max_states must be between 2 and 5")
    if not 1 <= max_actions <= 4:
        raise ValueError("max_actions must be between 1 and 4")
    rng = random.Random(seed)
    pool = ("a", "b", "c", "d")[:max_actions]
    principals = []
    for _ in range(rank):
        # bias away from inert single-state principals and toward forward
        # progress, so a healthy share of products admits an agreement
        count = max(rng.randint(1, max_states), rng.randint(1, max_states))
        states = [f"q{i}" for i in range(count)]
        polarity = {name: rng.choice((OFFER, REQUEST)) for name in pool}
        transitions = []
        for position, state in enumerate(states):
            for name in pool:
                if rng.random() < 0.85:
                    if position + 1 < count and rng.random() < 0.7:
                        target = states[rng.randrange(position + 1, count)]
                    else:
                        target = states[rng.randrange(count)]
                    transitions.append((state, Label(polarity[name], name), target))
        accepting = [state for state in states[1:] if rng.random() < 0.5]
        if count > 1 and not accepting:
            accepting = [states[-1]]
        principals.append(principal(states, states[0], accepting, transitions))
    return principals


CHECKS = (
    "controller-language",
    "run-replay",
    "trace-admission",
    "convergence-criterion",
    "liability-coverage",
)


@dataclass
class VerificationReport:
    """Aggregated outcome of a randomized verification run."""

    trials: int
    seed: int
    rank: int
    max_states: int
    max_actions: int
    depth: int | None
    passed: dict[str, int] = field(default_factory=dict)
    failed: dict[str, int] = field(default_factory=dict)
    skipped: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)
    states: int = 0
    transitions: int = 0
    configs: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def tally(self, trial_seed: int, result: CheckResult) -> None:
        bucket = {
            PASS: self.passed,
            FAIL: self.failed,
            SKIPPED: self.skipped,
        }[result.status]
        bucket[result.name] = bucket.get(result.name, 0) + 1
        for violation in result.violations:
            self.violations.append(f"seed {trial_seed}: {result.name}: {violation}")


def run_verification(
    rank: int,
    max_states: int,
    trials: int,
    seed: int,
    depth: int | None = None,
    max_actions: int = 2,
) -> VerificationReport:
    """Run every check on ``trials`` random families; seeds are consecutive."""
    report = VerificationReport(
        trials=trials,
        seed=seed,
        rank=rank,
        max_states=max_states,
        max_actions=max_actions,
        depth=depth,
    )
    for trial in range(trials):
        trial_seed = seed + trial
        composed = product(generate_random_system(rank, max_states, max_actions, trial_seed))
        bound = depth if depth is not None else 2 * len(composed.states)
        report.states += len(composed.states)
        report.transitions += len(composed.transitions)
        report.configs += len(reachable_graph(project(mpc(composed))).nodes)
        for result in (
            check_controller_language(composed, bound),
            check_run_replay(composed, bound),
            check_trace_admission(composed, bound),
            check_convergence_criterion(composed),
            check_liability_coverage(composed, bound),
        ):
            report.tally(trial_seed, result)
    return report
