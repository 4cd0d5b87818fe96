"""Decision procedures on contract automata.

Strong safety, admitting a strong agreement, the branching condition, the
sender/receiver projections of an action, and mixed-choice detection.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .actions import ActionVector
from .automata import ContractAutomaton, StateVector
from .errors import ShapeError


def snd(v: ActionVector) -> int:
    """1-based index of the offering participant of a match or offer action."""
    if v.offer_pos is None:
        raise ShapeError("snd is defined on match and offer actions only")
    return v.offer_pos + 1


def rcv(v: ActionVector) -> int:
    """1-based index of the requesting participant of a match or request action."""
    if v.request_pos is None:
        raise ShapeError("rcv is defined on match and request actions only")
    return v.request_pos + 1


def is_strongly_safe(a: ContractAutomaton) -> bool:
    """Whether every accepted word is a strong agreement.

    Decided structurally: restrict to states both reachable and co-reachable;
    the language is contained in the strong agreements iff every surviving
    transition is a match.  (The empty word is excluded by the automaton
    invariant that the initial state is not accepting.)
    """
    reach = a.reachable_states()
    core = a.coreachable_states()
    useful = reach & core
    return all(
        t.action.is_match
        for t in a.transitions
        if t.source in useful and t.target in useful
    )


def offending_transition(a: ContractAutomaton):
    """The smallest non-match transition on an accepting path, if any."""
    reach = a.reachable_states()
    core = a.coreachable_states()
    useful = reach & core
    bad = [
        t for t in a.transitions
        if not t.action.is_match and t.source in useful and t.target in useful
    ]
    return min(bad, key=lambda t: t.sort_key()) if bad else None


def admits_strong_agreement(a: ContractAutomaton) -> bool:
    """Whether some accepting state is reachable through match actions only."""
    seen = {a.initial}
    queue = deque([a.initial])
    while queue:
        sv = queue.popleft()
        for t in a.outgoing(sv):
            if not t.action.is_match or t.target in seen:
                continue
            if t.target in a.accepting:
                return True
            seen.add(t.target)
            queue.append(t.target)
    return False


@dataclass(frozen=True)
class BranchingReport:
    """Outcome of the branching-condition check.

    On failure, ``enabled_at`` is a reachable state where the match
    ``action`` is enabled, and ``missing_at`` a reachable state agreeing with
    it on the sender's component where the match is not enabled.
    """

    holds: bool
    enabled_at: StateVector | None = None
    missing_at: StateVector | None = None
    action: ActionVector | None = None

    @property
    def witness(self) -> tuple[StateVector, StateVector, ActionVector] | None:
        if self.holds:
            return None
        return (self.enabled_at, self.missing_at, self.action)


def branching_condition(a: ContractAutomaton) -> BranchingReport:
    """Whether a match enabled somewhere is enabled everywhere its sender is
    in the same local state.

    Quantifies over reachable states and match actions only.  On failure the
    witness is the lexicographically smallest violating triple under the
    canonical state and action ordering.
    """
    reachable = sorted(a.reachable_states())
    enabled: dict[StateVector, set[ActionVector]] = {
        sv: {t.action for t in a.outgoing(sv) if t.action.is_match} for sv in reachable
    }
    violations = []
    for q1 in reachable:
        for action in enabled[q1]:
            sender = action.offer_pos
            for q2 in reachable:
                if q2[sender] == q1[sender] and action not in enabled[q2]:
                    violations.append((q1, q2, action))
    if not violations:
        return BranchingReport(holds=True)
    q1, q2, action = min(violations, key=lambda v: (v[0], v[1], v[2].sort_key()))
    return BranchingReport(holds=False, enabled_at=q1, missing_at=q2, action=action)


def mixed_choice_states(a: ContractAutomaton) -> frozenset[StateVector]:
    """Reachable states where some participant has both an offer branch and a
    request branch."""
    mixed = set()
    for sv in a.reachable_states():
        transitions = a.outgoing(sv)
        for i in range(a.rank):
            kinds = {t.action[i].kind for t in transitions if not t.action[i].is_idle}
            if len(kinds) == 2:
                mixed.add(sv)
                break
    return frozenset(mixed)
