"""The contract-automaton data model.

A contract automaton of rank n runs over tuple states (one component per
principal) and action vectors.  Validation happens once, at construction:
every transition must be a request, offer, or match action of the right rank,
idle components must not move, the automaton must be deterministic, and the
initial state must not be accepting (the empty word is never an agreement).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .actions import ActionVector, Label
from .errors import RankError, ValidationError

StateVector = tuple[str, ...]


@dataclass(frozen=True, slots=True)
class Transition:
    """One transition: source state, action vector, target state."""

    source: StateVector
    action: ActionVector
    target: StateVector

    def sort_key(self):
        return (self.source, self.action.sort_key(), self.target)

    def text(self) -> str:
        return f"{','.join(self.source)} --{self.action.text()}--> {','.join(self.target)}"


@dataclass(frozen=True)
class ContractAutomaton:
    """A rank-n contract automaton over tuple states.

    ``states`` may contain states unreachable from ``initial``; composition
    and synthesis always return trimmed automata, but hand-built inputs are
    accepted as long as the invariants hold.
    """

    rank: int
    states: frozenset[StateVector]
    initial: StateVector
    accepting: frozenset[StateVector]
    transitions: frozenset[Transition]

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValidationError("rank must be a positive integer")
        if self.initial not in self.states:
            raise ValidationError("initial state must be one of the automaton states")
        if not self.accepting <= self.states:
            raise ValidationError("accepting states must be a subset of the states")
        if self.initial in self.accepting:
            raise ValidationError("initial state must not be accepting")
        for sv in self.states:
            if len(sv) != self.rank:
                raise ValidationError(f"state {sv} does not have rank {self.rank}")
        successors: dict[tuple[StateVector, ActionVector], StateVector] = {}
        outgoing: dict[StateVector, list[Transition]] = {sv: [] for sv in self.states}
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise ValidationError(f"transition {t.text()} uses a state outside the state set")
            if t.action.rank != self.rank:
                raise ValidationError(f"transition {t.text()} has an action of the wrong rank")
            for i, label in enumerate(t.action):
                if label.is_idle and t.source[i] != t.target[i]:
                    raise ValidationError(
                        f"transition {t.text()}: participant {i + 1} is idle and must stay put"
                    )
            key = (t.source, t.action)
            if key in successors and successors[key] != t.target:
                raise ValidationError(
                    f"nondeterministic: two transitions from {t.source} on {t.action.text()}"
                )
            successors[key] = t.target
            outgoing[t.source].append(t)
        for sv in outgoing:
            outgoing[sv].sort(key=Transition.sort_key)
        object.__setattr__(self, "_successors", successors)
        object.__setattr__(self, "_outgoing", outgoing)

    def outgoing(self, sv: StateVector) -> list[Transition]:
        """Transitions leaving ``sv``, in canonical order."""
        return self._outgoing.get(sv, [])

    def successor(self, sv: StateVector, action: ActionVector) -> StateVector | None:
        """The unique target of ``(sv, action)``, or None if not enabled."""
        return self._successors.get((sv, action))

    def accepts(self, word: Sequence[ActionVector]) -> bool:
        """Whether the word drives the automaton from initial to accepting."""
        current = self.initial
        for action in word:
            nxt = self.successor(current, action)
            if nxt is None:
                return False
            current = nxt
        return current in self.accepting

    def reachable_states(self) -> frozenset[StateVector]:
        seen = {self.initial}
        queue = deque([self.initial])
        while queue:
            sv = queue.popleft()
            for t in self.outgoing(sv):
                if t.target not in seen:
                    seen.add(t.target)
                    queue.append(t.target)
        return frozenset(seen)

    def coreachable_states(self, targets: Iterable[StateVector] | None = None) -> frozenset[StateVector]:
        """States from which some target (default: accepting) state is reachable."""
        goal = frozenset(self.accepting if targets is None else targets)
        incoming: dict[StateVector, list[StateVector]] = {sv: [] for sv in self.states}
        for t in self.transitions:
            incoming[t.target].append(t.source)
        seen = set(goal & self.states)
        queue = deque(seen)
        while queue:
            sv = queue.popleft()
            for prev in incoming[sv]:
                if prev not in seen:
                    seen.add(prev)
                    queue.append(prev)
        return frozenset(seen)

    def restrict_transitions(self, keep: Callable[[Transition], bool]) -> ContractAutomaton:
        """Same states and acceptance, transitions filtered by ``keep``."""
        return ContractAutomaton(
            rank=self.rank,
            states=self.states,
            initial=self.initial,
            accepting=self.accepting,
            transitions=frozenset(t for t in self.transitions if keep(t)),
        )

    def trimmed(self) -> ContractAutomaton:
        """Restriction to the states reachable from the initial state."""
        reach = self.reachable_states()
        return ContractAutomaton(
            rank=self.rank,
            states=reach,
            initial=self.initial,
            accepting=self.accepting & reach,
            transitions=frozenset(t for t in self.transitions if t.source in reach),
        )

    def alphabet(self) -> list[ActionVector]:
        """Distinct action vectors on transitions, in canonical order."""
        return sorted({t.action for t in self.transitions}, key=ActionVector.sort_key)

    def sorted_states(self) -> list[StateVector]:
        return sorted(self.states)

    def sorted_transitions(self) -> list[Transition]:
        return sorted(self.transitions, key=Transition.sort_key)


def automaton(
    rank: int,
    states: Iterable[StateVector],
    initial: StateVector,
    accepting: Iterable[StateVector],
    transitions: Iterable[tuple[StateVector, ActionVector, StateVector]],
) -> ContractAutomaton:
    """Convenience constructor from plain iterables."""
    return ContractAutomaton(
        rank=rank,
        states=frozenset(states),
        initial=initial,
        accepting=frozenset(accepting),
        transitions=frozenset(Transition(s, a, t) for s, a, t in transitions),
    )


def principal(
    states: Iterable[str],
    initial: str,
    accepting: Iterable[str],
    transitions: Iterable[tuple[str, Label, str]],
) -> ContractAutomaton:
    """Build a rank-1 automaton from local state names and labels.

    The principal property is not enforced here; ``validate_principal`` is
    the diagnostic for it (contracts in the wild do occasionally both offer
    and request the same name on different branches).
    """
    return ContractAutomaton(
        rank=1,
        states=frozenset((s,) for s in states),
        initial=(initial,),
        accepting=frozenset((s,) for s in accepting),
        transitions=frozenset(
            Transition((s,), ActionVector((label,)), (t,)) for s, label, t in transitions
        ),
    )


def validate_principal(a: ContractAutomaton) -> bool:
    """Whether a rank-1 automaton satisfies the principal property.

    No two of its transitions may carry complementary labels, i.e. a
    principal never both offers and requests the same action name.
    """
    if a.rank != 1:
        raise RankError(f"a principal has rank 1, got rank {a.rank}")
    actions = {t.action for t in a.transitions}
    offered = {v.name for v in actions if v.is_offer}
    requested = {v.name for v in actions if v.is_request}
    return not (offered & requested)
