"""Most permissive strong controller, controlled system, and liability.

The controller construction keeps only match transitions, drops every
transition touching a state from which no accepting state is reachable in the
match-only subautomaton, and trims the rest to the reachable part.  The
controlled system routes each first divergence from the controller into the
terminal sink state, and liability reads the responsible principals off those
sink transitions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import ActionVector
from .automata import ContractAutomaton, StateVector, Transition
from .errors import ValidationError

BOTTOM = "⊥"  # display name of the sink state


def match_subautomaton(a: ContractAutomaton) -> ContractAutomaton:
    """The subautomaton consisting of the match transitions only."""
    return a.restrict_transitions(lambda t: t.action.is_match)


def redundant_states(a: ContractAutomaton) -> frozenset[StateVector]:
    """States from which no accepting state of ``a`` is reachable."""
    return a.states - a.coreachable_states()


def mpc(a: ContractAutomaton) -> ContractAutomaton:
    """The most permissive strong controller of ``a``.

    Its language is exactly the set of strong agreements accepted by ``a``;
    when that set is empty the result is the bare initial state with no
    transitions.
    """
    k = match_subautomaton(a)
    redundant = redundant_states(k)
    kept = k.restrict_transitions(
        lambda t: t.source not in redundant and t.target not in redundant
    )
    return kept.trimmed()


@dataclass(frozen=True)
class ControlledSystem:
    """The controller together with the sink transitions into ``BOTTOM``.

    ``divergences`` holds the underlying automaton transitions (elements of
    T minus the controller's transitions, sourced at controller-reachable
    states); the corresponding sink transitions reroute their targets to the
    sink, which has no outgoing transitions.
    """

    controller: ContractAutomaton
    divergences: frozenset[Transition]

    def __post_init__(self) -> None:
        for t in self.divergences:
            if t.source not in self.controller.states:
                raise ValidationError(
                    "sink transitions must be sourced at controller-reachable states"
                )

    @property
    def sink_transitions(self) -> frozenset[tuple[StateVector, ActionVector, str]]:
        return frozenset((t.source, t.action, BOTTOM) for t in self.divergences)

    def sorted_divergences(self) -> list[Transition]:
        return sorted(self.divergences, key=Transition.sort_key)


def controlled_system(a: ContractAutomaton) -> ControlledSystem:
    """Controller plus one sink transition per controller-leaving move of ``a``."""
    ks = mpc(a)
    kept = ks.transitions
    divergences = frozenset(
        t for sv in ks.states for t in a.outgoing(sv) if t not in kept
    )
    return ControlledSystem(controller=ks, divergences=divergences)


def liable(cs: ControlledSystem) -> tuple[frozenset[int], frozenset[Transition]]:
    """Liable participants (1-based indices) and the transitions causing them.

    A principal is liable when it is active (non-idle) on some sink
    transition, i.e. it fires an action taking the computation away from the
    strong agreements.
    """
    participants = frozenset(
        i + 1
        for t in cs.divergences
        for i, label in enumerate(t.action)
        if not label.is_idle
    )
    return participants, cs.divergences
