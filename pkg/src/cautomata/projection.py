"""Translation of contract automata into communicating systems.

Each participant keeps its own component of every transition it is involved
in: the offering side of a match becomes a send, the requesting side the
matching receive, and unmatched offers/requests become exchanges with the
anonymous environment participant ``-``.  Words of the automaton translate
into channel-action sequences the same way, with each match expanded into its
send immediately followed by its receive.
"""

from __future__ import annotations

from collections import deque
from string import ascii_uppercase
from typing import Iterable, Sequence

from .actions import ActionVector, Label, classify
from .automata import ContractAutomaton
from .errors import UndefinedTranslationError, ValidationError
from .machines import (
    ENVIRONMENT,
    VECTOR_FINALITY,
    CfsmAction,
    CommunicatingMachine,
    CommunicatingSystem,
    Finality,
    MachineTransition,
    receive,
    send,
)


def default_participants(rank: int) -> tuple[str, ...]:
    """Positional names: A, B, C, ... for rank <= 26, else P1..Pn."""
    if rank <= 26:
        return tuple(ascii_uppercase[:rank])
    return tuple(f"P{i + 1}" for i in range(rank))


def translate_action(
    v: ActionVector, p: int, participants: Sequence[str] | None = None
) -> CfsmAction | None:
    """The channel action participant ``p`` (1-based) contributes to ``v``.

    Matches translate to a send for the offerer and a receive for the
    requester; lone offers send to the environment, lone requests receive
    from it.  Uninvolved participants contribute nothing (None).
    """
    names = tuple(participants) if participants is not None else default_participants(v.rank)
    p0 = p - 1
    if v.is_match:
        i, j = v.offer_pos, v.request_pos
        if p0 == i:
            return send(names[i], names[j], v.name)
        if p0 == j:
            return receive(names[i], names[j], v.name)
        return None
    if v.is_offer:
        if p0 == v.offer_pos:
            return send(names[p0], ENVIRONMENT, v.name)
        return None
    if p0 == v.request_pos:
        return receive(ENVIRONMENT, names[p0], v.name)
    return None


def project(
    a: ContractAutomaton, participants: Sequence[str] | None = None
) -> CommunicatingSystem:
    """Translate ``a`` into a communicating system, one machine per principal.

    Machine p has the p-components of the automaton states (unreachable
    locals trimmed) and one transition per automaton transition p takes part
    in.  The system carries the automaton's accepting state vectors as its
    finality, so a configuration counts as final exactly when its control
    vector was accepting in the source.
    """
    names = tuple(participants) if participants is not None else default_participants(a.rank)
    if len(names) != a.rank:
        raise ValidationError("one participant name per principal is required")
    machines = []
    for p in range(1, a.rank + 1):
        p0 = p - 1
        moves: dict[str, list[MachineTransition]] = {}
        for t in a.transitions:
            action = translate_action(t.action, p, names)
            if action is None:
                continue
            moves.setdefault(t.source[p0], []).append(
                MachineTransition(t.source[p0], action, t.target[p0])
            )
        initial = a.initial[p0]
        kept = {initial}
        queue = deque([initial])
        transitions = []
        while queue:
            local = queue.popleft()
            for mt in moves.get(local, []):
                transitions.append(mt)
                if mt.target not in kept:
                    kept.add(mt.target)
                    queue.append(mt.target)
        accepting = {sv[p0] for sv in a.accepting} & kept
        machines.append(
            CommunicatingMachine(
                states=frozenset(kept),
                initial=initial,
                transitions=frozenset(transitions),
                accepting=frozenset(accepting),
            )
        )
    return CommunicatingSystem(
        participants=names,
        machines=tuple(machines),
        finality=Finality(VECTOR_FINALITY, vectors=frozenset(a.accepting)),
    )


def translate_word(
    word: Iterable[ActionVector | Sequence[Label]],
    participants: Sequence[str] | None = None,
) -> tuple[CfsmAction, ...]:
    """The channel-action sequence of a word of actions.

    Each match contributes its send directly followed by its receive; lone
    offers and requests contribute their single environment action.  Raw
    label tuples that fit none of the action shapes are rejected.
    """
    out: list[CfsmAction] = []
    for element in word:
        if isinstance(element, ActionVector):
            v = element
        else:
            labels = tuple(element)
            if not classify(labels).is_valid:
                raise UndefinedTranslationError(
                    "word element "
                    f"({','.join(l.text() for l in labels)}) is not a request, offer, or match action"
                )
            v = ActionVector(labels)
        names = tuple(participants) if participants is not None else default_participants(v.rank)
        if v.is_match:
            out.append(send(names[v.offer_pos], names[v.request_pos], v.name))
            out.append(receive(names[v.offer_pos], names[v.request_pos], v.name))
        elif v.is_offer:
            out.append(send(names[v.offer_pos], ENVIRONMENT, v.name))
        else:
            out.append(receive(ENVIRONMENT, names[v.request_pos], v.name))
    return tuple(out)
