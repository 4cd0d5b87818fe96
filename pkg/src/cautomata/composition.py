"""Product of contract automata.

The product interleaves the operands' transitions but forces a handshake
whenever two operands are in states ready to fire complementary actions: the
pair becomes a match transition, and the corresponding stand-alone request or
offer transitions are suppressed.  Several qualifying pairs yield one match
transition each.  Only the part reachable from the initial state is built.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .actions import IDLE_LABEL, ActionVector, complementary
from .automata import ContractAutomaton, StateVector, Transition
from .errors import EmptyOperandsError


def product(operands: Sequence[ContractAutomaton]) -> ContractAutomaton:
    """The n-ary product of the operands, trimmed to reachable states.

    The result has rank ``sum of operand ranks``; its initial state is the
    concatenation of the operand initials and a composite state is accepting
    when every slice is accepting in its operand.  Determinism of the result
    is re-validated by construction of the returned automaton.
    """
    if not operands:
        raise EmptyOperandsError("product requires at least one operand")
    rank = sum(op.rank for op in operands)
    offsets = []
    at = 0
    for op in operands:
        offsets.append(at)
        at += op.rank

    def slice_of(sv: StateVector, i: int) -> StateVector:
        return sv[offsets[i]:offsets[i] + operands[i].rank]

    def compose_action(sv: StateVector, moves: list[tuple[int, Transition]]) -> tuple[ActionVector, StateVector]:
        labels = [IDLE_LABEL] * rank
        target = list(sv)
        for i, t in moves:
            base = offsets[i]
            for k, label in enumerate(t.action):
                labels[base + k] = label
            target[base:base + operands[i].rank] = t.target
        return ActionVector(tuple(labels)), tuple(target)

    initial = tuple(c for op in operands for c in op.initial)
    states: set[StateVector] = {initial}
    transitions: set[Transition] = set()
    queue = deque([initial])
    while queue:
        sv = queue.popleft()
        enabled = [operands[i].outgoing(slice_of(sv, i)) for i in range(len(operands))]
        targets: list[StateVector] = []
        for i in range(len(operands)):
            for ti in enabled[i]:
                # forced matches with every later operand ready to handshake
                for j in range(i + 1, len(operands)):
                    for tj in enabled[j]:
                        if complementary(ti.action, tj.action):
                            action, target = compose_action(sv, [(i, ti), (j, tj)])
                            transitions.add(Transition(sv, action, target))
                            targets.append(target)
                # the lone transition survives only if nobody can handshake
                if not any(
                    complementary(ti.action, tj.action)
                    for j in range(len(operands))
                    if j != i
                    for tj in enabled[j]
                ):
                    action, target = compose_action(sv, [(i, ti)])
                    transitions.add(Transition(sv, action, target))
                    targets.append(target)
        for target in targets:
            if target not in states:
                states.add(target)
                queue.append(target)

    accepting = frozenset(
        sv for sv in states
        if all(slice_of(sv, i) in operands[i].accepting for i in range(len(operands)))
    )
    return ContractAutomaton(
        rank=rank,
        states=frozenset(states),
        initial=initial,
        accepting=accepting,
        transitions=frozenset(transitions),
    )
