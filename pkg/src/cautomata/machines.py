"""Communicating finite-state machines and systems.

A machine is a finite automaton over channel actions ``pq!a`` (p sends a to
q) and ``pq?a`` (q receives a from p).  A system is one machine per
participant plus the finality convention: either per-machine accepting
states, or an explicit set of accepting control-state vectors carried over
from the contract automaton the system was projected from.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ParseError, ValidationError

ENVIRONMENT = "-"

SEND = "send"
RECEIVE = "receive"

LOCAL_FINALITY = "local"
VECTOR_FINALITY = "vector"


@dataclass(frozen=True, slots=True)
class CfsmAction:
    """A channel action: ``sender receiver ! name`` or ``sender receiver ? name``.

    A send on channel pq is fired by p, a receive by q; the environment
    participant ``-`` never fires.
    """

    sender: str
    receiver: str
    polarity: str
    name: str

    def __post_init__(self) -> None:
        if self.polarity not in (SEND, RECEIVE):
            raise ValidationError(f"polarity must be send or receive, got {self.polarity!r}")
        if not self.name:
            raise ValidationError("channel actions carry a non-empty message name")
        if self.sender == self.receiver:
            raise ValidationError("channels connect two distinct endpoints")

    @property
    def channel(self) -> tuple[str, str]:
        return (self.sender, self.receiver)

    @property
    def is_send(self) -> bool:
        return self.polarity == SEND

    @property
    def subject(self) -> str:
        """The participant that fires this action."""
        return self.sender if self.is_send else self.receiver

    @property
    def uses_environment(self) -> bool:
        return ENVIRONMENT in (self.sender, self.receiver)

    def text(self) -> str:
        mark = "!" if self.is_send else "?"
        return f"{self.sender}{self.receiver}{mark}{self.name}"

    def sort_key(self):
        return (self.sender, self.receiver, 0 if self.is_send else 1, self.name)


def send(sender: str, receiver: str, name: str) -> CfsmAction:
    return CfsmAction(sender, receiver, SEND, name)


def receive(sender: str, receiver: str, name: str) -> CfsmAction:
    return CfsmAction(sender, receiver, RECEIVE, name)


def parse_action(text: str, participants: Iterable[str]) -> CfsmAction:
    """Parse ``AB!a`` / ``AB?a`` against the declared participant names.

    The channel part is split by matching declared names (or ``-``); the
    split must be unique, otherwise the text is rejected.
    """
    for mark, polarity in (("!", SEND), ("?", RECEIVE)):
        if mark in text:
            channel_part, _, name = text.partition(mark)
            break
    else:
        raise ParseError(0, f"action {text!r} has neither '!' nor '?'")
    if not name:
        raise ParseError(0, f"action {text!r} has no message name")
    endpoints = list(participants) + [ENVIRONMENT]
    splits = [
        (s, channel_part[len(s):])
        for s in endpoints
        if channel_part.startswith(s) and channel_part[len(s):] in endpoints
    ]
    splits = [(s, r) for s, r in splits if s != r]
    if not splits:
        raise ParseError(0, f"channel {channel_part!r} does not name two participants")
    if len(splits) > 1:
        raise ParseError(0, f"channel {channel_part!r} is ambiguous: {splits}")
    sender_name, receiver_name = splits[0]
    return CfsmAction(sender_name, receiver_name, polarity, name)


@dataclass(frozen=True, slots=True)
class MachineTransition:
    source: str
    action: CfsmAction
    target: str

    def sort_key(self):
        return (self.source, self.action.sort_key(), self.target)

    def text(self) -> str:
        return f"{self.source} --{self.action.text()}--> {self.target}"


@dataclass(frozen=True)
class CommunicatingMachine:
    """One participant's automaton over channel actions.

    Deterministic in the weak sense: a source state and a full action
    determine the target (two sends of different names from one state are
    fine).
    """

    states: frozenset[str]
    initial: str
    transitions: frozenset[MachineTransition]
    accepting: frozenset[str]

    def __post_init__(self) -> None:
        if self.initial not in self.states:
            raise ValidationError("machine initial state must be one of its states")
        if not self.accepting <= self.states:
            raise ValidationError("machine accepting states must be a subset of its states")
        successors: dict[tuple[str, CfsmAction], str] = {}
        outgoing: dict[str, list[MachineTransition]] = {s: [] for s in self.states}
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise ValidationError(f"machine transition {t.text()} uses an unknown state")
            key = (t.source, t.action)
            if key in successors and successors[key] != t.target:
                raise ValidationError(
                    f"nondeterministic machine: two transitions from {t.source} on {t.action.text()}"
                )
            successors[key] = t.target
            outgoing[t.source].append(t)
        for s in outgoing:
            outgoing[s].sort(key=MachineTransition.sort_key)
        object.__setattr__(self, "_successors", successors)
        object.__setattr__(self, "_outgoing", outgoing)

    def outgoing(self, state: str) -> list[MachineTransition]:
        return self._outgoing.get(state, [])

    def successor(self, state: str, action: CfsmAction) -> str | None:
        return self._successors.get((state, action))

    def sorted_transitions(self) -> list[MachineTransition]:
        return sorted(self.transitions, key=MachineTransition.sort_key)


@dataclass(frozen=True)
class Finality:
    """How final configurations are recognized.

    ``local``: every machine sits on one of its own accepting states.
    ``vector``: the control-state vector is one of the listed vectors
    (carried over from the source contract automaton's accepting states).
    """

    mode: str
    vectors: frozenset[tuple[str, ...]] = frozenset()

    def __post_init__(self) -> None:
        if self.mode not in (LOCAL_FINALITY, VECTOR_FINALITY):
            raise ValidationError(f"finality mode must be local or vector, got {self.mode!r}")
        if self.mode == LOCAL_FINALITY and self.vectors:
            raise ValidationError("local finality carries no vectors")


LOCAL = Finality(LOCAL_FINALITY)


@dataclass(frozen=True)
class CommunicatingSystem:
    """A tuple of machines exchanging messages over FIFO channels."""

    participants: tuple[str, ...]
    machines: tuple[CommunicatingMachine, ...]
    finality: Finality = LOCAL

    def __post_init__(self) -> None:
        if len(self.participants) != len(self.machines):
            raise ValidationError("one machine per participant is required")
        if len(set(self.participants)) != len(self.participants):
            raise ValidationError("participant names must be distinct")
        for name in self.participants:
            if not name or name == ENVIRONMENT:
                raise ValidationError("participant names must be non-empty and not '-'")
        allowed = set(self.participants) | {ENVIRONMENT}
        for name, machine in zip(self.participants, self.machines):
            for t in machine.transitions:
                if t.action.sender not in allowed or t.action.receiver not in allowed:
                    raise ValidationError(
                        f"machine {name}: action {t.action.text()} uses an undeclared participant"
                    )
                if t.action.subject != name:
                    raise ValidationError(
                        f"machine {name}: action {t.action.text()} is fired by {t.action.subject}"
                    )
        if self.finality.mode == VECTOR_FINALITY:
            for v in self.finality.vectors:
                if len(v) != len(self.participants):
                    raise ValidationError("accepting vectors must have one component per participant")

    def machine(self, name: str) -> CommunicatingMachine:
        return self.machines[self.participants.index(name)]

    def channels(self) -> list[tuple[str, str]]:
        """All ordered pairs of distinct participants, in canonical order."""
        return [
            (p, q) for p in self.participants for q in self.participants if p != q
        ]

    @property
    def uses_environment(self) -> bool:
        return any(
            t.action.uses_environment for m in self.machines for t in m.transitions
        )

    def message_names(self) -> list[str]:
        return sorted({t.action.name for m in self.machines for t in m.transitions})
