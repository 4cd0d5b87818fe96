"""Labels and action vectors of contract automata.

A label is one principal's move: an offer ``!a``, a request ``?a``, or the
idle placeholder ``-``.  An action vector is a rank-n tuple of labels and is
well formed only if it is a request action (exactly one request, rest idle),
an offer action (exactly one offer, rest idle), or a match action (one offer
and one request on the same name, rest idle).  Malformed vectors are rejected
at construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ValidationError

OFFER = "offer"
REQUEST = "request"
IDLE = "idle"

REQUEST_ACTION = "request"
OFFER_ACTION = "offer"
MATCH_ACTION = "match"
INVALID_ACTION = "invalid"


@dataclass(frozen=True, slots=True)
class Label:
    """One principal's move: an offer, a request, or the idle placeholder."""

    kind: str
    name: str = ""

    def __post_init__(self) -> None:
        if self.kind not in (OFFER, REQUEST, IDLE):
            raise ValidationError(f"label kind must be offer, request, or idle, got {self.kind!r}")
        if self.kind == IDLE and self.name:
            raise ValidationError("idle labels carry no name")
        if self.kind != IDLE and not self.name:
            raise ValidationError(f"{self.kind} labels carry a non-empty name")

    @property
    def is_idle(self) -> bool:
        return self.kind == IDLE

    @property
    def is_offer(self) -> bool:
        return self.kind == OFFER

    @property
    def is_request(self) -> bool:
        return self.kind == REQUEST

    def complement(self) -> Label:
        """The involution: offers and requests swap, idle is a fixpoint."""
        if self.kind == OFFER:
            return Label(REQUEST, self.name)
        if self.kind == REQUEST:
            return Label(OFFER, self.name)
        return self

    def text(self) -> str:
        """ASCII rendering: ``!a`` offer, ``?a`` request, ``-`` idle."""
        if self.kind == OFFER:
            return f"!{self.name}"
        if self.kind == REQUEST:
            return f"?{self.name}"
        return "-"

    def sort_key(self) -> tuple[str, str]:
        return (self.kind, self.name)


IDLE_LABEL = Label(IDLE)


def offer(name: str) -> Label:
    return Label(OFFER, name)


def request(name: str) -> Label:
    return Label(REQUEST, name)


@dataclass(frozen=True, slots=True)
class Classification:
    """Result of classifying a label tuple: kind plus the action name."""

    kind: str
    name: str = ""

    @property
    def is_valid(self) -> bool:
        return self.kind != INVALID_ACTION


def classify(labels: Sequence[Label]) -> Classification:
    """Classify a label tuple as a request, offer, or match action.

    Exactly one of the three shapes fits a well-formed vector; anything else
    (all idle, two offers, mismatched names, ...) is invalid.
    """
    offers = [(i, l) for i, l in enumerate(labels) if l.is_offer]
    requests = [(i, l) for i, l in enumerate(labels) if l.is_request]
    if len(offers) == 1 and not requests:
        return Classification(OFFER_ACTION, offers[0][1].name)
    if len(requests) == 1 and not offers:
        return Classification(REQUEST_ACTION, requests[0][1].name)
    if len(offers) == 1 and len(requests) == 1 and offers[0][1].name == requests[0][1].name:
        return Classification(MATCH_ACTION, offers[0][1].name)
    return Classification(INVALID_ACTION)


@dataclass(frozen=True, slots=True)
class ActionVector:
    """A well-formed rank-n action: request, offer, or match.

    Construction fails eagerly on any tuple that fits none of the three
    shapes.  The classification and the 0-based offer/request positions are
    cached on the instance; equality and hashing use the labels only.
    """

    labels: tuple[Label, ...]
    kind: str = field(init=False, compare=False)
    name: str = field(init=False, compare=False)
    offer_pos: int | None = field(init=False, compare=False)
    request_pos: int | None = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValidationError("an action vector must have rank >= 1")
        verdict = classify(self.labels)
        if not verdict.is_valid:
            raise ValidationError(
                "action vector "
                f"({','.join(l.text() for l in self.labels)}) "
                "is neither a request, an offer, nor a match action"
            )
        object.__setattr__(self, "kind", verdict.kind)
        object.__setattr__(self, "name", verdict.name)
        object.__setattr__(self, "offer_pos", next(
            (i for i, l in enumerate(self.labels) if l.is_offer), None))
        object.__setattr__(self, "request_pos", next(
            (i for i, l in enumerate(self.labels) if l.is_request), None))

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def is_match(self) -> bool:
        return self.kind == MATCH_ACTION

    @property
    def is_offer(self) -> bool:
        return self.kind == OFFER_ACTION

    @property
    def is_request(self) -> bool:
        return self.kind == REQUEST_ACTION

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, index: int) -> Label:
        return self.labels[index]

    def text(self) -> str:
        return "(" + ",".join(l.text() for l in self.labels) + ")"

    def sort_key(self) -> tuple[tuple[str, str], ...]:
        return tuple(l.sort_key() for l in self.labels)


def vector(*labels: Label) -> ActionVector:
    return ActionVector(tuple(labels))


def offer_vector(rank: int, pos: int, name: str) -> ActionVector:
    """Offer action of the given rank with the offer at 0-based ``pos``."""
    return ActionVector(tuple(offer(name) if i == pos else IDLE_LABEL for i in range(rank)))


def request_vector(rank: int, pos: int, name: str) -> ActionVector:
    """Request action of the given rank with the request at 0-based ``pos``."""
    return ActionVector(tuple(request(name) if i == pos else IDLE_LABEL for i in range(rank)))


def match_vector(rank: int, offer_pos: int, request_pos: int, name: str) -> ActionVector:
    """Match action on ``name`` with offer and request at 0-based positions."""
    if offer_pos == request_pos:
        raise ValidationError("a match action needs distinct offer and request positions")
    labels = [IDLE_LABEL] * rank
    labels[offer_pos] = offer(name)
    labels[request_pos] = request(name)
    return ActionVector(tuple(labels))


def complementary(v1: ActionVector | Iterable[Label], v2: ActionVector | Iterable[Label]) -> bool:
    """Whether two actions can handshake: equal length, one an offer on some
    name and the other a request on the same name.

    This is the pairing the product uses to force matches; it is symmetric,
    and match actions never complement anything.
    """
    l1 = tuple(v1)
    l2 = tuple(v2)
    if len(l1) != len(l2):
        return False
    c1 = classify(l1)
    c2 = classify(l2)
    if c1.name != c2.name:
        return False
    return {c1.kind, c2.kind} == {OFFER_ACTION, REQUEST_ACTION}
