"""Bounded language utilities for deterministic contract automata.

Two tools: explicit enumeration of accepted words up to a length bound (only
viable on desk-sized automata) and a synchronized pair walk that decides
whether two deterministic automata accept the same words up to a bound,
returning the shortest distinguishing word otherwise.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .actions import ActionVector
from .automata import ContractAutomaton, StateVector

Word = tuple[ActionVector, ...]


def accepted_words(a: ContractAutomaton, max_len: int) -> set[Word]:
    """All accepted words of length <= ``max_len``, by explicit path search."""
    found: set[Word] = set()

    def walk(sv: StateVector, prefix: Word) -> None:
        if sv in a.accepting and prefix:
            found.add(prefix)
        if len(prefix) == max_len:
            return
        for t in a.outgoing(sv):
            walk(t.target, prefix + (t.action,))

    # the empty word is accepted by no valid automaton (initial not accepting)
    walk(a.initial, ())
    return found


def strong_agreements(words: Iterable[Word]) -> set[Word]:
    """The subset made only of match actions (non-empty by construction)."""
    return {w for w in words if w and all(v.is_match for v in w)}


def bounded_language_equal(
    a: ContractAutomaton, b: ContractAutomaton, max_len: int
) -> tuple[bool, Word | None]:
    """Whether the two automata accept the same words up to ``max_len``.

    Walks the synchronized pair graph breadth-first; because both automata
    are deterministic, each word reaches a unique state pair, so the visited
    set makes the walk exhaustive without enumerating paths.  Returns the
    shortest distinguishing word (canonical action order) when they differ.
    """
    DEAD = None
    start = (a.initial, b.initial)
    parent: dict = {start: None}
    queue: deque = deque([(start, 0)])
    while queue:
        (pa, pb), depth = queue.popleft()
        acc_a = pa is not DEAD and pa in a.accepting
        acc_b = pb is not DEAD and pb in b.accepting
        if acc_a != acc_b:
            word: list[ActionVector] = []
            node = (pa, pb)
            while parent[node] is not None:
                node, action = parent[node]
                word.append(action)
            return False, tuple(reversed(word))
        if depth == max_len:
            continue
        actions = set()
        if pa is not DEAD:
            actions.update(t.action for t in a.outgoing(pa))
        if pb is not DEAD:
            actions.update(t.action for t in b.outgoing(pb))
        for action in sorted(actions, key=ActionVector.sort_key):
            qa = a.successor(pa, action) if pa is not DEAD else DEAD
            qb = b.successor(pb, action) if pb is not DEAD else DEAD
            nxt = (qa, qb)
            if nxt not in parent:
                parent[nxt] = ((pa, pb), action)
                queue.append((nxt, depth + 1))
    return True, None
