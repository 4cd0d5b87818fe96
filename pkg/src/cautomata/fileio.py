"""Canonical file formats and DOT export.

Automata and systems are stored as JSON with a fixed field order, sorted
states and transitions, and two-space indentation, so saving the same object
twice is byte-identical and load(save(x)) reproduces x structurally.  The
idle label is rendered as kind "idle" with no name; state ``bot`` never
appears in files (sink transitions leave their target implicit).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .actions import IDLE_LABEL, ActionVector, Label
from .automata import ContractAutomaton, StateVector, Transition
from .errors import ParseError, ValidationError
from .machines import (
    LOCAL_FINALITY,
    VECTOR_FINALITY,
    CfsmAction,
    CommunicatingMachine,
    CommunicatingSystem,
    Finality,
    MachineTransition,
)
from .runtime import ReachabilityGraph, classify_configurations
from .synthesis import BOTTOM, ControlledSystem


def _label_to_json(label: Label) -> dict:
    if label.is_idle:
        return {"kind": "idle"}
    return {"kind": label.kind, "name": label.name}


def _label_from_json(obj: object) -> Label:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError(0, "each label is an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "idle":
        if "name" in obj:
            raise ParseError(0, "idle labels carry no name")
        return IDLE_LABEL
    if kind in ("offer", "request"):
        name = obj.get("name")
        if not isinstance(name, str) or not name:
            raise ParseError(0, f"{kind} labels carry a non-empty 'name'")
        return Label(kind, name)
    raise ParseError(0, f"unknown label kind {kind!r}")


def automaton_to_json(a: ContractAutomaton, participants: Sequence[str] | None = None) -> dict:
    doc: dict = {"rank": a.rank}
    if participants is not None:
        doc["participants"] = list(participants)
    doc["states"] = [list(sv) for sv in a.sorted_states()]
    doc["initial"] = list(a.initial)
    doc["accepting"] = [list(sv) for sv in sorted(a.accepting)]
    doc["transitions"] = [
        {
            "from": list(t.source),
            "labels": [_label_to_json(l) for l in t.action],
            "to": list(t.target),
        }
        for t in a.sorted_transitions()
    ]
    return doc


def _state_from_json(obj: object, what: str) -> StateVector:
    if not isinstance(obj, list) or not all(isinstance(c, str) for c in obj):
        raise ParseError(0, f"{what} must be an array of state-name strings")
    return tuple(obj)


def automaton_from_json(doc: object) -> tuple[ContractAutomaton, tuple[str, ...] | None]:
    if not isinstance(doc, dict):
        raise ParseError(0, "an automaton file holds a JSON object")
    for key in ("rank", "states", "initial", "accepting", "transitions"):
        if key not in doc:
            raise ParseError(0, f"missing required field {key!r}")
    rank = doc["rank"]
    if not isinstance(rank, int):
        raise ParseError(0, "'rank' must be an integer")
    participants = None
    if "participants" in doc:
        raw = doc["participants"]
        if not isinstance(raw, list) or not all(isinstance(p, str) for p in raw):
            raise ParseError(0, "'participants' must be an array of names")
        participants = tuple(raw)
    transitions = []
    if not isinstance(doc["transitions"], list):
        raise ParseError(0, "'transitions' must be an array")
    for t in doc["transitions"]:
        if not isinstance(t, dict) or not {"from", "labels", "to"} <= set(t):
            raise ParseError(0, "each transition needs 'from', 'labels', and 'to'")
        labels = t["labels"]
        if not isinstance(labels, list):
            raise ParseError(0, "'labels' must be an array")
        action = ActionVector(tuple(_label_from_json(l) for l in labels))
        transitions.append(
            Transition(_state_from_json(t["from"], "'from'"), action, _state_from_json(t["to"], "'to'"))
        )
    built = ContractAutomaton(
        rank=rank,
        states=frozenset(_state_from_json(sv, "each state") for sv in doc["states"]),
        initial=_state_from_json(doc["initial"], "'initial'"),
        accepting=frozenset(_state_from_json(sv, "each accepting state") for sv in doc["accepting"]),
        transitions=frozenset(transitions),
    )
    if participants is not None and len(participants) != rank:
        raise ValidationError("one participant name per principal is required")
    return built, participants


def load_document(path: str | Path) -> object:
    """Parse a JSON file, reporting the offending line on syntax errors."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from exc


def _write_json(doc: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_automaton(path: str | Path) -> ContractAutomaton:
    return load_automaton_with_participants(path)[0]


def load_automaton_with_participants(
    path: str | Path,
) -> tuple[ContractAutomaton, tuple[str, ...] | None]:
    return automaton_from_json(load_document(path))


def save_automaton(
    a: ContractAutomaton, path: str | Path, participants: Sequence[str] | None = None
) -> None:
    _write_json(automaton_to_json(a, participants), path)


def controlled_system_from_json(doc: object) -> ControlledSystem:
    if not isinstance(doc, dict) or "controller" not in doc:
        raise ParseError(0, "a controlled-system file holds an object with a 'controller'")
    controller, _ = automaton_from_json(doc["controller"])
    divergences = []
    for t in doc.get("divergences", []):
        if not isinstance(t, dict) or not {"from", "labels", "to"} <= set(t):
            raise ParseError(0, "each divergence needs 'from', 'labels', and 'to'")
        action = ActionVector(tuple(_label_from_json(l) for l in t["labels"]))
        divergences.append(
            Transition(_state_from_json(t["from"], "'from'"), action, _state_from_json(t["to"], "'to'"))
        )
    return ControlledSystem(controller=controller, divergences=frozenset(divergences))


def load_controlled_system(path: str | Path) -> ControlledSystem:
    return controlled_system_from_json(load_document(path))


def controlled_system_to_json(
    cs: ControlledSystem, participants: Sequence[str] | None = None
) -> dict:
    return {
        "controller": automaton_to_json(cs.controller, participants),
        "sink_transitions": [
            {"from": list(t.source), "labels": [_label_to_json(l) for l in t.action]}
            for t in cs.sorted_divergences()
        ],
        "divergences": [
            {
                "from": list(t.source),
                "labels": [_label_to_json(l) for l in t.action],
                "to": list(t.target),
            }
            for t in cs.sorted_divergences()
        ],
    }


def save_controlled_system(
    cs: ControlledSystem, path: str | Path, participants: Sequence[str] | None = None
) -> None:
    _write_json(controlled_system_to_json(cs, participants), path)


def machine_to_json(machine: CommunicatingMachine) -> dict:
    return {
        "states": sorted(machine.states),
        "initial": machine.initial,
        "accepting": sorted(machine.accepting),
        "transitions": [
            {
                "from": t.source,
                "channel": [t.action.sender, t.action.receiver],
                "polarity": t.action.polarity,
                "name": t.action.name,
                "to": t.target,
            }
            for t in machine.sorted_transitions()
        ],
    }


def system_to_json(system: CommunicatingSystem) -> dict:
    doc: dict = {"participants": list(system.participants)}
    doc["machines"] = {
        name: machine_to_json(machine)
        for name, machine in zip(system.participants, system.machines)
    }
    if system.finality.mode == LOCAL_FINALITY:
        doc["finality"] = {"mode": "local"}
    else:
        doc["finality"] = {
            "mode": "vector",
            "accepting": [list(v) for v in sorted(system.finality.vectors)],
        }
    return doc


def save_machine(machine: CommunicatingMachine, path: str | Path) -> None:
    _write_json(machine_to_json(machine), path)


def _machine_from_json(doc: object, name: str) -> CommunicatingMachine:
    if not isinstance(doc, dict):
        raise ParseError(0, f"machine {name!r} must be an object")
    for key in ("states", "initial", "accepting", "transitions"):
        if key not in doc:
            raise ParseError(0, f"machine {name!r} is missing field {key!r}")
    for key in ("states", "accepting"):
        if not isinstance(doc[key], list) or not all(isinstance(s, str) for s in doc[key]):
            raise ParseError(0, f"machine {name!r}: {key!r} must be an array of state names")
    transitions = []
    for t in doc["transitions"]:
        if not isinstance(t, dict) or not {"from", "channel", "polarity", "name", "to"} <= set(t):
            raise ParseError(
                0, "each machine transition needs 'from', 'channel', 'polarity', 'name', 'to'"
            )
        channel = t["channel"]
        if not isinstance(channel, list) or len(channel) != 2:
            raise ParseError(0, "'channel' must be a [sender, receiver] pair")
        if not isinstance(t["from"], str) or not isinstance(t["to"], str):
            raise ParseError(0, "machine transition endpoints must be state names")
        action = CfsmAction(channel[0], channel[1], t["polarity"], t["name"])
        transitions.append(MachineTransition(t["from"], action, t["to"]))
    return CommunicatingMachine(
        states=frozenset(doc["states"]),
        initial=doc["initial"],
        transitions=frozenset(transitions),
        accepting=frozenset(doc["accepting"]),
    )


def system_from_json(doc: object) -> CommunicatingSystem:
    if not isinstance(doc, dict):
        raise ParseError(0, "a system file holds a JSON object")
    for key in ("participants", "machines", "finality"):
        if key not in doc:
            raise ParseError(0, f"missing required field {key!r}")
    participants = doc["participants"]
    if not isinstance(participants, list):
        raise ParseError(0, "'participants' must be an array of names")
    machines = doc["machines"]
    if not isinstance(machines, dict) or set(machines) != set(participants):
        raise ParseError(0, "'machines' must hold exactly one machine per participant")
    finality_doc = doc["finality"]
    if not isinstance(finality_doc, dict) or "mode" not in finality_doc:
        raise ParseError(0, "'finality' must be an object with a 'mode'")
    if finality_doc["mode"] == "local":
        finality = Finality(LOCAL_FINALITY)
    elif finality_doc["mode"] == "vector":
        vectors = finality_doc.get("accepting", [])
        finality = Finality(
            VECTOR_FINALITY,
            vectors=frozenset(_state_from_json(v, "each accepting vector") for v in vectors),
        )
    else:
        raise ParseError(0, f"unknown finality mode {finality_doc['mode']!r}")
    return CommunicatingSystem(
        participants=tuple(participants),
        machines=tuple(_machine_from_json(machines[name], name) for name in participants),
        finality=finality,
    )


def load_system(path: str | Path) -> CommunicatingSystem:
    return system_from_json(load_document(path))


def save_system(system: CommunicatingSystem, path: str | Path) -> None:
    _write_json(system_to_json(system), path)


# --- DOT export ---------------------------------------------------------

def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def _state_name(sv: StateVector) -> str:
    return ",".join(sv)


def _edge_label(action: ActionVector) -> str:
    prefix = {"match": "m", "offer": "o", "request": "r"}[action.kind]
    return f"{prefix}:{action.text()}"


def automaton_to_dot(a: ContractAutomaton, sinks: Sequence[Transition] = ()) -> str:
    lines = ["digraph {", "  rankdir=LR;", '  __start [shape=point label=""];']
    for sv in a.sorted_states():
        shape = "doublecircle" if sv in a.accepting else "circle"
        lines.append(f"  {_quote(_state_name(sv))} [shape={shape}];")
    if sinks:
        lines.append(f"  {_quote(BOTTOM)} [shape=circle style=filled fillcolor=black];")
    lines.append(f"  __start -> {_quote(_state_name(a.initial))};")
    for t in a.sorted_transitions():
        lines.append(
            f"  {_quote(_state_name(t.source))} -> {_quote(_state_name(t.target))} "
            f"[label={_quote(_edge_label(t.action))}];"
        )
    for t in sorted(sinks, key=Transition.sort_key):
        lines.append(
            f"  {_quote(_state_name(t.source))} -> {_quote(BOTTOM)} "
            f"[label={_quote(_edge_label(t.action))}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def machine_to_dot(machine: CommunicatingMachine, name: str = "") -> str:
    lines = ["digraph {", "  rankdir=LR;"]
    if name:
        lines.append(f"  label={_quote(name)};")
    lines.append('  __start [shape=point label=""];')
    for state in sorted(machine.states):
        shape = "doublecircle" if state in machine.accepting else "circle"
        lines.append(f"  {_quote(state)} [shape={shape}];")
    lines.append(f"  __start -> {_quote(machine.initial)};")
    for t in machine.sorted_transitions():
        lines.append(
            f"  {_quote(t.source)} -> {_quote(t.target)} [label={_quote(t.action.text())}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def system_to_dot(system: CommunicatingSystem) -> str:
    lines = ["digraph {", "  rankdir=LR;"]
    for index, name in enumerate(system.participants):
        machine = system.machines[index]
        lines.append(f"  subgraph cluster_{index} {{")
        lines.append(f"    label={_quote(name)};")
        lines.append(f'    "__start_{name}" [shape=point label=""];')
        for state in sorted(machine.states):
            shape = "doublecircle" if state in machine.accepting else "circle"
            lines.append(f"    {_quote(f'{name}.{state}')} [shape={shape}];")
        lines.append(f'    "__start_{name}" -> {_quote(f"{name}.{machine.initial}")};')
        for t in machine.sorted_transitions():
            lines.append(
                f"    {_quote(f'{name}.{t.source}')} -> {_quote(f'{name}.{t.target}')} "
                f"[label={_quote(t.action.text())}];"
            )
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(graph: ReachabilityGraph) -> str:
    classes = classify_configurations(graph)
    lines = ["digraph {", "  rankdir=LR;", '  __start [shape=point label=""];']
    names = {config: config.text() for config in graph.nodes}
    for config in sorted(graph.nodes, key=lambda c: names[c]):
        attrs = ["shape=doublecircle"] if config in classes.final else ["shape=circle"]
        if config in classes.deadlock:
            attrs.append("style=filled")
        lines.append(f"  {_quote(names[config])} [{' '.join(attrs)}];")
    lines.append(f"  __start -> {_quote(names[graph.initial])};")
    edges = [
        (names[source], action.text(), names[target])
        for source, successors in graph.edges.items()
        for action, target in successors
    ]
    for source, label, target in sorted(edges):
        lines.append(f"  {_quote(source)} -> {_quote(target)} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj: object, path: str | Path) -> None:
    """Write the DOT rendering of an automaton, controlled system, machine,
    system, or reachability graph.  Output is deterministic."""
    if isinstance(obj, ContractAutomaton):
        text = automaton_to_dot(obj)
    elif isinstance(obj, ControlledSystem):
        text = automaton_to_dot(obj.controller, sinks=obj.sorted_divergences())
    elif isinstance(obj, CommunicatingMachine):
        text = machine_to_dot(obj)
    elif isinstance(obj, CommunicatingSystem):
        text = system_to_dot(obj)
    elif isinstance(obj, ReachabilityGraph):
        text = graph_to_dot(obj)
    else:
        raise ValidationError(f"cannot export {type(obj).__name__} as DOT")
    Path(path).write_text(text, encoding="utf-8")
