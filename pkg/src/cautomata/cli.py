"""Command-line interface.

One subcommand per pipeline stage: compose, mpc, controlled, safety, admits,
branching, liable, mixed, translate, converge, deadlock, simulate, verify,
dot.  Exit code 0 means the property holds or the operation succeeded, 1 that
the property was refuted (the report carries the witness), 2 a usage or
validation error.  Reports are deterministic; the JSON schema is always
``{verdict, witnesses, stats}``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fileio
from .analysis import (
    admits_strong_agreement,
    branching_condition,
    is_strongly_safe,
    mixed_choice_states,
    offending_transition,
)
from .automata import ContractAutomaton, Transition
from .composition import product
from .errors import CautomataError, TraceStuckError
from .machines import parse_action
from .oracle import run_verification
from .projection import project
from .runtime import (
    ONE_BUFFER,
    Configuration,
    is_convergent,
    is_deadlock_free,
    reachable_graph,
    run_trace,
)
from .synthesis import controlled_system, liable, mpc


def _stats(states: int = 0, transitions: int = 0, configs: int = 0) -> dict:
    return {"states": states, "transitions": transitions, "configs": configs}


def _automaton_stats(a: ContractAutomaton) -> dict:
    return _stats(states=len(a.states), transitions=len(a.transitions))


def _transition_witness(t: Transition) -> dict:
    return {"from": list(t.source), "action": t.action.text(), "to": list(t.target)}


def _report(verdict: str, witnesses: list | None = None, stats: dict | None = None) -> dict:
    return {
        "verdict": verdict,
        "witnesses": witnesses or [],
        "stats": stats or _stats(),
    }


def _emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    lines = [f"verdict: {report['verdict']}"]
    for witness in report["witnesses"]:
        parts = " ".join(f"{key}={_plain(value)}" for key, value in witness.items())
        lines.append(f"witness: {parts}")
    stats = report["stats"]
    lines.append(
        f"stats: states={stats['states']} transitions={stats['transitions']} "
        f"configs={stats['configs']}"
    )
    return "\n".join(lines)


def _plain(value: object) -> str:
    if isinstance(value, list):
        return ",".join(str(v) for v in value)
    return str(value)


def _k_bound(args: argparse.Namespace) -> int | str:
    return args.k_bound if args.k_bound is not None else ONE_BUFFER


def _load_operand(path: str) -> tuple[ContractAutomaton, tuple[str, ...] | None]:
    return fileio.load_automaton_with_participants(path)


def _configuration_witness(config: Configuration) -> dict:
    return {
        "control": list(config.control),
        "buffers": [
            {"channel": f"{chan[0]}{chan[1]}", "contents": list(word)}
            for chan, word in config.buffers
        ],
    }


# --- subcommand handlers -------------------------------------------------

def _cmd_compose(args: argparse.Namespace) -> tuple[dict, int]:
    operands = []
    names: list[str] | None = []
    for path in args.inputs:
        a, participants = _load_operand(path)
        operands.append(a)
        if names is not None and participants is not None:
            names.extend(participants)
        else:
            names = None
    composed = product(operands)
    if names is not None and len(names) != composed.rank:
        names = None
    fileio.save_automaton(composed, args.output, participants=names)
    return _report("ok", stats=_automaton_stats(composed)), 0


def _cmd_mpc(args: argparse.Namespace) -> tuple[dict, int]:
    a, participants = _load_operand(args.input)
    controller = mpc(a)
    fileio.save_automaton(controller, args.output, participants=participants)
    return _report("ok", stats=_automaton_stats(controller)), 0


def _cmd_controlled(args: argparse.Namespace) -> tuple[dict, int]:
    a, participants = _load_operand(args.input)
    cs = controlled_system(a)
    fileio.save_controlled_system(cs, args.output, participants=participants)
    stats = _stats(
        states=len(cs.controller.states) + 1,  # the sink
        transitions=len(cs.controller.transitions) + len(cs.divergences),
    )
    return _report("ok", stats=stats), 0


def _cmd_safety(args: argparse.Namespace) -> tuple[dict, int]:
    a, _ = _load_operand(args.input)
    if is_strongly_safe(a):
        return _report("holds", stats=_automaton_stats(a)), 0
    witness = offending_transition(a)
    return _report(
        "refuted",
        witnesses=[_transition_witness(witness)] if witness else [],
        stats=_automaton_stats(a),
    ), 1


def _cmd_admits(args: argparse.Namespace) -> tuple[dict, int]:
    a, _ = _load_operand(args.input)
    if admits_strong_agreement(a):
        return _report("holds", stats=_automaton_stats(a)), 0
    return _report("refuted", stats=_automaton_stats(a)), 1


def _cmd_branching(args: argparse.Namespace) -> tuple[dict, int]:
    a, _ = _load_operand(args.input)
    report = branching_condition(a)
    if report.holds:
        return _report("holds", stats=_automaton_stats(a)), 0
    witness = {
        "enabled_at": list(report.enabled_at),
        "missing_at": list(report.missing_at),
        "action": report.action.text(),
    }
    return _report("refuted", witnesses=[witness], stats=_automaton_stats(a)), 1


def _cmd_liable(args: argparse.Namespace) -> tuple[dict, int]:
    a, _ = _load_operand(args.input)
    cs = controlled_system(a)
    participants, transitions = liable(cs)
    witnesses: list[dict] = [{"participants": sorted(participants)}]
    witnesses.extend(
        _transition_witness(t) for t in sorted(transitions, key=Transition.sort_key)
    )
    return _report("ok", witnesses=witnesses, stats=_automaton_stats(a)), 0


def _cmd_mixed(args: argparse.Namespace) -> tuple[dict, int]:
    a, _ = _load_operand(args.input)
    states = mixed_choice_states(a)
    witnesses = [{"state": list(sv)} for sv in sorted(states)]
    return _report("ok", witnesses=witnesses, stats=_automaton_stats(a)), 0


def _cmd_translate(args: argparse.Namespace) -> tuple[dict, int]:
    a, participants = _load_operand(args.input)
    system = project(a, participants)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    fileio.save_system(system, outdir / "system.json")
    for name, machine in zip(system.participants, system.machines):
        fileio.save_machine(machine, outdir / f"{name}.json")
    stats = _stats(
        states=sum(len(m.states) for m in system.machines),
        transitions=sum(len(m.transitions) for m in system.machines),
    )
    return _report("ok", stats=stats), 0


def _cmd_converge(args: argparse.Namespace) -> tuple[dict, int]:
    system = fileio.load_system(args.system)
    report = is_convergent(system, k_bound=_k_bound(args), env_mode=args.env_mode)
    stats = _stats(configs=report.configurations)
    if report.holds:
        return _report("holds", stats=stats), 0
    trace = ",".join(action.text() for action in report.counterexample)
    return _report("refuted", witnesses=[{"trace": trace}], stats=stats), 1


def _cmd_deadlock(args: argparse.Namespace) -> tuple[dict, int]:
    system = fileio.load_system(args.system)
    report = is_deadlock_free(system, k_bound=_k_bound(args), env_mode=args.env_mode)
    stats = _stats(configs=report.configurations)
    if report.holds:
        return _report("holds", stats=stats), 0
    trace = ",".join(action.text() for action in report.counterexample)
    return _report("refuted", witnesses=[{"trace": trace}], stats=stats), 1


def _cmd_simulate(args: argparse.Namespace) -> tuple[dict, int]:
    system = fileio.load_system(args.system)
    actions = [
        parse_action(text.strip(), system.participants)
        for text in args.trace.split(",")
        if text.strip()
    ]
    try:
        config = run_trace(system, actions, k_bound=_k_bound(args), env_mode=args.env_mode)
    except TraceStuckError as exc:
        witness = {"step": exc.step_index + 1, "action": actions[exc.step_index].text()}
        return _report("stuck", witnesses=[witness], stats=_stats()), 1
    return _report("ok", witnesses=[_configuration_witness(config)], stats=_stats()), 0


def _cmd_verify(args: argparse.Namespace) -> tuple[dict, int]:
    report = run_verification(
        rank=args.rank,
        max_states=args.max_states,
        trials=args.trials,
        seed=args.seed,
        depth=args.depth,
        max_actions=args.max_actions,
    )
    witnesses = [{"violation": v} for v in report.violations]
    stats = _stats(states=report.states, transitions=report.transitions, configs=report.configs)
    summary = _report("holds" if report.ok else "refuted", witnesses=witnesses, stats=stats)
    if args.format == "text":
        lines = []
        for name in sorted(set(report.passed) | set(report.failed) | set(report.skipped)):
            lines.append(
                f"{name}: pass={report.passed.get(name, 0)} "
                f"fail={report.failed.get(name, 0)} skipped={report.skipped.get(name, 0)}"
            )
        summary["_text_extra"] = lines
    return summary, 0 if report.ok else 1


def _cmd_dot(args: argparse.Namespace) -> tuple[dict, int]:
    doc = fileio.load_document(args.input)
    if isinstance(doc, dict) and "rank" in doc:
        a, _ = fileio.automaton_from_json(doc)
        text = fileio.automaton_to_dot(a)
        stats = _automaton_stats(a)
    elif isinstance(doc, dict) and "controller" in doc:
        cs = fileio.controlled_system_from_json(doc)
        text = fileio.automaton_to_dot(cs.controller, sinks=cs.sorted_divergences())
        stats = _automaton_stats(cs.controller)
    else:
        system = fileio.system_from_json(doc)
        if args.reachability:
            graph = reachable_graph(system, k_bound=_k_bound(args), env_mode=args.env_mode)
            text = fileio.graph_to_dot(graph)
            stats = _stats(configs=len(graph.nodes))
        else:
            text = fileio.system_to_dot(system)
            stats = _stats(
                states=sum(len(m.states) for m in system.machines),
                transitions=sum(len(m.transitions) for m in system.machines),
            )
    Path(args.output).write_text(text, encoding="utf-8")
    return _report("ok", stats=stats), 0


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--env-mode",
        action="store_true",
        help="let the environment absorb '-' channel sends instantaneously",
    )
    shared.add_argument(
        "--k-bound",
        type=int,
        default=None,
        metavar="K",
        help="explore with a per-channel bound of K messages instead of the 1-buffer semantics",
    )
    shared.add_argument(
        "--format", choices=("json", "text"), default="text", help="report format"
    )

    parser = argparse.ArgumentParser(
        prog="cautomata",
        description="Compose contract automata, synthesize controllers, and check choreographies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[shared], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("compose", _cmd_compose, "product of contract automata")
    p.add_argument("inputs", nargs="+", metavar="FILE")
    p.add_argument("-o", "--output", required=True)

    p = add("mpc", _cmd_mpc, "most permissive strong controller")
    p.add_argument("input", metavar="IN")
    p.add_argument("-o", "--output", required=True)

    p = add("controlled", _cmd_controlled, "controller plus sink transitions")
    p.add_argument("input", metavar="IN")
    p.add_argument("-o", "--output", required=True)

    for name, handler, help_text in (
        ("safety", _cmd_safety, "decide strong safety"),
        ("admits", _cmd_admits, "decide whether a strong agreement exists"),
        ("branching", _cmd_branching, "decide the branching condition"),
        ("liable", _cmd_liable, "liable participants and transitions"),
        ("mixed", _cmd_mixed, "mixed-choice states"),
    ):
        p = add(name, handler, help_text)
        p.add_argument("input", metavar="IN")

    p = add("translate", _cmd_translate, "project onto communicating machines")
    p.add_argument("input", metavar="IN")
    p.add_argument("-o", "--output", required=True, metavar="OUTDIR")

    p = add("converge", _cmd_converge, "decide convergence of a system")
    p.add_argument("system", metavar="SYSTEM")

    p = add("deadlock", _cmd_deadlock, "decide deadlock-freedom of a system")
    p.add_argument("system", metavar="SYSTEM")

    p = add("simulate", _cmd_simulate, "fire a comma-separated action trace")
    p.add_argument("system", metavar="SYSTEM")
    p.add_argument("--trace", required=True, help='e.g. "AC!a,AC?a,BC!a"')

    p = add("verify", _cmd_verify, "randomized verification battery")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--max-states", type=int, default=3)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--max-actions", type=int, default=2)

    p = add("dot", _cmd_dot, "export DOT for an automaton or system file")
    p.add_argument("input", metavar="IN")
    p.add_argument("-o", "--output", required=True)
    p.add_argument(
        "--reachability",
        action="store_true",
        help="for system files: export the 1-buffer reachability graph",
    )

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.handler(args)
    except (CautomataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    extra = report.pop("_text_extra", None)
    print(_emit(report, args.format))
    if extra and args.format == "text":
        print("\n".join(extra))
    return code


if __name__ == "__main__":
    sys.exit(main())
