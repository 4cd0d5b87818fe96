"""Contract automata, controller synthesis, and communicating machines.

The pipeline: build principals, compose them with ``product``, synthesize the
most permissive strong controller with ``mpc``, identify liable participants
via ``controlled_system`` and ``liable``, project the controller onto
communicating machines with ``project``, and decide deadlock-freedom and
convergence of the asynchronous system under the 1-buffer semantics.
"""

from .actions import (
    ActionVector,
    Classification,
    IDLE_LABEL,
    Label,
    classify,
    complementary,
    match_vector,
    offer,
    offer_vector,
    request,
    request_vector,
    vector,
)
from .analysis import (
    BranchingReport,
    admits_strong_agreement,
    branching_condition,
    is_strongly_safe,
    mixed_choice_states,
    rcv,
    snd,
)
from .automata import (
    ContractAutomaton,
    StateVector,
    Transition,
    automaton,
    principal,
    validate_principal,
)
from .composition import product
from .machines import (
    CfsmAction,
    CommunicatingMachine,
    CommunicatingSystem,
    Finality,
    MachineTransition,
    parse_action,
    receive,
    send,
)
from .projection import default_participants, project, translate_action, translate_word
from .runtime import (
    Configuration,
    ConfigurationClasses,
    ReachabilityGraph,
    SemanticsReport,
    classify_configurations,
    enabled_actions,
    initial_configuration,
    is_convergent,
    is_deadlock_free,
    is_final,
    reachable_graph,
    run_trace,
    step,
)
from .synthesis import (
    BOTTOM,
    ControlledSystem,
    controlled_system,
    liable,
    match_subautomaton,
    mpc,
    redundant_states,
)

__all__ = [
    "ActionVector",
    "BOTTOM",
    "BranchingReport",
    "CfsmAction",
    "Classification",
    "CommunicatingMachine",
    "CommunicatingSystem",
    "Configuration",
    "ConfigurationClasses",
    "ContractAutomaton",
    "ControlledSystem",
    "Finality",
    "IDLE_LABEL",
    "Label",
    "MachineTransition",
    "ReachabilityGraph",
    "SemanticsReport",
    "StateVector",
    "Transition",
    "admits_strong_agreement",
    "automaton",
    "branching_condition",
    "classify",
    "classify_configurations",
    "complementary",
    "controlled_system",
    "default_participants",
    "enabled_actions",
    "initial_configuration",
    "is_convergent",
    "is_deadlock_free",
    "is_final",
    "is_strongly_safe",
    "liable",
    "match_subautomaton",
    "match_vector",
    "mixed_choice_states",
    "mpc",
    "offer",
    "offer_vector",
    "parse_action",
    "principal",
    "product",
    "project",
    "rcv",
    "reachable_graph",
    "receive",
    "redundant_states",
    "request",
    "request_vector",
    "run_trace",
    "send",
    "snd",
    "step",
    "translate_action",
    "translate_word",
    "validate_principal",
    "vector",
]
