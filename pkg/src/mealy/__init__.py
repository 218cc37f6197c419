"""Analysis of Mealy automata and the (semi)groups they generate.

The package splits into machines (representation, duality, powers,
production functions), cycles (the structure of the transition graph),
enrichment (choosing outputs that force infinite groups), finiteness
(verdicts with certificates) and documents (the text format and DOT
export).  Everything commonly needed is re-exported here.
"""

from .errors import (
    BudgetExceeded,
    DocumentError,
    EmptyResult,
    InvalidAutomaton,
    MealyError,
    NoExitCycle,
    NoSuchTriple,
    NotACycle,
    NotInvertible,
    PreconditionViolated,
    UnknownSymbol,
)
from .machines import (
    Automaton,
    ComponentPartition,
    Diagnostic,
    MealyMachine,
    apply_delta,
    apply_rho,
    connected_components,
    dual,
    ensure_usable,
    equal_production,
    inverse,
    is_bireversible,
    is_invertible,
    is_reversible,
    power,
    validate,
)
from .cycles import (
    EXTERNAL,
    INTERNAL,
    WITH_EXTERNAL_EXIT,
    WITH_INTERNAL_EXIT_ONLY,
    WITHOUT_EXIT,
    Cycle,
    CycleWitness,
    Exit,
    ExitReport,
    PruneResult,
    check_cycle,
    classify_exits,
    cycle_label_from,
    externalize,
    extract_cycle_through,
    has_cycle_with_exit,
    on_cycle_states,
    prune,
    prune_machine,
    strongly_connected_components,
    transition_on_cycle,
)
from .enrichment import (
    BRANCHES,
    Certificate,
    EnrichResult,
    Enrichment,
    IPathResult,
    complete_permutations,
    enrich,
    enrich_binary_external,
    enrich_no_return,
    enrich_reversible,
    find_i_path_cycle,
    restrict_alphabet,
)
from .finiteness import (
    CLOSURE,
    DEFAULT_CLOSURE_BUDGET,
    DEFAULT_CLOSURE_DEPTH,
    DEFAULT_MAX_LEVEL,
    DEFAULT_ORBIT_CAP,
    ENRICHMENT_CONSTRUCTION,
    F4,
    FINITE,
    INFINITE,
    SPLITS_UP_TOTALLY,
    STRUCTURAL_NO_EXIT,
    UNKNOWN,
    LevelReport,
    PowerTrace,
    Verdict,
    check_no_exit_finite,
    decide,
    enrichment_verdict,
    f4_check,
    orbit_size,
    power_components,
    pumping_scan,
    random_invertible_enrichment,
    sample_no_exit,
    semigroup_closure,
)
from .documents import export_dot, parse, print_document

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "BRANCHES",
    "BudgetExceeded",
    "CLOSURE",
    "Certificate",
    "DEFAULT_CLOSURE_BUDGET",
    "DEFAULT_CLOSURE_DEPTH",
    "DEFAULT_MAX_LEVEL",
    "DEFAULT_ORBIT_CAP",
    "ComponentPartition",
    "Cycle",
    "CycleWitness",
    "Diagnostic",
    "DocumentError",
    "ENRICHMENT_CONSTRUCTION",
    "EXTERNAL",
    "EmptyResult",
    "EnrichResult",
    "Enrichment",
    "Exit",
    "ExitReport",
    "F4",
    "FINITE",
    "INFINITE",
    "INTERNAL",
    "IPathResult",
    "InvalidAutomaton",
    "LevelReport",
    "MealyError",
    "MealyMachine",
    "NoExitCycle",
    "NoSuchTriple",
    "NotACycle",
    "NotInvertible",
    "PowerTrace",
    "PreconditionViolated",
    "PruneResult",
    "SPLITS_UP_TOTALLY",
    "STRUCTURAL_NO_EXIT",
    "UNKNOWN",
    "UnknownSymbol",
    "Verdict",
    "WITHOUT_EXIT",
    "WITH_EXTERNAL_EXIT",
    "WITH_INTERNAL_EXIT_ONLY",
    "apply_delta",
    "apply_rho",
    "check_cycle",
    "check_no_exit_finite",
    "classify_exits",
    "complete_permutations",
    "connected_components",
    "cycle_label_from",
    "decide",
    "dual",
    "enrich",
    "enrich_binary_external",
    "enrich_no_return",
    "enrich_reversible",
    "enrichment_verdict",
    "ensure_usable",
    "equal_production",
    "export_dot",
    "externalize",
    "extract_cycle_through",
    "f4_check",
    "find_i_path_cycle",
    "has_cycle_with_exit",
    "inverse",
    "is_bireversible",
    "is_invertible",
    "is_reversible",
    "on_cycle_states",
    "orbit_size",
    "parse",
    "power",
    "power_components",
    "print_document",
    "prune",
    "prune_machine",
    "pumping_scan",
    "random_invertible_enrichment",
    "restrict_alphabet",
    "sample_no_exit",
    "semigroup_closure",
    "strongly_connected_components",
    "transition_on_cycle",
    "validate",
]
