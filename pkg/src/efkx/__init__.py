"""Approximate envy-free-up-to-k allocation: solvers, verifiers, oracles."""

from .errors import CapabilityError, ConstructionError, InputError
from .fairness import (INFINITY, EnvyDigraph, FairnessReport, bundle_threshold,
                       check_g3pa_properties, contested_criticals,
                       critical_goods, efkx_threshold, envy_graph,
                       min_pair_threshold, modified_envy_graph, proxy_value,
                       sources, verify_alpha_efkx)
from .graph_ops import (all_cycles_resolution, cycle_resolution,
                        envy_cycle_elimination, find_cycle, path_resolution,
                        path_resolution_star)
from .model import (Allocation, Instance, Rational, as_rational,
                    cheapest_subset, top_subset, value_of)
from .oracle import best_alpha_efkx, enumerate_full_allocations, exists_exact_efkx
from .orientations import (Edge, GraphInstance, Orientation, compute_delta,
                           counterexample_family, exists_efkx_orientation,
                           exists_efkx_orientation_naive,
                           forced_orientation_check, gadget_only,
                           hardness_reduce, pigeonhole_check,
                           pigeonhole_complete_graph, to_allocation,
                           to_instance)
from .solver import (SolveTrace, TraceEvent, allocate_and_eliminate_critical,
                     approximate_efkx, g3pa, k_round_robin_ece, seed_allocation)
from .eight_agents import (ContestedState, contested_critical, contested_state,
                           exit_inequalities, g3pa_plus, improved_few_agents,
                           last_allocate_contested, uncontested_critical)
from .generate import gen_random

__all__ = [
    "Allocation", "CapabilityError", "ConstructionError", "ContestedState",
    "Edge", "EnvyDigraph", "FairnessReport", "GraphInstance", "INFINITY",
    "InputError", "Instance", "Orientation", "Rational", "SolveTrace",
    "TraceEvent", "all_cycles_resolution", "allocate_and_eliminate_critical",
    "approximate_efkx", "as_rational", "best_alpha_efkx", "bundle_threshold",
    "check_g3pa_properties", "cheapest_subset", "compute_delta",
    "contested_critical", "contested_criticals", "contested_state",
    "counterexample_family", "critical_goods", "cycle_resolution",
    "efkx_threshold", "enumerate_full_allocations", "envy_cycle_elimination",
    "envy_graph", "exists_efkx_orientation", "exists_efkx_orientation_naive",
    "exists_exact_efkx", "exit_inequalities", "find_cycle",
    "forced_orientation_check", "g3pa", "g3pa_plus", "gadget_only",
    "gen_random", "hardness_reduce", "improved_few_agents",
    "k_round_robin_ece", "last_allocate_contested", "min_pair_threshold",
    "modified_envy_graph", "path_resolution", "path_resolution_star",
    "pigeonhole_check", "pigeonhole_complete_graph", "proxy_value",
    "seed_allocation", "sources", "to_allocation", "to_instance",
    "top_subset", "uncontested_critical", "value_of", "verify_alpha_efkx",
]
