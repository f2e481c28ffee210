"""
forestlab - Wired and free spanning forests, their induced-component graphs,
and the walk, resistance and resampling diagnostics built around them.
"""

from .config import DEFAULT_SETTINGS, Settings, default_settings, load_config
from .errors import ConfigError, ContractViolation, DomainError, ForestLabError, ResourceError, StatisticalFailure, StepBudgetExceeded
from .forest import SpanningForest, dump_forest, load_forest
from .graph import ComponentMap, Graph, components, read_edge_list, write_edge_list
from .induced import InducedComponentGraph, induced_component_graph
from .lattice import Boundary, LatticeBoxSpec, build_lattice_box, counterexample_graph
from .oracles import enumerate_spanning_trees, spanning_tree_count
from .resistance import CutSetFamily, UnitFlow, effective_resistance, energy, nash_williams_lower_bound, thomson_upper_bound
from .rng import RngStream
from .wilson import two_sided_wsf, wilson_ust, wsf_wired_box

__version__ = "0.3.0"
__all__ = [
    "DEFAULT_SETTINGS",
    "Boundary",
    "ComponentMap",
    "ConfigError",
    "ContractViolation",
    "CutSetFamily",
    "DomainError",
    "ForestLabError",
    "Graph",
    "InducedComponentGraph",
    "LatticeBoxSpec",
    "ResourceError",
    "RngStream",
    "Settings",
    "SpanningForest",
    "StatisticalFailure",
    "StepBudgetExceeded",
    "UnitFlow",
    "build_lattice_box",
    "components",
    "counterexample_graph",
    "default_settings",
    "dump_forest",
    "effective_resistance",
    "energy",
    "enumerate_spanning_trees",
    "induced_component_graph",
    "load_config",
    "load_forest",
    "nash_williams_lower_bound",
    "read_edge_list",
    "spanning_tree_count",
    "thomson_upper_bound",
    "two_sided_wsf",
    "wilson_ust",
    "write_edge_list",
]
