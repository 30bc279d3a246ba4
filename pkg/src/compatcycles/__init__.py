"""Compatible cycles of 2-regular graphs and biadjoint scalar amplitudes."""

from .chy import GaugeFixing, SolutionSet, graph_vector, pairing, solve_scattering
from .compat import CompatibleSet, enumerate_compatible, generate
from .counting import hultman_formula, super_catalan
from .expand import expansion_coefficients, find_compatible_basis, numerical_rank, standard_basis
from .feyn import partial_amplitude_unsigned
from .graphs import CycleOrder, Multigraph, PerfectMatching, TwoRegularGraph, parse_cycle, parse_graph
from .kinematics import KinematicPoint, random_kinematics

__version__ = "0.1.0"

__all__ = [
    "CompatibleSet",
    "CycleOrder",
    "GaugeFixing",
    "KinematicPoint",
    "Multigraph",
    "PerfectMatching",
    "SolutionSet",
    "TwoRegularGraph",
    "enumerate_compatible",
    "expansion_coefficients",
    "find_compatible_basis",
    "generate",
    "graph_vector",
    "hultman_formula",
    "numerical_rank",
    "pairing",
    "parse_cycle",
    "parse_graph",
    "partial_amplitude_unsigned",
    "random_kinematics",
    "solve_scattering",
    "standard_basis",
    "super_catalan",
]
