"""Toolkit for lambda-backbone colorings of bounded-degree graphs.

A lambda-backbone coloring of a graph G with backbone subgraph H assigns
positive integers to vertices so that adjacent vertices differ and
backbone-adjacent vertices differ by at least lambda.  The package
provides the instance format, an exact solver, structure-specific
polynomial constructions, hardness gadgets and SAT reductions, plus a
command-line front end (``bbc``).
"""

from .core import (
    BackboneClass,
    BackboneInstance,
    Classification,
    Coloring,
    Graph,
    ValidationReport,
    Verdict,
    classify_backbone,
    emit_coloring,
    emit_instance,
    norm_edge,
    parse_coloring,
    parse_instance,
    validate_instance,
    verify_coloring,
)
from .solver import (
    DEFAULT_NODE_BUDGET,
    EnumerationResult,
    SolveStats,
    bbc_number,
    decide_bbc,
    enumerate_colorings,
)
from .constructive import (
    best_constructive,
    brooks_proper_coloring,
    galaxy_lambda_plus_4,
    greedy_degenerate_bbc2,
    lift_two_to_lambda,
    matching_lambda_plus_3,
    path_lambda_plus_4,
    three_color_cycle_triangles,
    tree_k4free_lambda_plus_5,
)
from .gadgets import (
    GadgetFragment,
    GadgetKind,
    LemmaCheckReport,
    build_gadget,
    check_gadget_lemma,
    project_ports,
    wire,
)
from .reductions import (
    CnfFormula,
    Reduction,
    ReductionCertificate,
    assignment_to_coloring,
    brute_force_sat,
    extract_assignment,
    normalize_3sat,
    parse_cnf,
    reduce_3sat_to_path,
    reduce_3sat_to_tree,
    reduce_nae3sat_to_matching,
    reduce_nae4sat_to_galaxy,
)
from .cli import (
    CellResult,
    GenSpec,
    TableReport,
    derive_seed,
    gen_random_instance,
    main,
    run_table,
    table_cells,
)

__version__ = "0.1.0"

__all__ = [
    "BackboneClass",
    "BackboneInstance",
    "Classification",
    "Coloring",
    "Graph",
    "ValidationReport",
    "Verdict",
    "classify_backbone",
    "emit_coloring",
    "emit_instance",
    "norm_edge",
    "parse_coloring",
    "parse_instance",
    "validate_instance",
    "verify_coloring",
    "DEFAULT_NODE_BUDGET",
    "EnumerationResult",
    "SolveStats",
    "bbc_number",
    "decide_bbc",
    "enumerate_colorings",
    "best_constructive",
    "brooks_proper_coloring",
    "galaxy_lambda_plus_4",
    "greedy_degenerate_bbc2",
    "lift_two_to_lambda",
    "matching_lambda_plus_3",
    "path_lambda_plus_4",
    "three_color_cycle_triangles",
    "tree_k4free_lambda_plus_5",
    "GadgetFragment",
    "GadgetKind",
    "LemmaCheckReport",
    "build_gadget",
    "check_gadget_lemma",
    "project_ports",
    "wire",
    "CnfFormula",
    "Reduction",
    "ReductionCertificate",
    "assignment_to_coloring",
    "brute_force_sat",
    "extract_assignment",
    "normalize_3sat",
    "parse_cnf",
    "reduce_3sat_to_path",
    "reduce_3sat_to_tree",
    "reduce_nae3sat_to_matching",
    "reduce_nae4sat_to_galaxy",
    "CellResult",
    "GenSpec",
    "TableReport",
    "derive_seed",
    "gen_random_instance",
    "main",
    "run_table",
    "table_cells",
    "__version__",
]
