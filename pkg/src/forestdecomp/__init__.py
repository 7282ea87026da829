"""Exact forest decompositions of small multigraphs under density hypotheses."""

from .multigraph import Instance, Multigraph, contract, global_min_cut, induced
from .density import (
    Rational,
    check_feasible,
    check_ndt_bound,
    check_sparse,
    find_full,
    find_overfull,
    fractional_arboricity,
    max_edge_minus_vertex,
    min_potential,
    potential,
)
from .forests import ForestDecomposition, decompose_k_forests, is_forest, validate_kfd
from .decomposer import (
    InvariantBreach,
    IrreducibleInstance,
    KfDecomposition,
    ReductionTrace,
    SearchBudgetExceeded,
    combine_contraction,
    constructive_decompose,
    exact_decompose,
)
from .discharging import LocalConfig, audit_instance, charge_lost, classify_exception
from .harness import EnumSpec, enumerate_multigraphs, random_instance, sharpness_scan, verify_ndt
from .graphio import format_graph, parse_graph

__all__ = [name for name in dir() if not name.startswith("_")]
