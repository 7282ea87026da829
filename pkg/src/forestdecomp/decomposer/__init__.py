"""(k,f)-decompositions: exact search and the constructive reduction cascade."""

from .types import (
    InvariantBreach,
    IrreducibleInstance,
    KfDecomposition,
    ReductionTrace,
    SearchBudgetExceeded,
    TraceStep,
)
from .exact import exact_decompose
from .combine import charge_d_edges, combine_contraction
from .constructive import constructive_decompose

__all__ = [
    "InvariantBreach",
    "IrreducibleInstance",
    "KfDecomposition",
    "ReductionTrace",
    "SearchBudgetExceeded",
    "TraceStep",
    "charge_d_edges",
    "combine_contraction",
    "constructive_decompose",
    "exact_decompose",
]
