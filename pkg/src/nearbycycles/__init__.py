"""Exact combinatorial verifier for nearby-cycle resolutions on products of semistable schemes."""

from .exactlin import ChainComplex, ChainMap, SparseMatrix, cone, homology, tensor_total
from .monodromy import NilpotentOperator, jordan_oracle, monodromy_filtration
from .nearby import build_L, build_Nbar, build_P, build_R, coefficient, monodromy_graded_terms
from .strata import FiberModel, StalkPoint

__all__ = [
    "ChainComplex",
    "ChainMap",
    "FiberModel",
    "NilpotentOperator",
    "SparseMatrix",
    "StalkPoint",
    "build_L",
    "build_Nbar",
    "build_P",
    "build_R",
    "coefficient",
    "cone",
    "homology",
    "jordan_oracle",
    "monodromy_filtration",
    "monodromy_graded_terms",
    "tensor_total",
]
__version__ = "0.1.0"
