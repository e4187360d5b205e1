"""Automorphisms of matroids through stable sets of Johnson graphs.

Exact enumeration of stable sets in J(n, r), permutation actions on them,
labelled matroids with their automorphism groups and pair minors, and
exhaustive censuses by symmetry class.
"""

from ._kernels import BACKEND
from .errors import (
    AxiomViolation,
    BudgetExceeded,
    ClosureNotStable,
    DomainError,
    MatroidAutError,
    NotInvariantError,
    PromiseViolation,
)
from .johnson import JohnsonParams, StableSet, count_stable_sets, iter_stable_sets, johnson_graph
from .matroid import Matroid, automorphism_classification, reconstruct_from_minors, validate
from .permgroup import Permutation

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AxiomViolation",
    "BudgetExceeded",
    "ClosureNotStable",
    "DomainError",
    "JohnsonParams",
    "Matroid",
    "MatroidAutError",
    "NotInvariantError",
    "Permutation",
    "PromiseViolation",
    "StableSet",
    "automorphism_classification",
    "count_stable_sets",
    "iter_stable_sets",
    "johnson_graph",
    "reconstruct_from_minors",
    "validate",
]
