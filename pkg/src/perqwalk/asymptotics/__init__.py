# src/perqwalk/asymptotics/__init__.py

from .eigenstates import CommonEigenstate
from .attractors import (
    AsymptoticDecomposition,
    AsymptoticState,
    Attractor,
    AttractorBasis,
    PAttractor,
    asymptotic_fastpath,
    asymptotic_marginal,
    asymptotic_state,
    attractor_basis_for,
    complete_basis,
    dimension_report,
    find_common_eigenstates_numeric,
    general_attractor_basis,
    p_attractor_basis,
)

__all__ = [
    "CommonEigenstate",
    "AsymptoticDecomposition",
    "AsymptoticState",
    "Attractor",
    "AttractorBasis",
    "PAttractor",
    "asymptotic_fastpath",
    "asymptotic_marginal",
    "asymptotic_state",
    "attractor_basis_for",
    "complete_basis",
    "dimension_report",
    "find_common_eigenstates_numeric",
    "general_attractor_basis",
    "p_attractor_basis",
]
