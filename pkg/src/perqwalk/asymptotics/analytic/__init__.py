# src/perqwalk/asymptotics/analytic/__init__.py

from .base_family import AnalyticEigenstateFamily, FamilyConfig
from .family_factory import analytic_states, families_for, has_analytic_families
from .fourier import fourier_states
from .grover import grover_states
from .hadamard import hadamard_states

__all__ = [
    "AnalyticEigenstateFamily",
    "FamilyConfig",
    "analytic_states",
    "families_for",
    "has_analytic_families",
    "fourier_states",
    "grover_states",
    "hadamard_states",
]
