"""Exact algebra of gapped cyclic filtered A-infinity structures and their disc potentials."""

from .novikov import ConfigurationError, EnergyMonoid, NovikovScalar
from .graded import GradedBasis, NVector, Pairing
from .ainf import ClassLabel, FilteredAInfinity, Obstruction, OperationTensor, check_structure
from .mc import gauge_flow, mc_residual, solve_mc
from .superpotential import d_psi, psi, psi_prime
from .report import CheckReport

__all__ = [
    "CheckReport", "ClassLabel", "ConfigurationError", "EnergyMonoid", "FilteredAInfinity", "GradedBasis",
    "NVector", "NovikovScalar", "Obstruction", "OperationTensor", "Pairing", "check_structure", "d_psi",
    "gauge_flow", "mc_residual", "psi", "psi_prime", "solve_mc",
]
