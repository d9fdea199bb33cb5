"""Sturm-Liouville problems with interior transmission conditions and
eigenparameter-dependent boundary conditions."""

from .asymptotics import CaseTag, asymptotic_phi, asymptotic_s, branches, classify_case, match_branches
from .characteristic import leading_term, omega, omega_i, omega_normalized, omega_value
from .eigenfunctions import eigenfunction, residuals
from .eigensolver import Eigenvalue, find_eigenvalues, refine, scan_brackets
from .fundamental import build_chi, build_phi, evaluate
from .integrator import IntegratorConfig, StateVector, integrate
from .problem import (
    IDENTITY_TRANSMISSION,
    ProblemSpec,
    TransmissionCoefficients,
    backward_transfer,
    delta,
    forward_transfer,
    load_problem,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "CaseTag",
    "Eigenvalue",
    "IDENTITY_TRANSMISSION",
    "IntegratorConfig",
    "ProblemSpec",
    "StateVector",
    "TransmissionCoefficients",
    "asymptotic_phi",
    "asymptotic_s",
    "backward_transfer",
    "branches",
    "build_chi",
    "build_phi",
    "classify_case",
    "delta",
    "eigenfunction",
    "evaluate",
    "find_eigenvalues",
    "forward_transfer",
    "integrate",
    "leading_term",
    "load_problem",
    "match_branches",
    "omega",
    "omega_i",
    "omega_normalized",
    "omega_value",
    "refine",
    "residuals",
    "scan_brackets",
    "validate",
]
