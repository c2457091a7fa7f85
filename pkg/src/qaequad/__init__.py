"""Quantum amplitude estimation for numerical integration with encoding-cost accounting."""
from .angles import (
    AngleTable, GridFunction, GridSpec, MembershipReport, MultilinearExpansion,
    build_angle_table, check_membership, degree, mobius_transform, zeta_transform,
)
from .encoder import build_encoding, build_grover_power, build_oracle, feasibility
from .estimation import Schedule, estimate_integral, fisher_info, mlae
from .integrate import error_bound, get_function, min_qubits, quadrature
from .simulator import Circuit, ConsistencyError, Gate, StateVector, run

__version__ = "0.1.0"

__all__ = [
    "AngleTable", "Circuit", "ConsistencyError", "Gate", "GridFunction", "GridSpec",
    "MembershipReport", "MultilinearExpansion", "Schedule", "StateVector",
    "build_angle_table", "build_encoding", "build_grover_power", "build_oracle",
    "check_membership", "degree", "error_bound", "estimate_integral", "feasibility",
    "fisher_info", "get_function", "min_qubits", "mlae", "mobius_transform", "quadrature",
    "run", "zeta_transform",
]
