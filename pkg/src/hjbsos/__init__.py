"""Sum-of-squares lower bounds on value functions of discounted polynomial optimal control."""

from .ocp import ControlProblem, TimeMode, ValueBound, run_hierarchy, solve_degree, validate
from .poly import Box, Polynomial
from .sdp import SdpProblem, SolverOptions, SolverStatus, solve
from .sos import GramCertificate, SemialgebraicSet

__version__ = "0.1.0"

__all__ = [
    "Box",
    "ControlProblem",
    "GramCertificate",
    "Polynomial",
    "SdpProblem",
    "SemialgebraicSet",
    "SolverOptions",
    "SolverStatus",
    "TimeMode",
    "ValueBound",
    "run_hierarchy",
    "solve",
    "solve_degree",
    "validate",
]
