"""Graph burning on Cartesian grids: simulation, exact solving, bounds and strategies."""

from .bounds import bound_report, finite_two_path_lower_bound
from .grid import ExplicitGraph, GridSpec, HorizontalPathSpec, Vertex
from .sim import BurningSchedule, CoverCertificate, TargetSet, simulate, validate_strategy_at_scale
from .solver import SolverConfig, burning_number, partial_burning_number
from .strategies import composed_small_c_strategy, multi_path_strategy, path_strategy, top_bottom_strategy

__version__ = "0.1.0"

__all__ = [
    "BurningSchedule",
    "CoverCertificate",
    "ExplicitGraph",
    "GridSpec",
    "HorizontalPathSpec",
    "SolverConfig",
    "TargetSet",
    "Vertex",
    "bound_report",
    "burning_number",
    "composed_small_c_strategy",
    "finite_two_path_lower_bound",
    "multi_path_strategy",
    "partial_burning_number",
    "path_strategy",
    "simulate",
    "top_bottom_strategy",
    "validate_strategy_at_scale",
]
