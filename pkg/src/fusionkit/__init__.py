"""Finite computations with fusion systems over truncated discrete p-toral groups."""

from .catalog import CATALOG_NAMES, build
from .fusion import FusionSystem, generate_fusion, group_fusion
from .groups import BudgetExceeded, FusionKitError, PreconditionError
from .ptoral import TruncationSpec, make_truncation
from .saturation import check_sat1, check_saturation, check_saturation_alt, stability_check

__version__ = "0.1.0"

__all__ = [
    "CATALOG_NAMES", "build", "FusionSystem", "generate_fusion", "group_fusion",
    "BudgetExceeded", "FusionKitError", "PreconditionError", "TruncationSpec", "make_truncation",
    "check_sat1", "check_saturation", "check_saturation_alt", "stability_check",
]
