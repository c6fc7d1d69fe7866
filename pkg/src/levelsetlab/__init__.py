"""Exact construction and level-set analysis of flat C^k functions whose
plateau heights form a Cantor set."""

__version__ = "0.1.0"

from .construction import Params, derivative, evaluate, junction_table, locate, validate_params  # noqa: E402
from .rangeset import RangeAddress, closed_form_dimension, preimage_cover, s_cover  # noqa: E402

__all__ = [
    "Params",
    "RangeAddress",
    "closed_form_dimension",
    "derivative",
    "evaluate",
    "junction_table",
    "locate",
    "preimage_cover",
    "s_cover",
    "validate_params",
]
