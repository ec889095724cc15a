"""Entropy and dimension of exceptional sets on symbolic and hyperbolic models."""

from ._core import (  # noqa: F401
    Error,
    bowen_root,
    box_dimension,
    fixed_point_report,
    horseshoe_sample,
    pressure,
    survivor_entropy,
    word_count,
    young_dimension,
)

__version__ = "0.1.0"
