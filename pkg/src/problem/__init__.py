"""Shifted Waring Lab: Problem Instances and the Witness Family."""

from src.problem.model import (
    Instance,
    Precision,
    Quantity,
    RadiusRule,
    ScaledRoot,
    Tolerance,
    Window,
    constrained_theta_min,
    theta_gap_lower_bound,
    validate_instance,
)
from src.problem.witness import WitnessTau, center_m, tau_m, tau_value, witness_table

__all__ = [
    "Instance",
    "Precision",
    "Quantity",
    "RadiusRule",
    "ScaledRoot",
    "Tolerance",
    "Window",
    "WitnessTau",
    "center_m",
    "constrained_theta_min",
    "tau_m",
    "tau_value",
    "theta_gap_lower_bound",
    "validate_instance",
    "witness_table",
]
