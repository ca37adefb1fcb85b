"""Shifted Waring Lab: gap scans around certified witnesses and exploratory phase sweeps."""

from src.scan.gap_scan import DEFAULT_STEP_DIVISOR, gap_scan, predicted_radius
from src.scan.models import EXPLORATORY_LABEL, GapPoint, GapReport, PhaseCell, PhaseMatrix
from src.scan.phase import check_monotone, phase_sweep, seeded_samples
from src.scan.plots import emit_plots

__all__ = [
    "DEFAULT_STEP_DIVISOR",
    "EXPLORATORY_LABEL",
    "GapPoint",
    "GapReport",
    "PhaseCell",
    "PhaseMatrix",
    "check_monotone",
    "emit_plots",
    "gap_scan",
    "phase_sweep",
    "predicted_radius",
    "seeded_samples",
]
