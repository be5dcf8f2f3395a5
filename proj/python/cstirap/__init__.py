"""Chainwise STIRAP simulation: presets, propagation, dark-state analysis, sweeps and optimization."""

from ._core import (
    AnalysisError,
    FrameBreakdownError,
    IntegrationError,
    Scenario,
    ValidationError,
    adiabatic_frame,
    adiabaticity,
    chain_hamiltonian,
    dark_decay_rate,
    dark_state_analytic5,
    dark_states,
    dark_survival_prediction,
    five_level,
    intensity_from_rabi,
    intensity_report,
    load_config,
    optimize,
    preset,
    presets,
    propagate_state,
    rabi_from_intensity,
    simulate,
    sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
