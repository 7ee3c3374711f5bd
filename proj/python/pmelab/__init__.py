"""Spectral toolkit for the periodic porous medium equation u_t = (u u_x)_x."""

from ._pmelab import (
    ArgumentError,
    ConfigError,
    DegenerateRegimeError,
    ExperimentConfig,
    ExperimentReport,
    Grid,
    InstabilityError,
    IoError,
    NumericalAbort,
    ResolutionError,
    SequenceParams,
    SpectralField,
    apply_lambda,
    commutator_ratio,
    derivative,
    fit_power_law,
    gap_lower_bound,
    heat_evolve,
    initial_gap,
    interpolation_ratio,
    load_report,
    mean,
    parse_config_text,
    pme_evolve,
    pme_rhs,
    random_trig_polynomial,
    residual_U_closed,
    residual_V_closed,
    run_experiment,
    run_self_checks,
    sample_U,
    sample_V,
    sobolev_norm,
    sup_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
