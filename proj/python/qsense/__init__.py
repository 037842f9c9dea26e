"""Bayesian frequency estimation with engineered spectra."""

from ._qsense import (
    InvalidArgument,
    Measurement,
    NumericalFailure,
    OptResult,
    Prior,
    ProbeState,
    Spectrum,
    Unsupported,
    __version__,
    bcrb,
    compile_protocol,
    entropic_bound,
    find_tmax,
    flip_pulse_count,
    lift_round_trip,
    nlevel_sweep,
    onthefly,
    optimal_mse,
    optimize_state,
    personick,
    qfi,
    sequential_optimum,
    sequential_plan,
    swap_spectrum,
    two_qubit_study,
    verify_schedule,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
