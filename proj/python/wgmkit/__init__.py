"""Toolkit for cryogenic whispering-gallery resonator measurements.

Fano lineshape fitting, power-chain budgeting, anisotropic dielectric mode
solving and material (susceptibility / loss tangent) analysis. The heavy
lifting lives in the compiled `_core` extension; this package re-exports it.
"""

from ._core import (  # noqa: F401
    ChainStage,
    ConfigError,
    DegenerateFitError,
    FanoParams,
    FieldAmplitudes,
    FieldSample,
    FillingFactors,
    FitResult,
    FrequencyTrace,
    IntracavityState,
    MaterialSummary,
    ModeContext,
    ModeNotFoundError,
    ModeSolution,
    ModeSpec,
    NoResonanceError,
    PowerChain,
    QuadratureError,
    SaturationFit,
    SaturationFitError,
    SaturationParams,
    SolveOptions,
    SweepReport,
    SweepRow,
    TraceMeta,
    UnconfinedModeError,
    analyze_power_sweep,
    chain_apply,
    characteristic_value,
    chi_prime,
    coupling_loss_db,
    dbm_to_watts,
    delta_chi_double_prime,
    estimate_initial,
    fano_eval,
    field_amplitudes,
    filling_factors,
    fit_fano,
    fit_saturation,
    intracavity_state,
    load_chain_json,
    load_mode_spec_json,
    loss_tangent,
    q_unloaded,
    read_trace_csv,
    snr_estimate,
    solve_mode,
    summarize,
    synth_trace,
    trace_to_csv,
    watts_to_dbm,
    write_trace_csv,
)

__version__ = "0.1.0"
