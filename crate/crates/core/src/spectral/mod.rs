//! Partial fractions, explicit Wendland Fourier transforms and the
//! one-dimensional measure built from them.

mod measure;
mod partial;
mod transform;

pub use measure::{
    atoms_ft, build_measure_1d, factorization_table, lp_norm_piecewise, measure_ft, random_piecewise_linear,
    wend1d_decompose, young_trial, young_trials, FactorizationRow, FiniteMeasure, Measure1D, PiecewisePoly,
    Wend1DDecomposition, YoungTrial,
};
pub use partial::{f_m_series, partial_fractions, FmEvaluator, PartialFractionTable, PARTIAL_FRACTION_MAX_M};
pub use transform::{
    calibrate_amplitude, decay_summary, hankel_oracle, log_grid, ratio_diagnostic, wendland_hat, DecaySummary,
    RatioRow, RatioTable, Residual, WendlandTransform, CALIBRATION_HARD_LIMIT, VALIDATION_RADII,
};
