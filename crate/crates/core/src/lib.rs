//! Generalized (detection-aware) measurements for the 1D quantum harmonic
//! oscillator.
//!
//! The library represents each observable by the usual quantum operator
//! together with a state-dependent family of effects built from a free
//! detection-probability profile. Outcome statistics then split into
//! *conditional on detection* probabilities (the standard Born values) and
//! *overall* probabilities that also account for a no-registration outcome,
//! with matching generalized state-update rules.
//!
//! All numerics are generic over the floating scalar via [`Scalar`]
//! (`f32` or `f64`); the `*64` aliases at the crate root pick `f64`.

pub mod energy;
pub mod error;
pub mod expectations;
pub mod fock;
pub mod position;
pub mod profiles;
pub mod sampler;
pub mod scalar;
pub mod states;

pub use energy::{
    collapse_energy_no_detection, collapse_energy_outcome, conditional_prob_energy, energy_effect,
    gpp_energy_property, no_detection_prob_energy, overall_prob_energy,
    property_probability_energy, Answer, EnergyEffect, EnergySelection,
};
pub use error::{Error, Result};
pub use expectations::{
    energy_expectation, energy_expectation_gap, generalized_energy_expectation,
    generalized_position_expectation, position_expectation, position_expectation_gap,
    PositionGapForm,
};
pub use fock::{
    build_grid, energy_eigenvalue, hermite_function, hermite_ladder, integrate_grid,
    integrate_grid_complex, integrate_grid_with, Grid, OscillatorParams, QuadratureMethod,
    QuadratureRule,
};
pub use position::{
    collapse_position_no_detection, collapse_position_yes, conditional_prob_position,
    gpp_position_property, overall_prob_position, position_effect, Interval, IntervalUnion,
    PositionEffect,
};
pub use profiles::{EnergyDetectionProfile, PositionDetectionProfile};
pub use sampler::{
    empirical_distribution, run_sequence, sample_energy, sample_position, AnyState,
    EmpiricalDistribution, MeasurementRecord, MeasurementSpec, Outcome, RngSeed, SamplerContext,
    RNG_ALGORITHM,
};
pub use states::{fock_to_position, position_to_fock, FockVector, GridWavefunction};

/// Concrete `f64` aliases for the main domain types.
pub type OscillatorParams64 = OscillatorParams<f64>;
pub type Grid64 = Grid<f64>;
pub type FockVector64 = FockVector<f64>;
pub type GridWavefunction64 = GridWavefunction<f64>;
pub type EnergyDetectionProfile64 = EnergyDetectionProfile<f64>;
pub type PositionDetectionProfile64 = PositionDetectionProfile<f64>;
pub type IntervalUnion64 = IntervalUnion<f64>;
