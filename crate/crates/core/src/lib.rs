//! Exact dephasing dynamics of a qubit whose bosonic environment starts
//! correlated with it.
//!
//! The crate evaluates the decoherence functions r(t), s(t), Φ(t) of the
//! exponential-cutoff bath family (closed form or quadrature), assembles the
//! reduced qubit state, and measures trace distances between pairs of such
//! states. On top of that sit the analyses of when the long-time distance
//! exceeds the initial one: gain ratios, the critical correlation, region maps
//! and distance extrema.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bath;
pub mod dynamics;
mod error;
pub mod numerics;
pub mod validation;

pub use analysis::{
    distance_series, find_extremum, find_lambda_c, gain_ratio, region_map, Axis, AxisRange,
    CellLabel, CriticalCorrelation, DistanceConvention, DistanceSeries, Extremum, ExtremumKind,
    GainRatio, GridKind, Param, RegionMap, RegionRequest, Scenario, SeriesPoint, TimeGrid,
};
pub use bath::{
    ground_coherent_overlap, profile_at, profile_limit, Backend, BathSpec, DecoherenceProfile,
    DisplacementSpec, ModelSpec,
};
pub use dynamics::{
    coherence_factor, distance_closed_form, distance_same_amplitudes, distance_same_environment,
    normalization_c, pair_weights, reduced_state, trace_distance, InitialStateSpec, PairWeights,
    QubitAmplitudes, QubitDensityMatrix,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::QuadratureSettings;
