//! Stochastic dynamics near smoothed switching surfaces.
//!
//! A piecewise-smooth system whose discontinuity is smoothed over a layer of
//! width `ε` and perturbed by noise of amplitude `κ` reduces, near the
//! switching surface, to the scalar SDE `dỹ = φ(ỹ) dt̃ + κ̃ dW`. This crate
//! evaluates that reduced problem:
//!
//! * [`steady_state`]: stationary density and the probability of sitting
//!   inside the layer when the surface is attracting;
//! * [`escape`]: mean escape time when the surface is crossing, by direct
//!   quadrature of the first-passage double integral and by its Laplace
//!   asymptotics with a Stokes multiplier;
//! * [`mc`]: seeded Euler–Maruyama Monte-Carlo for independent checks;
//! * [`friction`]: the dry-friction oscillator with a cubic friction layer.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below name the common instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod escape;
pub mod friction;
pub mod mc;
pub mod poly;
pub mod potential;
pub mod quadrature;
pub mod reduced;
pub mod scalar;
pub mod steady_state;
pub mod system;

pub use error::{Error, Result};
pub use escape::{
    escape_c, escape_pipeline, escape_time_asymptotic, escape_time_exact, turning_points,
    AsymptoticEscape, EscapeRegime, EscapeResult, Well, WellAnalysis,
};
pub use friction::{
    breakaway, default_z0_grid, friction_force, friction_noise, friction_system, linspace,
    reduced_from_friction, region_map, scan_escape_times,
    BreakawayInfo, FrictionParams, FrictionRegion, RowStatus, ScanRow,
};
pub use mc::{
    mc_escape_time, mc_escape_time_full, mc_occupation, simulate_full, simulate_reduced, FullPath,
    McConfig, McEstimate, ReducedPath,
};
pub use poly::Polynomial;
pub use potential::PiecewisePotential;
pub use reduced::{Interior, ReducedSystem};
pub use scalar::Real;
pub use steady_state::{
    occupation_probability_asymptotic, occupation_probability_exact, stationary_density,
    OccupancyRegime, OccupationResult, StationaryDensity,
};
pub use system::{
    classify, continuity_check, filippov_sliding_field, reduce, ContinuityReport, NoiseSpec,
    PiecewiseSystem, Preset, RegionKind, SmoothedSystem,
};

pub type ReducedSystemF64 = ReducedSystem<f64>;
pub type ReducedSystemF32 = ReducedSystem<f32>;
pub type PotentialF64 = PiecewisePotential<f64>;
pub type EscapeResultF64 = EscapeResult<f64>;
pub type WellAnalysisF64 = WellAnalysis<f64>;
pub type FrictionParamsF64 = FrictionParams<f64>;
pub type FrictionParamsF32 = FrictionParams<f32>;
pub type McConfigF64 = McConfig<f64>;
pub type McEstimateF64 = McEstimate<f64>;
pub type ScanRowF64 = ScanRow<f64>;
