//! Finite- and fixed-time stabilization of perturbed parabolic equations by
//! proximal splitting.
//!
//! The library discretizes the closed loop
//!
//! ```text
//!   y_t = y_xx + B u + η(t),        y(t, 0) = y(t, 1) = 0
//! ```
//!
//! (optionally with a nonlinear term f(y)y) on the unit interval, where
//! B is multiplication by √a(x) and u is one of three set-valued feedback
//! laws: the sliding-mode law −ρ·sign, its fixed-time strengthening with a
//! ∥y∥^ζ term, and a nonlinear fixed-time law with fractional powers. The
//! integrator treats each law through its resolvent (proximal map), so
//! trajectories reach zero exactly in finite time instead of chattering
//! around it; an explicit regularized baseline is included for
//! cross-checking.
//!
//! The [`analysis`] module carries the settling-time bounds and discrete
//! Lyapunov inequality checks; [`scenario`] provides JSON-configured runs,
//! sweeps over initial conditions, and CSV/JSON output.
//!
//! Math modules are generic over the scalar ([`Scalar`]: `f32` or `f64`);
//! aliases at the crate root pin the common `f64` instantiations.

// validation uses `!(x > 0.0)` throughout so NaN fails the check too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod feedback;
pub mod grid;
pub mod integrator;
pub mod operators;
pub mod prox;
pub mod scalar;
pub mod scenario;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use feedback::{validate_gain, FeedbackLaw, GainCheck};
pub use grid::{inner_product, l2_norm, SineBasis, SpatialGrid, SpectralCoeffs, StateField};
pub use integrator::{run, ClosedLoop, Scheme, SchemeConfig, Trajectory};
pub use operators::{DiffusionOperator, InputOperator, Nonlinearity, OperatorSet, Perturbation};
pub use prox::{prox_phi, prox_power_functional, prox_weighted_norm, ProxOptions};
pub use scenario::{
    build_case1, build_case2, parse_config, run_scenario, sweep_initial_conditions,
    AnalysisSummary, CaseKind, InitialSpec, Instance, LawSpec, RunArtifacts, ScenarioConfig,
};

/// `f64` instantiations of the generic core types.
pub type SpatialGrid64 = grid::SpatialGrid<f64>;
pub type StateField64 = grid::StateField<f64>;
pub type SpectralCoeffs64 = grid::SpectralCoeffs<f64>;
pub type SineBasis64 = grid::SineBasis<f64>;
pub type OperatorSet64 = operators::OperatorSet<f64>;
pub type FeedbackLaw64 = feedback::FeedbackLaw<f64>;
pub type SchemeConfig64 = integrator::SchemeConfig<f64>;
pub type Trajectory64 = integrator::Trajectory<f64>;
