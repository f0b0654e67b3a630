//! Circular-circular regression with wrapped Cauchy errors: maximum
//! likelihood fitting, residual goodness-of-fit tests with parametric
//! bootstrap calibration, and a warp-speed simulation harness.
//!
//! The math core (angles, wrapped Cauchy, test statistics) is generic over
//! the scalar type through [`real::Real`]; fitting and bootstrap work in
//! `f64`, which the crate-root aliases pin down.

pub mod alternatives;
pub mod angle;
pub mod bootstrap;
pub mod correlation;
pub mod data;
pub mod error;
pub mod gof;
pub mod nelder_mead;
pub mod quad;
pub mod real;
pub mod regression;
pub mod report;
pub mod rng;
pub mod sampler;
pub mod wrapped_cauchy;

pub use alternatives::{AltDist, AlternativeSpec, Family};
pub use bootstrap::{
    classical_bootstrap, warp_speed_power, BootstrapConfig, Innovation, PowerResult,
    ScenarioConfig, TestReport, DEFAULT_LAMBDAS,
};
pub use correlation::{circular_autocorrelation, circular_correlation};
pub use error::{Error, Result};
pub use gof::{all_statistics, GofStatistics, WeightSpec};
pub use regression::{
    conditional_mean, conditional_means, fit_mle, log_likelihood, mobius_apply, residual_angles,
    simulate_model, FitConfig, FitResult, ModelParams, PairedSample,
};
pub use report::RunManifest;
pub use rng::RngStream;
pub use sampler::AngleSampler;
pub use wrapped_cauchy::{wc_cdf, wc_charfn, wc_density, WcParams};

/// Concrete `f64` instantiations of the generic math core.
pub type Angle = angle::Angle<f64>;
pub type Angle32 = angle::Angle<f32>;
pub type Wc = wrapped_cauchy::WcParams<f64>;
pub type Wc32 = wrapped_cauchy::WcParams<f32>;
