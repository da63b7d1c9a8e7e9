//! Seeded Monte Carlo estimation and product quadrature on the unit sphere.

mod mc;
pub mod quadrature;
pub mod rng;

pub use mc::{
    batch_moments, combine_batches, mc_expectation, mc_expectations, uniform_sphere_from, uniform_sphere_sampler,
    McConfig, McEstimate, Moments, DEFAULT_BATCH_SIZE, DEFAULT_SAMPLES, MIN_RELIABLE_SAMPLES,
};
pub use quadrature::{sphere_quadrature, tv_distance, QuadratureGrid, SphereRule};
pub use rng::SampleStream;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegrateError {
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("integrand returned a non-finite value at sample {index}")]
    NonFinite { index: u64 },
    #[error("invalid density: {0}")]
    InvalidDensity(&'static str),
    #[error("density integrates to {0}, not 1")]
    Normalization(f64),
}
