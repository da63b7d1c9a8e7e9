use core::f64::consts::{FRAC_1_PI, TAU};

use super::{outcome_of, step, ModelError, OnticState, OntologicalModel};
use crate::integrate::{uniform_sphere_from, SampleStream};
use crate::qubit::{MeasurementBasis, PureState};

/// The Kochen-Specker model: Λ = S₂, μ_ψ(λ) = (1/π)Θ(ψ⃗·λ⃗)ψ⃗·λ⃗ and
/// ξ(φ|λ) = Θ(φ⃗·λ⃗).
#[derive(Debug, Clone, Copy, Default)]
pub struct KochenSpecker;

const SHAPE: ModelError = ModelError::WrongShape {
    model: "ks",
    expected: "single-sphere",
};

/// `(1/π) max(0, ψ⃗·λ⃗)`.
pub fn ks_density(psi: &PureState, lambda: &OnticState) -> Result<f64, ModelError> {
    let v = lambda.as_single().ok_or(SHAPE)?;
    Ok(FRAC_1_PI * psi.bloch().dot(v).max(0.0))
}

/// Exact draw from μ_ψ: about ψ⃗, `cos θ = √u` with `u ~ U(0, 1)` and a
/// uniform azimuth.
pub fn ks_sample(psi: &PureState, seed: u64, index: u64) -> OnticState {
    let mut s = SampleStream::new(seed, index);
    let cos_t = libm::sqrt(s.next_open01());
    let phi = TAU * s.next_open01();
    let sin_t = libm::sqrt((1.0 - cos_t * cos_t).max(0.0));
    let pole = psi.bloch();
    let frame = pole.orthonormal_frame();
    OnticState::Single(pole.in_frame(&frame, sin_t * libm::cos(phi), sin_t * libm::sin(phi), cos_t))
}

/// `Θ(φ⃗·λ⃗)` for the selected outcome φ.
pub fn ks_response(basis: &MeasurementBasis, outcome: usize, lambda: &OnticState) -> Result<f64, ModelError> {
    let phi = outcome_of(basis, outcome)?;
    let v = lambda.as_single().ok_or(SHAPE)?;
    Ok(step(phi.bloch().dot(v)))
}

impl OntologicalModel for KochenSpecker {
    fn name(&self) -> &'static str {
        "ks"
    }

    fn sample_prepared(&self, psi: &PureState, seed: u64, index: u64) -> OnticState {
        ks_sample(psi, seed, index)
    }

    fn has_density(&self) -> bool {
        true
    }

    fn density(&self, psi: &PureState, lambda: &OnticState) -> Result<Option<f64>, ModelError> {
        ks_density(psi, lambda).map(Some)
    }

    fn in_support(&self, psi: &PureState, lambda: &OnticState) -> bool {
        lambda.as_single().is_some_and(|v| psi.bloch().dot(v) > 0.0)
    }

    fn response(&self, basis: &MeasurementBasis, outcome: usize, lambda: &OnticState) -> Result<f64, ModelError> {
        ks_response(basis, outcome, lambda)
    }

    fn reference_sample(&self, seed: u64, index: u64) -> OnticState {
        OnticState::Single(uniform_sphere_from(&mut SampleStream::new(seed, index)))
    }
}
