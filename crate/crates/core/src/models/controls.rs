//! Negative-control models. Both keep the Bell-Mermin preparations and break
//! one property of the response functions, so that every checker can be
//! seen to fail.

use super::bell_mermin::{bm_sample, point_mass_support};
use super::{outcome_of, step, uniform_pair, ModelError, OnticState, OntologicalModel};
use crate::integrate::SampleStream;
use crate::qubit::{MeasurementBasis, PureState};

/// ξ ≡ ½ for every outcome: not outcome deterministic, not Born-reproducing.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantHalf;

/// Deterministic, but the response to an outcome depends on the basis
/// descriptor it is listed in: labelled bases favour their first-listed
/// outcome.
#[derive(Debug, Clone, Copy, Default)]
pub struct LabelReading;

/// Shift toward the first-listed outcome applied when a basis has a label.
const LABEL_SHIFT: f64 = 0.5;

const SHAPE: ModelError = ModelError::WrongShape {
    model: "negative-control",
    expected: "sphere-pair",
};

impl OntologicalModel for ConstantHalf {
    fn name(&self) -> &'static str {
        "constant-half"
    }

    fn sample_prepared(&self, psi: &PureState, seed: u64, index: u64) -> OnticState {
        bm_sample(psi, seed, index)
    }

    fn has_density(&self) -> bool {
        false
    }

    fn density(&self, _psi: &PureState, lambda: &OnticState) -> Result<Option<f64>, ModelError> {
        lambda.as_pair().ok_or(SHAPE)?;
        Ok(None)
    }

    fn in_support(&self, psi: &PureState, lambda: &OnticState) -> bool {
        point_mass_support(psi, lambda)
    }

    fn response(&self, basis: &MeasurementBasis, outcome: usize, _lambda: &OnticState) -> Result<f64, ModelError> {
        outcome_of(basis, outcome)?;
        Ok(0.5)
    }

    fn reference_sample(&self, seed: u64, index: u64) -> OnticState {
        uniform_pair(&mut SampleStream::new(seed, index))
    }
}

impl OntologicalModel for LabelReading {
    fn name(&self) -> &'static str {
        "label-reading"
    }

    fn sample_prepared(&self, psi: &PureState, seed: u64, index: u64) -> OnticState {
        bm_sample(psi, seed, index)
    }

    fn has_density(&self) -> bool {
        false
    }

    fn density(&self, _psi: &PureState, lambda: &OnticState) -> Result<Option<f64>, ModelError> {
        lambda.as_pair().ok_or(SHAPE)?;
        Ok(None)
    }

    fn in_support(&self, psi: &PureState, lambda: &OnticState) -> bool {
        point_mass_support(psi, lambda)
    }

    fn response(&self, basis: &MeasurementBasis, outcome: usize, lambda: &OnticState) -> Result<f64, ModelError> {
        outcome_of(basis, outcome)?;
        let (a, b) = lambda.as_pair().ok_or(SHAPE)?;
        let lead = basis.outcomes()[0].bloch();
        let shift = if basis.label().is_some() { LABEL_SHIFT } else { 0.0 };
        let first = step(lead.dot(a) + lead.dot(b) + shift);
        Ok(if outcome == 0 { first } else { 1.0 - first })
    }

    fn reference_sample(&self, seed: u64, index: u64) -> OnticState {
        uniform_pair(&mut SampleStream::new(seed, index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::BlochVector;

    #[test]
    fn constant_half_responds_half() {
        let basis = MeasurementBasis::containing(&PureState::plus_z());
        let l = ConstantHalf.sample_prepared(&PureState::plus_z(), 1, 1);
        assert_eq!(ConstantHalf.response(&basis, 0, &l), Ok(0.5));
        assert_eq!(ConstantHalf.response(&basis, 1, &l), Ok(0.5));
    }

    #[test]
    fn label_reading_depends_on_descriptor() {
        let z = PureState::plus_z();
        let plain = MeasurementBasis::containing(&z);
        let labelled = plain.clone().with_label("z");
        // λ₁ + λ₂ slightly below the equator of z
        let l = OnticState::pair(BlochVector::from_angles(1.7, 0.0), BlochVector::from_angles(1.7, 3.0));
        assert_eq!(LabelReading.response(&plain, 0, &l), Ok(0.0));
        assert_eq!(LabelReading.response(&labelled, 0, &l), Ok(1.0));
        for b in [&plain, &labelled, &labelled.permuted()] {
            let sum = LabelReading.response(b, 0, &l).unwrap() + LabelReading.response(b, 1, &l).unwrap();
            assert_eq!(sum, 1.0);
        }
    }
}
