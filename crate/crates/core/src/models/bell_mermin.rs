use super::{outcome_of, step, uniform_pair, ModelError, OnticState, OntologicalModel};
use crate::integrate::{uniform_sphere_from, SampleStream};
use crate::qubit::{MeasurementBasis, PureState, INVARIANT_TOL};

/// The Bell-Mermin model: Λ = S₂ × S₂, μ_ψ = δ(λ⃗₁ − ψ⃗) × uniform(λ⃗₂),
/// ξ(α|λ) = Θ(α⃗·(λ⃗₁ + λ⃗₂)).
#[derive(Debug, Clone, Copy, Default)]
pub struct BellMermin;

const SHAPE: ModelError = ModelError::WrongShape {
    model: "bell-mermin",
    expected: "sphere-pair",
};

/// First component exactly ψ⃗ (tagged with ψ), second uniform on S₂.
pub fn bm_sample(psi: &PureState, seed: u64, index: u64) -> OnticState {
    let second = uniform_sphere_from(&mut SampleStream::new(seed, index));
    OnticState::Pair {
        first: *psi.bloch(),
        second,
        prepared: Some(*psi.bloch()),
    }
}

/// Always `None`: the point-measure factor has no density.
pub fn bm_density(_psi: &PureState, _lambda: &OnticState) -> Option<f64> {
    None
}

/// `Θ(α⃗·(λ⃗₁ + λ⃗₂))`.
pub fn bm_response(basis: &MeasurementBasis, outcome: usize, lambda: &OnticState) -> Result<f64, ModelError> {
    let alpha = outcome_of(basis, outcome)?;
    let (a, b) = lambda.as_pair().ok_or(SHAPE)?;
    Ok(step(alpha.bloch().dot(a) + alpha.bloch().dot(b)))
}

/// Λ_ψ = {ψ⃗} × S₂, decided by the preparation tag with a distance fallback.
pub(crate) fn point_mass_support(psi: &PureState, lambda: &OnticState) -> bool {
    match lambda {
        OnticState::Pair { first, prepared, .. } => {
            prepared.is_some_and(|tag| tag == *psi.bloch()) || first.distance(psi.bloch()) <= INVARIANT_TOL
        }
        OnticState::Single(_) => false,
    }
}

impl OntologicalModel for BellMermin {
    fn name(&self) -> &'static str {
        "bell-mermin"
    }

    fn sample_prepared(&self, psi: &PureState, seed: u64, index: u64) -> OnticState {
        bm_sample(psi, seed, index)
    }

    fn has_density(&self) -> bool {
        false
    }

    fn density(&self, psi: &PureState, lambda: &OnticState) -> Result<Option<f64>, ModelError> {
        lambda.as_pair().ok_or(SHAPE)?;
        Ok(bm_density(psi, lambda))
    }

    fn in_support(&self, psi: &PureState, lambda: &OnticState) -> bool {
        point_mass_support(psi, lambda)
    }

    fn response(&self, basis: &MeasurementBasis, outcome: usize, lambda: &OnticState) -> Result<f64, ModelError> {
        bm_response(basis, outcome, lambda)
    }

    fn reference_sample(&self, seed: u64, index: u64) -> OnticState {
        uniform_pair(&mut SampleStream::new(seed, index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{mc_expectations, McConfig};
    use crate::qubit::{born_probability, BlochVector};

    #[test]
    fn sample_fixes_first_component() {
        let psi = PureState::new(BlochVector::from_angles(0.3, 0.9));
        let other = PureState::new(BlochVector::from_angles(0.31, 0.9));
        for i in 0..1000 {
            let l = bm_sample(&psi, 3, i);
            let (first, _) = l.as_pair().unwrap();
            assert_eq!(first, psi.bloch());
            assert!(BellMermin.in_support(&psi, &l));
            assert!(!BellMermin.in_support(&other, &l));
        }
    }

    #[test]
    fn second_component_is_centred() {
        let cfg = McConfig::new(1_000_000, 8, 8192).unwrap();
        let psi = PureState::plus_y();
        let est = mc_expectations(
            &|l: &OnticState, out: &mut [f64]| out.copy_from_slice(&l.as_pair().unwrap().1.to_array()),
            3,
            &|s, i| bm_sample(&psi, s, i),
            &cfg,
        )
        .unwrap();
        for e in est {
            assert!(e.mean.abs() <= 5.0 * e.std_error, "{e:?}");
        }
    }

    #[test]
    fn response_examples() {
        let alpha = PureState::new(BlochVector::from_angles(1.2, 0.4));
        let basis = MeasurementBasis::containing(&alpha);
        let a = *alpha.bloch();
        assert_eq!(bm_response(&basis, 0, &OnticState::pair(a, a)).unwrap(), 1.0);
        let v = BlochVector::from_angles(2.0, 1.0);
        for k in 0..2 {
            assert_eq!(bm_response(&basis, k, &OnticState::pair(v, -v)).unwrap(), 0.0);
        }
        assert!(bm_response(&basis, 0, &OnticState::Single(a)).is_err());
    }

    #[test]
    fn response_reproduces_born_rule() {
        let psi = PureState::new(BlochVector::from_angles(0.8, -1.0));
        let alpha = PureState::new(BlochVector::from_angles(2.1, 0.5));
        let basis = MeasurementBasis::containing(&alpha);
        let cfg = McConfig::new(1_000_000, 21, 8192).unwrap();
        let est = mc_expectations(
            &|l: &OnticState, out: &mut [f64]| out[0] = bm_response(&basis, 0, l).unwrap(),
            1,
            &|s, i| bm_sample(&psi, s, i),
            &cfg,
        )
        .unwrap()[0];
        let born = born_probability(&alpha, &psi);
        assert!((est.mean - born).abs() <= 5.0 * est.std_error, "{est:?} vs {born}");
    }

    #[test]
    fn density_is_absent_and_support_is_point_mass() {
        let psi = PureState::plus_z();
        let l = OnticState::pair(BlochVector::PLUS_Z, BlochVector::PLUS_X);
        assert_eq!(BellMermin.density(&psi, &l), Ok(None));
        assert!(BellMermin.in_support(&psi, &l));
        assert!(!BellMermin.in_support(&PureState::plus_x(), &l));
        assert!(BellMermin
            .density(&psi, &OnticState::Single(BlochVector::PLUS_Z))
            .is_err());
    }
}
