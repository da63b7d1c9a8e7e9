//! Steering from a maximally entangled state and the resulting nonlocality
//! witness.
//!
//! Alice and Bob share (|ψ⟩|ψ⟩ + |ψ⊥⟩|ψ⊥⟩)/√2. Whatever basis Alice measures,
//! Bob is left with an even mixture whose density operator is I/2, so a
//! local model must give Bob the same ontic distribution for every choice
//! Alice makes. A preparation-contextual model cannot.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::checks::{
    check_born_reproduction, check_preparation_noncontextuality, CheckError, CheckReport, CheckSettings, Verdict,
};
use crate::models::{ModelError, OntologicalModel, StateCatalog};
use crate::qubit::{
    bloch_to_amplitudes, born_probability, orthogonal_complement, DensityOperator, Ensemble, MeasurementBasis,
    PureState, QubitError,
};

/// Outcomes less likely than this leave Bob's state undefined.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;
/// Tolerance of the runtime verification in [`steering_basis`].
pub const STEERING_VERIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BellError {
    #[error("bipartite amplitudes have norm {0}, not 1")]
    NotNormalized(f64),
    #[error("Alice outcome {outcome} has probability {probability:e}; Bob's state is undefined")]
    NegligibleOutcome { outcome: usize, probability: f64 },
    #[error("steering basis failed verification (error {0:e})")]
    Verification(f64),
    #[error("model does not reproduce the Born rule on the steered states: {0}")]
    BornPrecondition(alloc::string::String),
    #[error(transparent)]
    Qubit(#[from] QubitError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Two-qubit pure state, amplitudes ordered 00, 01, 10, 11 (Alice ⊗ Bob).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteState {
    amplitudes: [Complex64; 4],
}

impl BipartiteState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self, BellError> {
        let n = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if libm::fabs(n - 1.0) > 1e-12 {
            return Err(BellError::NotNormalized(libm::sqrt(n)));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    fn coeff(&self, alice: usize, bob: usize) -> Complex64 {
        self.amplitudes[2 * alice + bob]
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|a| a.norm_sqr()).sum())
    }

    /// Bob's reduced density operator, Tr_A |Ψ⟩⟨Ψ|.
    pub fn reduced_bob(&self) -> Result<DensityOperator, QubitError> {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (j, row) in m.iter_mut().enumerate() {
            for (k, e) in row.iter_mut().enumerate() {
                *e = (0..2).map(|i| self.coeff(i, j) * self.coeff(i, k).conj()).sum();
            }
        }
        DensityOperator::new(m)
    }
}

/// Bob's conditional states after Alice measures in `alice_basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeredEnsemble {
    pub alice_basis: MeasurementBasis,
    pub outcomes: Vec<(f64, PureState)>,
}

impl SteeredEnsemble {
    pub fn to_ensemble(&self) -> Result<Ensemble, QubitError> {
        // normalize away round-off so the weights validate at 1e-12
        let total: f64 = self.outcomes.iter().map(|(p, _)| p).sum();
        Ensemble::new(self.outcomes.iter().map(|(p, s)| (p / total, s.clone())).collect())
    }
}

/// (|ψ⟩|ψ⟩ + |ψ⊥⟩|ψ⊥⟩)/√2.
pub fn make_max_entangled(psi: &PureState) -> BipartiteState {
    let a = bloch_to_amplitudes(psi);
    let b = bloch_to_amplitudes(&orthogonal_complement(psi));
    let amplitudes = core::array::from_fn(|n| (a[n / 2] * a[n % 2] + b[n / 2] * b[n % 2]) * FRAC_1_SQRT_2);
    BipartiteState { amplitudes }
}

/// Bob's states conditioned on each of Alice's outcomes, by partial inner
/// product ⟨a|_A Ψ.
pub fn steer(state: &BipartiteState, alice_basis: &MeasurementBasis) -> Result<SteeredEnsemble, BellError> {
    let mut outcomes = Vec::with_capacity(2);
    for (k, a) in alice_basis.outcomes().iter().enumerate() {
        let amps = bloch_to_amplitudes(a);
        let bob: [Complex64; 2] = core::array::from_fn(|j| (0..2).map(|i| amps[i].conj() * state.coeff(i, j)).sum());
        let probability = bob[0].norm_sqr() + bob[1].norm_sqr();
        if probability < MIN_OUTCOME_PROBABILITY {
            return Err(BellError::NegligibleOutcome {
                outcome: k,
                probability,
            });
        }
        let mut bob_state = PureState::from_amplitudes(bob)?;
        if let Some(l) = a.label() {
            bob_state = bob_state.with_label(format!("bob|{l}"));
        }
        outcomes.push((probability, bob_state));
    }
    Ok(SteeredEnsemble {
        alice_basis: alice_basis.clone(),
        outcomes,
    })
}

/// The basis Alice measures on (|ψ⟩|ψ⟩ + |ψ⊥⟩|ψ⊥⟩)/√2 to leave Bob in φ or
/// φ⊥ with probability ½ each.
///
/// Writing |φ⟩ = α|ψ⟩ + β|ψ⊥⟩, Alice's first outcome is ᾱ|ψ⟩ + β̄|ψ⊥⟩. The
/// result is checked by steering before it is returned.
pub fn steering_basis(psi: &PureState, phi: &PureState) -> Result<MeasurementBasis, BellError> {
    let p = bloch_to_amplitudes(psi);
    let q = bloch_to_amplitudes(&orthogonal_complement(psi));
    let f = bloch_to_amplitudes(phi);
    let inner = |u: &[Complex64; 2], v: &[Complex64; 2]| u[0].conj() * v[0] + u[1].conj() * v[1];
    let (alpha, beta) = (inner(&p, &f), inner(&q, &f));
    let a: [Complex64; 2] = core::array::from_fn(|i| alpha.conj() * p[i] + beta.conj() * q[i]);
    let first = PureState::from_amplitudes(a)?;
    let basis = MeasurementBasis::containing(&first);

    let steered = steer(&make_max_entangled(psi), &basis)?;
    let targets = [phi.clone(), orthogonal_complement(phi)];
    let mut err: f64 = 0.0;
    for ((prob, bob), target) in steered.outcomes.iter().zip(&targets) {
        err = err
            .max(libm::fabs(prob - 0.5))
            .max(bob.bloch().distance(target.bloch()));
    }
    if err > STEERING_VERIFY_TOL {
        return Err(BellError::Verification(err));
    }
    Ok(basis)
}

/// Steers Bob into {½ψ, ½ψ⊥} and into {½φ, ½φ⊥} from the same entangled
/// state and asks whether the model gives Bob the same ontic distribution
/// both times. A `Violated` verdict means the distribution depends on
/// Alice's choice: the witness fires.
pub fn nonlocality_witness<M: OntologicalModel + ?Sized>(
    model: &M,
    psi: &PureState,
    phi: &PureState,
    settings: &CheckSettings,
) -> Result<CheckReport, BellError> {
    let involved = StateCatalog::from_states(alloc::vec![psi.clone(), phi.clone()])?;
    let born = check_born_reproduction(model, &involved, settings)?;
    if born.verdict == Verdict::Violated {
        return Err(BellError::BornPrecondition(born.details));
    }
    let shared = make_max_entangled(psi);
    let first = steer(&shared, &steering_basis(psi, psi)?)?;
    let second = steer(&shared, &steering_basis(psi, phi)?)?;
    let e1 = first.to_ensemble()?;
    let e2 = second.to_ensemble()?;
    let mut report = check_preparation_noncontextuality(model, &e1, &e2, settings)?;
    report.check_name = alloc::string::String::from("nonlocality_witness");
    report.details = format!(
        "Alice measures {} or {} (|⟨φ|ψ⟩|² = {:.6}); {}",
        first.alice_basis.display_name(),
        second.alice_basis.display_name(),
        born_probability(phi, psi),
        report.details
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::McConfig;
    use crate::models::{BellMermin, KochenSpecker};
    use crate::qubit::{density_operators_equal, ensemble_density_operator, BlochVector};
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn entangled_computational_basis() {
        let s = make_max_entangled(&PureState::plus_z());
        assert_eq!(s.amplitudes(), &[c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        let rho = s.reduced_bob().unwrap();
        assert!(density_operators_equal(
            &rho,
            &DensityOperator::maximally_mixed(),
            1e-12
        ));
    }

    #[test]
    fn steering_in_z_and_x() {
        let s = make_max_entangled(&PureState::plus_z());
        let z = steer(&s, &MeasurementBasis::containing(&PureState::plus_z())).unwrap();
        assert!((z.outcomes[0].0 - 0.5).abs() < 1e-12);
        assert!(z.outcomes[0].1.same_state(&PureState::plus_z(), 1e-12));
        assert!(z.outcomes[1].1.same_state(&PureState::minus_z(), 1e-12));
        let x = steer(&s, &MeasurementBasis::containing(&PureState::plus_x())).unwrap();
        assert!((x.outcomes[1].0 - 0.5).abs() < 1e-12);
        assert!(x.outcomes[0].1.same_state(&PureState::plus_x(), 1e-12));
        assert!(x.outcomes[1].1.same_state(&PureState::minus_x(), 1e-12));
    }

    #[test]
    fn steering_basis_examples() {
        let z = PureState::plus_z();
        let b = steering_basis(&z, &z).unwrap();
        assert!(b.outcomes()[0].same_state(&z, 1e-12));
        let b = steering_basis(&z, &PureState::plus_x()).unwrap();
        assert!(b.outcomes()[0].same_state(&PureState::plus_x(), 1e-12));
        let b = steering_basis(&z, &PureState::plus_y()).unwrap();
        assert!(b.outcomes()[0].same_state(&PureState::minus_y(), 1e-12));
        assert!(b.outcomes()[1].same_state(&PureState::plus_y(), 1e-12));
    }

    #[test]
    fn bipartite_validation() {
        assert!(matches!(
            BipartiteState::new([c(1.0), c(1.0), c(0.0), c(0.0)]),
            Err(BellError::NotNormalized(_))
        ));
        let product = BipartiteState::new([c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let err = steer(&product, &MeasurementBasis::containing(&PureState::plus_z())).unwrap_err();
        assert!(matches!(err, BellError::NegligibleOutcome { outcome: 1, .. }));
    }

    #[test]
    fn witness_fires_for_distinct_bases_only() {
        let s = CheckSettings::new(McConfig::new(20_000, 1, 4096).unwrap());
        let (z, x) = (PureState::plus_z(), PureState::plus_x());
        for model in [&KochenSpecker as &dyn OntologicalModel, &BellMermin] {
            assert_eq!(
                nonlocality_witness(model, &z, &x, &s).unwrap().verdict,
                Verdict::Violated
            );
            assert_eq!(
                nonlocality_witness(model, &z, &z, &s).unwrap().verdict,
                Verdict::Satisfied
            );
        }
        let err = nonlocality_witness(&crate::models::ConstantHalf, &z, &x, &s).unwrap_err();
        assert!(matches!(err, BellError::BornPrecondition(_)));
    }

    fn unit_vector() -> impl Strategy<Value = BlochVector> {
        (-1.0f64..=1.0, 0.0f64..core::f64::consts::TAU).prop_map(|(z, phi)| {
            let r = libm::sqrt((1.0 - z * z).max(0.0));
            BlochVector::new(r * libm::cos(phi), r * libm::sin(phi), z).unwrap()
        })
    }

    proptest! {
        #[test]
        fn steered_ensembles_are_maximally_mixed(a in unit_vector(), b in unit_vector()) {
            let (psi, phi) = (PureState::new(a), PureState::new(b));
            let shared = make_max_entangled(&psi);
            let basis = steering_basis(&psi, &phi).unwrap();
            let steered = steer(&shared, &basis).unwrap();
            prop_assert!((steered.outcomes[0].0 - 0.5).abs() <= 1e-10);
            prop_assert!(steered.outcomes[0].1.same_state(&phi, 1e-10));
            let rho = ensemble_density_operator(&steered.to_ensemble().unwrap());
            prop_assert!(density_operators_equal(&rho, &DensityOperator::maximally_mixed(), 1e-12));
            let other = steer(&shared, &MeasurementBasis::containing(&PureState::new(b))).unwrap();
            let rho = ensemble_density_operator(&other.to_ensemble().unwrap());
            prop_assert!(density_operators_equal(&rho, &DensityOperator::maximally_mixed(), 1e-12));
        }
    }
}
