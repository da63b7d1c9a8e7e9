//! The ontological-model abstraction and its concrete instances.
//!
//! A model supplies, for every pure state ψ, a preparation distribution μ_ψ
//! over ontic states (as a sampler, and as a density when one exists), the
//! support Λ_ψ of that distribution, and response functions ξ_M(α|λ) for
//! every measurement basis M.

use alloc::string::String;
use alloc::vec::Vec;

use crate::integrate::{uniform_sphere_from, SampleStream};
use crate::qubit::{orthogonal_complement, BlochVector, MeasurementBasis, PureState, INVARIANT_TOL};

mod bell_mermin;
mod controls;
mod kochen_specker;

pub use bell_mermin::{bm_density, bm_response, bm_sample, BellMermin};
pub use controls::{ConstantHalf, LabelReading};
pub use kochen_specker::{ks_density, ks_response, ks_sample, KochenSpecker};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("model {model} expects a {expected} ontic state")]
    WrongShape {
        model: &'static str,
        expected: &'static str,
    },
    #[error("outcome index {0} out of range for a qubit basis")]
    OutcomeIndex(usize),
    #[error("catalog basis outcome {0} is not among the catalog states")]
    BasisOutsideCatalog(String),
    #[error("catalog has no states")]
    EmptyCatalog,
}

/// Heaviside step with `Θ(0) = 0`.
#[inline]
pub fn step(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// A point of the ontic state space.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OnticState {
    /// A point of S₂.
    Single(BlochVector),
    /// A point of S₂ × S₂. `prepared` records the state whose point measure
    /// fixed `first`, when the sample came from a preparation.
    Pair {
        first: BlochVector,
        second: BlochVector,
        prepared: Option<BlochVector>,
    },
}

impl OnticState {
    pub fn pair(first: BlochVector, second: BlochVector) -> Self {
        Self::Pair {
            first,
            second,
            prepared: None,
        }
    }

    pub fn as_single(&self) -> Option<&BlochVector> {
        match self {
            Self::Single(v) => Some(v),
            Self::Pair { .. } => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&BlochVector, &BlochVector)> {
        match self {
            Self::Pair { first, second, .. } => Some((first, second)),
            Self::Single(_) => None,
        }
    }
}

/// A uniform point of S₂ × S₂ drawn from one sample stream.
pub(crate) fn uniform_pair(stream: &mut SampleStream) -> OnticState {
    let first = uniform_sphere_from(stream);
    let second = uniform_sphere_from(stream);
    OnticState::pair(first, second)
}

/// An ontological model of the qubit.
///
/// All capabilities are pure functions of their inputs and of `(seed, index)`.
pub trait OntologicalModel: Sync {
    fn name(&self) -> &'static str;

    /// Draws λ ~ μ_ψ.
    fn sample_prepared(&self, psi: &PureState, seed: u64, index: u64) -> OnticState;

    /// Whether μ_ψ has a density with respect to the reference measure.
    fn has_density(&self) -> bool;

    /// Density of μ_ψ at λ w.r.t. the reference measure, `None` when the
    /// measure is singular.
    fn density(&self, psi: &PureState, lambda: &OnticState) -> Result<Option<f64>, ModelError>;

    /// λ ∈ Λ_ψ.
    fn in_support(&self, psi: &PureState, lambda: &OnticState) -> bool;

    /// ξ_M(α|λ) for `α = basis.outcome(outcome)`.
    fn response(&self, basis: &MeasurementBasis, outcome: usize, lambda: &OnticState) -> Result<f64, ModelError>;

    /// Draws from the reference measure on Λ.
    fn reference_sample(&self, seed: u64, index: u64) -> OnticState;
}

pub(crate) fn outcome_of(basis: &MeasurementBasis, outcome: usize) -> Result<&PureState, ModelError> {
    basis.outcome(outcome).ok_or(ModelError::OutcomeIndex(outcome))
}

/// The states and bases a run works with.
#[derive(Debug, Clone, PartialEq)]
pub struct StateCatalog {
    states: Vec<PureState>,
    bases: Vec<MeasurementBasis>,
}

impl StateCatalog {
    /// Validates that every basis outcome is one of `states`.
    pub fn new(states: Vec<PureState>, bases: Vec<MeasurementBasis>) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::EmptyCatalog);
        }
        for basis in &bases {
            for o in basis.outcomes() {
                if !states.iter().any(|s| s.same_state(o, INVARIANT_TOL)) {
                    return Err(ModelError::BasisOutsideCatalog(o.display_name()));
                }
            }
        }
        Ok(Self { states, bases })
    }

    /// Adds missing orthogonal complements, drops duplicate states, and forms
    /// one basis per antipodal pair in order of first appearance.
    pub fn from_states(states: Vec<PureState>) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::EmptyCatalog);
        }
        let mut closed: Vec<PureState> = Vec::new();
        for s in states {
            if !closed.iter().any(|c| c.same_state(&s, INVARIANT_TOL)) {
                closed.push(s);
            }
        }
        let originals = closed.len();
        for i in 0..originals {
            let perp = orthogonal_complement(&closed[i]);
            if !closed.iter().any(|c| c.same_state(&perp, INVARIANT_TOL)) {
                closed.push(perp);
            }
        }
        let mut bases: Vec<MeasurementBasis> = Vec::new();
        for s in &closed {
            if bases.iter().any(|b| b.index_of(s, INVARIANT_TOL).is_some()) {
                continue;
            }
            let perp = closed
                .iter()
                .find(|c| c.same_state(&orthogonal_complement(s), INVARIANT_TOL))
                .cloned()
                .unwrap_or_else(|| orthogonal_complement(s));
            let basis = MeasurementBasis::new(s.clone(), perp).unwrap_or_else(|_| MeasurementBasis::containing(s));
            bases.push(basis);
        }
        Self::new(closed, bases)
    }

    /// The six axis states and the x, y, z bases.
    pub fn axis() -> Self {
        let s = PureState::axis_states();
        let bases = [("x", 0), ("y", 2), ("z", 4)]
            .iter()
            .map(|(label, i)| {
                MeasurementBasis::new(s[*i].clone(), s[i + 1].clone())
                    .expect("axis states are antipodal")
                    .with_label(*label)
            })
            .collect();
        Self { states: s, bases }
    }

    /// Axis catalog plus `n_pairs` random states (uniform on S₂, keyed on
    /// `seed`) and their complements, with one basis per pair.
    pub fn axis_with_random(n_pairs: usize, seed: u64) -> Self {
        let mut cat = Self::axis();
        for k in 0..n_pairs {
            let v = crate::integrate::uniform_sphere_sampler(seed, k as u64);
            let s = PureState::labeled(v, alloc::format!("r{k}"));
            let perp = orthogonal_complement(&s);
            cat.bases
                .push(MeasurementBasis::new(s.clone(), perp.clone()).expect("antipodal"));
            cat.states.push(s);
            cat.states.push(perp);
        }
        cat
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn bases(&self) -> &[MeasurementBasis] {
        &self.bases
    }

    pub fn is_closed_under_complement(&self) -> bool {
        self.states.iter().all(|s| {
            let perp = orthogonal_complement(s);
            self.states.iter().any(|c| c.same_state(&perp, INVARIANT_TOL))
        })
    }

    /// A catalog basis containing `state`, with the outcome index.
    pub fn basis_containing(&self, state: &PureState) -> Option<(&MeasurementBasis, usize)> {
        self.bases
            .iter()
            .find_map(|b| b.index_of(state, INVARIANT_TOL).map(|i| (b, i)))
    }
}

impl Default for StateCatalog {
    fn default() -> Self {
        Self::axis()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_convention() {
        assert_eq!(step(0.3), 1.0);
        assert_eq!(step(0.0), 0.0);
        assert_eq!(step(-0.0), 0.0);
        assert_eq!(step(-0.3), 0.0);
    }

    #[test]
    fn axis_catalog_shape() {
        let c = StateCatalog::axis();
        assert_eq!(c.states().len(), 6);
        assert_eq!(c.bases().len(), 3);
        assert!(c.is_closed_under_complement());
        let (b, i) = c.basis_containing(&PureState::minus_y()).unwrap();
        assert_eq!(b.label(), Some("y"));
        assert_eq!(i, 1);
    }

    #[test]
    fn random_catalog_is_closed() {
        let c = StateCatalog::axis_with_random(6, 3);
        assert_eq!(c.states().len(), 18);
        assert_eq!(c.bases().len(), 9);
        assert!(c.is_closed_under_complement());
        assert_eq!(c, StateCatalog::axis_with_random(6, 3));
    }

    #[test]
    fn from_states_closes_and_dedups() {
        let c = StateCatalog::from_states(alloc::vec![
            PureState::plus_z(),
            PureState::plus_x(),
            PureState::plus_z(),
            PureState::minus_x(),
        ])
        .unwrap();
        assert_eq!(c.states().len(), 4);
        assert_eq!(c.bases().len(), 2);
        assert!(c.is_closed_under_complement());
        assert_eq!(c.states()[3], PureState::minus_z());
    }

    #[test]
    fn catalog_rejects_foreign_basis() {
        let err = StateCatalog::new(
            alloc::vec![PureState::plus_z()],
            alloc::vec![MeasurementBasis::containing(&PureState::plus_x())],
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::BasisOutsideCatalog(_)));
        assert_eq!(StateCatalog::from_states(alloc::vec![]), Err(ModelError::EmptyCatalog));
    }
}
