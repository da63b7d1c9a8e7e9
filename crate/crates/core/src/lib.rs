//! Ontological models of a single qubit and numerical checks of their
//! properties.
//!
//! The crate is `no_std` (with `alloc`). It provides Bloch-sphere state
//! algebra ([`qubit`]), seeded Monte Carlo and product quadrature on the
//! sphere ([`integrate`]), the Kochen-Specker and Bell-Mermin models plus two
//! negative controls ([`models`]), checkers for Born-rule reproduction,
//! determinism, noncontextuality and ψ-epistemicity ([`checks`]), and the
//! steering construction behind the nonlocality witness ([`bell`]).
#![no_std]
extern crate alloc;

pub mod bell;
pub mod checks;
pub mod integrate;
pub mod models;
pub mod qubit;

pub use checks::{CheckReport, CheckSettings, Estimate, Verdict};
pub use integrate::{McConfig, McEstimate, QuadratureGrid};
pub use models::{BellMermin, ConstantHalf, KochenSpecker, LabelReading, OnticState, OntologicalModel, StateCatalog};
pub use qubit::{BlochVector, Ensemble, MeasurementBasis, PureState};
