//! Executes a [`RunConfig`].

use std::time::Instant;

use ontic_core::bell::{nonlocality_witness, BellError};
use ontic_core::checks::{
    audit_implication_chain, check_born_reproduction, check_max_psi_epistemic, check_measurement_noncontextuality,
    check_omega_witness, check_outcome_determinism, check_preparation_noncontextuality_catalog, classify_ontology,
    CheckError,
};
use ontic_core::qubit::{born_probability, INVARIANT_TOL};
use ontic_core::{CheckReport, CheckSettings, OntologicalModel, PureState, StateCatalog, Verdict};

use crate::catalog::{load_catalog, CatalogError};
use crate::config::{CheckKind, ConfigError, RunConfig};
use crate::patterns::{Mismatch, PatternTable};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("the catalog has no two states that are neither equal nor orthogonal")]
    NoWitnessPair,
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Bell(#[from] BellError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub reports: Vec<CheckReport>,
    pub mismatches: Vec<Mismatch>,
}

impl RunOutcome {
    /// 0 when every verdict matches the pattern table, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.mismatches.is_empty())
    }
}

/// Runs the configured checks in order against the shipped pattern table.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    run_with_table(config, &PatternTable::builtin())
}

pub fn run_with_table(config: &RunConfig, table: &PatternTable) -> Result<RunOutcome, RunError> {
    let resolved = config.validate()?;
    let catalog = match &config.catalog_path {
        Some(p) => load_catalog(p)?,
        None => StateCatalog::axis(),
    };
    let model = resolved.model.model();
    let mut reports = Vec::new();
    for check in &resolved.checks {
        reports.extend(run_check(*check, model, &catalog, &resolved.settings)?);
    }
    let mismatches = reports.iter().filter_map(|r| table.mismatch(r)).collect();
    Ok(RunOutcome { reports, mismatches })
}

/// Reports for one check: one report, or for the audit its components
/// followed by the chain verdict.
pub fn run_check(
    check: CheckKind,
    model: &dyn OntologicalModel,
    catalog: &StateCatalog,
    settings: &CheckSettings,
) -> Result<Vec<CheckReport>, RunError> {
    let start = Instant::now();
    let mut reports = match check {
        CheckKind::Born => vec![check_born_reproduction(model, catalog, settings)?],
        CheckKind::Determinism => vec![check_outcome_determinism(model, catalog, settings)?],
        CheckKind::MeasurementNc => vec![check_measurement_noncontextuality(model, catalog, settings)?],
        CheckKind::MaxEpistemic => vec![check_max_psi_epistemic(model, catalog, settings)?],
        CheckKind::Ontology => vec![classify_ontology(model, catalog, settings)?],
        CheckKind::PrepNc => vec![check_preparation_noncontextuality_catalog(model, catalog, settings)?],
        CheckKind::Omega => {
            let (psi, phi) = witness_pair(catalog)?;
            let (basis, _) = catalog.basis_containing(&phi).ok_or(RunError::NoWitnessPair)?;
            vec![check_omega_witness(model, &psi, &phi, basis, settings)?]
        }
        CheckKind::Nonlocality => {
            let (psi, phi) = witness_pair(catalog)?;
            vec![nonlocality_or_vacuous(model, &psi, &phi, settings)?]
        }
        CheckKind::Audit => {
            let outcome = audit_implication_chain(model, catalog, settings)?;
            let mut all = outcome.components;
            all.push(outcome.report);
            all
        }
    };
    let ms = u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX);
    for r in &mut reports {
        r.duration_ms = ms;
    }
    Ok(reports)
}

/// The witness presupposes Born reproduction; without it the report is
/// inconclusive rather than an error.
fn nonlocality_or_vacuous(
    model: &dyn OntologicalModel,
    psi: &PureState,
    phi: &PureState,
    settings: &CheckSettings,
) -> Result<CheckReport, RunError> {
    match nonlocality_witness(model, psi, phi, settings) {
        Ok(r) => Ok(r),
        Err(BellError::BornPrecondition(details)) => Ok(CheckReport {
            check_name: CheckKind::Nonlocality.report_name().to_string(),
            model_name: model.name().to_string(),
            verdict: Verdict::Inconclusive,
            estimates: Vec::new(),
            tolerance: settings.mc_tol,
            n_samples: settings.mc.n_samples(),
            seed: settings.mc.seed(),
            details: format!("not applicable, Born reproduction fails on the steered states ({details})"),
            duration_ms: 0,
        }),
        Err(e) => Err(e.into()),
    }
}

/// ψ and φ for the Ω and nonlocality witnesses: +z and +x when the catalog
/// has states with those labels, otherwise the first catalog state and the
/// first state neither equal nor orthogonal to it.
pub fn witness_pair(catalog: &StateCatalog) -> Result<(PureState, PureState), RunError> {
    let states = catalog.states();
    let by_label = |l: &str| states.iter().find(|s| s.label() == Some(l));
    if let (Some(z), Some(x)) = (by_label("+z"), by_label("+x")) {
        return Ok((z.clone(), x.clone()));
    }
    let psi = states.first().ok_or(RunError::NoWitnessPair)?;
    states
        .iter()
        .find(|phi| {
            let p = born_probability(phi, psi);
            p > INVARIANT_TOL && p < 1.0 - INVARIANT_TOL
        })
        .map(|phi| (psi.clone(), phi.clone()))
        .ok_or(RunError::NoWitnessPair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_catalog;

    #[test]
    fn witness_pair_prefers_z_and_x() {
        let (psi, phi) = witness_pair(&StateCatalog::axis()).unwrap();
        assert_eq!((psi.label(), phi.label()), (Some("+z"), Some("+x")));
        let cat = parse_catalog(r#"[{"bloch": [0, 0, 1]}, {"bloch": [0, 0.6, 0.8]}]"#).unwrap();
        let (psi, phi) = witness_pair(&cat).unwrap();
        assert!((born_probability(&phi, &psi) - 0.9).abs() < 1e-12);
        let one_basis = parse_catalog(r#"[{"bloch": [1, 0, 0]}]"#).unwrap();
        assert!(matches!(witness_pair(&one_basis), Err(RunError::NoWitnessPair)));
    }
}
