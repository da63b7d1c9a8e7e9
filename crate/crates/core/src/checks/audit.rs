//! Audit of the implication chain
//! preparation noncontextual ⇒ maximally ψ-epistemic ⇒ Kochen-Specker
//! noncontextual (outcome deterministic and measurement noncontextual).
//!
//! The implications are theorems about Born-reproducing models; the audit
//! can only test their instances on the models it is given.

use alloc::format;
use alloc::vec::Vec;

use super::epistemic::{catalog_overlaps, max_epistemic_report};
use super::{
    check_born_reproduction, check_measurement_noncontextuality, check_outcome_determinism,
    check_preparation_noncontextuality_catalog, CheckError, CheckReport, CheckSettings, Verdict,
};
use crate::models::{OntologicalModel, StateCatalog};

/// Verdicts of the component checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainPattern {
    pub born: Verdict,
    pub preparation_nc: Verdict,
    pub max_epistemic: Verdict,
    pub determinism: Verdict,
    pub measurement_nc: Verdict,
}

impl ChainPattern {
    /// Outcome determinism and measurement noncontextuality together.
    pub fn ks_noncontextual(&self) -> Verdict {
        self.determinism.and(self.measurement_nc)
    }

    /// The implication these verdicts contradict, ignoring whether the model
    /// reproduces the Born rule.
    pub fn raw_counterexample(&self) -> Option<&'static str> {
        if self.preparation_nc == Verdict::Satisfied && self.max_epistemic == Verdict::Violated {
            Some("preparation noncontextual but not maximally psi-epistemic")
        } else if self.max_epistemic == Verdict::Satisfied && self.ks_noncontextual() == Verdict::Violated {
            Some("maximally psi-epistemic but not Kochen-Specker noncontextual")
        } else {
            None
        }
    }

    /// A contradiction of either implication by a Born-reproducing model.
    pub fn counterexample(&self) -> Option<&'static str> {
        if self.born == Verdict::Satisfied {
            self.raw_counterexample()
        } else {
            None
        }
    }

    /// True when an inconclusive component could be hiding a counterexample.
    pub fn undecided(&self) -> bool {
        let inc = |v: Verdict| v == Verdict::Inconclusive;
        if self.born == Verdict::Violated {
            return false;
        }
        let first = (inc(self.preparation_nc) && self.max_epistemic != Verdict::Satisfied)
            || (inc(self.max_epistemic) && self.preparation_nc != Verdict::Violated);
        let second = (inc(self.max_epistemic) && self.ks_noncontextual() != Verdict::Satisfied)
            || (inc(self.ks_noncontextual()) && self.max_epistemic != Verdict::Violated);
        inc(self.born) || first || second
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditOutcome {
    pub report: CheckReport,
    pub pattern: ChainPattern,
    /// Component reports in the order born, determinism, measurement NC,
    /// max ψ-epistemic, preparation NC.
    pub components: Vec<CheckReport>,
}

/// Runs every component check and looks for a counterexample to either
/// implication.
pub fn audit_implication_chain<M: OntologicalModel + ?Sized>(
    model: &M,
    catalog: &StateCatalog,
    settings: &CheckSettings,
) -> Result<AuditOutcome, CheckError> {
    if !catalog.is_closed_under_complement() {
        return Err(CheckError::CatalogNotClosed);
    }
    let born = check_born_reproduction(model, catalog, settings)?;
    let determinism = check_outcome_determinism(model, catalog, settings)?;
    let measurement_nc = check_measurement_noncontextuality(model, catalog, settings)?;
    let overlaps = catalog_overlaps(model, catalog, &settings.mc)?;
    let max_epistemic = max_epistemic_report(model.name(), catalog, &overlaps, settings);
    let preparation_nc = check_preparation_noncontextuality_catalog(model, catalog, settings)?;

    let pattern = ChainPattern {
        born: born.verdict,
        preparation_nc: preparation_nc.verdict,
        max_epistemic: max_epistemic.verdict,
        determinism: determinism.verdict,
        measurement_nc: measurement_nc.verdict,
    };
    let verdict = if pattern.counterexample().is_some() {
        Verdict::Violated
    } else if pattern.undecided() {
        Verdict::Inconclusive
    } else {
        Verdict::Satisfied
    };
    let mut report = CheckReport::new("implication_chain", model.name(), settings.mc_tol, &settings.mc);
    report.verdict = verdict;
    report.details = format!(
        "born={} prep_nc={} max_epistemic={} ks_nc={} (determinism={}, measurement_nc={}); {}",
        pattern.born,
        pattern.preparation_nc,
        pattern.max_epistemic,
        pattern.ks_noncontextual(),
        pattern.determinism,
        pattern.measurement_nc,
        match (pattern.counterexample(), pattern.born) {
            (Some(c), _) => format!("counterexample: {c}"),
            (None, Verdict::Satisfied) => "chain consistent".into(),
            (None, _) => "chain consistent; Born reproduction not established, implications vacuous".into(),
        }
    );
    Ok(AuditOutcome {
        report,
        pattern,
        components: alloc::vec![born, determinism, measurement_nc, max_epistemic, preparation_nc],
    })
}
