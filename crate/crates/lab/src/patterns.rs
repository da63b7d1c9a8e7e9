//! Expected verdicts per model and check.
//!
//! The table is JSON shipped with the tool (`data/patterns.json`), keyed by
//! model name and then by report `check_name`. A model that is not listed,
//! or a check missing from its row, has no expectation and any verdict for
//! it counts as unexpected.

use std::collections::BTreeMap;

use ontic_core::{CheckReport, Verdict};
use serde::{Deserialize, Serialize};

const BUILTIN: &str = include_str!("../data/patterns.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PatternTable(BTreeMap<String, BTreeMap<String, Verdict>>);

/// A report whose verdict is not the expected one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub model_name: String,
    pub check_name: String,
    pub expected: Option<Verdict>,
    pub observed: Verdict,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.expected {
            Some(e) => write!(
                f,
                "{} / {}: expected {e}, observed {}",
                self.model_name, self.check_name, self.observed
            ),
            None => write!(
                f,
                "{} / {}: no expected verdict, observed {}",
                self.model_name, self.check_name, self.observed
            ),
        }
    }
}

impl PatternTable {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("shipped pattern table parses")
    }

    pub fn from_json(json: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(json)
    }

    pub fn expected(&self, model_name: &str, check_name: &str) -> Option<Verdict> {
        self.0.get(model_name)?.get(check_name).copied()
    }

    pub fn models(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn mismatch(&self, report: &CheckReport) -> Option<Mismatch> {
        let expected = self.expected(&report.model_name, &report.check_name);
        (expected != Some(report.verdict)).then(|| Mismatch {
            model_name: report.model_name.clone(),
            check_name: report.check_name.clone(),
            expected,
            observed: report.verdict,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CheckKind, ModelKind};

    #[test]
    fn builtin_covers_every_model_and_check() {
        let t = PatternTable::builtin();
        for m in ModelKind::ALL {
            for c in CheckKind::ALL {
                assert!(
                    t.expected(m.name(), c.report_name()).is_some(),
                    "{} {}",
                    m.name(),
                    c.name()
                );
            }
        }
        assert_eq!(t.models().count(), ModelKind::ALL.len());
    }

    #[test]
    fn published_rows() {
        let t = PatternTable::builtin();
        assert_eq!(t.expected("ks", "max_psi_epistemic"), Some(Verdict::Satisfied));
        assert_eq!(
            t.expected("ks", "preparation_noncontextuality"),
            Some(Verdict::Violated)
        );
        assert_eq!(t.expected("bell-mermin", "max_psi_epistemic"), Some(Verdict::Violated));
        assert_eq!(t.expected("bell-mermin", "ontology_class"), Some(Verdict::PsiOntic));
        assert_eq!(t.expected("ks", "no_such_check"), None);
    }

    #[test]
    fn table_is_data() {
        let t = PatternTable::from_json(r#"{"toy": {"born_reproduction": "inconclusive"}}"#).unwrap();
        assert_eq!(t.expected("toy", "born_reproduction"), Some(Verdict::Inconclusive));
        assert!(PatternTable::from_json(r#"{"toy": {"born_reproduction": "maybe"}}"#).is_err());
    }
}
