//! Property checkers for ontological models.
//!
//! Each checker estimates the quantities a property is defined by, compares
//! them against exact quantum predictions or against each other, and returns
//! a [`CheckReport`]. Comparisons use three verdicts: a discrepancy within
//! the tolerance is *satisfied*, one larger than both the tolerance and five
//! standard errors is *violated*, and anything in between is *inconclusive*.
//! Runs with fewer than [`MIN_RELIABLE_SAMPLES`] samples are never given a
//! definite verdict.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::integrate::{IntegrateError, McConfig, McEstimate, QuadratureGrid, MIN_RELIABLE_SAMPLES};
use crate::models::ModelError;
use crate::qubit::QubitError;

mod audit;
mod born;
mod epistemic;
mod kochen;
mod preparation;

pub use audit::{audit_implication_chain, AuditOutcome, ChainPattern};
pub use born::check_born_reproduction;
pub use epistemic::{catalog_overlaps, check_max_psi_epistemic, classify_ontology, overlap_integral, PairOverlap};
pub use kochen::{check_measurement_noncontextuality, check_outcome_determinism};
pub use preparation::{
    check_omega_witness, check_preparation_noncontextuality, check_preparation_noncontextuality_catalog,
    ensemble_distribution, find_omega_witness, EnsembleDistribution, OmegaWitness,
};

/// Default tolerance for Monte Carlo verdicts.
pub const DEFAULT_MC_TOL: f64 = 1e-2;
/// Default tolerance for quadrature-backed verdicts.
pub const DEFAULT_QUAD_TOL: f64 = 1e-6;
/// Standard errors a discrepancy must exceed to count as a violation.
pub const SIGMA_MULTIPLIER: f64 = 5.0;
/// Tolerance for density-operator equality preconditions.
pub const DENSITY_EQUALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Qubit(#[from] QubitError),
    #[error("ensembles have different density operators (max entry difference {0:e})")]
    DensityMismatch(f64),
    #[error("catalog must be closed under orthogonal complements")]
    CatalogNotClosed,
    #[error("state {0} is not an outcome of the given basis")]
    NotAnOutcome(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Satisfied,
    Violated,
    Inconclusive,
    PsiOntic,
    PsiEpistemic,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Satisfied => "satisfied",
            Self::Violated => "violated",
            Self::Inconclusive => "inconclusive",
            Self::PsiOntic => "psi_ontic",
            Self::PsiEpistemic => "psi_epistemic",
        }
    }

    /// Worst-of combination: violated beats inconclusive beats satisfied.
    pub fn and(self, other: Self) -> Self {
        use Verdict::*;
        match (self, other) {
            (Violated, _) | (_, Violated) => Violated,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Satisfied,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "satisfied" => Self::Satisfied,
            "violated" => Self::Violated,
            "inconclusive" => Self::Inconclusive,
            "psi_ontic" => Self::PsiOntic,
            "psi_epistemic" => Self::PsiEpistemic,
            other => return Err(alloc::format!("unknown verdict {other:?}")),
        })
    }
}

/// Verdict for one comparison of an estimate against its target.
pub fn compare(discrepancy: f64, std_error: f64, tol: f64) -> Verdict {
    let d = libm::fabs(discrepancy);
    if d <= tol {
        Verdict::Satisfied
    } else if d <= SIGMA_MULTIPLIER * std_error {
        Verdict::Inconclusive
    } else {
        Verdict::Violated
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub label: String,
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn new(label: impl Into<String>, est: &McEstimate) -> Self {
        Self {
            label: label.into(),
            mean: est.mean,
            std_error: est.std_error,
        }
    }

    pub fn exact(label: impl Into<String>, value: f64) -> Self {
        Self {
            label: label.into(),
            mean: value,
            std_error: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckReport {
    pub check_name: String,
    pub model_name: String,
    pub verdict: Verdict,
    pub estimates: Vec<Estimate>,
    pub tolerance: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub details: String,
    /// Wall-clock time, filled in by callers that measure it.
    #[cfg_attr(feature = "serde", serde(default))]
    pub duration_ms: u64,
}

impl CheckReport {
    pub(crate) fn new(check_name: &str, model_name: &str, tolerance: f64, cfg: &McConfig) -> Self {
        Self {
            check_name: String::from(check_name),
            model_name: String::from(model_name),
            verdict: Verdict::Satisfied,
            estimates: Vec::new(),
            tolerance,
            n_samples: cfg.n_samples(),
            seed: cfg.seed(),
            details: String::new(),
            duration_ms: 0,
        }
    }

    /// Downgrades definite verdicts when the sample count is too small to
    /// trust the error bars.
    pub(crate) fn finish(mut self, verdict: Verdict, cfg: &McConfig) -> Self {
        self.verdict = if cfg.is_reliable() {
            verdict
        } else {
            if !self.details.is_empty() {
                self.details.push_str("; ");
            }
            self.details.push_str(&alloc::format!(
                "fewer than {MIN_RELIABLE_SAMPLES} samples, verdict withheld"
            ));
            Verdict::Inconclusive
        };
        self
    }
}

/// Everything a checker needs besides the model and its inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckSettings {
    pub mc: McConfig,
    pub grid: QuadratureGrid,
    pub mc_tol: f64,
    pub quad_tol: f64,
}

impl CheckSettings {
    pub fn new(mc: McConfig) -> Self {
        Self { mc, ..Self::default() }
    }
}

impl Default for CheckSettings {
    fn default() -> Self {
        Self {
            mc: McConfig::default(),
            grid: QuadratureGrid::default(),
            mc_tol: DEFAULT_MC_TOL,
            quad_tol: DEFAULT_QUAD_TOL,
        }
    }
}
