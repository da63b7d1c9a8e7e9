//! Run configuration and the names the command line accepts.

use std::fmt;
use std::path::PathBuf;

use ontic_core::checks::{CheckSettings, DEFAULT_MC_TOL};
use ontic_core::integrate::quadrature::{DEFAULT_N_AZIMUTH, DEFAULT_N_POLAR};
use ontic_core::integrate::{IntegrateError, McConfig, DEFAULT_SAMPLES};
use ontic_core::{BellMermin, ConstantHalf, KochenSpecker, LabelReading, OntologicalModel, QuadratureGrid};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    KochenSpecker,
    BellMermin,
    ConstantHalf,
    LabelReading,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::KochenSpecker,
        ModelKind::BellMermin,
        ModelKind::ConstantHalf,
        ModelKind::LabelReading,
    ];

    pub fn name(self) -> &'static str {
        self.model().name()
    }

    pub fn model(self) -> &'static dyn OntologicalModel {
        match self {
            ModelKind::KochenSpecker => &KochenSpecker,
            ModelKind::BellMermin => &BellMermin,
            ModelKind::ConstantHalf => &ConstantHalf,
            ModelKind::LabelReading => &LabelReading,
        }
    }

    pub fn from_name(name: &str) -> Result<Self, ConfigError> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == name)
            .ok_or_else(|| ConfigError::UnknownModel {
                name: name.to_string(),
                valid: names(Self::ALL.map(Self::name)),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Born,
    Determinism,
    MeasurementNc,
    MaxEpistemic,
    Ontology,
    PrepNc,
    Omega,
    Nonlocality,
    Audit,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Born,
        CheckKind::Determinism,
        CheckKind::MeasurementNc,
        CheckKind::MaxEpistemic,
        CheckKind::Ontology,
        CheckKind::PrepNc,
        CheckKind::Omega,
        CheckKind::Nonlocality,
        CheckKind::Audit,
    ];

    /// Name on the command line.
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Born => "born",
            CheckKind::Determinism => "determinism",
            CheckKind::MeasurementNc => "measurement-nc",
            CheckKind::MaxEpistemic => "max-epistemic",
            CheckKind::Ontology => "ontology",
            CheckKind::PrepNc => "prep-nc",
            CheckKind::Omega => "omega",
            CheckKind::Nonlocality => "nonlocality",
            CheckKind::Audit => "audit",
        }
    }

    /// `check_name` of the report the check produces.
    pub fn report_name(self) -> &'static str {
        match self {
            CheckKind::Born => "born_reproduction",
            CheckKind::Determinism => "outcome_determinism",
            CheckKind::MeasurementNc => "measurement_noncontextuality",
            CheckKind::MaxEpistemic => "max_psi_epistemic",
            CheckKind::Ontology => "ontology_class",
            CheckKind::PrepNc => "preparation_noncontextuality",
            CheckKind::Omega => "omega_witness",
            CheckKind::Nonlocality => "nonlocality_witness",
            CheckKind::Audit => "implication_chain",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, ConfigError> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| ConfigError::UnknownCheck {
                name: name.to_string(),
                valid: names(Self::ALL.map(Self::name)),
            })
    }
}

fn names<const N: usize>(list: [&str; N]) -> String {
    list.join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl OutputFormat {
    pub fn from_name(name: &str) -> Result<Self, ConfigError> {
        match name {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            other => Err(ConfigError::UnknownFormat {
                name: other.to_string(),
                valid: names(["json", "csv", "text"]),
            }),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Text => "text",
        })
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown model {name:?}; valid models: {valid}")]
    UnknownModel { name: String, valid: String },
    #[error("unknown check {name:?}; valid checks: {valid}")]
    UnknownCheck { name: String, valid: String },
    #[error("unknown format {name:?}; valid formats: {valid}")]
    UnknownFormat { name: String, valid: String },
    #[error("tolerance must be a positive finite number, got {0}")]
    Tolerance(f64),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

/// Everything one invocation needs. Names are kept as given and resolved by
/// [`RunConfig::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model_name: String,
    /// Empty means every check, in [`CheckKind::ALL`] order.
    pub check_names: Vec<String>,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub quad_polar: usize,
    pub quad_azimuth: usize,
    pub catalog_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model_name: String::from("ks"),
            check_names: Vec::new(),
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            tolerance: DEFAULT_MC_TOL,
            quad_polar: DEFAULT_N_POLAR,
            quad_azimuth: DEFAULT_N_AZIMUTH,
            catalog_path: None,
            output_format: OutputFormat::Json,
        }
    }
}

/// A [`RunConfig`] with its names resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub model: ModelKind,
    pub checks: Vec<CheckKind>,
    pub settings: CheckSettings,
}

impl RunConfig {
    pub fn validate(&self) -> Result<Resolved, ConfigError> {
        let model = ModelKind::from_name(&self.model_name)?;
        let checks = if self.check_names.is_empty() {
            CheckKind::ALL.to_vec()
        } else {
            self.check_names
                .iter()
                .map(|n| CheckKind::from_name(n))
                .collect::<Result<_, _>>()?
        };
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(ConfigError::Tolerance(self.tolerance));
        }
        let mut settings = CheckSettings::new(McConfig::with_samples(self.samples, self.seed)?);
        settings.grid = QuadratureGrid::new(self.quad_polar, self.quad_azimuth)?;
        settings.mc_tol = self.tolerance;
        Ok(Resolved {
            model,
            checks,
            settings,
        })
    }
}
