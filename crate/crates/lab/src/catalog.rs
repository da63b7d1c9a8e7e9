//! State-catalog files.
//!
//! A catalog is a JSON array whose entries give a state either by Bloch
//! vector or by polar and azimuthal angles in radians:
//!
//! ```json
//! [{"bloch": [0, 0, 1], "label": "+z"}, {"theta": 1.5707963, "phi": 0, "label": "+x"}]
//! ```
//!
//! The catalog is closed under orthogonal complement before use, with one
//! measurement basis per antipodal pair.

use std::path::Path;

use ontic_core::models::ModelError;
use ontic_core::qubit::QubitError;
use ontic_core::{BlochVector, PureState, StateCatalog};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed catalog: {0}")]
    Json(#[from] serde_json::Error),
    #[error("catalog entry {index}: {source}")]
    State {
        index: usize,
        #[source]
        source: QubitError,
    },
    #[error("catalog has no states")]
    Empty,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum Entry {
    Bloch {
        bloch: [f64; 3],
        label: Option<String>,
    },
    Angles {
        theta: f64,
        phi: f64,
        label: Option<String>,
    },
}

impl Entry {
    fn state(self) -> Result<PureState, QubitError> {
        let (v, label) = match self {
            Entry::Bloch {
                bloch: [x, y, z],
                label,
            } => (BlochVector::new(x, y, z)?, label),
            Entry::Angles { theta, phi, label } => {
                if !(theta.is_finite() && phi.is_finite()) {
                    return Err(QubitError::NonFinite);
                }
                (BlochVector::from_angles(theta, phi), label)
            }
        };
        Ok(match label {
            Some(l) => PureState::labeled(v, l),
            None => PureState::new(v),
        })
    }
}

pub fn parse_catalog(json: &str) -> Result<StateCatalog, CatalogError> {
    let entries: Vec<Entry> = serde_json::from_str(json)?;
    if entries.is_empty() {
        return Err(CatalogError::Empty);
    }
    let states = entries
        .into_iter()
        .enumerate()
        .map(|(index, e)| e.state().map_err(|source| CatalogError::State { index, source }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StateCatalog::from_states(states)?)
}

pub fn load_catalog(path: &Path) -> Result<StateCatalog, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_catalog(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_entry_forms() {
        let cat = parse_catalog(
            r#"[{"bloch": [0, 0, 1], "label": "+z"}, {"theta": 1.5707963267948966, "phi": 0.0, "label": "+x"}]"#,
        )
        .unwrap();
        assert_eq!(cat.states().len(), 4);
        assert_eq!(cat.bases().len(), 2);
        assert!(cat.is_closed_under_complement());
        assert_eq!(cat.states()[0].label(), Some("+z"));
        assert!((cat.states()[1].bloch().x() - 1.0).abs() < 1e-15);
        assert_eq!(cat.states()[2].label(), Some("-z"));
    }

    #[test]
    fn unlabelled_and_unnormalized_entries() {
        let cat = parse_catalog(r#"[{"bloch": [0, 0.6, 0.8]}]"#).unwrap();
        assert_eq!(cat.states().len(), 2);
        let bad = parse_catalog(r#"[{"bloch": [0, 0, 2]}]"#).unwrap_err();
        assert!(matches!(bad, CatalogError::State { index: 0, .. }), "{bad}");
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(parse_catalog("[]"), Err(CatalogError::Empty)));
        assert!(matches!(parse_catalog("{"), Err(CatalogError::Json(_))));
        assert!(matches!(
            parse_catalog(r#"[{"theta": 1.0}]"#),
            Err(CatalogError::Json(_))
        ));
        assert!(matches!(
            parse_catalog(r#"[{"bloch": [0, 0, 1], "colour": 3}]"#),
            Err(CatalogError::Json(_))
        ));
        let missing = load_catalog(Path::new("/nonexistent/catalog.json")).unwrap_err();
        assert!(missing.to_string().contains("/nonexistent/catalog.json"));
    }
}
