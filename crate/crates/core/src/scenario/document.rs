use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a scenario's representation is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepresentationKind {
    Fundamental,
    Conjugate,
    Adjoint,
    Spin,
    Tensor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationSpec {
    /// Defaults to `tensor` when `tensor` is present, `fundamental` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<RepresentationKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<Vec<RepresentationSpec>>,
}

impl RepresentationSpec {
    pub fn of(kind: RepresentationKind) -> Self {
        Self {
            kind: Some(kind),
            d_r: None,
            tensor: None,
        }
    }

    pub fn spin(d_r: usize) -> Self {
        Self {
            kind: Some(RepresentationKind::Spin),
            d_r: Some(d_r),
            tensor: None,
        }
    }

    pub fn tensor(left: RepresentationSpec, right: RepresentationSpec) -> Self {
        Self {
            kind: Some(RepresentationKind::Tensor),
            d_r: None,
            tensor: Some(vec![left, right]),
        }
    }

    pub fn effective_kind(&self) -> RepresentationKind {
        self.kind.unwrap_or(if self.tensor.is_some() {
            RepresentationKind::Tensor
        } else {
            RepresentationKind::Fundamental
        })
    }
}

/// Starting state of every session on a scenario.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialSpec {
    /// `(1, ..., 1) / √d_r`.
    #[default]
    Uniform,
    /// First eigenvector of the `rank`-th smallest distinct answer of `question`.
    Eigenstate {
        question: String,
        rank: usize,
    },
    Explicit {
        amplitudes: Vec<Complex64>,
    },
}

/// The textual scenario format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub algebra: String,
    pub representation: RepresentationSpec,
    #[serde(default)]
    pub options: BTreeMap<String, usize>,
    #[serde(default)]
    pub derived: BTreeMap<String, Vec<f64>>,
    #[serde(default)]
    pub initial: InitialSpec,
}

impl ScenarioDocument {
    /// Parses JSON, reporting the failing field path on schema errors.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario documents always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_takes_defaults() {
        let doc =
            ScenarioDocument::from_json(r#"{"name":"x","algebra":"su2","representation":{}}"#)
                .unwrap();
        assert_eq!(doc.initial, InitialSpec::Uniform);
        assert_eq!(
            doc.representation.effective_kind(),
            RepresentationKind::Fundamental
        );
        assert!(doc.options.is_empty());
    }

    #[test]
    fn schema_errors_carry_the_path() {
        let err = ScenarioDocument::from_json(
            r#"{"name":"x","algebra":"su2","representation":{"kind":"fundamental"},"options":{"cola":"zero"}}"#,
        )
        .unwrap_err();
        match err {
            Error::Schema { path, .. } => assert_eq!(path, "options.cola"),
            other => panic!("{other:?}"),
        }
        let err = ScenarioDocument::from_json(
            r#"{"name":"x","algebra":"su2","representation":{"kind":"weird"}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path == "representation.kind"));
    }

    #[test]
    fn initial_specs_round_trip() {
        for init in [
            InitialSpec::Uniform,
            InitialSpec::Eigenstate {
                question: "cola".into(),
                rank: 1,
            },
            InitialSpec::Explicit {
                amplitudes: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            },
        ] {
            let json = serde_json::to_string(&init).unwrap();
            assert_eq!(serde_json::from_str::<InitialSpec>(&json).unwrap(), init);
        }
        let e: InitialSpec =
            serde_json::from_str(r#"{"kind":"explicit","amplitudes":[[0.6,0.0],[0.0,0.8]]}"#)
                .unwrap();
        assert!(matches!(e, InitialSpec::Explicit { ref amplitudes } if amplitudes[1].im == 0.8));
    }
}
