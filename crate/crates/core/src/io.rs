//! JSON formats for subspaces, λ sidecars and search outcomes.
//!
//! A subspace file looks like
//!
//! ```json
//! {"dims": [2, 2], "vectors": [[[0.0, 0.0], [0.7071067811865476, 0.0], ...]]}
//! ```
//!
//! with one `[re, im]` pair per amplitude and an optional `"labels"` array.
//! Floats are written in shortest round-trip form, so writing and reading a
//! file reproduces every amplitude bit for bit.

use std::fs;
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::product_search::{SearchOutcome, Verdict};
use crate::tensor::{gram_deviation, MultipartiteSpace, Subspace};
use crate::tol;
use crate::vandermonde::LambdaSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceFile {
    pub dims: Vec<usize>,
    pub vectors: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A subspace read from disk.
#[derive(Debug, Clone)]
pub struct LoadedSubspace {
    pub subspace: Subspace,
    pub labels: Option<Vec<String>>,
    /// Set when the stored vectors were not orthonormal and had to be
    /// replaced by an orthonormal basis of their span.
    pub orthonormalized: bool,
}

fn encode(v: &DVector<Complex64>) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn decode(v: &[[f64; 2]]) -> DVector<Complex64> {
    DVector::from_iterator(v.len(), v.iter().map(|&[re, im]| Complex64::new(re, im)))
}

impl SubspaceFile {
    pub fn from_subspace(s: &Subspace, labels: Option<Vec<String>>) -> Self {
        Self {
            dims: s.space().dims().to_vec(),
            vectors: s.basis_vectors().iter().map(encode).collect(),
            labels,
        }
    }

    pub fn into_subspace(self) -> Result<LoadedSubspace> {
        let space = MultipartiteSpace::new(self.dims)?;
        let n = space.total_dim();
        if self.vectors.is_empty() {
            return Err(Error::EmptySubspace("file contains no vectors".into()));
        }
        if let Some((i, v)) = self.vectors.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("vector {i} has {} entries, expected {n}", v.len())));
        }
        if self.vectors.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.vectors.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} labels for {} vectors",
                    labels.len(),
                    self.vectors.len()
                )));
            }
        }
        let vectors: Vec<DVector<Complex64>> = self.vectors.iter().map(|v| decode(v)).collect();
        let columns = nalgebra::DMatrix::from_columns(&vectors);
        let (subspace, orthonormalized) = if gram_deviation(&columns) <= tol::ORTH {
            (Subspace::from_orthonormal_columns(space, columns)?, false)
        } else {
            (Subspace::span_of(space, &vectors)?, true)
        };
        // Labels no longer describe individual vectors after re-orthonormalization.
        let labels = if orthonormalized { None } else { self.labels };
        Ok(LoadedSubspace { subspace, labels, orthonormalized })
    }
}

pub fn subspace_to_json(s: &Subspace, labels: Option<Vec<String>>) -> String {
    serde_json::to_string_pretty(&SubspaceFile::from_subspace(s, labels)).expect("plain data serializes")
}

pub fn subspace_from_json(text: &str) -> Result<LoadedSubspace> {
    serde_json::from_str::<SubspaceFile>(text)?.into_subspace()
}

pub fn write_subspace(path: &Path, s: &Subspace, labels: Option<Vec<String>>) -> Result<()> {
    fs::write(path, subspace_to_json(s, labels) + "\n")?;
    Ok(())
}

pub fn read_subspace(path: &Path) -> Result<LoadedSubspace> {
    subspace_from_json(&fs::read_to_string(path)?)
}

/// Path of the λ sidecar written next to a subspace file.
pub fn lambda_sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".lambdas.json");
    path.with_file_name(name)
}

pub fn write_lambdas(path: &Path, lambdas: &LambdaSet) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(lambdas)? + "\n")?;
    Ok(())
}

/// Reads a λ sidecar, re-validating distinctness.
pub fn read_lambdas(path: &Path) -> Result<LambdaSet> {
    let raw: LambdaSet = serde_json::from_str(&fs::read_to_string(path)?)?;
    let mut checked = LambdaSet::new(raw.values)?;
    checked.mode = raw.mode;
    Ok(checked)
}

/// Serializable view of a [`SearchOutcome`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcomeFile {
    pub verdict: Verdict,
    pub best_overlap: f64,
    pub dims: Vec<usize>,
    pub witness: Vec<Vec<[f64; 2]>>,
    pub per_restart_values: Vec<f64>,
    pub unconverged_restarts: Vec<usize>,
}

impl From<&SearchOutcome> for SearchOutcomeFile {
    fn from(o: &SearchOutcome) -> Self {
        Self {
            verdict: o.verdict,
            best_overlap: o.best_overlap,
            dims: o.witness.dims(),
            witness: o.witness.factors().iter().map(encode).collect(),
            per_restart_values: o.per_restart_values.clone(),
            unconverged_restarts: o.unconverged_restarts.clone(),
        }
    }
}

pub fn search_outcome_to_json(o: &SearchOutcome) -> String {
    serde_json::to_string_pretty(&SearchOutcomeFile::from(o)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_subspace, seeded_rng};
    use crate::vandermonde::construct_ces;

    #[test]
    fn round_trip_is_bit_exact() {
        let space = MultipartiteSpace::new(vec![2, 3, 2]).unwrap();
        let s = haar_subspace(&mut seeded_rng(3, 0), &space, 4).unwrap();
        let loaded = subspace_from_json(&subspace_to_json(&s, None)).unwrap();
        assert!(!loaded.orthonormalized);
        assert_eq!(loaded.subspace.basis(), s.basis());
        assert_eq!(loaded.subspace.space(), s.space());
    }

    #[test]
    fn ces_round_trip_through_file() {
        let dir = std::env::temp_dir().join(format!("ces-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ces.json");
        let s = construct_ces(&MultipartiteSpace::new(vec![3, 3]).unwrap(), None).unwrap();
        let labels: Vec<String> = (0..s.dim()).map(|i| format!("v{i}")).collect();
        write_subspace(&path, &s, Some(labels.clone())).unwrap();
        let loaded = read_subspace(&path).unwrap();
        assert_eq!(loaded.subspace.basis(), s.basis());
        assert_eq!(loaded.labels, Some(labels));
        let lambdas = LambdaSet::jittered(5, 11);
        let side = lambda_sidecar_path(&path);
        assert!(side.to_string_lossy().ends_with("ces.json.lambdas.json"));
        write_lambdas(&side, &lambdas).unwrap();
        assert_eq!(read_lambdas(&side).unwrap(), lambdas);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn non_orthonormal_input_is_orthonormalized() {
        let text = r#"{"dims":[2,2],"vectors":[[[1,0],[0,0],[0,0],[0,0]],[[1,0],[1,0],[0,0],[0,0]]]}"#;
        let loaded = subspace_from_json(text).unwrap();
        assert!(loaded.orthonormalized);
        assert_eq!(loaded.subspace.dim(), 2);
        assert!(loaded.subspace.gram_deviation() < 1e-12);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(subspace_from_json("{\"dims\":[2,2]"), Err(Error::Json(_))));
        let short = r#"{"dims":[2,2],"vectors":[[[1,0],[0,0]]]}"#;
        assert!(matches!(subspace_from_json(short), Err(Error::DimensionMismatch(_))));
        let empty = r#"{"dims":[2,2],"vectors":[]}"#;
        assert!(matches!(subspace_from_json(empty), Err(Error::EmptySubspace(_))));
        let zero_dim = r#"{"dims":[0,2],"vectors":[[]]}"#;
        assert!(matches!(subspace_from_json(zero_dim), Err(Error::InvalidDims(_))));
    }
}
