//! JSON documents: tensors, classification reports, decomposition
//! certificates and spectrum reports.
//!
//! All indices in documents are one-based. Tensors come in two layouts:
//!
//! ```json
//! {"order": 4, "dim": 2, "format": "sym",
//!  "entries": [{"idx": [1, 1, 1, 1], "value": 1.0}, ...]}
//! {"order": 2, "dim": 2, "format": "dense", "values": [1.0, 0.0, 0.0, 1.0]}
//! ```
//!
//! Dense values are row-major with the last index fastest. Sym entries may
//! list an index tuple in any order but each canonical index at most once.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classify::{Classification, RowStats};
use crate::decompose::{DecompCert, Step};
use crate::error::{Error, Result};
use crate::spectra::{HEigenPair, SpectrumReport};
use crate::tensor::{canonicalize, SymTensor};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryDoc {
    pub idx: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorDoc {
    pub order: usize,
    pub dim: usize,
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EntryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

impl TensorDoc {
    /// Sym-format document of `t`.
    pub fn from_tensor(t: &SymTensor<f64>) -> Self {
        TensorDoc {
            order: t.order(),
            dim: t.dim(),
            format: "sym".into(),
            entries: Some(
                t.entries()
                    .map(|(k, v)| EntryDoc {
                        idx: k.to_one_based(),
                        value: *v,
                    })
                    .collect(),
            ),
            values: None,
            metadata: None,
        }
    }

    pub fn with_metadata(mut self, metadata: Value) -> Self {
        self.metadata = Some(metadata);
        self
    }

    /// Validates the document and builds the tensor.
    ///
    /// Dense input must be symmetric to within `tol` unless `symmetrize`.
    pub fn to_tensor(&self, symmetrize: bool, tol: f64) -> Result<SymTensor<f64>> {
        match self.format.as_str() {
            "sym" => {
                let entries = self
                    .entries
                    .as_ref()
                    .ok_or_else(|| Error::Format("sym tensor requires \"entries\"".into()))?;
                let mut t = SymTensor::zeros(self.order, self.dim)?;
                let mut seen = BTreeMap::new();
                for (pos, e) in entries.iter().enumerate() {
                    let at = |msg: String| Error::Format(format!("entries[{pos}]: {msg}"));
                    if e.idx.len() != self.order {
                        return Err(at(format!(
                            "idx has {} indices, expected {}",
                            e.idx.len(),
                            self.order
                        )));
                    }
                    if let Some(bad) = e.idx.iter().find(|&&i| i == 0 || i > self.dim) {
                        return Err(at(format!("index {bad} outside 1..={}", self.dim)));
                    }
                    if !e.value.is_finite() {
                        return Err(at(format!("non-finite value {}", e.value)));
                    }
                    let zero_based: Vec<usize> = e.idx.iter().map(|i| i - 1).collect();
                    let (key, _) = canonicalize(&zero_based, self.dim)?;
                    if let Some(first) = seen.insert(key.clone(), pos) {
                        return Err(at(format!(
                            "duplicate canonical index {key} (first at entries[{first}])"
                        )));
                    }
                    t.set(key.as_slice(), e.value)?;
                }
                Ok(t)
            }
            "dense" => {
                let values = self
                    .values
                    .as_ref()
                    .ok_or_else(|| Error::Format("dense tensor requires \"values\"".into()))?;
                if let Some((pos, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                    return Err(Error::Format(format!("values[{pos}]: non-finite value {v}")));
                }
                SymTensor::from_dense(self.order, self.dim, values, symmetrize, tol)
            }
            other => Err(Error::Format(format!(
                "unknown format {other:?}, expected \"sym\" or \"dense\""
            ))),
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

fn render<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents are always serializable");
    s.push('\n');
    s
}

pub fn read_tensor(text: &str, symmetrize: bool, tol: f64) -> Result<SymTensor<f64>> {
    parse::<TensorDoc>(text)?.to_tensor(symmetrize, tol)
}

pub fn write_tensor(t: &SymTensor<f64>) -> String {
    render(&TensorDoc::from_tensor(t))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowStatsDoc {
    pub row: usize,
    pub diag: f64,
    pub row_sum: f64,
    /// `null` when the row has no off-diagonal entries.
    pub max_offdiag: Option<f64>,
    pub abs_offdiag_sum: f64,
}

impl From<&RowStats<f64>> for RowStatsDoc {
    fn from(r: &RowStats<f64>) -> Self {
        RowStatsDoc {
            row: r.row + 1,
            diag: r.diag,
            row_sum: r.row_sum,
            max_offdiag: r.max_offdiag,
            abs_offdiag_sum: r.abs_offdiag_sum,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationDoc {
    #[serde(rename = "is_B")]
    pub is_b: bool,
    #[serde(rename = "is_B0")]
    pub is_b0: bool,
    #[serde(rename = "is_Z")]
    pub is_z: bool,
    pub is_dd: bool,
    pub is_sdd: bool,
    #[serde(rename = "is_M_certified")]
    pub is_m_certified: bool,
    pub tol: f64,
    pub rows: Vec<RowStatsDoc>,
}

impl From<&Classification<f64>> for ClassificationDoc {
    fn from(c: &Classification<f64>) -> Self {
        ClassificationDoc {
            is_b: c.is_b,
            is_b0: c.is_b0,
            is_z: c.is_z,
            is_dd: c.is_dd,
            is_sdd: c.is_sdd,
            is_m_certified: c.is_m_certified,
            tol: c.tol,
            rows: c.rows.iter().map(RowStatsDoc::from).collect(),
        }
    }
}

pub fn write_classification(c: &Classification<f64>) -> String {
    render(&ClassificationDoc::from(c))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepDoc {
    #[serde(rename = "J")]
    pub set: Vec<usize>,
    pub h: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub input_digest: String,
    pub strict: bool,
    pub steps: Vec<StepDoc>,
    pub residual: TensorDoc,
    pub recon_error: f64,
    pub tol: f64,
}

impl From<&DecompCert<f64>> for CertificateDoc {
    fn from(c: &DecompCert<f64>) -> Self {
        CertificateDoc {
            input_digest: c.input_digest.clone(),
            strict: c.strict,
            steps: c
                .steps
                .iter()
                .map(|s| StepDoc {
                    set: s.set.iter().map(|i| i + 1).collect(),
                    h: s.h,
                })
                .collect(),
            residual: TensorDoc::from_tensor(&c.residual),
            recon_error: c.recon_error,
            tol: c.tol,
        }
    }
}

impl CertificateDoc {
    pub fn to_cert(&self) -> Result<DecompCert<f64>> {
        let residual = self.residual.to_tensor(false, 0.0)?;
        let steps = self
            .steps
            .iter()
            .enumerate()
            .map(|(k, s)| {
                if let Some(bad) = s.set.iter().find(|&&i| i == 0 || i > residual.dim()) {
                    return Err(Error::Format(format!(
                        "steps[{k}].J: index {bad} outside 1..={}",
                        residual.dim()
                    )));
                }
                Ok(Step {
                    set: s.set.iter().map(|i| i - 1).collect(),
                    h: s.h,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DecompCert {
            steps,
            residual,
            strict: self.strict,
            input_digest: self.input_digest.clone(),
            recon_error: self.recon_error,
            tol: self.tol,
        })
    }
}

pub fn write_certificate(c: &DecompCert<f64>) -> String {
    render(&CertificateDoc::from(c))
}

pub fn read_certificate(text: &str) -> Result<DecompCert<f64>> {
    parse::<CertificateDoc>(text)?.to_cert()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairDoc {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub residual: f64,
}

impl From<&HEigenPair<f64>> for PairDoc {
    fn from(p: &HEigenPair<f64>) -> Self {
        PairDoc {
            lambda: p.lambda,
            x: p.x.clone(),
            residual: p.residual,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumDoc {
    pub min_h_estimate: Option<f64>,
    /// `"converged"` or `"inconclusive"`.
    pub verdict: String,
    pub pairs: Vec<PairDoc>,
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub converged_count: usize,
    pub tol: f64,
    pub step_rule: String,
    pub iterations: Vec<usize>,
}

impl From<&SpectrumReport<f64>> for SpectrumDoc {
    fn from(r: &SpectrumReport<f64>) -> Self {
        SpectrumDoc {
            min_h_estimate: r.min_h_estimate,
            verdict: if r.is_conclusive() {
                "converged".into()
            } else {
                "inconclusive".into()
            },
            pairs: r.pairs.iter().map(PairDoc::from).collect(),
            seed: r.seed,
            restarts: r.restarts,
            max_iters: r.max_iters,
            converged_count: r.converged_count,
            tol: r.tol,
            step_rule: r.step_rule.into(),
            iterations: r.iterations.clone(),
        }
    }
}

pub fn write_spectrum(r: &SpectrumReport<f64>) -> String {
    render(&SpectrumDoc::from(r))
}
