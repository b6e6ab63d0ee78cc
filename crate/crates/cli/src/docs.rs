//! JSON document types for the command-line interface. Exact rationals are
//! serialized as "numerator/denominator" strings so certificates round-trip
//! without precision loss.

use num_bigint::BigInt;
use num_rational::BigRational;
use qpr_core::operator_core::{basis_from_bloch, density_to_bloch, QubitBasis, QuditBasis};
use qpr_core::{QprError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisEntry {
    Bloch { bloch: [f64; 3] },
    Vectors { vectors: Vec<Vec<ComplexEntry>> },
}

/// Input document for `certify`: a list of bases, each given either by a
/// Bloch vector (qubits) or by explicit basis kets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasesDocument {
    pub version: u32,
    pub dim: usize,
    pub bases: Vec<BasisEntry>,
}

impl BasesDocument {
    pub fn to_qubit_bases(&self) -> Result<Vec<QubitBasis>> {
        if self.version != 1 {
            return Err(QprError::InvalidParameter(format!(
                "unsupported document version {}",
                self.version
            )));
        }
        if self.dim != 2 {
            return Err(QprError::InvalidParameter(
                "certification is defined for qubit bases (dim = 2)".into(),
            ));
        }
        self.bases
            .iter()
            .map(|entry| match entry {
                BasisEntry::Bloch { bloch } => basis_from_bloch(&qpr_core::BlochVector(*bloch)),
                BasisEntry::Vectors { vectors } => {
                    let kets: Vec<Vec<num_complex::Complex64>> = vectors
                        .iter()
                        .map(|v| {
                            v.iter()
                                .map(|c| num_complex::Complex64::new(c.re, c.im))
                                .collect()
                        })
                        .collect();
                    let basis = QuditBasis::from_kets(&kets)?;
                    if basis.dim() != 2 {
                        return Err(QprError::DimensionMismatch(
                            "vector basis is not two-dimensional".into(),
                        ));
                    }
                    let r = density_to_bloch(&basis.elements()[0])?;
                    basis_from_bloch(&r)
                }
            })
            .collect()
    }
}

/// A number tagged by arithmetic mode: exact values travel as
/// "numerator/denominator" strings, float values as JSON numbers.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NumberDoc {
    Exact(String),
    Float(f64),
}

impl NumberDoc {
    pub fn exact(r: &BigRational) -> Self {
        NumberDoc::Exact(format!("{}/{}", r.numer(), r.denom()))
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn parse_exact(&self) -> Result<BigRational> {
        match self {
            NumberDoc::Exact(s) => {
                let (num, den) = s
                    .split_once('/')
                    .ok_or_else(|| QprError::InvalidParameter(format!("bad rational `{s}`")))?;
                let num: BigInt = num
                    .parse()
                    .map_err(|e| QprError::InvalidParameter(format!("bad numerator: {e}")))?;
                let den: BigInt = den
                    .parse()
                    .map_err(|e| QprError::InvalidParameter(format!("bad denominator: {e}")))?;
                Ok(BigRational::new(num, den))
            }
            NumberDoc::Float(_) => Err(QprError::InvalidParameter(
                "expected an exact rational".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum WitnessDoc {
    #[serde(rename = "q")]
    Q(BTreeMap<String, NumberDoc>),
    #[serde(rename = "farkas")]
    Farkas(Vec<NumberDoc>),
}

/// Output document for `certify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub verdict: String,
    pub mode: String,
    pub n_bases: usize,
    pub witness: WitnessDoc,
    /// Max constraint violation of the stored witness (exact witnesses
    /// verify exactly; this is the float view).
    pub residual_max: f64,
    pub witness_verified: bool,
    pub frame_reconstructed: bool,
    /// Row descriptions, indexing the Farkas vector.
    pub constraints: Vec<String>,
    pub input_sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FramePointDoc {
    pub label: String,
    pub q: f64,
    pub f: Vec<Vec<ComplexEntry>>,
    pub g: Vec<Vec<ComplexEntry>>,
}

/// Output document for `family`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
    pub dim: usize,
    pub bases: Vec<BasisEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<FramePointDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    pub mode: String,
    pub passed: bool,
    pub detail: String,
}

/// Output document for `verify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckDoc>,
    pub all_passed: bool,
}

pub fn complex_matrix_doc(op: &qpr_core::HermitianOp) -> Vec<Vec<ComplexEntry>> {
    let d = op.dim();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| ComplexEntry {
                    re: op.matrix()[(i, j)].re,
                    im: op.matrix()[(i, j)].im,
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn exact_numbers_round_trip_losslessly() {
        // A rational that cannot be represented as f64.
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        let doc = NumberDoc::exact(&r);
        let json = serde_json::to_string(&doc).unwrap();
        let back: NumberDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.parse_exact().unwrap(), r);

        let f = NumberDoc::Float(0.1 + 0.2);
        let json = serde_json::to_string(&f).unwrap();
        let back: NumberDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn certificate_documents_round_trip() {
        let mut q = BTreeMap::new();
        q.insert(
            "++".to_string(),
            NumberDoc::exact(&BigRational::new(1.into(), 4.into())),
        );
        q.insert("+-".to_string(), NumberDoc::Float(0.25));
        let doc = CertificateDocument {
            verdict: "feasible".into(),
            mode: "exact".into(),
            n_bases: 2,
            witness: WitnessDoc::Q(q),
            residual_max: 0.0,
            witness_verified: true,
            frame_reconstructed: false,
            constraints: vec!["norm b1+".into()],
            input_sha256: "00".repeat(32),
        };
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let back: CertificateDocument = serde_json::from_str(&json).unwrap();
        let json2 = serde_json::to_string_pretty(&back).unwrap();
        assert_eq!(json, json2);
    }

    #[test]
    fn bases_document_accepts_both_entry_forms() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(
            r#"{{"version": 1, "dim": 2, "bases": [
                {{"bloch": [0, 0, 1]}},
                {{"vectors": [
                    [{{"re": {s}, "im": 0}}, {{"re": {s}, "im": 0}}],
                    [{{"re": {s}, "im": 0}}, {{"re": -{s}, "im": 0}}]
                ]}}
            ]}}"#
        );
        let doc: BasesDocument = serde_json::from_str(&text).unwrap();
        let bases = doc.to_qubit_bases().unwrap();
        assert_eq!(bases.len(), 2);
        assert!(bases[1]
            .direction()
            .approx_eq(&qpr_core::BlochVector::new(1., 0., 0.), 1e-9));
    }
}
