use crate::commands::{emit_json, resolve_mode};
use crate::docs::{BasesDocument, CertificateDocument, NumberDoc, WitnessDoc};
use qpr_core::certifier::{
    build_problem, certify, reconstruct_frame, symmetrize_certificate, Verdict, WitnessVec,
};
use qpr_core::{QprError, Result};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub fn run(input: &Path, mode: Option<String>, out: Option<PathBuf>) -> Result<u8> {
    let mode = resolve_mode(mode)?;
    let raw = std::fs::read(input)
        .map_err(|e| QprError::InvalidParameter(format!("cannot read {}: {e}", input.display())))?;
    let doc: BasesDocument = serde_json::from_slice(&raw)
        .map_err(|e| QprError::InvalidParameter(format!("malformed BasesDocument: {e}")))?;
    let input_sha256 = hex_digest(&raw);

    let bases = doc.to_qubit_bases()?;
    let problem = build_problem(&bases)?;
    let mut cert = certify(&bases, mode)?;
    // Report the symmetric solution: the vertex averaged over the input's
    // symmetry group.
    if cert.verdict == Verdict::Feasible {
        let sym = symmetrize_certificate(&problem, &cert)?;
        let frame_ok = bases.len() >= 3 && reconstruct_frame(&bases, &sym.witness.to_f64()).is_ok();
        cert = sym;
        cert.frame_reconstructed = frame_ok;
    }
    let verified = cert.verify(&problem);

    let witness = match (&cert.witness, cert.verdict) {
        (WitnessVec::Float(v), Verdict::Feasible) => WitnessDoc::Q(
            v.iter()
                .enumerate()
                .map(|(p, &q)| (problem.pattern().label(p), NumberDoc::Float(q)))
                .collect::<BTreeMap<_, _>>(),
        ),
        (WitnessVec::Exact(v), Verdict::Feasible) => WitnessDoc::Q(
            v.iter()
                .enumerate()
                .map(|(p, q)| (problem.pattern().label(p), NumberDoc::exact(q)))
                .collect::<BTreeMap<_, _>>(),
        ),
        (WitnessVec::Float(v), Verdict::Infeasible) => {
            WitnessDoc::Farkas(v.iter().map(|&y| NumberDoc::Float(y)).collect())
        }
        (WitnessVec::Exact(v), Verdict::Infeasible) => {
            WitnessDoc::Farkas(v.iter().map(NumberDoc::exact).collect())
        }
    };

    let document = CertificateDocument {
        verdict: match cert.verdict {
            Verdict::Feasible => "feasible".into(),
            Verdict::Infeasible => "infeasible".into(),
        },
        mode: cert.mode.as_str().into(),
        n_bases: cert.n_bases,
        witness,
        residual_max: cert.residual,
        witness_verified: verified,
        frame_reconstructed: cert.frame_reconstructed,
        constraints: problem.rows().iter().map(|r| r.kind.describe()).collect(),
        input_sha256,
    };
    emit_json(&document, out)?;

    if !verified {
        return Err(QprError::Numerical(
            "certificate failed its own verification".into(),
        ));
    }
    Ok(match cert.verdict {
        Verdict::Feasible => 0,
        Verdict::Infeasible => 1,
    })
}

fn hex_digest(raw: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(raw);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
