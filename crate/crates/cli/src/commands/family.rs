use crate::commands::emit_json;
use crate::docs::{complex_matrix_doc, BasisEntry, FamilyDocument, FramePointDoc};
use qpr_core::qubit_families::{family_bases, family_rep, FamilyKind, FamilySpec};
use qpr_core::Result;
use std::collections::BTreeMap;
use std::path::PathBuf;

pub fn run(
    kind: &str,
    theta: Option<f64>,
    phi: Option<f64>,
    q0: Option<f64>,
    emit_frame: bool,
    out: Option<PathBuf>,
) -> Result<u8> {
    let kind: FamilyKind = kind.parse()?;
    let spec = FamilySpec {
        kind,
        theta,
        phi,
        q0,
    };
    let bases = family_bases(&spec)?;
    let mut document = FamilyDocument {
        kind: kind.to_string(),
        theta,
        phi,
        q0,
        dim: 2,
        bases: bases
            .iter()
            .map(|b| BasisEntry::Bloch {
                bloch: b.direction().0,
            })
            .collect(),
        distribution: None,
        frame: None,
    };

    if emit_frame {
        // Errors here (violated family bounds, icosahedron) exit 2 with the
        // bound named in the message.
        let rep = family_rep(&spec)?;
        let q = rep.q_function();
        let mut dist = BTreeMap::new();
        let mut frame = Vec::new();
        for (idx, label) in rep.space().points().iter().enumerate() {
            dist.insert(label.to_string(), q.value(idx));
            frame.push(FramePointDoc {
                label: label.to_string(),
                q: q.value(idx),
                f: complex_matrix_doc(rep.f_op(idx)),
                g: complex_matrix_doc(rep.g_op(idx)),
            });
        }
        document.distribution = Some(dist);
        document.frame = Some(frame);
    }

    emit_json(&document, out)?;
    Ok(0)
}
