pub mod certify;
pub mod family;
pub mod scan;
pub mod simulate;
pub mod verify;

use qpr_core::scalar::ArithMode;
use qpr_core::{QprError, Result};
use std::path::PathBuf;

/// Invalid inputs and violated preconditions exit 2; numerical trouble
/// exits 3 with retry advice already in the message.
pub fn error_code(e: &QprError) -> u8 {
    match e {
        QprError::Numerical(_) => 3,
        _ => 2,
    }
}

/// Resolves the arithmetic mode: the flag wins, then QPR_MODE, then float.
pub fn resolve_mode(flag: Option<String>) -> Result<ArithMode> {
    let source = match flag {
        Some(v) => Some(v),
        None => std::env::var("QPR_MODE").ok(),
    };
    match source {
        None => Ok(ArithMode::Float),
        Some(v) => v.parse::<ArithMode>().map_err(QprError::InvalidParameter),
    }
}

/// Writes pretty JSON to `out`, or stdout when absent.
pub fn emit_json<T: serde::Serialize>(doc: &T, out: Option<PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)
        .map_err(|e| QprError::Construction(format!("serialization failed: {e}")))?;
    match out {
        Some(path) => std::fs::write(&path, text.as_bytes())
            .map_err(|e| QprError::Construction(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
