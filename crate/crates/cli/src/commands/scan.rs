use qpr_core::certifier::{threshold_scan, ScanParam, ScanTemplate};
use qpr_core::qubit_families::{FamilyKind, FamilySpec};
use qpr_core::Result;

pub fn run(
    kind: &str,
    param: &str,
    lo: f64,
    hi: f64,
    tol: f64,
    theta: Option<f64>,
    phi: Option<f64>,
) -> Result<u8> {
    let kind: FamilyKind = kind.parse()?;
    let param: ScanParam = param.parse()?;
    let spec = FamilySpec {
        kind,
        theta,
        phi,
        q0: None,
    };
    let tpl = ScanTemplate { spec, param };
    let boundary = threshold_scan(&tpl, lo, hi, tol)?;
    match param {
        ScanParam::Theta => {
            println!("boundary theta = {boundary:.9}");
            println!("sin^2(theta) = {:.9}", boundary.sin().powi(2));
        }
        ScanParam::Phi => {
            println!("boundary phi = {boundary:.9}");
            println!("cos(phi) = {:.9}", boundary.cos());
        }
    }
    Ok(0)
}
