use qpr_core::ontic_sim::{run_circuit, SubtheoryModel};
use qpr_core::{QprError, Result};

fn build_model(
    family: &str,
    theta: Option<f64>,
    phi: Option<f64>,
    q0: Option<f64>,
) -> Result<SubtheoryModel> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| QprError::InvalidParameter(format!("{family} requires --{name}")))
    };
    match family {
        "stabilizer" => SubtheoryModel::stabilizer(),
        "d3" => SubtheoryModel::d3(need(theta, "theta")?, q0),
        "c2" => SubtheoryModel::c2(need(theta, "theta")?, need(phi, "phi")?),
        "cuboid" => SubtheoryModel::cuboid(need(theta, "theta")?, need(phi, "phi")?),
        other => Err(QprError::InvalidParameter(format!(
            "unknown model family `{other}`"
        ))),
    }
}

pub fn run(
    family: &str,
    theta: Option<f64>,
    phi: Option<f64>,
    q0: Option<f64>,
    initial: &str,
    circuit: &str,
    measure: &str,
) -> Result<u8> {
    let model = build_model(family, theta, phi, q0)?;
    let outcome = run_circuit(&model, initial, circuit, measure)?;
    println!(
        "ontic:     [{}]",
        outcome
            .ontic
            .iter()
            .map(|p| format!("{p:.12}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "quantum:   [{}]",
        outcome
            .quantum
            .iter()
            .map(|p| format!("{p:.12}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "agreement: {} (max deviation {:.3e})",
        outcome.agree, outcome.max_deviation
    );
    Ok(0)
}
