use crate::commands::emit_json;
use crate::docs::{CheckDoc, VerifyReport};
use qpr_core::certifier::{
    build_problem, build_problem_exact, certify, certify_problem, cuboid_grid_feasibility,
    is_right_cuboid, symmetrize_certificate, threshold_scan, verify_cuboid_classification,
    verify_max_bases, ScanParam, ScanTemplate, Verdict, WitnessVec,
};
use qpr_core::ontic_sim::{
    clifford_rotations, find_permutation, gamma_unitary, gate_set_contains_not, pi_unitary,
    run_circuit, supervenes, universal_not_check, OnticPermutation, SubtheoryModel,
};
use qpr_core::operator_core::basis_from_bloch;
use qpr_core::qubit_families::{d3_distribution, family_bases, family_rep, FamilyKind, FamilySpec};
use qpr_core::qudit_tools::{
    check_epsilon_bound, check_quadruple_relation, check_triple_disparateness, hull_decompose,
    is_disparate, max_epsilon, mub_triple_d3, pattern_bound, BasisFamily, HullDecomposition,
};
use qpr_core::sampling;
use qpr_core::scalar::ArithMode;
use qpr_core::{BlochVector, QprError, Rational, Result};
use rand::Rng;
use rayon::prelude::*;
use std::path::PathBuf;

struct Checks {
    list: Vec<CheckDoc>,
}

impl Checks {
    fn new() -> Self {
        Self { list: Vec::new() }
    }

    fn push(&mut self, name: &str, mode: ArithMode, passed: bool, detail: String) {
        self.list.push(CheckDoc {
            name: name.into(),
            mode: mode.as_str().into(),
            passed,
            detail,
        });
    }
}

pub fn run(suite: &str, trials: usize, seed: u64, out: Option<PathBuf>) -> Result<u8> {
    if trials == 0 {
        return Err(QprError::InvalidParameter("trials must be >= 1".into()));
    }
    let mut checks = Checks::new();
    match suite {
        "qubit" => qubit_suite(&mut checks, trials, seed)?,
        "qudit" => qudit_suite(&mut checks, trials, seed)?,
        "all" => {
            qubit_suite(&mut checks, trials, seed)?;
            qudit_suite(&mut checks, trials, seed)?;
        }
        other => {
            return Err(QprError::InvalidParameter(format!(
                "unknown suite `{other}` (expected all, qubit or qudit)"
            )))
        }
    }
    let all_passed = checks.list.iter().all(|c| c.passed);
    let report = VerifyReport {
        suite: suite.into(),
        trials,
        seed,
        checks: checks.list,
        all_passed,
    };
    emit_json(&report, out)?;
    Ok(if all_passed { 0 } else { 1 })
}

fn qubit_suite(checks: &mut Checks, trials: usize, seed: u64) -> Result<()> {
    // Stabilizer uniformity: exact symmetric witness q = 1/4.
    {
        let bases = family_bases(&FamilySpec::new(FamilyKind::Stabilizer))?;
        let problem = build_problem(&bases)?;
        let cert = certify_problem(&problem, ArithMode::Exact)?;
        let sym = symmetrize_certificate(&problem, &cert)?;
        let quarter = Rational::new(1.into(), 4.into());
        let uniform =
            matches!(&sym.witness, WitnessVec::Exact(q) if q.iter().all(|v| *v == quarter));
        let passed = cert.verdict == Verdict::Feasible && uniform && sym.verify(&problem);
        checks.push(
            "stabilizer_uniformity",
            ArithMode::Exact,
            passed,
            "x,y,z bases: symmetric exact witness is q = 1/4 everywhere".into(),
        );
    }

    // D3 threshold.
    {
        let tpl = ScanTemplate {
            spec: FamilySpec::new(FamilyKind::D3),
            param: ScanParam::Theta,
        };
        let theta = threshold_scan(&tpl, 0.5, 1.5, 1e-8)?;
        let s2 = theta.sin().powi(2);
        checks.push(
            "d3_threshold",
            ArithMode::Float,
            (s2 - 8.0 / 9.0).abs() < 1e-6,
            format!("sin^2(theta*) = {s2:.9} (target 8/9)"),
        );
    }

    // C2 thresholds at three fixed polar angles.
    for (label, theta) in [
        ("pi_over_6", std::f64::consts::PI / 6.0),
        ("pi_over_4", std::f64::consts::FRAC_PI_4),
        ("pi_over_3", std::f64::consts::FRAC_PI_3),
    ] {
        let tpl = ScanTemplate {
            spec: FamilySpec::new(FamilyKind::C2).with_theta(theta),
            param: ScanParam::Phi,
        };
        let phi = threshold_scan(&tpl, 0.05, std::f64::consts::FRAC_PI_2, 1e-8)?;
        let dev = (phi.cos() - theta.sin()).abs();
        checks.push(
            &format!("c2_threshold_{label}"),
            ArithMode::Float,
            dev < 1e-6,
            format!(
                "cos(phi*) = {:.9}, |cos(phi*) - sin(theta)| = {dev:.3e}",
                phi.cos()
            ),
        );
    }

    // Exactly coplanar rational triples refuted exactly.
    {
        let exceptions: usize = (0..trials as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = sampling::trial_rng(seed ^ 0x7E0, i);
                let gram = sampling::rational_coplanar_gram(&mut rng);
                let ok = build_problem_exact(&gram)
                    .and_then(|p| {
                        certify_problem(&p, ArithMode::Exact)
                            .map(|c| c.verdict == Verdict::Infeasible && c.verify(&p))
                    })
                    .unwrap_or(false);
                usize::from(!ok)
            })
            .sum();
        checks.push(
            "coplanar_triples_infeasible",
            ArithMode::Exact,
            exceptions == 0,
            format!("{trials} coplanar triples, {exceptions} exceptions"),
        );
    }

    // Four-basis classification: random quadruples, random cuboids,
    // perturbations, grid.
    {
        let report = verify_cuboid_classification(trials, seed ^ 0xC0B)?;
        checks.push(
            "quadruple_classification",
            ArithMode::Float,
            report.passed(),
            format!(
                "{} random quadruples ({} feasible, {} non-cuboid), {} cuboids feasible, {} perturbed infeasible",
                report.trials,
                report.feasible_count,
                report.feasible_non_cuboid,
                report.cuboids_feasible,
                report.perturbed_infeasible
            ),
        );
        let (feasible, total) = cuboid_grid_feasibility(20)?;
        checks.push(
            "cuboid_grid",
            ArithMode::Float,
            feasible == total,
            format!("{feasible}/{total} grid points feasible"),
        );
    }

    // Five or more bases.
    let max_report = verify_max_bases(trials, seed ^ 0xF1FE)?;
    checks.push(
        "five_basis_impossibility",
        ArithMode::Float,
        max_report.random_five_infeasible == max_report.random_five_tested
            && max_report.cuboid_plus_one_infeasible == max_report.cuboid_plus_one_tested
            && max_report.failures.is_empty(),
        format!(
            "{}/{} random 5-sets, {}/{} cuboid-plus-one sets infeasible",
            max_report.random_five_infeasible,
            max_report.random_five_tested,
            max_report.cuboid_plus_one_infeasible,
            max_report.cuboid_plus_one_tested
        ),
    );

    // Icosahedron, exact.
    {
        let bases = family_bases(&FamilySpec::new(FamilyKind::Icosahedron))?;
        let problem = build_problem(&bases)?;
        let cert = certify_problem(&problem, ArithMode::Exact)?;
        checks.push(
            "icosahedron_infeasible",
            ArithMode::Exact,
            cert.verdict == Verdict::Infeasible && cert.verify(&problem),
            "six icosahedral bases, exact Farkas witness verified".into(),
        );
    }

    // Frame validity across the families.
    {
        let mut rng = sampling::rng_from_seed(seed ^ 0xF7A);
        let pairs = trials.min(100);
        let mut specs: Vec<FamilySpec> = Vec::new();
        let theta_max = (8.0f64 / 9.0).sqrt().asin();
        for i in 0..10 {
            specs.push(
                FamilySpec::new(FamilyKind::D3).with_theta(theta_max * (i as f64 + 0.5) / 10.0),
            );
        }
        for i in 0..10 {
            let t = std::f64::consts::FRAC_PI_2 * (i as f64 + 0.5) / 10.0;
            let phi = (t.sin() * 0.5).acos();
            specs.push(FamilySpec::new(FamilyKind::C2).with_theta(t).with_phi(phi));
        }
        for i in 0..10 {
            let t = std::f64::consts::FRAC_PI_2 * (i as f64 + 0.5) / 10.0;
            let p = std::f64::consts::FRAC_PI_2 * ((9.5 - i as f64) / 10.0);
            specs.push(
                FamilySpec::new(FamilyKind::Cuboid)
                    .with_theta(t)
                    .with_phi(p),
            );
        }
        specs.push(FamilySpec::new(FamilyKind::Stabilizer));

        let mut worst_born = 0.0f64;
        let mut all_dual = true;
        for spec in &specs {
            let rep = family_rep(spec)?;
            let (ok, _) = rep.check_dual_frame(1e-8);
            all_dual &= ok;
            for _ in 0..pairs {
                let rho = sampling::random_state(&mut rng);
                let effect = sampling::random_effect(&mut rng);
                worst_born = worst_born.max(rep.born_residual(&rho, &effect)?);
            }
        }
        checks.push(
            "frame_validity",
            ArithMode::Float,
            all_dual && worst_born <= 1e-10,
            format!(
                "{} family points, {pairs} state/effect pairs each; max Born residual {worst_born:.3e}",
                specs.len()
            ),
        );
    }

    // Supervenience.
    {
        let stab = SubtheoryModel::stabilizer()?;
        let clifford_ok = clifford_rotations()
            .iter()
            .all(|(_, u)| matches!(find_permutation(u, &stab), Ok(Some(_))));

        let gamma_cycle = OnticPermutation::new(vec![0, 2, 3, 1, 4, 6, 7, 5])
            .map_err(|e| QprError::Construction(e.to_string()))?;
        let gamma = gamma_unitary()?;
        let mut gamma_ok = true;
        for (theta, q0) in [(0.6, None), (1.1, None), (0.8, Some(0.3))] {
            let model = SubtheoryModel::d3(theta, q0)?;
            gamma_ok &= supervenes(&gamma_cycle, &gamma, &model, 1e-9)?;
        }

        let pi = pi_unitary()?;
        let sym = SubtheoryModel::d3(0.8, None)?;
        let pi_perm = find_permutation(&pi, &sym)?;
        let asym = SubtheoryModel::d3(0.8, Some(0.3))?;
        let pi_ok = match &pi_perm {
            Some(perm) => {
                !supervenes(perm, &pi, &asym, 1e-9)? && find_permutation(&pi, &asym)?.is_none()
            }
            None => false,
        };

        let not_ok = universal_not_check(&stab)? && !gate_set_contains_not(&stab)?;
        checks.push(
            "supervenience",
            ArithMode::Float,
            clifford_ok && gamma_ok && pi_ok && not_ok,
            format!(
                "24 Cliffords {clifford_ok}, Gamma generic {gamma_ok}, Pi symmetric-only {pi_ok}, universal NOT {not_ok}"
            ),
        );
    }

    // Circuit agreement.
    {
        let model = SubtheoryModel::stabilizer()?;
        let gate_names: Vec<String> = model.gates().keys().cloned().collect();
        let measures = ["x", "y", "z"];
        let mut rng = sampling::rng_from_seed(seed ^ 0xC1C);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let len = rng.gen_range(0..=6);
            let circuit: Vec<String> = (0..len)
                .map(|_| gate_names[rng.gen_range(0..gate_names.len())].clone())
                .collect();
            let initial = format!(
                "{}{}",
                measures[rng.gen_range(0..3)],
                if rng.gen_bool(0.5) { "+" } else { "-" }
            );
            let out = run_circuit(
                &model,
                &initial,
                &circuit.join(" "),
                measures[rng.gen_range(0..3)],
            )?;
            worst = worst.max(out.max_deviation);
        }
        checks.push(
            "circuit_agreement",
            ArithMode::Float,
            worst <= 1e-10,
            format!("100 circuits of length <= 6; max ontic/quantum deviation {worst:.3e}"),
        );
    }

    // Limiting case: d3 at sin^2 = 8/9 has q0 = 0 and accepts the z basis.
    {
        let theta = (8.0f64 / 9.0).sqrt().asin();
        let q0 = d3_distribution(theta, None)?.value(0);
        let mut bases = family_bases(&FamilySpec::new(FamilyKind::D3).with_theta(theta))?;
        bases.push(basis_from_bloch(&BlochVector::new(0., 0., 1.))?);
        let cert = certify(&bases, ArithMode::Float)?;
        let dirs: Vec<BlochVector> = bases.iter().map(|b| *b.direction()).collect();
        checks.push(
            "limiting_case_fourth_basis",
            ArithMode::Float,
            q0.abs() <= 1e-12
                && cert.verdict == Verdict::Feasible
                && is_right_cuboid(&dirs, 1e-7)
                && max_report.limit_case_feasible,
            format!("q0 = {q0:.3e}; d3(8/9) plus z certifies feasible as a cuboid"),
        );
    }

    Ok(())
}

fn qudit_suite(checks: &mut Checks, trials: usize, seed: u64) -> Result<()> {
    // Disparateness at d = 2 and d = 3.
    {
        let xyz = BasisFamily::from_qubit_bases(&family_bases(&FamilySpec::new(
            FamilyKind::Stabilizer,
        ))?)?;
        checks.push(
            "disparate_xyz_d2",
            ArithMode::Float,
            is_disparate(&xyz),
            "x, y, z bases pass the rank check over all 8 deletion patterns".into(),
        );
        let mub = mub_triple_d3()?;
        checks.push(
            "disparate_mub_d3",
            ArithMode::Float,
            is_disparate(&mub),
            "d = 3 MUB triple passes the rank check over all 27 deletion patterns".into(),
        );
    }

    // Triple-disparateness consistency on random qubit triples.
    {
        let n = trials.min(200) as u64;
        let inconsistent: usize = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = sampling::trial_rng(seed ^ 0x7E3, i);
                let bases = if i % 2 == 0 {
                    sampling::distinct_bases(&mut rng, 3)
                } else {
                    sampling::coplanar_triple(&mut rng)
                };
                let fam = match BasisFamily::from_qubit_bases(&bases) {
                    Ok(f) => f,
                    Err(_) => return 1,
                };
                match check_triple_disparateness(&fam) {
                    Ok(report) => usize::from(!report.consistent()),
                    Err(_) => 1,
                }
            })
            .sum();
        checks.push(
            "triple_disparateness",
            ArithMode::Float,
            inconsistent == 0,
            format!(
                "{n} random triples (alternating generic/coplanar), {inconsistent} inconsistencies"
            ),
        );
    }

    // Quadruple relation on the cuboid: eps = 1/(d+1) = 1/3, s_j = 1/3.
    {
        let bases = family_bases(
            &FamilySpec::new(FamilyKind::Cuboid)
                .with_theta((1.0 / 3f64.sqrt()).acos())
                .with_phi(std::f64::consts::FRAC_PI_4),
        )?;
        let fam = BasisFamily::from_qubit_bases(&bases)?;
        let sub = BasisFamily::new(fam.bases()[..3].to_vec())?;
        let dec = hull_decompose(&sub, fam.element(3, 0))?;
        let report = check_quadruple_relation(&fam, &dec)?;
        let thirds = dec
            .coeffs
            .iter()
            .flatten()
            .filter(|&&p| p > 1e-9)
            .all(|&p| (p - 1.0 / 3.0).abs() < 1e-8);
        checks.push(
            "quadruple_relation_cuboid",
            ArithMode::Float,
            report.applicable && report.epsilon_matches && thirds,
            format!(
                "eps = {:.9} (target 1/3), nonzero coefficients all 1/3: {thirds}",
                report.epsilon
            ),
        );
    }

    // N-basis epsilon bound: formula instances and the cuboid(pi/3)+z
    // boundary case.
    {
        let bound_52 = (5.0f64 - 3.0) / (5.0 - 3.0 + 2.0);
        let bound_63 = (6.0f64 - 3.0) / (6.0 - 3.0 + 3.0);
        let theta = std::f64::consts::FRAC_PI_3;
        let mut bases = family_bases(
            &FamilySpec::new(FamilyKind::Cuboid)
                .with_theta(theta)
                .with_phi(0.7),
        )?;
        bases.push(basis_from_bloch(&BlochVector::new(0., 0., 1.))?);
        let fam = BasisFamily::from_qubit_bases(&bases)?;
        let sub = BasisFamily::new(fam.bases()[..4].to_vec())?;
        let (eps, coeffs) = max_epsilon(&sub, fam.element(4, 0))?;
        let dec = HullDecomposition {
            epsilon: eps,
            omitted: vec![0; 4],
            coeffs,
        };
        let report = check_epsilon_bound(&fam, &dec)?;
        checks.push(
            "family_epsilon_bounds",
            ArithMode::Float,
            (bound_52 - 0.5).abs() < 1e-12
                && (bound_63 - 0.5).abs() < 1e-12
                && report.applicable
                && report.epsilon_within_bound
                && report.lp_max_within_bound == Some(true),
            format!(
                "bound(5,2) = {bound_52}, bound(6,3) = {bound_63}; cuboid(pi/3)+z: eps = {:.9} <= {:.9}",
                report.epsilon, report.bound
            ),
        );
    }

    // Counting bounds and realized counts.
    {
        let pc = pattern_bound(2, None)?;
        let stab = pattern_bound(2, Some(&qpr_core::qubit_families::stabilizer_rep()))?;
        let cuboid_rep = family_rep(
            &FamilySpec::new(FamilyKind::Cuboid)
                .with_theta(0.8)
                .with_phi(0.6),
        )?;
        let cuboid = pattern_bound(2, Some(&cuboid_rep))?;
        checks.push(
            "pattern_bounds_d2",
            ArithMode::Float,
            pc.bound == 16
                && pc.refined == 14
                && stab.observed == Some(6)
                && cuboid.observed == Some(8),
            format!(
                "bound {} refined {}; stabilizer realizes {:?}, cuboid realizes {:?}",
                pc.bound, pc.refined, stab.observed, cuboid.observed
            ),
        );
    }

    Ok(())
}
