//! Acceptance suite: every quantitative claim the workbench is built around,
//! one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p qpr-core --test acceptance` (add `-- --nocapture`
//! to see the per-criterion lines on success).

use qpr_core::certifier::{
    self, build_problem, build_problem_exact, certify, certify_problem, cuboid_grid_feasibility,
    symmetrize_certificate, threshold_scan, verify_cuboid_classification, verify_max_bases,
    ScanParam, ScanTemplate, Verdict, WitnessVec,
};
use qpr_core::ontic_sim::{
    clifford_rotations, eps_flip_permutation, find_permutation, gamma_unitary,
    gate_set_contains_not, pi_unitary, run_circuit, supervenes, universal_not_check,
    OnticPermutation, SubtheoryModel,
};
use qpr_core::operator_core::basis_from_bloch;
use qpr_core::qubit_families::{d3_distribution, family_bases, family_rep, FamilyKind, FamilySpec};
use qpr_core::qudit_tools::{
    check_quadruple_relation, hull_decompose, is_disparate, mub_triple_d3, pattern_bound,
    BasisFamily,
};
use qpr_core::sampling;
use qpr_core::scalar::ArithMode;
use qpr_core::{BlochVector, Rational};
use rand::Rng;

const SEED: u64 = 20260809;

fn criterion(n: usize, name: &str, passed: bool, detail: &str) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("{tag} criterion {n:2} [{name}]: {detail}");
    assert!(passed, "criterion {n} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_d3_threshold() {
    let start = std::time::Instant::now();
    let tpl = ScanTemplate {
        spec: FamilySpec::new(FamilyKind::D3),
        param: ScanParam::Theta,
    };
    let theta = threshold_scan(&tpl, 0.5, 1.5, 1e-8).unwrap();
    let s2 = theta.sin().powi(2);
    let elapsed = start.elapsed();
    let ok = (s2 - 8.0 / 9.0).abs() < 1e-6 && elapsed.as_secs_f64() < 10.0;
    criterion(
        1,
        "d3 threshold",
        ok,
        &format!("sin^2(theta*) = {s2:.9} vs 8/9, in {elapsed:?}"),
    );
}

#[test]
fn criterion_02_c2_thresholds() {
    let mut details = Vec::new();
    let mut ok = true;
    for theta in [
        std::f64::consts::PI / 6.0,
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_3,
    ] {
        let tpl = ScanTemplate {
            spec: FamilySpec::new(FamilyKind::C2).with_theta(theta),
            param: ScanParam::Phi,
        };
        let phi = threshold_scan(&tpl, 0.05, std::f64::consts::FRAC_PI_2, 1e-8).unwrap();
        let dev = (phi.cos() - theta.sin()).abs();
        ok &= dev < 1e-6;
        details.push(format!(
            "theta={theta:.4}: cos(phi*)={:.9} dev {dev:.2e}",
            phi.cos()
        ));
    }
    criterion(2, "c2 thresholds", ok, &details.join("; "));
}

#[test]
fn criterion_03_stabilizer_uniformity() {
    let bases = family_bases(&FamilySpec::new(FamilyKind::Stabilizer)).unwrap();
    let problem = build_problem(&bases).unwrap();
    let cert = certify_problem(&problem, ArithMode::Exact).unwrap();
    let sym = symmetrize_certificate(&problem, &cert).unwrap();
    let quarter = Rational::new(1.into(), 4.into());
    let ok = cert.verdict == Verdict::Feasible
        && sym.verify(&problem)
        && match &sym.witness {
            WitnessVec::Exact(q) => q.iter().all(|v| *v == quarter),
            _ => false,
        };
    criterion(
        3,
        "stabilizer uniformity",
        ok,
        "exact symmetric witness q = 1/4 on all 8 patterns",
    );
}

#[test]
fn criterion_04_coplanar_triples() {
    use rayon::prelude::*;
    let trials = 500u64;
    let bad: Vec<u64> = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = sampling::trial_rng(SEED ^ 0x7E0, i);
            let gram = sampling::rational_coplanar_gram(&mut rng);
            let problem = match build_problem_exact(&gram) {
                Ok(p) => p,
                Err(_) => return true,
            };
            match certify_problem(&problem, ArithMode::Exact) {
                Ok(cert) => !(cert.verdict == Verdict::Infeasible && cert.verify(&problem)),
                Err(_) => true,
            }
        })
        .collect();
    criterion(
        4,
        "coplanar triples",
        bad.is_empty(),
        &format!(
            "{} exactly coplanar rational triples refuted with exact Farkas witnesses ({} exceptions)",
            trials,
            bad.len()
        ),
    );
}

#[test]
fn criterion_05_cuboid_classification() {
    let report = verify_cuboid_classification(1000, SEED ^ 0xC0B).unwrap();
    let (grid_feasible, grid_total) = cuboid_grid_feasibility(20).unwrap();
    let ok = report.passed() && grid_feasible == grid_total;
    criterion(
        5,
        "cuboid classification",
        ok,
        &format!(
            "{} random quadruples: {} feasible, {} non-cuboid among them; grid {}/{} feasible",
            report.trials,
            report.feasible_count,
            report.feasible_non_cuboid,
            grid_feasible,
            grid_total
        ),
    );
}

#[test]
fn criterion_06_five_basis_impossibility() {
    let report = verify_max_bases(500, SEED ^ 0xF1FE).unwrap();
    let ok = report.random_five_infeasible == report.random_five_tested
        && report.cuboid_plus_one_infeasible == report.cuboid_plus_one_tested
        && report.failures.is_empty();
    criterion(
        6,
        "five-basis impossibility",
        ok,
        &format!(
            "{}/{} random 5-sets and {}/{} cuboid-plus-one sets infeasible",
            report.random_five_infeasible,
            report.random_five_tested,
            report.cuboid_plus_one_infeasible,
            report.cuboid_plus_one_tested
        ),
    );
}

#[test]
fn criterion_07_icosahedron() {
    let bases = family_bases(&FamilySpec::new(FamilyKind::Icosahedron)).unwrap();
    let problem = build_problem(&bases).unwrap();
    let cert = certify_problem(&problem, ArithMode::Exact).unwrap();
    let ok = cert.verdict == Verdict::Infeasible && cert.verify(&problem);
    criterion(
        7,
        "icosahedron impossibility",
        ok,
        "six icosahedral bases refuted with an exact Farkas witness",
    );
}

#[test]
fn criterion_08_frame_validity() {
    let mut rng = sampling::rng_from_seed(SEED ^ 0xF7A);
    let mut worst_born = 0.0f64;
    let mut worst_dual = 0.0f64;
    let mut specs: Vec<FamilySpec> = Vec::new();
    let theta_max = (8.0f64 / 9.0).sqrt().asin();
    for i in 0..10 {
        let t = theta_max * (i as f64 + 0.5) / 10.0;
        specs.push(FamilySpec::new(FamilyKind::D3).with_theta(t));
    }
    for i in 0..10 {
        // theta in (0, pi/2); phi chosen inside |cos(phi)| < sin(theta).
        let t = std::f64::consts::FRAC_PI_2 * (i as f64 + 0.5) / 10.0;
        let margin = t.sin().min(1.0);
        let phi = (margin * 0.5).acos();
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

    for spec in &specs {
        let rep = family_rep(spec).unwrap();
        let (ok, dev) = rep.check_dual_frame(1e-8);
        assert!(ok, "{spec:?}: dual frame deviation {dev}");
        worst_dual = worst_dual.max(dev);
        for _ in 0..100 {
            let rho = sampling::random_state(&mut rng);
            let effect = sampling::random_effect(&mut rng);
            worst_born = worst_born.max(rep.born_residual(&rho, &effect).unwrap());
        }
    }
    let ok = worst_born <= 1e-10;
    criterion(
        8,
        "frame validity",
        ok,
        &format!(
            "{} family points: max dual-frame deviation {worst_dual:.2e}, max Born residual {worst_born:.2e}",
            specs.len()
        ),
    );
}

#[test]
fn criterion_09_supervenience() {
    // All 24 Clifford rotations supervene on the stabilizer model.
    let stab = SubtheoryModel::stabilizer().unwrap();
    let rotations = clifford_rotations();
    let clifford_ok = rotations.len() == 24
        && rotations
            .iter()
            .all(|(_, u)| find_permutation(u, &stab).unwrap().is_some());

    // Gamma supervenes on the a-cycle for generic theta, symmetric or not.
    let gamma_cycle = OnticPermutation::new(vec![0, 2, 3, 1, 4, 6, 7, 5]).unwrap();
    let gamma = gamma_unitary().unwrap();
    let mut gamma_ok = true;
    for (theta, q0) in [(0.6, None), (1.1, None), (0.8, Some(0.3))] {
        let model = SubtheoryModel::d3(theta, q0).unwrap();
        gamma_ok &= supervenes(&gamma_cycle, &gamma, &model, 1e-9).unwrap();
    }

    // Pi supervenes only at the symmetric distribution.
    let pi = pi_unitary().unwrap();
    let sym = SubtheoryModel::d3(0.8, None).unwrap();
    let pi_perm = find_permutation(&pi, &sym).unwrap();
    let asym = SubtheoryModel::d3(0.8, Some(0.3)).unwrap();
    let pi_ok = pi_perm.is_some()
        && !supervenes(pi_perm.as_ref().unwrap(), &pi, &asym, 1e-9).unwrap()
        && find_permutation(&pi, &asym).unwrap().is_none();

    // The eps flip effects the universal NOT; no unitary gate does.
    let not_ok = universal_not_check(&stab).unwrap() && !gate_set_contains_not(&stab).unwrap();
    let flip = eps_flip_permutation();
    let involution_ok = flip.after(&flip) == OnticPermutation::identity(8);

    let ok = clifford_ok && gamma_ok && pi_ok && not_ok && involution_ok;
    criterion(
        9,
        "supervenience",
        ok,
        &format!(
            "24 Cliffords: {clifford_ok}; Gamma generic: {gamma_ok}; Pi symmetric-only: {pi_ok}; universal NOT: {not_ok}"
        ),
    );
}

#[test]
fn criterion_10_circuit_agreement() {
    let model = SubtheoryModel::stabilizer().unwrap();
    let gate_names: Vec<String> = model.gates().keys().cloned().collect();
    let measure_names = ["x", "y", "z"];
    let mut rng = sampling::rng_from_seed(SEED ^ 0xC1C);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let len = rng.gen_range(0..=6);
        let circuit: Vec<String> = (0..len)
            .map(|_| gate_names[rng.gen_range(0..gate_names.len())].clone())
            .collect();
        let initial = format!(
            "{}{}",
            measure_names[rng.gen_range(0..3)],
            if rng.gen_bool(0.5) { "+" } else { "-" }
        );
        let measure = measure_names[rng.gen_range(0..3)];
        let out = run_circuit(&model, &initial, &circuit.join(" "), measure).unwrap();
        worst = worst.max(out.max_deviation);
    }
    criterion(
        10,
        "circuit agreement",
        worst <= 1e-10,
        &format!("100 random circuits (length <= 6): max ontic/quantum deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_11_qudit_suite() {
    let xyz = BasisFamily::from_qubit_bases(
        &family_bases(&FamilySpec::new(FamilyKind::Stabilizer)).unwrap(),
    )
    .unwrap();
    let xyz_disparate = is_disparate(&xyz);

    let mub = mub_triple_d3().unwrap();
    let mub_disparate = is_disparate(&mub);

    // Quadruple relation at d = 2 via the cuboid: eps = 1/3 with
    // coefficients 1/3 each.
    let bases = family_bases(
        &FamilySpec::new(FamilyKind::Cuboid)
            .with_theta((1.0 / 3f64.sqrt()).acos())
            .with_phi(std::f64::consts::FRAC_PI_4),
    )
    .unwrap();
    let fam = BasisFamily::from_qubit_bases(&bases).unwrap();
    let sub = BasisFamily::new(fam.bases()[..3].to_vec()).unwrap();
    let dec = hull_decompose(&sub, fam.element(3, 0)).unwrap();
    let report = check_quadruple_relation(&fam, &dec).unwrap();
    let coeff_third = dec
        .coeffs
        .iter()
        .flatten()
        .filter(|&&p| p > 1e-9)
        .all(|&p| (p - 1.0 / 3.0).abs() < 1e-8);
    let quadruple_ok = report.applicable
        && report.epsilon_matches
        && (report.epsilon - 1.0 / 3.0).abs() < 1e-8
        && coeff_third;

    let pc = pattern_bound(2, None).unwrap();
    let stab_pc = pattern_bound(2, Some(&qpr_core::qubit_families::stabilizer_rep())).unwrap();
    let cuboid_rep = family_rep(
        &FamilySpec::new(FamilyKind::Cuboid)
            .with_theta(0.8)
            .with_phi(0.6),
    )
    .unwrap();
    let cuboid_pc = pattern_bound(2, Some(&cuboid_rep)).unwrap();
    let counts_ok = pc.bound == 16
        && pc.refined == 14
        && stab_pc.observed == Some(6)
        && cuboid_pc.observed == Some(8);

    let ok = xyz_disparate && mub_disparate && quadruple_ok && counts_ok;
    criterion(
        11,
        "qudit suite",
        ok,
        &format!(
            "xyz disparate: {xyz_disparate}; d=3 MUB disparate: {mub_disparate}; quadruple eps = {:.6}; bound {} refined {} observed stabilizer {:?} cuboid {:?}",
            report.epsilon, pc.bound, pc.refined, stab_pc.observed, cuboid_pc.observed
        ),
    );
}

#[test]
fn criterion_12_limiting_case() {
    let theta = (8.0f64 / 9.0).sqrt().asin();
    let dist = d3_distribution(theta, None).unwrap();
    let q0 = dist.value(0);

    let mut bases = family_bases(&FamilySpec::new(FamilyKind::D3).with_theta(theta)).unwrap();
    bases.push(basis_from_bloch(&BlochVector::new(0., 0., 1.)).unwrap());
    let cert = certify(&bases, ArithMode::Float).unwrap();
    let dirs: Vec<BlochVector> = bases.iter().map(|b| *b.direction()).collect();
    let cuboid = certifier::is_right_cuboid(&dirs, 1e-7);

    let ok = q0.abs() <= 1e-12 && cert.verdict == Verdict::Feasible && cuboid;
    criterion(
        12,
        "limiting case",
        ok,
        &format!(
            "q0 = {q0:.2e} at sin^2(theta) = 8/9; added z basis certifies feasible (cuboid: {cuboid})"
        ),
    );
}
