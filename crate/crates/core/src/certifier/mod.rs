//! The decision engine: given a finite set of qubit bases, decide by linear
//! feasibility whether they can be simultaneously non-negative in some
//! quasiprobability representation, produce a certificate either way, and
//! re-verify feasible verdicts by rebuilding the full frame.
//!
//! Variables are q(s) >= 0 over all 2^N sign patterns s (one entry per
//! basis); constraints are the per-element normalizations and the pairwise
//! preparation/measurement overlaps. Patterns the solution assigns zero are
//! kept as zero-valued variables rather than deleted points.

pub mod simplex;

use crate::error::{QprError, Result};
use crate::operator_core::{BlochVector, HermitianOp, QubitBasis};
use crate::quasirep::{
    pattern_signs, structure_report, OnticSpace, QuasiRep, Sign, StructureReport,
};
use crate::qubit_families::{self, FamilySpec};
use crate::sampling;
use crate::scalar::{
    rational_from_f64, rational_to_f64, ArithMode, LpScalar, Rational, EXACT_INPUT_TOL,
};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use simplex::{farkas_products, feasible_residual, solve_feasibility, LpResult};

const MAX_BASES: usize = 12;

/// All 2^N sign vectors over N bases; point s means "compatible with
/// rho(j, s_j) for every j".
#[derive(Debug, Clone)]
pub struct SupportPatternSpace {
    n_bases: usize,
}

impl SupportPatternSpace {
    pub fn new(n_bases: usize) -> Result<Self> {
        if n_bases == 0 || n_bases > MAX_BASES {
            return Err(QprError::InvalidParameter(format!(
                "pattern space supports 1..={MAX_BASES} bases, got {n_bases}"
            )));
        }
        Ok(Self { n_bases })
    }

    pub fn n_bases(&self) -> usize {
        self.n_bases
    }

    pub fn len(&self) -> usize {
        1 << self.n_bases
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sign(&self, point: usize, basis: usize) -> Sign {
        if point >> (self.n_bases - 1 - basis) & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn label(&self, point: usize) -> String {
        pattern_signs(point, self.n_bases)
            .iter()
            .map(Sign::to_string)
            .collect()
    }

    pub fn space(&self) -> OnticSpace {
        OnticSpace::patterns(self.n_bases)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintKind {
    /// Per-element normalization of basis `basis`, element sign `gamma`.
    Normalization { basis: usize, gamma: Sign },
    /// Pairwise overlap row for elements (b1, g1) and (b2, g2).
    Overlap {
        b1: usize,
        g1: Sign,
        b2: usize,
        g2: Sign,
    },
}

impl ConstraintKind {
    pub fn describe(&self) -> String {
        match self {
            ConstraintKind::Normalization { basis, gamma } => format!("norm b{}{gamma}", basis + 1),
            ConstraintKind::Overlap { b1, g1, b2, g2 } => {
                format!("overlap b{}{g1} b{}{g2}", b1 + 1, b2 + 1)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintRow {
    pub kind: ConstraintKind,
    /// Incidence over the 2^N pattern points (entries are 0/1).
    pub incidence: Vec<bool>,
    pub rhs: f64,
    pub rhs_exact: Rational,
}

/// The full equality system q >= 0, A q = b for a set of bases, carrying both
/// float and rational right-hand sides.
#[derive(Debug, Clone)]
pub struct FeasibilityProblem {
    pattern: SupportPatternSpace,
    rows: Vec<ConstraintRow>,
    gram: Vec<Vec<f64>>,
    gram_exact: Vec<Vec<Rational>>,
}

impl FeasibilityProblem {
    pub fn pattern(&self) -> &SupportPatternSpace {
        &self.pattern
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    pub fn n_vars(&self) -> usize {
        self.pattern.len()
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    fn matrix<T: LpScalar>(&self) -> Vec<Vec<T>> {
        self.rows
            .iter()
            .map(|r| {
                r.incidence
                    .iter()
                    .map(|&on| if on { T::lp_one() } else { T::lp_zero() })
                    .collect()
            })
            .collect()
    }

    fn rhs_f64(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.rhs).collect()
    }

    fn rhs_exact(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.rhs_exact.clone()).collect()
    }
}

fn build_rows(
    pattern: &SupportPatternSpace,
    gram: &[Vec<f64>],
    gram_exact: &[Vec<Rational>],
) -> Vec<ConstraintRow> {
    let n = pattern.n_bases();
    let n_points = pattern.len();
    let half = Rational::new(1.into(), 2.into());
    let mut rows = Vec::new();
    for basis in 0..n {
        for gamma in [Sign::Plus, Sign::Minus] {
            let incidence = (0..n_points)
                .map(|p| pattern.sign(p, basis) == gamma)
                .collect();
            rows.push(ConstraintRow {
                kind: ConstraintKind::Normalization { basis, gamma },
                incidence,
                rhs: 1.0,
                rhs_exact: Rational::one(),
            });
        }
    }
    for b1 in 0..n {
        for b2 in (b1 + 1)..n {
            for g1 in [Sign::Plus, Sign::Minus] {
                for g2 in [Sign::Plus, Sign::Minus] {
                    let incidence = (0..n_points)
                        .map(|p| pattern.sign(p, b1) == g1 && pattern.sign(p, b2) == g2)
                        .collect();
                    let sgn = g1.to_f64() * g2.to_f64();
                    let rhs = 0.5 * (1.0 + sgn * gram[b1][b2]);
                    let sgn_exact = if sgn > 0.0 {
                        Rational::one()
                    } else {
                        -Rational::one()
                    };
                    let rhs_exact = (Rational::one() + sgn_exact * &gram_exact[b1][b2]) * &half;
                    rows.push(ConstraintRow {
                        kind: ConstraintKind::Overlap { b1, g1, b2, g2 },
                        incidence,
                        rhs,
                        rhs_exact,
                    });
                }
            }
        }
    }
    rows
}

/// Builds the feasibility system from bases. The classification results
/// assume distinct bases, so near-identical projector sets are rejected.
pub fn build_problem(bases: &[QubitBasis]) -> Result<FeasibilityProblem> {
    let dirs: Vec<BlochVector> = bases.iter().map(|b| *b.direction()).collect();
    let n = dirs.len();
    let pattern = SupportPatternSpace::new(n)?;
    let gram: Vec<Vec<f64>> = dirs
        .iter()
        .map(|a| dirs.iter().map(|b| a.dot(b)).collect())
        .collect();
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate().skip(i + 1) {
            if (1.0 + g.abs()) / 2.0 > 1.0 - 1e-12 {
                return Err(QprError::DuplicateBases(format!(
                    "bases {} and {} are the same projector set",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let gram_exact = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| rational_from_f64(v, EXACT_INPUT_TOL))
                .collect()
        })
        .collect::<Vec<Vec<Rational>>>();
    let rows = build_rows(&pattern, &gram, &gram_exact);
    Ok(FeasibilityProblem {
        pattern,
        rows,
        gram,
        gram_exact,
    })
}

/// Builds the system directly from an exact Gram matrix of unit Bloch
/// vectors; the feasibility question depends on the bases only through it.
pub fn build_problem_exact(gram_exact: &[Vec<Rational>]) -> Result<FeasibilityProblem> {
    let n = gram_exact.len();
    let pattern = SupportPatternSpace::new(n)?;
    for (i, row) in gram_exact.iter().enumerate() {
        if row.len() != n {
            return Err(QprError::DimensionMismatch("gram matrix not square".into()));
        }
        for (j, v) in row.iter().enumerate() {
            if i != j && v.abs() >= Rational::one() {
                return Err(QprError::DuplicateBases(format!(
                    "bases {} and {} are the same projector set",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let gram: Vec<Vec<f64>> = gram_exact
        .iter()
        .map(|row| row.iter().map(rational_to_f64).collect())
        .collect();
    let rows = build_rows(&pattern, &gram, gram_exact);
    Ok(FeasibilityProblem {
        pattern,
        rows,
        gram,
        gram_exact: gram_exact.to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone)]
pub enum WitnessVec {
    Float(Vec<f64>),
    Exact(Vec<Rational>),
}

impl WitnessVec {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            WitnessVec::Float(v) => v.clone(),
            WitnessVec::Exact(v) => v.iter().map(rational_to_f64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            WitnessVec::Float(v) => v.len(),
            WitnessVec::Exact(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Either a non-negative solution q over the pattern space or a Farkas dual
/// vector refuting one, with the arithmetic mode it was computed in.
#[derive(Debug, Clone)]
pub struct FeasibilityCertificate {
    pub verdict: Verdict,
    pub mode: ArithMode,
    /// q values (feasible) or the Farkas row multipliers (infeasible).
    pub witness: WitnessVec,
    pub n_bases: usize,
    /// Max constraint violation of the stored witness, float view.
    pub residual: f64,
    /// Whether the witness was re-verified by a full frame reconstruction.
    pub frame_reconstructed: bool,
}

impl FeasibilityCertificate {
    /// Re-checks the witness against the problem: exactly in exact mode,
    /// within tolerance in float mode.
    pub fn verify(&self, problem: &FeasibilityProblem) -> bool {
        match (&self.witness, self.verdict) {
            (WitnessVec::Exact(q), Verdict::Feasible) => {
                let a = problem.matrix::<Rational>();
                let res = feasible_residual(&a, &problem.rhs_exact(), q);
                res.is_zero() && q.iter().all(|v| !v.is_negative())
            }
            (WitnessVec::Float(q), Verdict::Feasible) => {
                let a = problem.matrix::<f64>();
                feasible_residual(&a, &problem.rhs_f64(), q) <= 1e-9
                    && q.iter().all(|&v| v >= -1e-9)
            }
            (WitnessVec::Exact(y), Verdict::Infeasible) => {
                let a = problem.matrix::<Rational>();
                let (max_col, yb) = farkas_products(&a, &problem.rhs_exact(), y);
                !max_col.is_positive() && yb.is_positive()
            }
            (WitnessVec::Float(y), Verdict::Infeasible) => {
                let a = problem.matrix::<f64>();
                let (max_col, yb) = farkas_products(&a, &problem.rhs_f64(), y);
                max_col <= 1e-9 && yb > 1e-9
            }
        }
    }
}

fn certify_float(problem: &FeasibilityProblem) -> Result<FeasibilityCertificate> {
    let a = problem.matrix::<f64>();
    let b = problem.rhs_f64();
    match solve_feasibility(&a, &b)? {
        LpResult::Optimal { x, .. } => {
            let q: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
            let residual = feasible_residual(&a, &b, &q);
            if residual > 1e-8 {
                return Err(QprError::Numerical(format!(
                    "feasible witness residual {residual:.3e} too large; retry with exact mode"
                )));
            }
            Ok(FeasibilityCertificate {
                verdict: Verdict::Feasible,
                mode: ArithMode::Float,
                witness: WitnessVec::Float(q),
                n_bases: problem.pattern.n_bases(),
                residual,
                frame_reconstructed: false,
            })
        }
        LpResult::Infeasible { farkas } => {
            let (max_col, yb) = farkas_products(&a, &b, &farkas);
            if max_col > 1e-9 || yb <= 1e-9 {
                return Err(QprError::Numerical(format!(
                    "marginal infeasibility (y.A max {max_col:.3e}, y.b {yb:.3e}); retry with exact mode"
                )));
            }
            Ok(FeasibilityCertificate {
                verdict: Verdict::Infeasible,
                mode: ArithMode::Float,
                witness: WitnessVec::Float(farkas),
                n_bases: problem.pattern.n_bases(),
                residual: max_col.max(0.0),
                frame_reconstructed: false,
            })
        }
        LpResult::Unbounded => Err(QprError::Numerical(
            "feasibility phase reported unbounded".into(),
        )),
    }
}

fn certify_exact(problem: &FeasibilityProblem) -> Result<FeasibilityCertificate> {
    let a = problem.matrix::<Rational>();
    let b = problem.rhs_exact();
    match solve_feasibility(&a, &b)? {
        LpResult::Optimal { x, .. } => {
            let res = feasible_residual(&a, &b, &x);
            debug_assert!(res.is_zero());
            Ok(FeasibilityCertificate {
                verdict: Verdict::Feasible,
                mode: ArithMode::Exact,
                witness: WitnessVec::Exact(x),
                n_bases: problem.pattern.n_bases(),
                residual: 0.0,
                frame_reconstructed: false,
            })
        }
        LpResult::Infeasible { farkas } => {
            let (max_col, yb) = farkas_products(&a, &b, &farkas);
            if max_col.is_positive() || !yb.is_positive() {
                return Err(QprError::Numerical(
                    "exact Farkas certificate failed its own verification".into(),
                ));
            }
            Ok(FeasibilityCertificate {
                verdict: Verdict::Infeasible,
                mode: ArithMode::Exact,
                witness: WitnessVec::Exact(farkas),
                n_bases: problem.pattern.n_bases(),
                residual: 0.0,
                frame_reconstructed: false,
            })
        }
        LpResult::Unbounded => Err(QprError::Numerical(
            "feasibility phase reported unbounded".into(),
        )),
    }
}

pub fn certify_problem(
    problem: &FeasibilityProblem,
    mode: ArithMode,
) -> Result<FeasibilityCertificate> {
    match mode {
        ArithMode::Float => certify_float(problem),
        ArithMode::Exact => certify_exact(problem),
    }
}

fn dirs_span_r3(dirs: &[BlochVector]) -> bool {
    let m = nalgebra::DMatrix::<f64>::from_fn(dirs.len(), 3, |i, j| dirs[i].0[j]);
    m.svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-9)
        .count()
        >= 3
}

/// Per-pattern d-vectors: `Some(d)` when d . r(j) = s_j is solvable, `None`
/// for geometrically inconsistent patterns.
fn pattern_dvectors(dirs: &[BlochVector], n: usize) -> Vec<Option<BlochVector>> {
    (0..(1usize << n))
        .map(|p| {
            let signs = pattern_signs(p, n);
            match qubit_families::solve_dvector_for_signs(dirs, &signs) {
                Ok((d, res)) if res <= 1e-7 => Some(d),
                _ => None,
            }
        })
        .collect()
}

/// Rebuilds the full representation F(s) = q(s)/2 (1 + d(s).sigma) from a
/// feasible witness over the pattern space, and runs the structural checks.
/// Requires the Bloch vectors to span R^3 and the witness to vanish on
/// patterns that admit no d-vector.
pub fn reconstruct_frame(bases: &[QubitBasis], q: &[f64]) -> Result<(QuasiRep, StructureReport)> {
    let n = bases.len();
    if q.len() != (1 << n) {
        return Err(QprError::DimensionMismatch(
            "witness length must be 2^N".into(),
        ));
    }
    let dirs: Vec<BlochVector> = bases.iter().map(|b| *b.direction()).collect();
    if !dirs_span_r3(&dirs) {
        return Err(QprError::NoSolution(
            "frame reconstruction needs Bloch vectors spanning R^3".into(),
        ));
    }
    let dvecs = pattern_dvectors(&dirs, n);
    for (p, d) in dvecs.iter().enumerate() {
        if d.is_none() && q[p] > 1e-9 {
            return Err(QprError::Construction(format!(
                "witness assigns {} to geometrically inconsistent pattern {p}",
                q[p]
            )));
        }
    }
    let identity = HermitianOp::identity(2);
    let paulis = [
        HermitianOp::pauli_x(),
        HermitianOp::pauli_y(),
        HermitianOp::pauli_z(),
    ];
    let mut f_ops = Vec::with_capacity(q.len());
    let mut g_ops = Vec::with_capacity(q.len());
    for (p, dvec) in dvecs.iter().enumerate() {
        match dvec {
            Some(d) => {
                let mut dsigma = HermitianOp::zero(2);
                for (k, pl) in paulis.iter().enumerate() {
                    dsigma = dsigma.add(&pl.scale(d.0[k]));
                }
                let g = identity.add(&dsigma).scale(0.5);
                f_ops.push(g.scale(q[p]));
                g_ops.push(g);
            }
            None => {
                // Zero-weight point: neutral indicator keeps xi in [0,1].
                f_ops.push(HermitianOp::zero(2));
                g_ops.push(identity.scale(0.5));
            }
        }
    }
    let rep = QuasiRep::new(OnticSpace::patterns(n), f_ops, g_ops)?;
    let (ok, dev) = rep.check_dual_frame(1e-8);
    if !ok {
        return Err(QprError::Construction(format!(
            "reconstructed frame fails dual-frame check: deviation {dev:.3e}"
        )));
    }
    let qudits: Vec<_> = bases.iter().map(QubitBasis::to_qudit).collect();
    let report = structure_report(&rep, &qudits, 1e-7);
    if !report.all_passed() {
        return Err(QprError::Construction(format!(
            "reconstructed frame fails structure checks: {:?}",
            report.details
        )));
    }
    Ok((rep, report))
}

/// Re-solves the system with geometrically inconsistent patterns pinned to
/// zero, so the witness supports a frame reconstruction.
fn resolve_on_consistent_patterns(
    problem: &FeasibilityProblem,
    dirs: &[BlochVector],
    mode: ArithMode,
) -> Result<Option<WitnessVec>> {
    let n = problem.pattern.n_bases();
    let dvecs = pattern_dvectors(dirs, n);
    let keep: Vec<usize> = (0..problem.n_vars())
        .filter(|&p| dvecs[p].is_some())
        .collect();
    if keep.len() == problem.n_vars() {
        return Ok(None);
    }
    match mode {
        ArithMode::Float => {
            let a: Vec<Vec<f64>> = problem
                .matrix::<f64>()
                .iter()
                .map(|row| keep.iter().map(|&p| row[p]).collect())
                .collect();
            match solve_feasibility(&a, &problem.rhs_f64())? {
                LpResult::Optimal { x, .. } => {
                    let mut full = vec![0.0; problem.n_vars()];
                    for (k, &p) in keep.iter().enumerate() {
                        full[p] = x[k].max(0.0);
                    }
                    Ok(Some(WitnessVec::Float(full)))
                }
                _ => Ok(None),
            }
        }
        ArithMode::Exact => {
            let a: Vec<Vec<Rational>> = problem
                .matrix::<Rational>()
                .iter()
                .map(|row| keep.iter().map(|&p| row[p].clone()).collect())
                .collect();
            match solve_feasibility(&a, &problem.rhs_exact())? {
                LpResult::Optimal { x, .. } => {
                    let mut full = vec![Rational::zero(); problem.n_vars()];
                    for (k, &p) in keep.iter().enumerate() {
                        full[p] = x[k].clone();
                    }
                    Ok(Some(WitnessVec::Exact(full)))
                }
                _ => Ok(None),
            }
        }
    }
}

/// Decides simultaneous non-negativity of `bases`. Feasible verdicts over
/// three or more spanning bases are re-verified by rebuilding the frame and
/// running the structural checks; the returned witness is the one that
/// reconstructs.
pub fn certify(bases: &[QubitBasis], mode: ArithMode) -> Result<FeasibilityCertificate> {
    let problem = build_problem(bases)?;
    let mut cert = certify_problem(&problem, mode)?;
    if cert.verdict == Verdict::Infeasible {
        return Ok(cert);
    }
    let dirs: Vec<BlochVector> = bases.iter().map(|b| *b.direction()).collect();
    if bases.len() < 3 || !dirs_span_r3(&dirs) {
        return Ok(cert);
    }
    if reconstruct_frame(bases, &cert.witness.to_f64()).is_ok() {
        cert.frame_reconstructed = true;
        return Ok(cert);
    }
    if let Some(witness) = resolve_on_consistent_patterns(&problem, &dirs, mode)? {
        if reconstruct_frame(bases, &witness.to_f64()).is_ok() {
            cert.witness = witness;
            cert.frame_reconstructed = true;
            let a = problem.matrix::<f64>();
            cert.residual = feasible_residual(&a, &problem.rhs_f64(), &cert.witness.to_f64());
        }
    }
    Ok(cert)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k.is_multiple_of(2) {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

/// Signed basis permutations (pi, sigma) leaving the Gram matrix invariant:
/// sigma_j sigma_k G[pi(j)][pi(k)] = G[j][k]. Exact witnesses demand an
/// exactly invariant group so the averaged solution stays exactly feasible.
fn gram_symmetry_group(
    problem: &FeasibilityProblem,
    mode: ArithMode,
) -> Vec<(Vec<usize>, Vec<f64>)> {
    let n = problem.gram.len();
    let mut group = Vec::new();
    for perm in permutations(n) {
        for sig_bits in 0..(1usize << n) {
            let sigma: Vec<f64> = (0..n)
                .map(|j| if sig_bits >> j & 1 == 0 { 1.0 } else { -1.0 })
                .collect();
            let ok = (0..n).all(|j| {
                (0..n).all(|k| match mode {
                    ArithMode::Float => {
                        (sigma[j] * sigma[k] * problem.gram[perm[j]][perm[k]] - problem.gram[j][k])
                            .abs()
                            <= 1e-9
                    }
                    ArithMode::Exact => {
                        let lhs = if sigma[j] * sigma[k] > 0.0 {
                            problem.gram_exact[perm[j]][perm[k]].clone()
                        } else {
                            -problem.gram_exact[perm[j]][perm[k]].clone()
                        };
                        lhs == problem.gram_exact[j][k]
                    }
                })
            });
            if ok {
                group.push((perm.clone(), sigma));
            }
        }
    }
    group
}

/// Averages a feasible witness over the input set's Gram symmetry group,
/// producing the symmetric solution (the feasible set is convex and the
/// group preserves it). Exact witnesses stay exact.
pub fn symmetrize_certificate(
    problem: &FeasibilityProblem,
    cert: &FeasibilityCertificate,
) -> Result<FeasibilityCertificate> {
    if cert.verdict != Verdict::Feasible {
        return Err(QprError::Contract(
            "only feasible certificates can be symmetrized".into(),
        ));
    }
    let n = problem.pattern.n_bases();
    let group = gram_symmetry_group(problem, cert.mode);
    // Pattern index map for each group element: s -> (g s)_{pi(j)} = sigma_j s_j.
    let maps: Vec<Vec<usize>> = group
        .iter()
        .map(|(perm, sigma)| {
            (0..problem.n_vars())
                .map(|p| {
                    let s = pattern_signs(p, n);
                    let mut t = vec![Sign::Plus; n];
                    for j in 0..n {
                        let v = if sigma[j] > 0.0 { s[j] } else { s[j].flip() };
                        t[perm[j]] = v;
                    }
                    crate::quasirep::pattern_index(&t)
                })
                .collect()
        })
        .collect();

    let witness = match &cert.witness {
        WitnessVec::Float(q) => {
            let mut acc = vec![0.0; q.len()];
            for map in &maps {
                for (p, &img) in map.iter().enumerate() {
                    acc[img] += q[p];
                }
            }
            let scale = 1.0 / group.len() as f64;
            WitnessVec::Float(acc.into_iter().map(|v| v * scale).collect())
        }
        WitnessVec::Exact(q) => {
            let mut acc = vec![Rational::zero(); q.len()];
            for map in &maps {
                for (p, &img) in map.iter().enumerate() {
                    acc[img] += q[p].clone();
                }
            }
            let scale = Rational::new(1.into(), (group.len() as i64).into());
            WitnessVec::Exact(acc.into_iter().map(|v| v * &scale).collect())
        }
    };
    let residual = {
        let a = problem.matrix::<f64>();
        feasible_residual(&a, &problem.rhs_f64(), &witness.to_f64())
    };
    Ok(FeasibilityCertificate {
        verdict: Verdict::Feasible,
        mode: cert.mode,
        witness,
        n_bases: cert.n_bases,
        residual,
        frame_reconstructed: false,
    })
}

/// Geometric test: the eight points {+/- r_j} form a right cuboid iff some
/// signing and role assignment writes them as s1 a + s2 b + s3 c with a, b, c
/// mutually orthogonal.
pub fn is_right_cuboid(dirs: &[BlochVector], tol: f64) -> bool {
    if dirs.len() != 4 {
        return false;
    }
    let idx_perms = [
        [1usize, 2, 3],
        [1, 3, 2],
        [2, 1, 3],
        [2, 3, 1],
        [3, 1, 2],
        [3, 2, 1],
    ];
    for sig_bits in 0..8usize {
        let sig = [
            1.0,
            if sig_bits & 1 == 0 { 1.0 } else { -1.0 },
            if sig_bits & 2 == 0 { 1.0 } else { -1.0 },
            if sig_bits & 4 == 0 { 1.0 } else { -1.0 },
        ];
        for perm in idx_perms {
            let v1 = dirs[0];
            let vb = dirs[perm[0]].scaled(sig[perm[0]]);
            let vc = dirs[perm[1]].scaled(sig[perm[1]]);
            let vbc = dirs[perm[2]].scaled(sig[perm[2]]);
            // All four role residuals equal +/- (v1 - vb - vc + vbc)/4.
            let resid = v1.sub(&vb).sub(&vc).add(&vbc).norm() / 4.0;
            if resid > tol {
                continue;
            }
            let a = v1.add(&vb).add(&vc).add(&vbc).scaled(0.25);
            let b = v1.add(&vb).sub(&vc).sub(&vbc).scaled(0.25);
            let c = v1.sub(&vb).add(&vc).sub(&vbc).scaled(0.25);
            if a.dot(&b).abs() <= tol && a.dot(&c).abs() <= tol && b.dot(&c).abs() <= tol {
                return true;
            }
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParam {
    Theta,
    Phi,
}

impl std::str::FromStr for ScanParam {
    type Err = QprError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(ScanParam::Theta),
            "phi" => Ok(ScanParam::Phi),
            other => Err(QprError::InvalidParameter(format!(
                "unknown scan parameter `{other}` (expected theta or phi)"
            ))),
        }
    }
}

/// A family with one parameter left free for scanning.
#[derive(Debug, Clone, Copy)]
pub struct ScanTemplate {
    pub spec: FamilySpec,
    pub param: ScanParam,
}

impl ScanTemplate {
    pub fn at(&self, value: f64) -> FamilySpec {
        let mut spec = self.spec;
        match self.param {
            ScanParam::Theta => spec.theta = Some(value),
            ScanParam::Phi => spec.phi = Some(value),
        }
        spec
    }
}

fn scan_verdict(tpl: &ScanTemplate, value: f64) -> Result<Verdict> {
    let bases = qubit_families::family_bases(&tpl.at(value))?;
    Ok(certify_problem(&build_problem(&bases)?, ArithMode::Float)?.verdict)
}

/// Bisection for the feasibility boundary of a one-parameter family; errors
/// when both endpoints give the same verdict.
pub fn threshold_scan(tpl: &ScanTemplate, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if tol <= 0.0 || hi <= lo || !tol.is_finite() {
        return Err(QprError::InvalidParameter(
            "scan needs lo < hi and tol > 0".into(),
        ));
    }
    let v_lo = scan_verdict(tpl, lo)?;
    let v_hi = scan_verdict(tpl, hi)?;
    if v_lo == v_hi {
        return Err(QprError::NoThreshold(format!(
            "both endpoints certify {v_lo:?}; no boundary in [{lo}, {hi}]"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if scan_verdict(tpl, mid)? == v_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Empirical check of the four-basis classification: every feasible random
/// quadruple must pass the right-cuboid test, random cuboids must certify
/// feasible, and perturbed cuboids must certify infeasible.
#[derive(Debug, Clone)]
pub struct CuboidReport {
    pub trials: usize,
    pub feasible_count: usize,
    pub feasible_non_cuboid: usize,
    pub cuboids_tested: usize,
    pub cuboids_feasible: usize,
    pub perturbed_tested: usize,
    pub perturbed_infeasible: usize,
    pub failures: Vec<String>,
}

impl CuboidReport {
    pub fn passed(&self) -> bool {
        self.feasible_non_cuboid == 0
            && self.cuboids_feasible == self.cuboids_tested
            && self.perturbed_infeasible == self.perturbed_tested
            && self.failures.is_empty()
    }
}

pub fn verify_cuboid_classification(trials: usize, seed: u64) -> Result<CuboidReport> {
    if trials == 0 {
        return Err(QprError::InvalidParameter("trials must be >= 1".into()));
    }
    let random_results: Vec<std::result::Result<(bool, bool), String>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::trial_rng(seed, i);
            let bases = sampling::distinct_bases(&mut rng, 4);
            let dirs: Vec<BlochVector> = bases.iter().map(|b| *b.direction()).collect();
            match certify(&bases, ArithMode::Float) {
                Ok(cert) => Ok((
                    cert.verdict == Verdict::Feasible,
                    is_right_cuboid(&dirs, 1e-7),
                )),
                Err(e) => Err(format!("trial {i}: {e}")),
            }
        })
        .collect();

    let mut report = CuboidReport {
        trials,
        feasible_count: 0,
        feasible_non_cuboid: 0,
        cuboids_tested: 0,
        cuboids_feasible: 0,
        perturbed_tested: 0,
        perturbed_infeasible: 0,
        failures: Vec::new(),
    };
    for r in random_results {
        match r {
            Ok((feasible, cuboid)) => {
                if feasible {
                    report.feasible_count += 1;
                    if !cuboid {
                        report.feasible_non_cuboid += 1;
                    }
                }
            }
            Err(e) => report.failures.push(e),
        }
    }

    let n_cuboids = (trials / 10).max(20);
    let cuboid_results: Vec<std::result::Result<(bool, bool), String>> = (0..n_cuboids as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::trial_rng(seed ^ 0xC0B0_1D00, i);
            let bases = sampling::random_cuboid_bases(&mut rng).map_err(|e| e.to_string())?;
            let dirs: Vec<BlochVector> = bases.iter().map(|b| *b.direction()).collect();
            let feasible = certify(&bases, ArithMode::Float)
                .map(|c| c.verdict == Verdict::Feasible)
                .map_err(|e| format!("cuboid trial {i}: {e}"))?;
            if !is_right_cuboid(&dirs, 1e-7) {
                return Err(format!(
                    "cuboid trial {i}: generator failed the geometry test"
                ));
            }
            // Perturb one basis off the cuboid.
            let axis = sampling::unit_vector(&mut rng);
            let mut pert = dirs.clone();
            pert[0] = pert[0].rotated(&axis, 0.02);
            let pert_bases: Vec<QubitBasis> = pert
                .iter()
                .map(|d| crate::operator_core::basis_from_bloch(d).expect("unit"))
                .collect();
            let pert_infeasible = certify(&pert_bases, ArithMode::Float)
                .map(|c| c.verdict == Verdict::Infeasible)
                .map_err(|e| format!("perturbed trial {i}: {e}"))?;
            Ok((feasible, pert_infeasible))
        })
        .collect();
    for r in cuboid_results {
        match r {
            Ok((feasible, pert_infeasible)) => {
                report.cuboids_tested += 1;
                if feasible {
                    report.cuboids_feasible += 1;
                }
                report.perturbed_tested += 1;
                if pert_infeasible {
                    report.perturbed_infeasible += 1;
                }
            }
            Err(e) => report.failures.push(e),
        }
    }
    Ok(report)
}

/// Feasibility over an n x n grid of cuboid parameters interior to the open
/// square; returns (feasible, total).
pub fn cuboid_grid_feasibility(n: usize) -> Result<(usize, usize)> {
    use crate::qubit_families::{family_bases, FamilyKind};
    let step = std::f64::consts::FRAC_PI_2 / n as f64;
    let points: Vec<(f64, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| ((i as f64 + 0.5) * step, (j as f64 + 0.5) * step)))
        .collect();
    let feasible = points
        .par_iter()
        .map(|&(theta, phi)| {
            let spec = FamilySpec::new(FamilyKind::Cuboid)
                .with_theta(theta)
                .with_phi(phi);
            let bases = family_bases(&spec)?;
            Ok(usize::from(
                certify(&bases, ArithMode::Float)?.verdict == Verdict::Feasible,
            ))
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum();
    Ok((feasible, n * n))
}

/// Empirical check that five or more bases always certify infeasible, plus
/// the limiting case: the d3 family at sin^2(theta) = 8/9 admits the z basis
/// as a feasible fourth.
#[derive(Debug, Clone)]
pub struct MaxBasesReport {
    pub random_five_tested: usize,
    pub random_five_infeasible: usize,
    pub cuboid_plus_one_tested: usize,
    pub cuboid_plus_one_infeasible: usize,
    pub limit_case_feasible: bool,
    pub failures: Vec<String>,
}

impl MaxBasesReport {
    pub fn passed(&self) -> bool {
        self.random_five_infeasible == self.random_five_tested
            && self.cuboid_plus_one_infeasible == self.cuboid_plus_one_tested
            && self.limit_case_feasible
            && self.failures.is_empty()
    }
}

pub fn verify_max_bases(trials: usize, seed: u64) -> Result<MaxBasesReport> {
    if trials == 0 {
        return Err(QprError::InvalidParameter("trials must be >= 1".into()));
    }
    let five: Vec<std::result::Result<bool, String>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::trial_rng(seed ^ 0xF1FE, i);
            let bases = sampling::distinct_bases(&mut rng, 5);
            certify(&bases, ArithMode::Float)
                .map(|c| c.verdict == Verdict::Infeasible)
                .map_err(|e| format!("five-basis trial {i}: {e}"))
        })
        .collect();

    let n_aug = (trials / 5).max(20);
    let aug: Vec<std::result::Result<bool, String>> = (0..n_aug as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::trial_rng(seed ^ 0xA06, i);
            let mut bases = sampling::random_cuboid_bases(&mut rng).map_err(|e| e.to_string())?;
            loop {
                let extra = sampling::unit_vector(&mut rng);
                if bases
                    .iter()
                    .all(|b| b.direction().dot(&extra).abs() < 1.0 - 1e-6)
                {
                    bases.push(crate::operator_core::basis_from_bloch(&extra).expect("unit"));
                    break;
                }
            }
            certify(&bases, ArithMode::Float)
                .map(|c| c.verdict == Verdict::Infeasible)
                .map_err(|e| format!("cuboid-plus-one trial {i}: {e}"))
        })
        .collect();

    let mut report = MaxBasesReport {
        random_five_tested: trials,
        random_five_infeasible: 0,
        cuboid_plus_one_tested: n_aug,
        cuboid_plus_one_infeasible: 0,
        limit_case_feasible: false,
        failures: Vec::new(),
    };
    for r in five {
        match r {
            Ok(true) => report.random_five_infeasible += 1,
            Ok(false) => {}
            Err(e) => report.failures.push(e),
        }
    }
    for r in aug {
        match r {
            Ok(true) => report.cuboid_plus_one_infeasible += 1,
            Ok(false) => {}
            Err(e) => report.failures.push(e),
        }
    }

    // d3 at the limiting angle plus the z basis: four bases of a cube.
    let theta = (8.0f64 / 9.0).sqrt().asin();
    let spec = FamilySpec::new(crate::qubit_families::FamilyKind::D3).with_theta(theta);
    let mut bases = qubit_families::family_bases(&spec)?;
    bases.push(crate::operator_core::basis_from_bloch(&BlochVector::new(
        0., 0., 1.,
    ))?);
    report.limit_case_feasible = certify(&bases, ArithMode::Float)?.verdict == Verdict::Feasible;

    Ok(report)
}
