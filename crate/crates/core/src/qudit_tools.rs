//! Dimension-d machinery: disparateness of basis families, convex-hull
//! decompositions of pure states against a family, the relational
//! constraints any simultaneously non-negative bases must satisfy, and the
//! 2^(d^2) counting bound on non-negative states.

use crate::certifier::{self, simplex};
use crate::error::{QprError, Result};
use crate::operator_core::{
    basis_from_bloch, density_to_bloch, HermitianOp, QubitBasis, QuditBasis,
};
use crate::quasirep::QuasiRep;
use crate::scalar::ArithMode;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

const RANK_CUTOFF: f64 = 1e-9;
const NONORTHOGONAL_TOL: f64 = 1e-9;

/// N orthonormal bases of a d-dimensional space.
#[derive(Debug, Clone)]
pub struct BasisFamily {
    dim: usize,
    bases: Vec<QuditBasis>,
}

impl BasisFamily {
    pub fn new(bases: Vec<QuditBasis>) -> Result<Self> {
        let dim = bases
            .first()
            .map(QuditBasis::dim)
            .ok_or_else(|| QprError::InvalidBasis("empty family".into()))?;
        if bases.iter().any(|b| b.dim() != dim) {
            return Err(QprError::DimensionMismatch("mixed basis dims".into()));
        }
        Ok(Self { dim, bases })
    }

    pub fn from_qubit_bases(bases: &[QubitBasis]) -> Result<Self> {
        Self::new(bases.iter().map(QubitBasis::to_qudit).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[QuditBasis] {
        &self.bases
    }

    pub fn element(&self, alpha: usize, j: usize) -> &HermitianOp {
        &self.bases[alpha].elements()[j]
    }

    /// No element of one basis orthogonal to any element of another.
    pub fn mutually_nonorthogonal(&self) -> Result<Option<(usize, usize, usize, usize)>> {
        for a in 0..self.bases.len() {
            for b in (a + 1)..self.bases.len() {
                for (j, e1) in self.bases[a].elements().iter().enumerate() {
                    for (k, e2) in self.bases[b].elements().iter().enumerate() {
                        if e1.inner(e2)?.abs() <= NONORTHOGONAL_TOL {
                            return Ok(Some((a, j, b, k)));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Isometric real coordinates of a Hermitian operator: diagonal entries,
/// then sqrt(2) times the real and imaginary parts of the upper triangle.
/// Frobenius pairings become dot products.
pub(crate) fn vec_iso(op: &HermitianOp) -> Vec<f64> {
    let d = op.dim();
    let m = op.matrix();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(m[(i, i)].re);
    }
    let s = 2f64.sqrt();
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(s * m[(i, j)].re);
            out.push(s * m[(i, j)].im);
        }
    }
    out
}

fn unvec_iso(dim: usize, v: &[f64]) -> HermitianOp {
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(v[i], 0.0);
    }
    let s = 2f64.sqrt();
    let mut k = dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let re = v[k] / s;
            let im = v[k + 1] / s;
            k += 2;
            m[(i, j)] = Complex64::new(re, im);
            m[(j, i)] = Complex64::new(re, -im);
        }
    }
    HermitianOp::from_matrix(m).expect("hermitian by construction")
}

fn rank_of(ops: &[&HermitianOp]) -> usize {
    if ops.is_empty() {
        return 0;
    }
    let rows = ops[0].dim() * ops[0].dim();
    let m = DMatrix::<f64>::from_fn(rows, ops.len(), |r, c| vec_iso(ops[c])[r]);
    m.svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_CUTOFF)
        .count()
}

/// A family is disparate when removing one element from each basis and
/// adjoining the identity always yields a linearly independent operator
/// set. At most d+1 disparate bases exist, so larger families are rejected
/// immediately.
pub fn is_disparate(fam: &BasisFamily) -> bool {
    let d = fam.dim();
    let n = fam.len();
    if n > d + 1 {
        return false;
    }
    let identity = HermitianOp::identity(d);
    let total = d.pow(n as u32);
    (0..total).into_par_iter().all(|mut code| {
        let mut omitted = Vec::with_capacity(n);
        for _ in 0..n {
            omitted.push(code % d);
            code /= d;
        }
        let mut ops: Vec<&HermitianOp> = Vec::with_capacity(n * (d - 1) + 1);
        for (alpha, &f_a) in omitted.iter().enumerate() {
            for j in 0..d {
                if j != f_a {
                    ops.push(fam.element(alpha, j));
                }
            }
        }
        ops.push(&identity);
        rank_of(&ops) == ops.len()
    })
}

/// Decomposition eps*phi + (1-eps)/d * 1 = sum_{alpha,j != f_alpha} p_aj
/// rho(alpha,j) with maximal eps; every basis omits at least one element.
#[derive(Debug, Clone)]
pub struct HullDecomposition {
    pub epsilon: f64,
    /// Omitted element per basis (an index with zero coefficient).
    pub omitted: Vec<usize>,
    /// Coefficients p[alpha][j] >= 0.
    pub coeffs: Vec<Vec<f64>>,
}

impl HullDecomposition {
    /// Max |eps*phi + (1-eps)/d - sum p rho| entry for re-substitution.
    pub fn residual(&self, fam: &BasisFamily, phi: &HermitianOp) -> f64 {
        let d = fam.dim();
        let mut lhs = phi
            .scale(self.epsilon)
            .add(&HermitianOp::identity(d).scale((1.0 - self.epsilon) / d as f64));
        for (alpha, row) in self.coeffs.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                lhs = lhs.sub(&fam.element(alpha, j).scale(p));
            }
        }
        lhs.max_abs_entry_diff(&HermitianOp::zero(d))
    }
}

fn check_in_span(fam: &BasisFamily, phi: &HermitianOp) -> Result<()> {
    let ops: Vec<&HermitianOp> = fam
        .bases()
        .iter()
        .flat_map(|b| b.elements().iter())
        .collect();
    let rows = fam.dim() * fam.dim();
    let m = DMatrix::<f64>::from_fn(rows, ops.len(), |r, c| vec_iso(ops[c])[r]);
    let rhs = nalgebra::DVector::<f64>::from_vec(vec_iso(phi));
    let svd = m.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| QprError::Numerical(format!("span check failed: {e}")))?;
    let residual = (&m * &sol - &rhs).norm();
    if residual > 1e-9 {
        return Err(QprError::OutsideSpan(format!(
            "state lies outside the family's span (residual {residual:.3e})"
        )));
    }
    Ok(())
}

/// Maximal eps with eps*phi + (1-eps)/d * 1 in the convex hull of the
/// family's elements, via a small LP; no disparateness assumption.
pub fn max_epsilon(fam: &BasisFamily, phi: &HermitianOp) -> Result<(f64, Vec<Vec<f64>>)> {
    if phi.dim() != fam.dim() {
        return Err(QprError::DimensionMismatch("state vs family dims".into()));
    }
    check_in_span(fam, phi)?;
    let d = fam.dim();
    let n = fam.len();
    let n_p = n * d;
    let mixed = HermitianOp::identity(d).scale(1.0 / d as f64);
    let drift = phi.sub(&mixed); // eps multiplies vec(phi - 1/d)
    let rows_op = d * d;

    // Columns: p (n_p), eps, slack for eps <= 1.
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(rows_op + 1);
    let drift_vec = vec_iso(&drift);
    let mixed_vec = vec_iso(&mixed);
    let element_vecs: Vec<Vec<f64>> = (0..n)
        .flat_map(|alpha| (0..d).map(move |j| (alpha, j)))
        .map(|(alpha, j)| vec_iso(fam.element(alpha, j)))
        .collect();
    for (r, &dv) in drift_vec.iter().enumerate().take(rows_op) {
        let mut row = Vec::with_capacity(n_p + 2);
        for ev in &element_vecs {
            row.push(ev[r]);
        }
        row.push(-dv);
        row.push(0.0);
        a.push(row);
    }
    let mut b: Vec<f64> = mixed_vec;
    let mut cap = vec![0.0; n_p + 2];
    cap[n_p] = 1.0;
    cap[n_p + 1] = 1.0;
    a.push(cap);
    b.push(1.0);

    let mut c = vec![0.0; n_p + 2];
    c[n_p] = -1.0; // maximize eps
    match simplex::solve_lp(&a, &b, &c)? {
        simplex::LpResult::Optimal { x, .. } => {
            let epsilon = x[n_p];
            let coeffs: Vec<Vec<f64>> = (0..n)
                .map(|alpha| (0..d).map(|j| x[alpha * d + j].max(0.0)).collect())
                .collect();
            Ok((epsilon, coeffs))
        }
        simplex::LpResult::Infeasible { .. } => Err(QprError::Numerical(
            "hull system infeasible although the mixed state is always decomposable".into(),
        )),
        simplex::LpResult::Unbounded => Err(QprError::Numerical(
            "hull objective unbounded despite the eps <= 1 cap".into(),
        )),
    }
}

/// Decomposes a pure state in the span of a disparate family against the
/// hull boundary, maximizing eps; the optimum omits at least one element of
/// every basis.
pub fn hull_decompose(fam: &BasisFamily, phi: &HermitianOp) -> Result<HullDecomposition> {
    if !is_disparate(fam) {
        return Err(QprError::Contract(
            "hull decomposition requires a disparate family".into(),
        ));
    }
    let (epsilon, coeffs) = max_epsilon(fam, phi)?;
    let mut omitted = Vec::with_capacity(fam.len());
    for (alpha, row) in coeffs.iter().enumerate() {
        match row.iter().position(|&p| p <= 1e-9) {
            Some(j) => omitted.push(j),
            None => {
                return Err(QprError::Construction(format!(
                    "no zero coefficient in basis {alpha}; boundary decomposition failed"
                )))
            }
        }
    }
    let dec = HullDecomposition {
        epsilon,
        omitted,
        coeffs,
    };
    let res = dec.residual(fam, phi);
    if res > 1e-9 {
        return Err(QprError::Numerical(format!(
            "hull decomposition residual {res:.3e}"
        )));
    }
    Ok(dec)
}

/// Report for the disparateness requirement on three mutually non-orthogonal
/// non-negative bases.
#[derive(Debug, Clone)]
pub struct TripleDisparatenessReport {
    /// `None` when the precondition holds; otherwise the orthogonal pair.
    pub orthogonal_pair: Option<(usize, usize, usize, usize)>,
    pub disparate: bool,
    /// For d = 2 and a non-disparate family: the certifier must refuse it.
    pub certifier_infeasible: Option<bool>,
}

impl TripleDisparatenessReport {
    pub fn consistent(&self) -> bool {
        self.orthogonal_pair.is_none()
            && (self.disparate || self.certifier_infeasible != Some(false))
    }
}

fn qubit_bases_of(fam: &BasisFamily) -> Result<Vec<QubitBasis>> {
    fam.bases()
        .iter()
        .map(|b| {
            let r = density_to_bloch(&b.elements()[0])?;
            basis_from_bloch(&r)
        })
        .collect()
}

pub fn check_triple_disparateness(fam: &BasisFamily) -> Result<TripleDisparatenessReport> {
    if fam.len() != 3 {
        return Err(QprError::InvalidParameter(
            "the triple-disparateness check takes exactly three bases".into(),
        ));
    }
    let orthogonal_pair = fam.mutually_nonorthogonal()?;
    if orthogonal_pair.is_some() {
        return Ok(TripleDisparatenessReport {
            orthogonal_pair,
            disparate: false,
            certifier_infeasible: None,
        });
    }
    let disparate = is_disparate(fam);
    let certifier_infeasible = if fam.dim() == 2 && !disparate {
        let bases = qubit_bases_of(fam)?;
        let cert = certifier::certify(&bases, ArithMode::Float)?;
        Some(cert.verdict == certifier::Verdict::Infeasible)
    } else {
        None
    };
    Ok(TripleDisparatenessReport {
        orthogonal_pair,
        disparate,
        certifier_infeasible,
    })
}

/// Report for the four-basis relationship: a non-disparate quadruple of
/// non-negative bases satisfies the decomposition at eps = 1/(d+1), with
/// coefficients saturating (1-eps)/d at least once per basis.
#[derive(Debug, Clone)]
pub struct QuadrupleRelationReport {
    pub applicable: bool,
    pub epsilon: f64,
    pub expected_epsilon: f64,
    pub epsilon_matches: bool,
    /// Per basis of the decomposition: does some coefficient equal
    /// (1-eps)/d within tolerance?
    pub saturation_per_basis: Vec<bool>,
}

pub fn check_quadruple_relation(
    fam: &BasisFamily,
    decomposition: &HullDecomposition,
) -> Result<QuadrupleRelationReport> {
    if fam.len() != 4 {
        return Err(QprError::InvalidParameter(
            "the quadruple-relation check takes exactly four bases".into(),
        ));
    }
    let expected = 1.0 / (fam.dim() as f64 + 1.0);
    if is_disparate(fam) {
        return Ok(QuadrupleRelationReport {
            applicable: false,
            epsilon: decomposition.epsilon,
            expected_epsilon: expected,
            epsilon_matches: false,
            saturation_per_basis: Vec::new(),
        });
    }
    let eps = decomposition.epsilon;
    let target = (1.0 - eps) / fam.dim() as f64;
    let saturation_per_basis = decomposition
        .coeffs
        .iter()
        .map(|row| row.iter().any(|&p| (p - target).abs() <= 1e-8))
        .collect();
    Ok(QuadrupleRelationReport {
        applicable: true,
        epsilon: eps,
        expected_epsilon: expected,
        epsilon_matches: (eps - expected).abs() <= 1e-8,
        saturation_per_basis,
    })
}

/// Report for the N-basis bound eps <= (N-3)/(N-3+d); checked against the
/// handed decomposition and against the LP-maximal eps, both labeled.
#[derive(Debug, Clone)]
pub struct FamilyEpsilonReport {
    pub applicable: bool,
    pub n_bases: usize,
    pub bound: f64,
    pub epsilon: f64,
    pub epsilon_within_bound: bool,
    pub lp_max_epsilon: Option<f64>,
    pub lp_max_within_bound: Option<bool>,
}

pub fn check_epsilon_bound(
    fam: &BasisFamily,
    decomposition: &HullDecomposition,
) -> Result<FamilyEpsilonReport> {
    let n = fam.len();
    if n < 4 {
        return Err(QprError::InvalidParameter(
            "the epsilon-bound check takes four or more bases".into(),
        ));
    }
    let d = fam.dim() as f64;
    // At N = 4 the bound reduces to the quadruple value 1/(d+1).
    let bound = (n as f64 - 3.0) / (n as f64 - 3.0 + d);
    if is_disparate(fam) {
        return Ok(FamilyEpsilonReport {
            applicable: false,
            n_bases: n,
            bound,
            epsilon: decomposition.epsilon,
            epsilon_within_bound: false,
            lp_max_epsilon: None,
            lp_max_within_bound: None,
        });
    }
    let sub = BasisFamily::new(fam.bases()[..n - 1].to_vec())?;
    let phi = fam.element(n - 1, 0);
    let lp = max_epsilon(&sub, phi).ok();
    let lp_max_epsilon = lp.as_ref().map(|(e, _)| *e);
    Ok(FamilyEpsilonReport {
        applicable: true,
        n_bases: n,
        bound,
        epsilon: decomposition.epsilon,
        epsilon_within_bound: decomposition.epsilon <= bound + 1e-8,
        lp_max_epsilon,
        lp_max_within_bound: lp_max_epsilon.map(|e| e <= bound + 1e-8),
    })
}

/// The counting bound: at most 2^(d^2) states can be elements of
/// non-negative bases; the refinement drops value patterns with zero or
/// more than d^2 - d + 1 nonzero entries.
#[derive(Debug, Clone)]
pub struct PatternCount {
    pub dim: usize,
    pub bound: u128,
    pub refined: u128,
    /// With a representation: patterns over d^2 independent points whose
    /// Hermitian solve is a valid pure state.
    pub observed: Option<usize>,
}

fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn pattern_bound(dim: usize, rep: Option<&QuasiRep>) -> Result<PatternCount> {
    if !(2..=5).contains(&dim) {
        return Err(QprError::InvalidParameter(
            "pattern bound implemented for 2 <= d <= 5".into(),
        ));
    }
    let d2 = (dim * dim) as u32;
    let bound = 1u128 << d2;
    let max_nonzero = d2 - dim as u32 + 1;
    let excluded: u128 = 1
        + ((max_nonzero + 1)..=d2)
            .map(|k| binomial(d2, k))
            .sum::<u128>();
    let refined = bound - excluded;

    let observed = match rep {
        None => None,
        Some(rep) => {
            if rep.dim() != dim {
                return Err(QprError::DimensionMismatch(
                    "representation dimension differs".into(),
                ));
            }
            Some(count_realizable_patterns(rep)?)
        }
    };
    Ok(PatternCount {
        dim,
        bound,
        refined,
        observed,
    })
}

fn count_realizable_patterns(rep: &QuasiRep) -> Result<usize> {
    let d = rep.dim();
    let d2 = d * d;
    // Greedily pick d^2 linearly independent frame operators.
    let mut chosen: Vec<usize> = Vec::new();
    for idx in 0..rep.space().len() {
        if chosen.len() == d2 {
            break;
        }
        let mut trial: Vec<&HermitianOp> = chosen.iter().map(|&i| rep.f_op(i)).collect();
        trial.push(rep.f_op(idx));
        if rank_of(&trial) == trial.len() {
            chosen.push(idx);
        }
    }
    if chosen.len() < d2 {
        return Err(QprError::Construction(format!(
            "frame has only {} linearly independent operators; {d2} needed",
            chosen.len()
        )));
    }
    let q = rep.q_function();
    let m = DMatrix::<f64>::from_fn(d2, d2, |r, c| vec_iso(rep.f_op(chosen[c]))[r]).transpose();
    let lu = m.lu();
    let mut observed = 0usize;
    for bits in 0..(1usize << d2) {
        let rhs = nalgebra::DVector::<f64>::from_fn(d2, |i, _| {
            if bits >> i & 1 == 1 {
                q.value(chosen[i])
            } else {
                0.0
            }
        });
        let Some(sol) = lu.solve(&rhs) else {
            return Err(QprError::Numerical("frame solve failed".into()));
        };
        let rho = unvec_iso(d, sol.as_slice());
        let trace_ok = (rho.trace() - 1.0).abs() <= 1e-8;
        let purity_ok = (rho.purity() - 1.0).abs() <= 1e-8;
        if trace_ok && purity_ok && rho.is_state(1e-8) {
            observed += 1;
        }
    }
    Ok(observed)
}

/// Three mutually unbiased bases of a three-level system: the standard
/// basis and two Fourier-type bases with quadratic phases.
pub fn mub_triple_d3() -> Result<BasisFamily> {
    let omega = |k: i32| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
    let s = 1.0 / 3f64.sqrt();
    let mut bases = Vec::with_capacity(3);

    let standard: Vec<Vec<Complex64>> = (0..3)
        .map(|j| {
            (0..3)
                .map(|t| {
                    if t == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    bases.push(QuditBasis::from_kets(&standard)?);

    for quad in [1i32, 2i32] {
        let kets: Vec<Vec<Complex64>> = (0..3i32)
            .map(|j| (0..3i32).map(|t| omega(j * t + quad * t * t) * s).collect())
            .collect();
        bases.push(QuditBasis::from_kets(&kets)?);
    }
    BasisFamily::new(bases)
}
