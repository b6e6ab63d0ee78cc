//! Quasiprobability representations over finite ontic spaces: dual operator
//! frames {F(lambda)}, {G(lambda)}, state distributions mu, indicator
//! functions xi, supports, the unique q weight, and the structural checks
//! that any collection of non-negative bases must satisfy.

use crate::error::{QprError, Result};
use crate::operator_core::{HermitianOp, QuditBasis};
use crate::scalar::TOL;

/// Binary sign used both for basis elements (gamma) and ontic labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_i8(v: i8) -> Sign {
        if v >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// A point of a finite ontic space. Qubit families use (epsilon, a) with
/// a in Z_4 (or Z_3 for the six-point representation); the certifier uses
/// full sign patterns over the input bases.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OnticLabel {
    EpsA { eps: Sign, a: u8 },
    Pattern(Vec<Sign>),
}

impl std::fmt::Display for OnticLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OnticLabel::EpsA { eps, a } => write!(f, "{eps}{a}"),
            OnticLabel::Pattern(signs) => {
                for s in signs {
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnticSpace {
    points: Vec<OnticLabel>,
}

impl OnticSpace {
    pub fn new(points: Vec<OnticLabel>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[i + 1..].contains(p) {
                return Err(QprError::Construction(format!("duplicate ontic label {p}")));
            }
        }
        Ok(Self { points })
    }

    /// The 2n points (+,0)..(+,n-1),(-,0)..(-,n-1).
    pub fn eps_a(n_a: u8) -> Self {
        let mut points = Vec::with_capacity(2 * n_a as usize);
        for eps in [Sign::Plus, Sign::Minus] {
            for a in 0..n_a {
                points.push(OnticLabel::EpsA { eps, a });
            }
        }
        Self { points }
    }

    /// All 2^n sign vectors, lexicographic with + before -.
    pub fn patterns(n_bases: usize) -> Self {
        let count = 1usize << n_bases;
        let mut points = Vec::with_capacity(count);
        for idx in 0..count {
            points.push(OnticLabel::Pattern(pattern_signs(idx, n_bases)));
        }
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[OnticLabel] {
        &self.points
    }

    pub fn index_of(&self, label: &OnticLabel) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| QprError::UnknownLabel(format!("{label}")))
    }
}

/// Signs of pattern index `idx` over `n` bases; bit k (from the most
/// significant basis 0) set means Minus.
pub fn pattern_signs(idx: usize, n: usize) -> Vec<Sign> {
    (0..n)
        .map(|j| {
            if idx >> (n - 1 - j) & 1 == 0 {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect()
}

pub fn pattern_index(signs: &[Sign]) -> usize {
    signs
        .iter()
        .fold(0usize, |acc, s| (acc << 1) | usize::from(*s == Sign::Minus))
}

/// Real-valued function on a finite ontic space; values may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct OnticDistribution {
    space: OnticSpace,
    values: Vec<f64>,
}

impl OnticDistribution {
    pub fn new(space: OnticSpace, values: Vec<f64>) -> Result<Self> {
        if space.len() != values.len() {
            return Err(QprError::DimensionMismatch(format!(
                "{} values for {} points",
                values.len(),
                space.len()
            )));
        }
        Ok(Self { space, values })
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.values.iter().all(|&v| v >= -tol)
    }

    pub fn max_abs_diff(&self, other: &OnticDistribution) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Subset of the points of a parent ontic space, kept as sorted indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    pub fn from_indices(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    pub fn intersects(&self, other: &SupportSet) -> bool {
        self.indices.iter().any(|i| other.contains(*i))
    }

    pub fn is_disjoint(&self, other: &SupportSet) -> bool {
        !self.intersects(other)
    }

    pub fn labels<'a>(&self, space: &'a OnticSpace) -> Vec<&'a OnticLabel> {
        self.indices.iter().map(|&i| &space.points()[i]).collect()
    }
}

/// Paired frame families {F(lambda)}, {G(lambda)} over a finite ontic space.
///
/// Construction enforces sum_lambda F(lambda) = 1 (so state distributions
/// normalize) and Tr G(lambda) = 1 (so indicator functions of any POVM sum
/// to one at every point). The dual-frame reconstruction property is checked
/// on demand by `check_dual_frame`.
#[derive(Debug, Clone)]
pub struct QuasiRep {
    space: OnticSpace,
    f_ops: Vec<HermitianOp>,
    g_ops: Vec<HermitianOp>,
    dim: usize,
}

impl QuasiRep {
    pub fn new(
        space: OnticSpace,
        f_ops: Vec<HermitianOp>,
        g_ops: Vec<HermitianOp>,
    ) -> Result<Self> {
        if f_ops.len() != space.len() || g_ops.len() != space.len() {
            return Err(QprError::DimensionMismatch(
                "frame families must match the ontic space size".into(),
            ));
        }
        let dim = f_ops
            .first()
            .map(HermitianOp::dim)
            .ok_or_else(|| QprError::Construction("empty frame".into()))?;
        if f_ops.iter().chain(g_ops.iter()).any(|op| op.dim() != dim) {
            return Err(QprError::DimensionMismatch("mixed operator dims".into()));
        }
        let mut f_sum = HermitianOp::zero(dim);
        for f in &f_ops {
            f_sum = f_sum.add(f);
        }
        let dev = f_sum.max_abs_entry_diff(&HermitianOp::identity(dim));
        if dev > 1e-8 {
            return Err(QprError::Construction(format!(
                "frame operators do not resolve the identity: deviation {dev:.3e}"
            )));
        }
        for (i, g) in g_ops.iter().enumerate() {
            if (g.trace() - 1.0).abs() > 1e-8 {
                return Err(QprError::Construction(format!(
                    "G({}) must have unit trace, got {}",
                    space.points()[i],
                    g.trace()
                )));
            }
        }
        Ok(Self {
            space,
            f_ops,
            g_ops,
            dim,
        })
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f_op(&self, idx: usize) -> &HermitianOp {
        &self.f_ops[idx]
    }

    pub fn g_op(&self, idx: usize) -> &HermitianOp {
        &self.g_ops[idx]
    }

    pub fn f_ops(&self) -> &[HermitianOp] {
        &self.f_ops
    }

    pub fn g_ops(&self) -> &[HermitianOp] {
        &self.g_ops
    }

    /// mu_rho(lambda) = Tr[rho F(lambda)].
    pub fn mu(&self, rho: &HermitianOp, label: &OnticLabel) -> Result<f64> {
        let idx = self.space.index_of(label)?;
        self.mu_at(rho, idx)
    }

    pub fn mu_at(&self, rho: &HermitianOp, idx: usize) -> Result<f64> {
        if idx >= self.space.len() {
            return Err(QprError::UnknownLabel(format!("point index {idx}")));
        }
        rho.inner(&self.f_ops[idx])
    }

    /// The full distribution of a state over the space.
    pub fn mu_dist(&self, rho: &HermitianOp) -> Result<OnticDistribution> {
        let values = self
            .f_ops
            .iter()
            .map(|f| rho.inner(f))
            .collect::<Result<Vec<_>>>()?;
        OnticDistribution::new(self.space.clone(), values)
    }

    /// xi_E(lambda) = Tr[E G(lambda)].
    pub fn xi(&self, effect: &HermitianOp, label: &OnticLabel) -> Result<f64> {
        let idx = self.space.index_of(label)?;
        self.xi_at(effect, idx)
    }

    pub fn xi_at(&self, effect: &HermitianOp, idx: usize) -> Result<f64> {
        if idx >= self.space.len() {
            return Err(QprError::UnknownLabel(format!("point index {idx}")));
        }
        effect.inner(&self.g_ops[idx])
    }

    /// |Tr(rho E) - sum_lambda mu_rho(lambda) xi_E(lambda)|; zero for a valid
    /// representation.
    pub fn born_residual(&self, rho: &HermitianOp, effect: &HermitianOp) -> Result<f64> {
        let born = rho.inner(effect)?;
        let mut ontic = 0.0;
        for idx in 0..self.space.len() {
            ontic += self.mu_at(rho, idx)? * self.xi_at(effect, idx)?;
        }
        Ok((born - ontic).abs())
    }

    /// Checks A = sum_lambda Tr[A F(lambda)] G(lambda) on a complete operator
    /// basis; returns the verdict together with the largest deviation found.
    pub fn check_dual_frame(&self, tol: f64) -> (bool, f64) {
        let mut max_dev = 0.0f64;
        for a in operator_basis(self.dim) {
            let mut rebuilt = HermitianOp::zero(self.dim);
            for idx in 0..self.space.len() {
                let coeff = a.inner(&self.f_ops[idx]).expect("same dims");
                rebuilt = rebuilt.add(&self.g_ops[idx].scale(coeff));
            }
            max_dev = max_dev.max(rebuilt.max_abs_entry_diff(&a));
        }
        (max_dev <= tol, max_dev)
    }

    /// Points where |mu_rho| exceeds `tol`.
    pub fn support(&self, rho: &HermitianOp, tol: f64) -> Result<SupportSet> {
        let dist = self.mu_dist(rho)?;
        Ok(SupportSet::from_indices(
            dist.values()
                .iter()
                .enumerate()
                .filter(|(_, v)| v.abs() > tol)
                .map(|(i, _)| i)
                .collect(),
        ))
    }

    /// q(lambda) = d * mu_{1/d}(lambda): the unique weight every non-negative
    /// state assigns on its support.
    pub fn q_function(&self) -> OnticDistribution {
        let mixed = HermitianOp::identity(self.dim).scale(1.0 / self.dim as f64);
        let values = self
            .f_ops
            .iter()
            .map(|f| mixed.inner(f).expect("same dims") * self.dim as f64)
            .collect();
        OnticDistribution::new(self.space.clone(), values).expect("matching sizes")
    }

    /// True iff every element of the basis has mu >= 0 and xi in [0,1],
    /// within `tol`.
    pub fn is_nonnegative_elements(&self, elements: &[HermitianOp], tol: f64) -> Result<bool> {
        for e in elements {
            if e.dim() != self.dim {
                return Err(QprError::DimensionMismatch(
                    "basis dimension does not match the representation".into(),
                ));
            }
            for idx in 0..self.space.len() {
                let m = self.mu_at(e, idx)?;
                if m < -tol {
                    return Ok(false);
                }
                let x = self.xi_at(e, idx)?;
                if !(-tol..=1.0 + tol).contains(&x) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_nonnegative_basis(&self, basis: &QuditBasis, tol: f64) -> Result<bool> {
        self.is_nonnegative_elements(basis.elements(), tol)
    }

    /// The state -> distribution map is injective iff the F family spans the
    /// operator space; decided by a rank check at the given singular-value
    /// cutoff.
    pub fn state_map_injective(&self, sv_cutoff: f64) -> bool {
        let rows = 2 * self.dim * self.dim;
        let cols = self.space.len();
        let mut m = nalgebra::DMatrix::<f64>::zeros(rows, cols);
        for (j, f) in self.f_ops.iter().enumerate() {
            for (r, v) in vectorize_real(f).into_iter().enumerate() {
                m[(r, j)] = v;
            }
        }
        let svd = m.svd(false, false);
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > sv_cutoff)
            .count();
        rank >= self.dim * self.dim
    }
}

/// A complete basis of Hermitian operators in dimension d (d^2 of them).
pub fn operator_basis(dim: usize) -> Vec<HermitianOp> {
    use num_complex::Complex64;
    let mut out = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        let mut m = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        out.push(HermitianOp::from_matrix(m).expect("diagonal unit"));
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut sym = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
            sym[(i, j)] = Complex64::new(1.0, 0.0);
            sym[(j, i)] = Complex64::new(1.0, 0.0);
            out.push(HermitianOp::from_matrix(sym).expect("symmetric unit"));
            let mut asym = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
            asym[(i, j)] = Complex64::new(0.0, -1.0);
            asym[(j, i)] = Complex64::new(0.0, 1.0);
            out.push(HermitianOp::from_matrix(asym).expect("antisymmetric unit"));
        }
    }
    out
}

/// Real coordinates of a Hermitian operator (re and im of every entry);
/// faithful for rank questions.
pub fn vectorize_real(op: &HermitianOp) -> Vec<f64> {
    let d = op.dim();
    let mut out = Vec::with_capacity(2 * d * d);
    for i in 0..d {
        for j in 0..d {
            out.push(op.matrix()[(i, j)].re);
            out.push(op.matrix()[(i, j)].im);
        }
    }
    out
}

/// Outcome of the structural checks (support disjointness, deterministic
/// indicators, two-valued distributions, support intersection vs overlap)
/// for a set of bases in a representation.
#[derive(Debug, Clone)]
pub struct StructureReport {
    /// Bases that fail the non-negativity precondition (indices).
    pub precondition_failures: Vec<usize>,
    pub within_basis_disjoint: bool,
    pub deterministic_indicator_dev: f64,
    pub two_valued_dev: f64,
    pub cross_support_consistent: bool,
    pub tol: f64,
    pub details: Vec<String>,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.precondition_failures.is_empty()
            && self.within_basis_disjoint
            && self.deterministic_indicator_dev <= self.tol
            && self.two_valued_dev <= self.tol
            && self.cross_support_consistent
    }
}

/// Runs the structural checks for `bases` in `rep`:
/// (i) within-basis supports are disjoint, (ii) xi_{rho(j)}(lambda) =
/// delta_{j,k} on supp(rho(k)), (iii) mu values lie in {0, q(lambda)},
/// (iv) cross-basis supports intersect iff the states are non-orthogonal.
/// Failures are reported, not thrown.
pub fn structure_report(rep: &QuasiRep, bases: &[QuditBasis], tol: f64) -> StructureReport {
    let mut report = StructureReport {
        precondition_failures: Vec::new(),
        within_basis_disjoint: true,
        deterministic_indicator_dev: 0.0,
        two_valued_dev: 0.0,
        cross_support_consistent: true,
        tol,
        details: Vec::new(),
    };

    for (b, basis) in bases.iter().enumerate() {
        match rep.is_nonnegative_basis(basis, tol) {
            Ok(true) => {}
            Ok(false) => {
                report.precondition_failures.push(b);
                report.details.push(format!(
                    "basis {b} is not non-negative in this representation"
                ));
            }
            Err(e) => {
                report.precondition_failures.push(b);
                report.details.push(format!("basis {b}: {e}"));
            }
        }
    }
    if !report.precondition_failures.is_empty() {
        return report;
    }

    let q = rep.q_function();
    let support_tol = tol.max(TOL);

    let supports: Vec<Vec<SupportSet>> = bases
        .iter()
        .map(|basis| {
            basis
                .elements()
                .iter()
                .map(|e| rep.support(e, support_tol).expect("dims validated"))
                .collect()
        })
        .collect();

    // (i) within-basis disjointness.
    for (b, sups) in supports.iter().enumerate() {
        for j in 0..sups.len() {
            for k in (j + 1)..sups.len() {
                if sups[j].intersects(&sups[k]) {
                    report.within_basis_disjoint = false;
                    report.details.push(format!(
                        "basis {b}: supports of elements {j} and {k} intersect"
                    ));
                }
            }
        }
    }

    // (ii) deterministic indicators on supports.
    for (b, basis) in bases.iter().enumerate() {
        for (k, sup) in supports[b].iter().enumerate() {
            for &idx in sup.indices() {
                for (j, e) in basis.elements().iter().enumerate() {
                    let expected = if j == k { 1.0 } else { 0.0 };
                    let xi = rep.xi_at(e, idx).expect("validated");
                    report.deterministic_indicator_dev = report
                        .deterministic_indicator_dev
                        .max((xi - expected).abs());
                }
            }
        }
    }

    // (iii) mu in {0, q(lambda)} everywhere.
    for basis in bases {
        for e in basis.elements() {
            for idx in 0..rep.space().len() {
                let m = rep.mu_at(e, idx).expect("validated");
                let dev = m.abs().min((m - q.value(idx)).abs());
                report.two_valued_dev = report.two_valued_dev.max(dev);
            }
        }
    }

    // (iv) cross-basis support intersection iff non-orthogonal.
    for b1 in 0..bases.len() {
        for b2 in (b1 + 1)..bases.len() {
            for (j, e1) in bases[b1].elements().iter().enumerate() {
                for (k, e2) in bases[b2].elements().iter().enumerate() {
                    let ov = e1.inner(e2).expect("validated");
                    let intersect = supports[b1][j].intersects(&supports[b2][k]);
                    if (ov.abs() > support_tol) != intersect {
                        report.cross_support_consistent = false;
                        report.details.push(format!(
                            "bases {b1}:{j} and {b2}:{k}: overlap {ov:.3e} but supports {}",
                            if intersect {
                                "intersect"
                            } else {
                                "are disjoint"
                            }
                        ));
                    }
                }
            }
        }
    }

    report
}
