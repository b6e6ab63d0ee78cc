//! Closed-form generators for the qubit families: basis Bloch vectors,
//! q-distributions, the d-vectors solving the support relations, frame
//! construction, and the reduced four-point discrete Wigner representation
//! of the stabilizer model.

use crate::error::{QprError, Result};
use crate::operator_core::{basis_from_bloch, BlochVector, HermitianOp, QubitBasis};
use crate::quasirep::{OnticDistribution, OnticLabel, OnticSpace, QuasiRep, Sign};
use crate::scalar::TOL;

pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Single,
    Pair,
    D3,
    C2,
    Cuboid,
    Stabilizer,
    Icosahedron,
}

impl std::str::FromStr for FamilyKind {
    type Err = QprError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(FamilyKind::Single),
            "pair" => Ok(FamilyKind::Pair),
            "d3" => Ok(FamilyKind::D3),
            "c2" => Ok(FamilyKind::C2),
            "cuboid" => Ok(FamilyKind::Cuboid),
            "stabilizer" => Ok(FamilyKind::Stabilizer),
            "icosahedron" => Ok(FamilyKind::Icosahedron),
            other => Err(QprError::InvalidParameter(format!(
                "unknown family kind `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            FamilyKind::Single => "single",
            FamilyKind::Pair => "pair",
            FamilyKind::D3 => "d3",
            FamilyKind::C2 => "c2",
            FamilyKind::Cuboid => "cuboid",
            FamilyKind::Stabilizer => "stabilizer",
            FamilyKind::Icosahedron => "icosahedron",
        };
        write!(f, "{name}")
    }
}

/// Parameters picking one member of a family. `q0` selects the general
/// (non-symmetric) distribution for d3/c2; `None` means the symmetric choice.
#[derive(Debug, Clone, Copy)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub q0: Option<f64>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> Self {
        Self {
            kind,
            theta: None,
            phi: None,
            q0: None,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = Some(theta);
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = Some(phi);
        self
    }

    pub fn with_q0(mut self, q0: f64) -> Self {
        self.q0 = Some(q0);
        self
    }

    fn theta(&self) -> Result<f64> {
        self.theta
            .ok_or_else(|| QprError::InvalidParameter(format!("{} requires --theta", self.kind)))
    }

    fn phi(&self) -> Result<f64> {
        self.phi
            .ok_or_else(|| QprError::InvalidParameter(format!("{} requires --phi", self.kind)))
    }
}

fn check_open_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value <= lo || value >= hi {
        return Err(QprError::InvalidParameter(format!(
            "{name} = {value} outside the open interval ({lo}, {hi})"
        )));
    }
    Ok(())
}

/// The Bloch vectors of a family member, one per basis.
pub fn family_directions(spec: &FamilySpec) -> Result<Vec<BlochVector>> {
    match spec.kind {
        FamilyKind::Single => Ok(vec![BlochVector::new(0., 0., 1.)]),
        FamilyKind::Pair => {
            let t = spec.theta()?;
            check_open_range("theta", t, 0.0, std::f64::consts::FRAC_PI_2)?;
            Ok(vec![
                BlochVector::new(t.sin(), 0., t.cos()),
                BlochVector::new(-t.sin(), 0., t.cos()),
            ])
        }
        FamilyKind::D3 => {
            let t = spec.theta()?;
            check_open_range("theta", t, 0.0, std::f64::consts::PI)?;
            let (s, c) = (t.sin(), t.cos());
            let h = 3f64.sqrt() / 2.0;
            Ok(vec![
                BlochVector::new(s, 0., c),
                BlochVector::new(-0.5 * s, h * s, c),
                BlochVector::new(-0.5 * s, -h * s, c),
            ])
        }
        FamilyKind::C2 => {
            let t = spec.theta()?;
            let p = spec.phi()?;
            check_open_range("theta", t, 0.0, std::f64::consts::FRAC_PI_2)?;
            check_open_range("phi", p, 0.0, std::f64::consts::PI)?;
            Ok(vec![
                BlochVector::new(t.sin(), 0., t.cos()),
                BlochVector::new(-t.sin(), 0., t.cos()),
                BlochVector::new(p.cos(), p.sin(), 0.),
            ])
        }
        FamilyKind::Cuboid => {
            let t = spec.theta()?;
            let p = spec.phi()?;
            check_open_range("theta", t, 0.0, std::f64::consts::FRAC_PI_2)?;
            check_open_range("phi", p, 0.0, std::f64::consts::FRAC_PI_2)?;
            let (a, b, c) = (p.cos() * t.sin(), p.sin() * t.sin(), t.cos());
            Ok(vec![
                BlochVector::new(a, b, c),
                BlochVector::new(a, b, -c),
                BlochVector::new(a, -b, c),
                BlochVector::new(a, -b, -c),
            ])
        }
        FamilyKind::Stabilizer => Ok(vec![
            BlochVector::new(1., 0., 0.),
            BlochVector::new(0., 1., 0.),
            BlochVector::new(0., 0., 1.),
        ]),
        FamilyKind::Icosahedron => {
            let phi_g = GOLDEN_RATIO;
            let n = 1.0 / (1.0 + phi_g * phi_g).sqrt();
            let mut dirs = Vec::with_capacity(6);
            for alpha in [1.0, -1.0] {
                dirs.push(BlochVector::new(n, alpha * phi_g * n, 0.));
            }
            for alpha in [1.0, -1.0] {
                dirs.push(BlochVector::new(0., n, alpha * phi_g * n));
            }
            for alpha in [1.0, -1.0] {
                dirs.push(BlochVector::new(alpha * phi_g * n, 0., n));
            }
            Ok(dirs)
        }
    }
}

pub fn family_bases(spec: &FamilySpec) -> Result<Vec<QubitBasis>> {
    family_directions(spec)?
        .iter()
        .map(basis_from_bloch)
        .collect()
}

/// Support pattern: for each ontic point, the basis-element sign it is
/// compatible with, per basis.
#[derive(Debug, Clone)]
pub struct SupportPattern {
    labels: Vec<OnticLabel>,
    signs: Vec<Vec<Sign>>,
}

impl SupportPattern {
    pub fn new(labels: Vec<OnticLabel>, signs: Vec<Vec<Sign>>) -> Result<Self> {
        if labels.len() != signs.len() {
            return Err(QprError::DimensionMismatch(
                "one sign vector per ontic point required".into(),
            ));
        }
        Ok(Self { labels, signs })
    }

    /// The fixed support table for three-basis families over the eight points
    /// (eps, a): a = 0 is compatible with the + element of every basis and
    /// a = 1,2,3 with the + element of basis a only; eps negates everything.
    pub fn table_i() -> Self {
        let base = [
            [Sign::Plus, Sign::Plus, Sign::Plus],
            [Sign::Plus, Sign::Minus, Sign::Minus],
            [Sign::Minus, Sign::Plus, Sign::Minus],
            [Sign::Minus, Sign::Minus, Sign::Plus],
        ];
        let mut labels = Vec::with_capacity(8);
        let mut signs = Vec::with_capacity(8);
        for eps in [Sign::Plus, Sign::Minus] {
            for (a, row) in base.iter().enumerate() {
                labels.push(OnticLabel::EpsA { eps, a: a as u8 });
                signs.push(
                    row.iter()
                        .map(|s| if eps == Sign::Plus { *s } else { s.flip() })
                        .collect(),
                );
            }
        }
        Self { labels, signs }
    }

    /// Six-point support pattern for a cuboid quadruple: point (eps, a) with
    /// a = 1,2,3 is compatible with the element of each basis whose Bloch
    /// vector has sign eps in Cartesian component a.
    pub fn cuboid(bases: &[QubitBasis]) -> Result<Self> {
        if bases.len() != 4 {
            return Err(QprError::InvalidBasis(
                "cuboid pattern needs 4 bases".into(),
            ));
        }
        let mut labels = Vec::with_capacity(6);
        let mut signs = Vec::with_capacity(6);
        for eps in [Sign::Plus, Sign::Minus] {
            for a in 0..3usize {
                labels.push(OnticLabel::EpsA {
                    eps,
                    a: (a + 1) as u8,
                });
                let mut row = Vec::with_capacity(4);
                for basis in bases {
                    let comp = basis.direction().0[a];
                    if comp.abs() <= TOL {
                        return Err(QprError::InvalidBasis(format!(
                            "cuboid basis component {a} vanishes; support pattern is ambiguous"
                        )));
                    }
                    let s = Sign::from_i8(if comp > 0.0 { 1 } else { -1 });
                    row.push(if eps == Sign::Plus { s } else { s.flip() });
                }
                signs.push(row);
            }
        }
        Self::new(labels, signs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[OnticLabel] {
        &self.labels
    }

    pub fn signs(&self) -> &[Vec<Sign>] {
        &self.signs
    }

    pub fn space(&self) -> Result<OnticSpace> {
        OnticSpace::new(self.labels.clone())
    }
}

/// The vectors d pairing ontic points with frame operators.
#[derive(Debug, Clone)]
pub struct DVectorSet {
    vectors: Vec<BlochVector>,
}

impl DVectorSet {
    pub fn vectors(&self) -> &[BlochVector] {
        &self.vectors
    }
}

/// Solves d . r(j) = s_j for one ontic point. Returns the vector and the
/// least-squares residual (zero for a square solvable system).
pub(crate) fn solve_dvector_for_signs(
    dirs: &[BlochVector],
    signs: &[Sign],
) -> Result<(BlochVector, f64)> {
    let n = dirs.len();
    let m = nalgebra::DMatrix::<f64>::from_fn(n, 3, |i, j| dirs[i].0[j]);
    let rhs = nalgebra::DVector::<f64>::from_fn(n, |i, _| signs[i].to_f64());
    let svd = m.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-10)
        .map_err(|e| QprError::NoSolution(format!("d-vector solve failed: {e}")))?;
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-9).count();
    if n <= 3 && rank < n {
        return Err(QprError::NoSolution(
            "basis directions are linearly dependent (coplanar); no d-vectors exist".into(),
        ));
    }
    let residual = (&m * &sol - &rhs).norm();
    Ok((BlochVector::new(sol[0], sol[1], sol[2]), residual))
}

/// Solves Eq. d(a) . r(j) = +/-1 for every point of the support pattern.
pub fn solve_dvectors(bases: &[QubitBasis], pattern: &SupportPattern) -> Result<DVectorSet> {
    let dirs: Vec<BlochVector> = bases.iter().map(|b| *b.direction()).collect();
    let mut vectors = Vec::with_capacity(pattern.len());
    for (label, signs) in pattern.labels().iter().zip(pattern.signs()) {
        if signs.len() != dirs.len() {
            return Err(QprError::DimensionMismatch(
                "sign vector length must match the basis count".into(),
            ));
        }
        let (d, residual) = solve_dvector_for_signs(&dirs, signs)?;
        if residual > 1e-7 {
            return Err(QprError::NoSolution(format!(
                "support pattern at {label} admits no d-vector (residual {residual:.3e})"
            )));
        }
        vectors.push(d);
    }
    Ok(DVectorSet { vectors })
}

/// q-distribution for the D3 family over the 8 points (eps, a), ordered
/// (+,0..3) then (-,0..3). `q0 = None` picks the symmetric solution
/// q0 = 1 - (9/8) sin^2(theta), q1 = (3/8) sin^2(theta); otherwise the
/// general one-parameter solution with the printed bounds on q0.
pub fn d3_distribution(theta: f64, q0: Option<f64>) -> Result<OnticDistribution> {
    check_open_range("theta", theta, 0.0, std::f64::consts::PI)?;
    let s2 = theta.sin().powi(2);
    if s2 > 8.0 / 9.0 + 1e-12 {
        return Err(QprError::BoundViolated(format!(
            "non-negativity requires sin^2(theta) <= 8/9; got sin^2(theta) = {s2}"
        )));
    }
    let values = match q0 {
        None => {
            let q0v = 1.0 - 9.0 / 8.0 * s2;
            let q1 = 3.0 / 8.0 * s2;
            vec![q0v, q1, q1, q1, q0v, q1, q1, q1]
        }
        Some(q0v) => {
            let upper = 2.0 - 9.0 / 4.0 * s2;
            if q0v < -1e-12 || q0v > upper + 1e-12 || q0v > 1.0 + 1e-12 {
                return Err(QprError::BoundViolated(format!(
                    "q0 = {q0v} outside [0, min(1, 2 - (9/4) sin^2(theta)) = {}]",
                    upper.min(1.0)
                )));
            }
            let qp = 1.5 * s2 - 1.0 + q0v;
            let qm0 = 2.0 - q0v - 2.25 * s2;
            let qm = 1.0 - q0v - 0.75 * s2;
            vec![q0v, qp, qp, qp, qm0, qm, qm, qm]
        }
    };
    OnticDistribution::new(OnticSpace::eps_a(4), values)
}

/// q-distribution for the C2 family over the 8 points (eps, a). The default
/// q0 = cos^2(theta)/2 is the symmetric choice under which the family's
/// unitary symmetries supervene on ontic permutations.
pub fn c2_distribution(theta: f64, phi: f64, q0: Option<f64>) -> Result<OnticDistribution> {
    check_open_range("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
    check_open_range("phi", phi, 0.0, std::f64::consts::PI)?;
    let (s, c2t) = (theta.sin(), (2.0 * theta).cos());
    let cp = phi.cos();
    if cp.abs() > s + 1e-12 {
        return Err(QprError::BoundViolated(format!(
            "non-negativity requires |cos(phi)| <= sin(theta); got |cos(phi)| = {} > sin(theta) = {s}",
            cp.abs()
        )));
    }
    let q0v = match q0 {
        None => theta.cos().powi(2) / 2.0,
        Some(v) => {
            if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(QprError::BoundViolated(format!("q0 = {v} outside [0, 1]")));
            }
            v
        }
    };
    let values = vec![
        q0v,
        q0v - 0.5 * c2t - 0.5 * cp * s,
        q0v - 0.5 * c2t + 0.5 * cp * s,
        q0v,
        0.5 - q0v + 0.5 * c2t,
        0.5 - q0v - 0.5 * cp * s,
        0.5 - q0v + 0.5 * cp * s,
        0.5 - q0v + 0.5 * c2t,
    ];
    OnticDistribution::new(OnticSpace::eps_a(4), values)
}

/// Normalized q-distribution for the cuboid family over the 6 points
/// (eps, a), a = 1, 2, 3: q_a is the squared Cartesian component a of the
/// (+,+,+) vertex. Each state's three-point support sums to one.
pub fn cuboid_distribution(theta: f64, phi: f64) -> Result<OnticDistribution> {
    check_open_range("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
    check_open_range("phi", phi, 0.0, std::f64::consts::FRAC_PI_2)?;
    let q1 = (phi.cos() * theta.sin()).powi(2);
    let q2 = (phi.sin() * theta.sin()).powi(2);
    let q3 = theta.cos().powi(2);
    let labels = (1..=3u8)
        .map(|a| OnticLabel::EpsA { eps: Sign::Plus, a })
        .chain((1..=3u8).map(|a| OnticLabel::EpsA {
            eps: Sign::Minus,
            a,
        }))
        .collect();
    OnticDistribution::new(OnticSpace::new(labels)?, vec![q1, q2, q3, q1, q2, q3])
}

/// The cuboid q-values as printed in the source construction. They sum to 2
/// over each state's three-point support, i.e. they are exactly twice the
/// normalized distribution stored by `cuboid_distribution`; kept for
/// reference and flagged accordingly.
pub const CUBOID_PRINTED_SCALE: f64 = 2.0;

pub fn cuboid_printed_q(theta: f64, phi: f64) -> [f64; 3] {
    let (s2, c2) = (theta.sin().powi(2), theta.cos().powi(2));
    [
        1.0 + s2 * (2.0 * phi).cos() - c2,
        1.0 - s2 * (2.0 * phi).cos() - c2,
        1.0 + (2.0 * theta).cos(),
    ]
}

/// Builds the quasiprobability representation F(p) = q(p)/2 (1 + d(p).sigma),
/// G(p) = (1 + d(p).sigma)/2 from a family's bases, distribution and support
/// pattern, and validates it end to end.
pub fn build_frame(
    bases: &[QubitBasis],
    dist: &OnticDistribution,
    pattern: &SupportPattern,
) -> Result<QuasiRep> {
    if dist.space().len() != pattern.len() {
        return Err(QprError::DimensionMismatch(
            "distribution and support pattern sizes differ".into(),
        ));
    }
    if !dist.is_nonnegative(TOL) {
        return Err(QprError::Construction(
            "distribution is negative on the support pattern".into(),
        ));
    }
    let dvecs = solve_dvectors(bases, pattern)?;
    let identity = HermitianOp::identity(2);
    let paulis = [
        HermitianOp::pauli_x(),
        HermitianOp::pauli_y(),
        HermitianOp::pauli_z(),
    ];
    let mut f_ops = Vec::with_capacity(pattern.len());
    let mut g_ops = Vec::with_capacity(pattern.len());
    for (i, d) in dvecs.vectors().iter().enumerate() {
        let mut dsigma = HermitianOp::zero(2);
        for (k, p) in paulis.iter().enumerate() {
            dsigma = dsigma.add(&p.scale(d.0[k]));
        }
        let g = identity.add(&dsigma).scale(0.5);
        f_ops.push(g.scale(dist.value(i)));
        g_ops.push(g);
    }
    let rep = QuasiRep::new(pattern.space()?, f_ops, g_ops)?;

    let (ok, dev) = rep.check_dual_frame(1e-8);
    if !ok {
        return Err(QprError::Construction(format!(
            "dual-frame reconstruction fails with max deviation {dev:.3e}"
        )));
    }
    for (j, basis) in bases.iter().enumerate() {
        if !rep.is_nonnegative_elements(basis.elements(), TOL)? {
            return Err(QprError::Construction(format!(
                "input basis {j} is not non-negative in the built frame"
            )));
        }
    }
    let qudits: Vec<_> = bases.iter().map(QubitBasis::to_qudit).collect();
    let report = crate::quasirep::structure_report(&rep, &qudits, 1e-8);
    if !report.all_passed() {
        return Err(QprError::Construction(format!(
            "structure checks failed: {:?}",
            report.details
        )));
    }
    Ok(rep)
}

/// Builds the family member's full representation.
///
/// `single` and `pair` return subtheory representations (their frames span
/// only the subtheory's operators, so `check_dual_frame` does not apply);
/// `icosahedron` has no non-negative representation at all.
pub fn family_rep(spec: &FamilySpec) -> Result<QuasiRep> {
    match spec.kind {
        FamilyKind::D3 => {
            let bases = family_bases(spec)?;
            let dist = d3_distribution(spec.theta()?, spec.q0)?;
            build_frame(&bases, &dist, &SupportPattern::table_i())
        }
        FamilyKind::C2 => {
            let bases = family_bases(spec)?;
            let dist = c2_distribution(spec.theta()?, spec.phi()?, spec.q0)?;
            build_frame(&bases, &dist, &SupportPattern::table_i())
        }
        FamilyKind::Stabilizer => {
            let bases = family_bases(spec)?;
            let dist = OnticDistribution::new(OnticSpace::eps_a(4), vec![0.25; 8])?;
            build_frame(&bases, &dist, &SupportPattern::table_i())
        }
        FamilyKind::Cuboid => {
            let bases = family_bases(spec)?;
            let dist = cuboid_distribution(spec.theta()?, spec.phi()?)?;
            build_frame(&bases, &dist, &SupportPattern::cuboid(&bases)?)
        }
        FamilyKind::Single => single_rep(),
        FamilyKind::Pair => pair_rep(spec.theta()?),
        FamilyKind::Icosahedron => Err(QprError::NoSolution(
            "the icosahedral bases admit no non-negative representation; only bases exist".into(),
        )),
    }
}

/// Classical bit: two ontic points carrying the z basis.
fn single_rep() -> Result<QuasiRep> {
    let z = basis_from_bloch(&BlochVector::new(0., 0., 1.))?;
    let space = OnticSpace::new(vec![
        OnticLabel::EpsA {
            eps: Sign::Plus,
            a: 0,
        },
        OnticLabel::EpsA {
            eps: Sign::Minus,
            a: 0,
        },
    ])?;
    let ops = vec![z.element(1).clone(), z.element(-1).clone()];
    QuasiRep::new(space, ops.clone(), ops)
}

/// Two-basis subtheory representation over the four sign patterns.
fn pair_rep(theta: f64) -> Result<QuasiRep> {
    let spec = FamilySpec::new(FamilyKind::Pair).with_theta(theta);
    let bases = family_bases(&spec)?;
    let dirs: Vec<BlochVector> = bases.iter().map(|b| *b.direction()).collect();
    let c = dirs[0].dot(&dirs[1]);
    let space = OnticSpace::patterns(2);
    let identity = HermitianOp::identity(2);
    let paulis = [
        HermitianOp::pauli_x(),
        HermitianOp::pauli_y(),
        HermitianOp::pauli_z(),
    ];
    let mut f_ops = Vec::new();
    let mut g_ops = Vec::new();
    for label in space.points() {
        let signs = match label {
            OnticLabel::Pattern(s) => s.clone(),
            _ => unreachable!(),
        };
        let q = if signs[0] == signs[1] {
            (1.0 + c) / 2.0
        } else {
            (1.0 - c) / 2.0
        };
        // In-plane d: d = alpha r1 + beta r2 with Gram system.
        let det = 1.0 - c * c;
        let (s1, s2) = (signs[0].to_f64(), signs[1].to_f64());
        let alpha = (s1 - c * s2) / det;
        let beta = (s2 - c * s1) / det;
        let d = dirs[0].scaled(alpha).add(&dirs[1].scaled(beta));
        let mut dsigma = HermitianOp::zero(2);
        for (k, p) in paulis.iter().enumerate() {
            dsigma = dsigma.add(&p.scale(d.0[k]));
        }
        let g = identity.add(&dsigma).scale(0.5);
        f_ops.push(g.scale(q));
        g_ops.push(g);
    }
    QuasiRep::new(space, f_ops, g_ops)
}

/// The canonical eight-point stabilizer representation (x, y, z bases with
/// the uniform q = 1/4 distribution).
pub fn stabilizer_rep() -> QuasiRep {
    family_rep(&FamilySpec::new(FamilyKind::Stabilizer)).expect("stabilizer frame always builds")
}

/// Restricts an eight-point stabilizer representation to the reduced phase
/// space {(+,a)} and renormalizes, recovering a standard discrete Wigner
/// function: F'(a) = 2 F(+,a), G'(a) = 4 F(+,a).
pub fn reduced_wigner(rep: &QuasiRep) -> Result<QuasiRep> {
    if rep.dim() != 2 || rep.space().len() != 8 {
        return Err(QprError::Contract(
            "reduced Wigner needs an 8-point qubit representation".into(),
        ));
    }
    let expected = OnticSpace::eps_a(4);
    if rep.space() != &expected {
        return Err(QprError::Contract(
            "reduced Wigner needs the (eps, a) stabilizer ontic space".into(),
        ));
    }
    let q = rep.q_function();
    if q.values().iter().any(|&v| (v - 0.25).abs() > TOL) {
        return Err(QprError::Contract(
            "reduced Wigner needs the uniform q = 1/4 stabilizer distribution".into(),
        ));
    }
    let mut labels = Vec::with_capacity(4);
    let mut f_ops = Vec::with_capacity(4);
    let mut g_ops = Vec::with_capacity(4);
    for a in 0..4u8 {
        let idx = rep
            .space()
            .index_of(&OnticLabel::EpsA { eps: Sign::Plus, a })?;
        labels.push(OnticLabel::EpsA { eps: Sign::Plus, a });
        f_ops.push(rep.f_op(idx).scale(2.0));
        g_ops.push(rep.f_op(idx).scale(4.0));
    }
    QuasiRep::new(OnticSpace::new(labels)?, f_ops, g_ops)
}
