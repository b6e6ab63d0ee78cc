//! Finite-dimensional Hermitian operator algebra, the Bloch-sphere map for
//! qubits, and orthonormal-basis validation.
//!
//! Every value is immutable after construction and every operation is a pure
//! function, so concurrent use is unrestricted.

use crate::error::{QprError, Result};
use crate::scalar::TOL;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A d-dimensional Hermitian operator. Holds states, effects and frame
/// operators alike.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    mat: CMatrix,
}

impl HermitianOp {
    /// Validates hermiticity of `mat` within tolerance.
    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(QprError::DimensionMismatch(format!(
                "operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let d = mat.nrows();
        for i in 0..d {
            for j in 0..d {
                let dev = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if dev > TOL {
                    return Err(QprError::InvalidState(format!(
                        "matrix is not Hermitian: deviation {dev:.3e} at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            mat: CMatrix::zeros(dim, dim),
        }
    }

    pub fn pauli_x() -> Self {
        Self {
            mat: CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        }
    }

    pub fn pauli_y() -> Self {
        Self {
            mat: CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        }
    }

    pub fn pauli_z() -> Self {
        Self {
            mat: CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        }
    }

    /// Rank-1 projector |v><v| onto a (normalized) ket.
    pub fn from_ket(v: &[Complex64]) -> Result<Self> {
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(QprError::InvalidState(format!(
                "ket is not normalized: |v| = {norm}"
            )));
        }
        let d = v.len();
        let mat = CMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj() / (norm * norm));
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        let t: Complex64 = self.mat.diagonal().iter().sum();
        t.re
    }

    /// Frobenius pairing Tr[AB]; real for a pair of Hermitian operators.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(QprError::DimensionMismatch(format!(
                "inner product between dim {} and dim {}",
                self.dim(),
                other.dim()
            )));
        }
        let mut acc = Complex64::default();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.mat[(i, j)] * other.mat[(j, i)];
            }
        }
        Ok(acc.re)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat - &other.mat,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            mat: &self.mat * c(factor, 0.0),
        }
    }

    /// Real eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.mat.clone());
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    pub fn purity(&self) -> f64 {
        self.inner(self).expect("same dims")
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.eigenvalues()
            .iter()
            .all(|&e| e.abs() <= tol || (e - 1.0).abs() <= tol)
    }

    /// Valid POVM element: 0 <= E <= 1 as an operator.
    pub fn is_effect(&self, tol: f64) -> bool {
        self.eigenvalues()
            .iter()
            .all(|&e| e >= -tol && e <= 1.0 + tol)
    }

    /// Valid density operator: unit trace, positive semidefinite.
    pub fn is_state(&self, tol: f64) -> bool {
        (self.trace() - 1.0).abs() <= tol && self.eigenvalues().iter().all(|&e| e >= -tol)
    }

    pub fn conjugated_by(&self, u: &Unitary) -> Result<Self> {
        if self.dim() != u.dim() {
            return Err(QprError::DimensionMismatch(
                "conjugation dimension mismatch".into(),
            ));
        }
        let m = &u.mat * &self.mat * u.mat.adjoint();
        Ok(Self { mat: m })
    }

    /// Trace distance (1/2)||A - B||_1.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(QprError::DimensionMismatch("trace distance".into()));
        }
        let diff = self.sub(other);
        Ok(diff.eigenvalues().iter().map(|e| e.abs()).sum::<f64>() / 2.0)
    }

    pub fn max_abs_entry_diff(&self, other: &Self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                max = max.max((self.mat[(i, j)] - other.mat[(i, j)]).norm());
            }
        }
        max
    }
}

/// Real 3-vector on (or inside) the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z])
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn neg(&self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn add(&self, other: &Self) -> Self {
        Self([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Self([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= TOL {
            return Err(QprError::InvalidParameter("zero vector".into()));
        }
        Ok(self.scaled(1.0 / n))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).norm() <= tol
    }

    /// Rotation by `angle` about a unit `axis` (Rodrigues).
    pub fn rotated(&self, axis: &BlochVector, angle: f64) -> Self {
        let k = axis;
        let cos = angle.cos();
        let sin = angle.sin();
        let kxv = k.cross(self);
        let kdv = k.dot(self);
        self.scaled(cos)
            .add(&kxv.scaled(sin))
            .add(&k.scaled(kdv * (1.0 - cos)))
    }
}

/// rho = (1 + r.sigma)/2 for |r| <= 1.
pub fn bloch_to_density(r: &BlochVector) -> Result<HermitianOp> {
    let n = r.norm();
    if n > 1.0 + TOL {
        return Err(QprError::InvalidState(format!(
            "Bloch vector has norm {n} > 1"
        )));
    }
    let [x, y, z] = r.0;
    let mat = CMatrix::from_row_slice(
        2,
        2,
        &[
            c((1.0 + z) / 2.0, 0.0),
            c(x / 2.0, -y / 2.0),
            c(x / 2.0, y / 2.0),
            c((1.0 - z) / 2.0, 0.0),
        ],
    );
    Ok(HermitianOp { mat })
}

/// r_k = Tr(rho sigma_k); inverse of `bloch_to_density` on qubits.
pub fn density_to_bloch(rho: &HermitianOp) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(QprError::DimensionMismatch(format!(
            "Bloch map needs dim 2, got {}",
            rho.dim()
        )));
    }
    let x = rho.inner(&HermitianOp::pauli_x())?;
    let y = rho.inner(&HermitianOp::pauli_y())?;
    let z = rho.inner(&HermitianOp::pauli_z())?;
    Ok(BlochVector::new(x, y, z))
}

/// Tr(rho omega); for qubits equals (1 + r.s)/2.
pub fn overlap(rho: &HermitianOp, omega: &HermitianOp) -> Result<f64> {
    rho.inner(omega)
}

/// A qubit basis represented by a single unit Bloch vector; elements are the
/// antipodal pair of projectors, gamma = + first.
#[derive(Debug, Clone)]
pub struct QubitBasis {
    direction: BlochVector,
    elements: [HermitianOp; 2],
}

impl QubitBasis {
    pub fn direction(&self) -> &BlochVector {
        &self.direction
    }

    /// gamma = +1 or -1.
    pub fn element(&self, gamma: i8) -> &HermitianOp {
        match gamma {
            1 => &self.elements[0],
            -1 => &self.elements[1],
            _ => panic!("gamma must be +1 or -1"),
        }
    }

    pub fn elements(&self) -> &[HermitianOp; 2] {
        &self.elements
    }

    pub fn to_qudit(&self) -> QuditBasis {
        QuditBasis {
            dim: 2,
            elements: self.elements.to_vec(),
        }
    }
}

/// Extends a pure state at `r` to the unique orthonormal qubit basis.
pub fn basis_from_bloch(r: &BlochVector) -> Result<QubitBasis> {
    if (r.norm() - 1.0).abs() > 1e-7 {
        return Err(QprError::InvalidBasis(format!(
            "basis direction must be a unit vector, |r| = {}",
            r.norm()
        )));
    }
    let r = r.normalized()?;
    Ok(QubitBasis {
        direction: r,
        elements: [bloch_to_density(&r)?, bloch_to_density(&r.neg())?],
    })
}

/// An orthonormal basis of rank-1 projectors in dimension d.
#[derive(Debug, Clone)]
pub struct QuditBasis {
    dim: usize,
    elements: Vec<HermitianOp>,
}

impl QuditBasis {
    pub fn new(elements: Vec<HermitianOp>) -> Result<Self> {
        if elements.is_empty() {
            return Err(QprError::InvalidBasis("empty basis".into()));
        }
        let d = elements[0].dim();
        if elements.len() != d {
            return Err(QprError::InvalidBasis(format!(
                "dim-{d} basis needs {d} elements, got {}",
                elements.len()
            )));
        }
        let mut sum = HermitianOp::zero(d);
        for (j, e) in elements.iter().enumerate() {
            if e.dim() != d {
                return Err(QprError::DimensionMismatch("mixed element dims".into()));
            }
            if !e.is_projector(1e-7) {
                return Err(QprError::InvalidBasis(format!(
                    "element {j} is not a projector"
                )));
            }
            for (k, f) in elements.iter().enumerate() {
                let ov = e.inner(f)?;
                let expected = if j == k { 1.0 } else { 0.0 };
                if (ov - expected).abs() > 1e-7 {
                    return Err(QprError::InvalidBasis(format!(
                        "elements {j},{k} not trace-orthonormal: Tr = {ov}"
                    )));
                }
            }
            sum = sum.add(e);
        }
        if sum.max_abs_entry_diff(&HermitianOp::identity(d)) > 1e-7 {
            return Err(QprError::InvalidBasis(
                "elements do not sum to the identity".into(),
            ));
        }
        Ok(Self { dim: d, elements })
    }

    pub fn from_kets(kets: &[Vec<Complex64>]) -> Result<Self> {
        let elements = kets
            .iter()
            .map(|k| HermitianOp::from_ket(k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[HermitianOp] {
        &self.elements
    }
}

/// A unitary matrix; equality is projective (global phases discarded).
#[derive(Debug, Clone)]
pub struct Unitary {
    mat: CMatrix,
}

impl Unitary {
    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(QprError::DimensionMismatch("unitary must be square".into()));
        }
        let d = mat.nrows();
        let prod = mat.adjoint() * &mat;
        let id = CMatrix::identity(d, d);
        let dev: f64 = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| (prod[(i, j)] - id[(i, j)]).norm())
            .fold(0.0, f64::max);
        if dev > 1e-8 {
            return Err(QprError::InvalidParameter(format!(
                "matrix is not unitary: deviation {dev:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn compose(&self, then: &Unitary) -> Unitary {
        // self first, `then` second: U = then * self.
        Unitary {
            mat: &then.mat * &self.mat,
        }
    }

    /// Projective equality: |Tr(U^dag V)| = d within tolerance.
    pub fn phase_equal(&self, other: &Unitary, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let prod = self.mat.adjoint() * &other.mat;
        let tr: Complex64 = prod.diagonal().iter().sum();
        (tr.norm() - self.dim() as f64).abs() <= tol
    }

    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            mat: CMatrix::from_row_slice(2, 2, &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]),
        }
    }

    pub fn phase_gate() -> Self {
        Self {
            mat: CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]),
        }
    }

    pub fn x() -> Self {
        Self {
            mat: HermitianOp::pauli_x().mat,
        }
    }

    pub fn y() -> Self {
        Self {
            mat: HermitianOp::pauli_y().mat,
        }
    }

    pub fn z() -> Self {
        Self {
            mat: HermitianOp::pauli_z().mat,
        }
    }
}

/// Spin-1/2 representation of the rotation by `angle` about `axis`:
/// U = cos(a/2) 1 - i sin(a/2) (n.sigma). Conjugation by U rotates every
/// Bloch vector by `angle` about `axis`.
pub fn rotation_unitary(axis: &BlochVector, angle: f64) -> Result<Unitary> {
    if axis.norm() <= TOL {
        return Err(QprError::InvalidParameter("zero rotation axis".into()));
    }
    let n = axis.normalized()?;
    let (hc, hs) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let [nx, ny, nz] = n.0;
    let mat = CMatrix::from_row_slice(
        2,
        2,
        &[
            c(hc, -hs * nz),
            c(-hs * ny, -hs * nx),
            c(hs * ny, -hs * nx),
            c(hc, hs * nz),
        ],
    );
    Unitary::from_matrix(mat)
}

/// Lifts a rotation matrix in SO(3) to its spin-1/2 unitary (up to phase).
pub fn so3_to_unitary(r: &[[f64; 3]; 3]) -> Result<Unitary> {
    let trace = r[0][0] + r[1][1] + r[2][2];
    let cos_angle = ((trace - 1.0) / 2.0).clamp(-1.0, 1.0);
    let angle = cos_angle.acos();
    if angle.abs() <= 1e-12 {
        return Ok(Unitary::identity(2));
    }
    if (angle - std::f64::consts::PI).abs() <= 1e-9 {
        // R = 2 nn^T - 1: read the axis off the largest diagonal entry.
        let mut axis = [0.0f64; 3];
        let k = (0..3)
            .max_by(|&i, &j| r[i][i].partial_cmp(&r[j][j]).unwrap())
            .unwrap();
        axis[k] = ((r[k][k] + 1.0) / 2.0).max(0.0).sqrt();
        for i in 0..3 {
            if i != k {
                axis[i] = (r[i][k] + r[k][i]) / (4.0 * axis[k]);
            }
        }
        return rotation_unitary(&BlochVector(axis), std::f64::consts::PI);
    }
    let s = 2.0 * angle.sin();
    let axis = BlochVector::new(
        (r[2][1] - r[1][2]) / s,
        (r[0][2] - r[2][0]) / s,
        (r[1][0] - r[0][1]) / s,
    );
    rotation_unitary(&axis, angle)
}

/// Exact-rational lane for the qubit Bloch map. Inputs that would need
/// irrational entries (norms, eigenvalues) stay in float mode.
pub mod exact {
    use crate::error::{QprError, Result};
    use crate::scalar::Rational;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    /// Complex number with rational parts.
    #[derive(Debug, Clone, PartialEq)]
    pub struct CRational {
        pub re: Rational,
        pub im: Rational,
    }

    impl CRational {
        pub fn new(re: Rational, im: Rational) -> Self {
            Self { re, im }
        }
        pub fn zero() -> Self {
            Self::new(Rational::zero(), Rational::zero())
        }
    }

    /// 2x2 Hermitian matrix over the rationals, row-major.
    #[derive(Debug, Clone, PartialEq)]
    pub struct RationalHermitian2 {
        pub entries: [CRational; 4],
    }

    pub fn bloch_to_density(r: &[Rational; 3]) -> RationalHermitian2 {
        let half = Rational::new(1.into(), 2.into());
        let one = Rational::one();
        RationalHermitian2 {
            entries: [
                CRational::new((&one + &r[2]) * &half, Rational::zero()),
                CRational::new(&r[0] * &half, -(&r[1] * &half)),
                CRational::new(&r[0] * &half, &r[1] * &half),
                CRational::new((&one - &r[2]) * &half, Rational::zero()),
            ],
        }
    }

    pub fn density_to_bloch(rho: &RationalHermitian2) -> Result<[Rational; 3]> {
        let trace = &rho.entries[0].re + &rho.entries[3].re;
        if trace != Rational::one() {
            return Err(QprError::InvalidState(format!(
                "exact density must have unit trace, got {trace}"
            )));
        }
        // r_k = Tr(rho sigma_k), all rational for rational entries.
        let x = &rho.entries[1].re + &rho.entries[2].re;
        let y = &rho.entries[2].im - &rho.entries[1].im;
        let z = &rho.entries[0].re - &rho.entries[3].re;
        Ok([x, y, z])
    }

    /// Tr(rho omega) = (1 + r.s)/2, exactly.
    pub fn overlap(r: &[Rational; 3], s: &[Rational; 3]) -> Rational {
        let dot: BigRational = r.iter().zip(s.iter()).map(|(a, b)| a * b).sum();
        (Rational::one() + dot) * Rational::new(1.into(), 2.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    const SQ2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn north_pole_is_zero_projector() {
        let rho = bloch_to_density(&BlochVector::new(0., 0., 1.)).unwrap();
        assert!(
            rho.max_abs_entry_diff(&HermitianOp::from_ket(&[c(1., 0.), c(0., 0.)]).unwrap())
                < 1e-14
        );
    }

    #[test]
    fn origin_is_maximally_mixed() {
        let rho = bloch_to_density(&BlochVector::new(0., 0., 0.)).unwrap();
        assert!(rho.max_abs_entry_diff(&HermitianOp::identity(2).scale(0.5)) < 1e-14);
    }

    #[test]
    fn plus_x_has_half_off_diagonals() {
        let rho = bloch_to_density(&BlochVector::new(1., 0., 0.)).unwrap();
        let expected = HermitianOp::identity(2)
            .add(&HermitianOp::pauli_x())
            .scale(0.5);
        assert!(rho.max_abs_entry_diff(&expected) < 1e-14);
    }

    #[test]
    fn bloch_eigenvalues_match_radius() {
        let r = BlochVector::new(0.3, -0.2, 0.5);
        let rho = bloch_to_density(&r).unwrap();
        let eigs = rho.eigenvalues();
        assert!((eigs[0] - (1.0 - r.norm()) / 2.0).abs() < 1e-12);
        assert!((eigs[1] - (1.0 + r.norm()) / 2.0).abs() < 1e-12);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bloch_rejects_outside_ball() {
        assert!(bloch_to_density(&BlochVector::new(1.1, 0., 0.)).is_err());
    }

    #[test]
    fn density_to_bloch_examples() {
        let half = HermitianOp::identity(2).scale(0.5);
        assert!(density_to_bloch(&half)
            .unwrap()
            .approx_eq(&BlochVector::new(0., 0., 0.), 1e-12));

        let z = bloch_to_density(&BlochVector::new(0., 0., 1.)).unwrap();
        assert!(density_to_bloch(&z)
            .unwrap()
            .approx_eq(&BlochVector::new(0., 0., 1.), 1e-12));

        let diag = bloch_to_density(&BlochVector::new(1. / SQ2, 0., 1. / SQ2)).unwrap();
        assert!(density_to_bloch(&diag)
            .unwrap()
            .approx_eq(&BlochVector::new(1. / SQ2, 0., 1. / SQ2), 1e-12));
    }

    #[test]
    fn density_to_bloch_rejects_qutrits() {
        let m = HermitianOp::identity(3).scale(1.0 / 3.0);
        assert!(density_to_bloch(&m).is_err());
    }

    #[test]
    fn overlap_examples() {
        let up = bloch_to_density(&BlochVector::new(0., 0., 1.)).unwrap();
        let down = bloch_to_density(&BlochVector::new(0., 0., -1.)).unwrap();
        let px = bloch_to_density(&BlochVector::new(1., 0., 0.)).unwrap();
        assert!(overlap(&up, &down).unwrap().abs() < 1e-12);
        assert!((overlap(&up, &up).unwrap() - 1.0).abs() < 1e-12);
        assert!((overlap(&up, &px).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn basis_from_bloch_examples() {
        let zb = basis_from_bloch(&BlochVector::new(0., 0., 1.)).unwrap();
        assert!((zb.element(1).inner(zb.element(-1)).unwrap()).abs() < 1e-12);
        let sum = zb.element(1).add(zb.element(-1));
        assert!(sum.max_abs_entry_diff(&HermitianOp::identity(2)) < 1e-12);

        let diag =
            basis_from_bloch(&BlochVector::new(1., 1., 1.).scaled(1.0 / 3f64.sqrt())).unwrap();
        assert!(diag.element(1).inner(diag.element(-1)).unwrap().abs() < 1e-12);

        assert!(basis_from_bloch(&BlochVector::new(0.5, 0., 0.)).is_err());
    }

    #[test]
    fn rotation_unitary_spin_half_gamma() {
        // diag(e^{2pi i/3}, e^{-2pi i/3}) conjugates x into the azimuth
        // +120 degree direction, i.e. it represents the right-handed 2pi/3
        // rotation about z.
        let u = rotation_unitary(
            &BlochVector::new(0., 0., 1.),
            2.0 * std::f64::consts::PI / 3.0,
        )
        .unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let gamma = Unitary::from_matrix(CMatrix::from_row_slice(
            2,
            2,
            &[w, c(0., 0.), c(0., 0.), w.conj()],
        ))
        .unwrap();
        assert!(u.phase_equal(&gamma, 1e-9));
    }

    #[test]
    fn rotation_unitary_pi_about_y_is_minus_iy() {
        let u = rotation_unitary(&BlochVector::new(0., 1., 0.), std::f64::consts::PI).unwrap();
        let minus_iy = Unitary::from_matrix(&HermitianOp::pauli_y().mat * c(0., -1.)).unwrap();
        assert!(u.phase_equal(&minus_iy, 1e-9));
    }

    #[test]
    fn rotation_unitary_zero_angle_is_identity() {
        let u = rotation_unitary(&BlochVector::new(0., 0., 1.), 0.0).unwrap();
        assert!(u.phase_equal(&Unitary::identity(2), 1e-9));
        assert!(rotation_unitary(&BlochVector::new(0., 0., 0.), 1.0).is_err());
    }

    #[test]
    fn rotation_conjugation_rotates_bloch_vectors() {
        let axis = BlochVector::new(1., 2., -1.).normalized().unwrap();
        let angle = 0.81;
        let u = rotation_unitary(&axis, angle).unwrap();
        let r = BlochVector::new(0.2, -0.4, 0.7);
        let rho = bloch_to_density(&r).unwrap();
        let rotated = density_to_bloch(&rho.conjugated_by(&u).unwrap()).unwrap();
        assert!(rotated.approx_eq(&r.rotated(&axis, angle), 1e-10));
    }

    #[test]
    fn so3_lift_matches_direct_rotation() {
        // pi/2 about z as a rotation matrix.
        let r = [[0., -1., 0.], [1., 0., 0.], [0., 0., 1.]];
        let u = so3_to_unitary(&r).unwrap();
        let direct =
            rotation_unitary(&BlochVector::new(0., 0., 1.), std::f64::consts::FRAC_PI_2).unwrap();
        assert!(u.phase_equal(&direct, 1e-9));

        // pi about x.
        let r = [[1., 0., 0.], [0., -1., 0.], [0., 0., -1.]];
        let u = so3_to_unitary(&r).unwrap();
        assert!(u.phase_equal(&Unitary::x(), 1e-9));
    }

    #[test]
    fn exact_round_trip_is_exact() {
        let r = [ratio(3, 5), ratio(0, 1), ratio(4, 5)];
        let rho = exact::bloch_to_density(&r);
        assert_eq!(exact::density_to_bloch(&rho).unwrap(), r);
        let s = [ratio(-3, 5), ratio(0, 1), ratio(-4, 5)];
        assert_eq!(exact::overlap(&r, &s), ratio(0, 1));
    }
}
