//! Deterministic random generators for states, bases and basis families,
//! used by the verification drivers and tests. Every generator takes an
//! explicit RNG so trial loops can run in parallel with per-trial seeds.

use crate::error::Result;
use crate::operator_core::{
    basis_from_bloch, bloch_to_density, BlochVector, HermitianOp, QubitBasis,
};
use crate::scalar::{ratio, Rational};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `index` under a master seed.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut root = ChaCha8Rng::seed_from_u64(seed);
    let hi: u64 = root.gen();
    ChaCha8Rng::seed_from_u64(hi ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller from two uniforms.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn unit_vector<R: Rng>(rng: &mut R) -> BlochVector {
    loop {
        let v = BlochVector::new(
            standard_normal(rng),
            standard_normal(rng),
            standard_normal(rng),
        );
        if v.norm() > 1e-6 {
            return v.normalized().expect("nonzero");
        }
    }
}

pub fn random_basis<R: Rng>(rng: &mut R) -> QubitBasis {
    basis_from_bloch(&unit_vector(rng)).expect("unit direction")
}

/// `n` bases with pairwise distinct projector sets.
pub fn distinct_bases<R: Rng>(rng: &mut R, n: usize) -> Vec<QubitBasis> {
    let mut dirs: Vec<BlochVector> = Vec::with_capacity(n);
    while dirs.len() < n {
        let v = unit_vector(rng);
        if dirs.iter().all(|d| d.dot(&v).abs() < 1.0 - 1e-6) {
            dirs.push(v);
        }
    }
    dirs.iter()
        .map(|d| basis_from_bloch(d).expect("unit"))
        .collect()
}

/// Three distinct bases lying in one random plane through the origin.
pub fn coplanar_triple<R: Rng>(rng: &mut R) -> Vec<QubitBasis> {
    let u = unit_vector(rng);
    let mut w = unit_vector(rng);
    while u.cross(&w).norm() < 1e-3 {
        w = unit_vector(rng);
    }
    let v = u.cross(&w).normalized().expect("independent").cross(&u);
    loop {
        let angles: Vec<f64> = (0..3)
            .map(|_| rng.gen_range(0.0..std::f64::consts::PI))
            .collect();
        let distinct = (0..3).all(|i| {
            ((i + 1)..3).all(|j| {
                let d = (angles[i] - angles[j]).abs();
                d > 1e-2 && (std::f64::consts::PI - d).abs() > 1e-2
            })
        });
        if !distinct {
            continue;
        }
        return angles
            .iter()
            .map(|&a| basis_from_bloch(&u.scaled(a.cos()).add(&v.scaled(a.sin()))).expect("unit"))
            .collect();
    }
}

/// Gram matrix of three exactly coplanar rational unit vectors, via the
/// tangent-half-angle parametrization of the rational circle
/// r(t) = ((1 - t^2)/(1 + t^2), 0, 2t/(1 + t^2)).
///
/// The feasibility system depends on the bases only through their Gram
/// matrix, so fixing the plane loses no generality.
pub fn rational_coplanar_gram<R: Rng>(rng: &mut R) -> Vec<Vec<Rational>> {
    let ts: Vec<Rational> = loop {
        let raw: Vec<(i64, i64)> = (0..3)
            .map(|_| (rng.gen_range(-60i64..=60), rng.gen_range(1i64..=20)))
            .collect();
        let ts: Vec<Rational> = raw.iter().map(|&(k, m)| ratio(k, m)).collect();
        let distinct = (0..3).all(|i| {
            ((i + 1)..3).all(|j| {
                // Same point iff t_i = t_j; antipodal iff t_i t_j = -1.
                ts[i] != ts[j] && &ts[i] * &ts[j] != ratio(-1, 1)
            })
        });
        if distinct {
            break ts;
        }
    };
    let one = ratio(1, 1);
    let coords: Vec<[Rational; 2]> = ts
        .iter()
        .map(|t| {
            let den = &one + t * t;
            [(&one - t * t) / &den, (t + t) / &den]
        })
        .collect();
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| &coords[i][0] * &coords[j][0] + &coords[i][1] * &coords[j][1])
                .collect()
        })
        .collect()
}

/// Rotation matrix for `angle` about a unit `axis` (Rodrigues).
pub fn rotation_matrix(axis: &BlochVector, angle: f64) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    let basis = [
        BlochVector::new(1., 0., 0.),
        BlochVector::new(0., 1., 0.),
        BlochVector::new(0., 0., 1.),
    ];
    for (j, e) in basis.iter().enumerate() {
        let col = e.rotated(axis, angle);
        for (i, row) in m.iter_mut().enumerate() {
            row[j] = col.0[i];
        }
    }
    m
}

pub fn apply_rotation(m: &[[f64; 3]; 3], v: &BlochVector) -> BlochVector {
    BlochVector::new(
        m[0][0] * v.0[0] + m[0][1] * v.0[1] + m[0][2] * v.0[2],
        m[1][0] * v.0[0] + m[1][1] * v.0[1] + m[1][2] * v.0[2],
        m[2][0] * v.0[0] + m[2][1] * v.0[1] + m[2][2] * v.0[2],
    )
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> [[f64; 3]; 3] {
    let axis = unit_vector(rng);
    let angle = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    rotation_matrix(&axis, angle)
}

/// A randomly oriented cuboid quadruple with margins away from the
/// degenerate edges of the parameter square.
pub fn random_cuboid_bases<R: Rng>(rng: &mut R) -> Result<Vec<QubitBasis>> {
    use crate::qubit_families::{family_directions, FamilyKind, FamilySpec};
    let margin = 0.05;
    let theta = rng.gen_range(margin..std::f64::consts::FRAC_PI_2 - margin);
    let phi = rng.gen_range(margin..std::f64::consts::FRAC_PI_2 - margin);
    let spec = FamilySpec::new(FamilyKind::Cuboid)
        .with_theta(theta)
        .with_phi(phi);
    let rot = random_rotation(rng);
    family_directions(&spec)?
        .iter()
        .map(|d| basis_from_bloch(&apply_rotation(&rot, d)))
        .collect()
}

/// Random mixed state: uniform direction, radius biased toward the surface.
pub fn random_state<R: Rng>(rng: &mut R) -> HermitianOp {
    let r: f64 = rng.gen_range(0.0f64..1.0).cbrt();
    bloch_to_density(&unit_vector(rng).scaled(r)).expect("inside ball")
}

/// Random effect 0 <= E <= 1: convex data on a random projector pair.
pub fn random_effect<R: Rng>(rng: &mut R) -> HermitianOp {
    let basis = random_basis(rng);
    let a: f64 = rng.gen_range(0.0..1.0);
    let b: f64 = rng.gen_range(0.0..1.0);
    basis.element(1).scale(a).add(&basis.element(-1).scale(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn unit_vectors_are_unit() {
        let mut rng = rng_from_seed(7);
        for _ in 0..50 {
            assert!((unit_vector(&mut rng).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coplanar_triples_are_coplanar_and_distinct() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let bases = coplanar_triple(&mut rng);
            let d0 = bases[0].direction();
            let d1 = bases[1].direction();
            let d2 = bases[2].direction();
            assert!(d0.cross(d1).dot(d2).abs() < 1e-10);
            assert!(d0.dot(d1).abs() < 1.0 - 1e-6);
        }
    }

    #[test]
    fn rational_gram_is_exactly_coplanar() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let g = rational_coplanar_gram(&mut rng);
            for (i, row) in g.iter().enumerate() {
                assert_eq!(row[i], ratio(1, 1));
            }
            // Unit coplanar vectors have singular Gram: det = 0 exactly.
            let det = &g[0][0] * (&g[1][1] * &g[2][2] - &g[1][2] * &g[2][1])
                - &g[0][1] * (&g[1][0] * &g[2][2] - &g[1][2] * &g[2][0])
                + &g[0][2] * (&g[1][0] * &g[2][1] - &g[1][1] * &g[2][0]);
            assert!(det.is_zero());
        }
    }

    #[test]
    fn random_effects_are_effects() {
        let mut rng = rng_from_seed(5);
        for _ in 0..30 {
            assert!(random_effect(&mut rng).is_effect(1e-9));
            assert!(random_state(&mut rng).is_state(1e-9));
        }
    }

    #[test]
    fn trial_rngs_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(9, 0).gen();
        let b: u64 = trial_rng(9, 0).gen();
        let c: u64 = trial_rng(9, 1).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
