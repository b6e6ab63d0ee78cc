//! Shared fixtures for the criterion benchmarks.

use qpr_core::operator_core::QubitBasis;
use qpr_core::qubit_families::{family_bases, FamilyKind, FamilySpec};
use qpr_core::sampling;

pub fn stabilizer_bases() -> Vec<QubitBasis> {
    family_bases(&FamilySpec::new(FamilyKind::Stabilizer)).expect("static family")
}

pub fn cuboid_bases() -> Vec<QubitBasis> {
    family_bases(
        &FamilySpec::new(FamilyKind::Cuboid)
            .with_theta(0.8)
            .with_phi(0.6),
    )
    .expect("in-range parameters")
}

pub fn random_triples(n: usize) -> Vec<Vec<QubitBasis>> {
    let mut rng = sampling::rng_from_seed(42);
    (0..n)
        .map(|_| sampling::distinct_bases(&mut rng, 3))
        .collect()
}

pub fn random_five_sets(n: usize) -> Vec<Vec<QubitBasis>> {
    let mut rng = sampling::rng_from_seed(43);
    (0..n)
        .map(|_| sampling::distinct_bases(&mut rng, 5))
        .collect()
}
