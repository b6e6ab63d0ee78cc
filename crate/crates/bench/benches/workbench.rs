use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qpr_bench::{cuboid_bases, random_five_sets, random_triples, stabilizer_bases};
use qpr_core::certifier::certify;
use qpr_core::ontic_sim::{find_permutation, run_circuit, SubtheoryModel};
use qpr_core::operator_core::Unitary;
use qpr_core::qubit_families::{family_rep, FamilyKind, FamilySpec};
use qpr_core::qudit_tools::{is_disparate, mub_triple_d3};
use qpr_core::scalar::ArithMode;

fn bench_certify(c: &mut Criterion) {
    let triples = random_triples(32);
    let mut idx = 0usize;
    c.bench_function("certify/random_triple_float", |b| {
        b.iter(|| {
            let bases = &triples[idx % triples.len()];
            idx += 1;
            black_box(certify(bases, ArithMode::Float).unwrap())
        })
    });

    let fives = random_five_sets(32);
    let mut idx = 0usize;
    c.bench_function("certify/random_five_float", |b| {
        b.iter(|| {
            let bases = &fives[idx % fives.len()];
            idx += 1;
            black_box(certify(bases, ArithMode::Float).unwrap())
        })
    });

    let cuboid = cuboid_bases();
    c.bench_function("certify/cuboid_float", |b| {
        b.iter(|| black_box(certify(&cuboid, ArithMode::Float).unwrap()))
    });

    let stab = stabilizer_bases();
    c.bench_function("certify/stabilizer_exact", |b| {
        b.iter(|| black_box(certify(&stab, ArithMode::Exact).unwrap()))
    });
}

fn bench_frames(c: &mut Criterion) {
    c.bench_function("frames/build_d3", |b| {
        b.iter(|| {
            black_box(
                family_rep(&FamilySpec::new(FamilyKind::D3).with_theta(black_box(0.8))).unwrap(),
            )
        })
    });
    c.bench_function("frames/build_cuboid", |b| {
        b.iter(|| {
            black_box(
                family_rep(
                    &FamilySpec::new(FamilyKind::Cuboid)
                        .with_theta(black_box(0.8))
                        .with_phi(0.6),
                )
                .unwrap(),
            )
        })
    });
}

fn bench_simulation(c: &mut Criterion) {
    let model = SubtheoryModel::stabilizer().unwrap();
    c.bench_function("simulate/find_permutation_h", |b| {
        b.iter(|| black_box(find_permutation(&Unitary::hadamard(), &model).unwrap()))
    });
    c.bench_function("simulate/circuit_len6", |b| {
        b.iter(|| black_box(run_circuit(&model, "z+", "H P H P H P", "x").unwrap()))
    });
}

fn bench_qudit(c: &mut Criterion) {
    let mub = mub_triple_d3().unwrap();
    c.bench_function("qudit/is_disparate_mub_d3", |b| {
        b.iter(|| black_box(is_disparate(&mub)))
    });
}

criterion_group!(
    benches,
    bench_certify,
    bench_frames,
    bench_simulation,
    bench_qudit
);
criterion_main!(benches);
