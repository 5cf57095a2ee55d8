use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use quasitree::chord::FramedChordDiagram;
use quasitree::delta_matroid::SetSystem;
use quasitree::families::{make_family, FamilyId};
use quasitree::matchings::{count_perfect_matchings, grid_product, SimpleGraph};
use quasitree::random::random_set_system;
use quasitree::ribbon::EdgeLabel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("quasi_tree_count");
    for n in [12u64, 16, 18] {
        let g = make_family(FamilyId::W1, n).unwrap().into_graph();
        group.bench_with_input(BenchmarkId::new("serial", n), &g, |b, g| {
            b.iter(|| g.quasi_tree_count())
        });
    }
    let g = make_family(FamilyId::W1, 18).unwrap().into_graph();
    for threads in [2usize, 4] {
        group.bench_with_input(BenchmarkId::new("threads", threads), &g, |b, g| {
            b.iter(|| g.quasi_tree_count_threaded(threads))
        });
    }
    group.finish();
}

fn bench_profile(c: &mut Criterion) {
    let g = make_family(FamilyId::Fp, 14).unwrap().into_graph();
    c.bench_function("boundary_profile/Fp14", |b| b.iter(|| g.boundary_profile()));
}

fn bench_determinant(c: &mut Criterion) {
    let mut group = c.benchmark_group("det_i_plus_a");
    for n in [16u64, 32, 64] {
        let m = FramedChordDiagram::from_bouquet(&make_family(FamilyId::F1, n).unwrap())
            .intersection_matrix()
            .into_matrix()
            .plus_identity();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| m.det()));
    }
    group.finish();
}

fn bench_char_poly(c: &mut Criterion) {
    let m = FramedChordDiagram::from_bouquet(&make_family(FamilyId::W1, 14).unwrap())
        .intersection_matrix()
        .into_matrix();
    c.bench_function("char_poly/W1_14", |b| b.iter(|| m.char_poly()));
}

fn bench_matchings(c: &mut Criterion) {
    let g = grid_product(&SimpleGraph::caterpillar(12));
    c.bench_function("perfect_matchings/P2xT12", |b| {
        b.iter(|| count_perfect_matchings(&g))
    });
}

fn bench_four_term(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let d = random_set_system(10, &mut rng);
    c.bench_function("four_term/ground10", |b| {
        b.iter(|| d.four_term_check(EdgeLabel(1), EdgeLabel(2)).unwrap())
    });
}

fn bench_delta_matroid_extraction(c: &mut Criterion) {
    let g = make_family(FamilyId::Fpn, 12).unwrap().into_graph();
    c.bench_function("set_system_from_graph/Fpn12", |b| {
        b.iter(|| SetSystem::from_ribbon_graph(&g))
    });
}

criterion_group!(
    benches,
    bench_enumeration,
    bench_profile,
    bench_determinant,
    bench_char_poly,
    bench_matchings,
    bench_four_term,
    bench_delta_matroid_extraction
);
criterion_main!(benches);
